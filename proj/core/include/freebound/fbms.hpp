// Copyright 2026 The freebound Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "freebound/body.hpp"
#include "freebound/mesh.hpp"

namespace freebound {

struct IterationRecord {
  int iter = 0;
  double area = 0.0;
  double grad_norm = 0.0;
  double fb_residual = 0.0;
};

/// One JSON object per line: {"area":..,"fb_residual":..,"grad_norm":..,"iter":..}
void write_log_record(std::ostream& out, const IterationRecord& record);

struct SolverConfig {
  int max_iterations = 500;
  /// Stop when the interior |dL/ds_i| / m_i * scale (L the area, or its
  /// Lagrangian at fixed volume) and the boundary force angle are both below.
  double gradient_tolerance = 1e-9;
  double projection_tolerance = 1e-12;
  double armijo = 1e-4;
  double backtrack = 0.5;
  int max_backtracks = 40;
  double initial_step = 1.0;
  int smoothing_interval = 50;
  /// Also stop once the gradient norm is below stall_tolerance and has not
  /// dropped by 10% over stall_window iterations. Symmetric instances have
  /// near-null rotation modes along which the descent barely contracts.
  double stall_tolerance = 1e-6;
  int stall_window = 25;
  /// Enclosed volume to preserve (CMC). Ignored by relax_minimal.
  std::optional<double> volume_target;
  /// relax_minimal: stop the volume-target search once |H| * scale is below this.
  double multiplier_tolerance = 1e-9;
  int max_target_updates = 20;
  std::uint64_t seed = 42;
  std::function<void(const IterationRecord&)> on_iteration;
};

struct Residuals {
  double mean_curvature = 0.0;  // max interior |H| * scale
  double cmc = 0.0;             // max interior |H - mean H|
  double mean_h = 0.0;          // area-weighted mean of interior H
  /// max angle(nu, X), nu the conormal of the boundary edge frames.
  double free_boundary_angle = 0.0;
  /// Discrete free-boundary condition: max angle between the boundary vertex
  /// force -d(A - lambda V) and the plane spanned by X and the boundary
  /// tangent. Filled in by the solvers only.
  double free_boundary_force = 0.0;
  double containment = 0.0;  // max |psi| on the boundary
};

struct SolveResult {
  explicit SolveResult(SurfaceMesh m) : mesh(std::move(m)) {}

  SurfaceMesh mesh;
  int iterations = 0;
  int accepted_steps = 0;
  std::vector<double> area_history;
  /// Accepted-step indices where the volume target changed (relax_minimal).
  std::vector<int> target_updates;
  double grad_norm = 0.0;
  double volume = 0.0;
  double multiplier = 0.0;
  Residuals residuals;
  bool converged = false;
  /// Converged by the stall rule rather than gradient_tolerance.
  bool stalled = false;
};

/// dA(x + t xi)/dt at t = 0.
double first_variation(const SurfaceMesh& mesh, const std::vector<Vec3>& variation);
/// Per-vertex gradient of the total area.
std::vector<Vec3> area_gradient(const SurfaceMesh& mesh);
/// Per-vertex (1/3) sum of incident area vectors; the gradient of any cone
/// volume with respect to interior vertices.
std::vector<Vec3> area_vectors(const SurfaceMesh& mesh);

/// Variational mean curvature per vertex, (grad A . n) / (area vector . n).
VecX variational_mean_curvature(const SurfaceMesh& mesh);

/// Outward in-surface conormal at boundary vertices (unit, perpendicular to
/// the boundary chord), zero at interior vertices.
std::vector<Vec3> boundary_conormals(const SurfaceMesh& mesh);

struct VolumeFrame {
  Vec3 origin;  // reference point y0
  Vec3 apex;    // unit direction inside the spherical region, fan apex
  double sign = 1.0;  // orientation of the fan relative to the region
  int subdivision = 3;
};

/// Frame with y0 at the minimal enclosing ball center of a boundary sampling
/// and the apex opposite to the mean surface normal.
VolumeFrame volume_frame(const SurfaceMesh& mesh, const ConvexBody& body);

/// Volume of the region bounded by the surface and the part of the body
/// boundary on the side opposite to the surface normal: signed cones from y0
/// over the triangles plus the radial integral over the spherical region cut
/// out by the boundary loop.
double enclosed_volume(const SurfaceMesh& mesh, const ConvexBody& body, const VolumeFrame& frame);
double enclosed_volume(const SurfaceMesh& mesh, const ConvexBody& body);

Residuals compute_residuals(const SurfaceMesh& mesh, const ConvexBody& body);

/// Area descent with boundary vertices sliding on the body boundary. The
/// descent runs at fixed enclosed volume, and the volume target is moved by a
/// secant iteration until the multiplier (the constant mean curvature)
/// vanishes.
SolveResult relax_minimal(const SurfaceMesh& initial, const ConvexBody& body,
                          const SolverConfig& config);

/// Area descent at fixed enclosed volume; requires config.volume_target.
SolveResult relax_cmc(const SurfaceMesh& initial, const ConvexBody& body,
                      const SolverConfig& config);

}  // namespace freebound
