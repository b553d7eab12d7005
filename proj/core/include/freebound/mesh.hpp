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

#include <memory>
#include <vector>

#include "freebound/types.hpp"

namespace freebound {

struct Topology {
  int vertices = 0;
  int edges = 0;
  int faces = 0;
  int euler = 0;
  int boundary_loops = 0;
  int genus = 0;
  int components = 0;
};

/// Triangulated compact surface with (possibly empty) boundary.
///
/// Connectivity is validated once at construction and shared between meshes
/// that only differ in vertex positions, so relaxation steps can produce new
/// snapshots cheaply. Instances are immutable.
class SurfaceMesh {
 public:
  /// Validates manifoldness, orientation and non-degeneracy; derives the
  /// boundary loops and the topological invariants.
  static SurfaceMesh build(std::vector<Vec3> vertices, std::vector<Triangle> triangles);

  int num_vertices() const { return static_cast<int>(positions_.size()); }
  int num_faces() const;
  int num_edges() const;

  const std::vector<Vec3>& vertices() const { return positions_; }
  const Vec3& vertex(int v) const { return positions_[static_cast<size_t>(v)]; }
  const std::vector<Triangle>& triangles() const;
  const Triangle& triangle(int f) const;

  /// Undirected edges (a < b), in a fixed order.
  const std::vector<std::array<int, 2>>& edges() const;
  /// One or two incident faces per edge, parallel to edges().
  const std::vector<std::array<int, 2>>& edge_faces() const;
  bool is_boundary_edge(int e) const;

  /// Boundary cycles oriented like the incident faces (surface on the left).
  const std::vector<std::vector<int>>& boundary_loops() const;
  bool is_boundary(int v) const;
  /// Neighbours along the boundary loop; -1 for interior vertices.
  int boundary_next(int v) const;
  int boundary_prev(int v) const;

  const std::vector<int>& vertex_faces(int v) const;
  /// Sorted 1-ring vertex indices.
  const std::vector<int>& vertex_neighbors(int v) const;

  const Topology& topology() const;
  int genus() const { return topology().genus; }
  int boundary_count() const { return topology().boundary_loops; }
  int euler_characteristic() const { return topology().euler; }

  /// Same connectivity, new positions. Degeneracy is checked again.
  SurfaceMesh with_vertices(std::vector<Vec3> positions) const;
  /// x -> shift + scale * rotation * x
  SurfaceMesh transformed(double scale, const Mat3& rotation = Mat3::Identity(),
                          const Vec3& shift = Vec3::Zero()) const;

  /// Bounding-box diagonal.
  double length_scale() const;

 private:
  struct Connectivity;

  SurfaceMesh(std::shared_ptr<const Connectivity> conn, std::vector<Vec3> positions);
  static void check_degenerate(const Connectivity& conn, const std::vector<Vec3>& positions);

  std::shared_ptr<const Connectivity> conn_;
  std::vector<Vec3> positions_;
};

double triangle_area(const SurfaceMesh& mesh, int f);
/// Unit normal following the triangle orientation.
Vec3 face_normal(const SurfaceMesh& mesh, int f);
/// Area-weighted average of incident face normals, normalised.
std::vector<Vec3> vertex_normals(const SurfaceMesh& mesh);

double area(const SurfaceMesh& mesh);
double boundary_length(const SurfaceMesh& mesh);

/// Cotangent stiffness: f^T K f = integral of |grad f|^2 for piecewise-linear f.
SparseMat cotan_stiffness(const SurfaceMesh& mesh);
/// Barycentric lumped mass (area / 3 per incident triangle), as a diagonal.
VecX lumped_mass(const SurfaceMesh& mesh);
/// Half the adjacent boundary edge lengths per boundary vertex, zero inside.
VecX boundary_mass(const SurfaceMesh& mesh);
/// Exact P1 boundary mass: integral over the boundary polygon of w f^2, with a
/// per-vertex weight w interpolated linearly along each edge. Empty weights
/// means w = 1.
SparseMat boundary_mass_consistent(const SurfaceMesh& mesh, const VecX& weights = VecX());

double dirichlet_energy(const SurfaceMesh& mesh, const Field& field);

/// Interior vertices: 2*pi minus the angle sum. Boundary vertices: pi minus the
/// angle sum, i.e. the exterior turning angle of the boundary polygon.
VecX angle_defects(const SurfaceMesh& mesh);

struct BoundaryCurvature {
  std::vector<int> vertices;
  /// Turning angle divided by the dual boundary length (half the adjacent edges).
  std::vector<double> kappa;
  std::vector<double> turning_angle;
  std::vector<double> dual_length;

  /// Sum of turning angles, i.e. the integral of kappa ds.
  double total() const;
};

/// Positive where the boundary bends toward the surface (unit disk: +1).
BoundaryCurvature boundary_geodesic_curvature(const SurfaceMesh& mesh);

/// |sum of interior defects + sum of boundary turning - 2 pi chi|.
double gauss_bonnet_residual(const SurfaceMesh& mesh);

}  // namespace freebound
