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

#include <span>
#include <string>
#include <vector>

#include "freebound/mesh.hpp"
#include "freebound/types.hpp"

namespace freebound {

/// Piecewise-linear map from a disk-type surface into the closed unit disk.
struct DiskMap {
  std::vector<Complex> values;  // per vertex
  std::vector<std::vector<int>> boundary;
  int degree = 0;
  /// Half the Dirichlet energy of (Re F, Im F).
  double energy = 0.0;
  /// max over interior vertices of (|F| - 1)^+.
  double interior_excess = 0.0;
  /// min over boundary vertices of |F|.
  double boundary_min_modulus = 0.0;
  /// Moebius parameter already composed into values (0 for the raw map).
  Complex balance_point{0.0, 0.0};

  Field real_part() const;
  Field imag_part() const;
  std::string to_json() const;
};

/// Boundary to the unit circle by normalised arclength, interior by the
/// discrete harmonic extension. Throws WrongTopology unless g = 0 and r = 1,
/// NonProper when an interior vertex leaves the closed disk.
DiskMap harmonic_disk_map(const SurfaceMesh& mesh);

/// Winding number of a closed polygon around 0. Throws ZeroOnBoundary when
/// the polygon passes within 1e-9 of the origin.
int winding_number(std::span<const Complex> loop);
/// Sum of winding numbers over the boundary loops.
int degree(const DiskMap& map);

struct EnergyBound {
  double energy = 0.0;
  double two_pi_degree = 0.0;
  /// energy - pi * degree; the conformality defect.
  double residual = 0.0;
  /// Signed area of the image counted with multiplicity.
  double image_area = 0.0;
  /// min over triangles of (energy density - |Jacobian|) * area; >= 0 always.
  double min_triangle_slack = 0.0;
};

EnergyBound conformal_energy_bound(const SurfaceMesh& mesh, const DiskMap& map);

/// m_a(z) = (z - a) / (1 - conj(a) z).
Complex mobius(Complex a, Complex z);
DiskMap mobius_apply(const SurfaceMesh& mesh, const DiskMap& map, Complex a);

/// f(a) = sum_k w_k m_a(z_k).
Complex balance_function(std::span<const Complex> points, std::span<const double> weights,
                         Complex a);
/// Real 2x2 Jacobian of f with respect to (Re a, Im a).
Mat2 balance_jacobian(std::span<const Complex> points, std::span<const double> weights,
                      Complex a);

struct BalanceResult {
  Complex point{0.0, 0.0};
  double residual = 0.0;  // |f(point)| with weights normalised to unit mass
  /// Distinct zeros reached from the seed grid, point first.
  std::vector<Complex> zeros;
  int iterations = 0;
  bool continuation = false;
};

/// Zero of f in the open disk. Weights must be nonnegative with positive sum
/// and are normalised internally. Throws MassConcentrated when all mass sits
/// on one point of the circle, NoConvergence otherwise on failure.
BalanceResult balance(std::span<const Complex> points, std::span<const double> weights,
                      double tolerance = 1e-10);

struct BalancedMap {
  DiskMap map;
  BalanceResult balance;
};

/// Weights phi * lumped mass.
BalancedMap balance(const SurfaceMesh& mesh, const DiskMap& map, const Field& phi,
                    double tolerance = 1e-10);

struct BalancedTestFunctions {
  Field f1;
  Field f2;
  DiskMap map;
  BalanceResult balance;
  /// Nonnegative weight actually balanced against, normalised to unit integral.
  Field weight;
  /// Largest negative undershoot removed from the sign-corrected input,
  /// relative to its maximum.
  double clamp = 0.0;
  /// |sum_v m_v f_i(v) weight(v)| for i = 1, 2.
  double orthogonality[2] = {0.0, 0.0};
};

BalancedTestFunctions balanced_test_functions(const SurfaceMesh& mesh, const Field& phi,
                                              double tolerance = 1e-10);

}  // namespace freebound
