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

#include <string>
#include <vector>

#include "freebound/body.hpp"
#include "freebound/curvature.hpp"
#include "freebound/eigensolver.hpp"
#include "freebound/mesh.hpp"

namespace freebound {

/// Q = K - diag(|A|^2 m) - B_II, M = diag(m): the index form and the L^2
/// product of piecewise-linear fields. B_II integrates II(N, N) f^2 over the
/// boundary polygon with II interpolated linearly along each edge.
struct QuadraticFormPair {
  SparseMat form;
  VecX mass;
  VecX potential;        // |A|^2 per vertex (flat ambient: Ric(N, N) = 0)
  VecX boundary_weight;  // II(N, N) per boundary vertex, 0 inside
  SparseMat boundary;    // B_II
};

struct IndexFormOptions {
  bool include_potential = true;
  bool include_boundary = true;
  /// Lumped (diagonal) boundary term instead of the exact edge integral.
  bool lumped_boundary = false;
};

QuadraticFormPair assemble_index_form(const SurfaceMesh& mesh, const ConvexBody& body,
                                      const ShapeData& shape, const IndexFormOptions& options = {});

/// I(a, b) = a^T Q b.
double index_form(const QuadraticFormPair& pair, const Field& a, const Field& b);

struct Spectrum {
  VecX eigenvalues;     // ascending
  MatX eigenfunctions;  // M-orthonormal columns
  int negative_count = 0;
  int near_zero_count = 0;
  double zero_tolerance = 0.0;
  VecX residuals;  // relative to |Q|_inf

  std::string to_json() const;
};

/// Lowest `count` eigenpairs of Q v = lambda M v. A negative zero_tolerance
/// selects 1e-4 times the largest |lambda| in the window.
Spectrum solve_spectrum(const SparseMat& form, const VecX& mass, int count,
                        double zero_tolerance = -1.0, const EigenOptions& options = {});
Spectrum solve_spectrum(const QuadraticFormPair& pair, int count, double zero_tolerance = -1.0,
                        const EigenOptions& options = {});

/// Normal components <w x (x - c), N> of the rotations preserving the body.
std::vector<Field> jacobi_candidates(const SurfaceMesh& mesh, const ConvexBody& body,
                                     const ShapeData& shape);

/// Relative M-distance of f from span(candidates); 1 if there are none.
double jacobi_mismatch(const Field& f, const std::vector<Field>& candidates, const VecX& mass);

struct IndexReport {
  int index = 0;
  int nullity = 0;
  Spectrum spectrum;
  /// jacobi_mismatch of each near-zero eigenfunction.
  std::vector<double> null_mismatch;
};

/// Throws AmbiguousIndex when an eigenvalue within 2x the zero tolerance is
/// not explained by the body's rotational Jacobi fields.
IndexReport analyze_index(const SurfaceMesh& mesh, const ConvexBody& body, int count = 8);
int morse_index(const SurfaceMesh& mesh, const ConvexBody& body);

/// Dirichlet-to-Neumann eigenvalues: Schur complement of the stiffness on the
/// boundary vertices against the lumped boundary mass.
VecX steklov_spectrum(const SurfaceMesh& mesh, int count);

struct StabilityReport {
  /// Lowest constrained eigenvalue after classifying null modes as 0.
  double min_eigenvalue = 0.0;
  /// Lowest constrained eigenvalue as computed.
  double raw_min_eigenvalue = 0.0;
  double tolerance = 0.0;
  /// Relative window threshold used to recognise null modes.
  double zero_tolerance = 0.0;
  /// Constrained eigenvalues within zero_tolerance whose eigenfunctions are
  /// rotation Jacobi fields (mismatch <= 0.1); their exact value is 0.
  int null_modes = 0;
  bool stable = false;
  VecX eigenvalues;
  std::vector<double> mismatch;
  Field eigenfunction;  // raw minimizer
};

/// Lowest eigenpairs of Q v = lambda M v on {v : 1^T M v = 0}.
EigenResult constrained_eigenpairs(const SparseMat& form, const VecX& mass, const VecX& constraint,
                                   int count, const EigenOptions& options = {});

/// Minimum of the index form's Rayleigh quotient over mean-zero fields. Null
/// modes are recognised as in analyze_index.
StabilityReport cmc_stability_check(const SurfaceMesh& mesh, const ConvexBody& body,
                                    double tolerance = 1e-6);

}  // namespace freebound
