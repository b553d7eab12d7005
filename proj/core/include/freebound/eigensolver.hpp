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
#include <optional>

#include "freebound/types.hpp"

namespace freebound {

struct EigenOptions {
  /// Problems up to this size go through a dense symmetric reduction.
  int dense_threshold = 1200;
  /// Relative residual |A x - lambda M x| / (|A|_inf |x|) for convergence.
  double tolerance = 1e-11;
  int max_iterations = 400;
  /// Extra Ritz vectors carried by the subspace iteration.
  int guard_vectors = 10;
  /// Restrict to {x : c^T x = 0}.
  std::optional<VecX> constraint;
  std::uint64_t seed = 42;
};

struct EigenResult {
  VecX values;   // ascending
  MatX vectors;  // M-orthonormal columns
  int iterations = 0;
  double shift = 0.0;
  bool dense = false;
};

/// Lowest `count` eigenpairs of A x = lambda M x, A symmetric, M diagonal
/// positive. Iterative path: block shift-invert subspace iteration with
/// Rayleigh-Ritz, shifted below the spectrum by an inertia search.
/// Throws ConvergenceFailure.
EigenResult lowest_eigenpairs(const SparseMat& a, const VecX& mass, int count,
                              const EigenOptions& options = {});

/// Number of eigenvalues of A x = lambda M x below sigma (LDL^T inertia).
int count_below(const SparseMat& a, const VecX& mass, double sigma);

/// |A x_k - lambda_k M x_k| / (|A|_inf |x_k|) per column. With a constraint
/// c the residual component along c (the multiplier term) is removed first.
VecX relative_residuals(const SparseMat& a, const VecX& mass, const EigenResult& result,
                        const VecX& constraint = VecX());

}  // namespace freebound
