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

#include "freebound/body.hpp"
#include "freebound/certificate.hpp"
#include "freebound/fbms.hpp"
#include "freebound/mesh.hpp"

namespace freebound {

struct VerifyOptions {
  /// Relative slack for length and area inequalities.
  double relative_tolerance = 5e-3;
  /// Relative band inside which an inequality is treated as an equality.
  double equality_band = 1e-2;
  double index_form_tolerance = 1e-6;
  double diagnostic_tolerance = 1e-3;
  double convexity_tolerance = 1e-6;
  double flux_tolerance = 1e-3;
  double stability_tolerance = 1e-6;
  double orthogonality_tolerance = 1e-9;
  double balance_tolerance = 1e-10;
  /// Relative allowance for the test-function energy identity.
  double chain_tolerance = 1e-2;
  double cmc_tolerance = 1e-4;
  int convexity_samples = 2000;
  int boundary_samples = 4000;
};

/// Surface-level equality quantities; curvatures in the body's units.
struct EqualityDiagnostics {
  double max_second_form = 0.0;       // max |A|
  double max_gauss_curvature = 0.0;   // max |K|
  double max_kappa_minus_one = 0.0;   // boundary geodesic curvature in the surface
  double max_kappa_minus_body = 0.0;  // |kappa - II(T, T)|
  double max_kappa_bar = 0.0;         // |A(T, T)| along the boundary
  double max_body_normal_minus_one = 0.0;  // |II(N, N) - 1| on the boundary

  void record(Certificate& certificate) const;
};

EqualityDiagnostics equality_diagnostics(const SurfaceMesh& mesh, const ConvexBody& body);

/// Convexity certificate with c >= 1 - tolerance; throws NotStrictlyConvex
/// otherwise.
ConvexityReport require_unit_convexity(const ConvexBody& body, const VerifyOptions& options = {});

/// Length bound L <= 2 pi (g + r) with the test-function audit. Index other
/// than one is recorded as an IndexNotOne note and a failing check.
Certificate check_theorem1(const SolveResult& result, const ConvexBody& body,
                           const VerifyOptions& options = {});
/// 4 pi A <= L^2 and A <= pi. Throws WrongTopology unless g = 0, r = 1.
Certificate check_corollary2(const SolveResult& result, const VerifyOptions& options = {});
/// Flux identity and A <= pi (g + r) R with y0 the enclosing-ball center.
Certificate check_corollary3(const SolveResult& result, const ConvexBody& body,
                             const VerifyOptions& options = {});
/// Stability on mean-zero fields, then the length bound.
Certificate check_theorem2(const SolveResult& result, const ConvexBody& body,
                           const VerifyOptions& options = {});
/// K of the body boundary >= 1 on samples. Throws HypothesisFails when II >= 1
/// already fails.
Certificate check_corollary1_hypotheses(const ConvexBody& body, const VerifyOptions& options = {});

}  // namespace freebound
