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

#include "freebound/verify.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "freebound/curvature.hpp"
#include "freebound/diskmap.hpp"
#include "freebound/error.hpp"
#include "freebound/spectral.hpp"

namespace freebound {

namespace {

Certificate start(const std::string& theorem, const SolveResult& result, const ConvexBody& body) {
  const SurfaceMesh& mesh = result.mesh;
  Certificate c;
  c.theorem = theorem;
  c.instance = body.descriptor();
  c.quantities["genus"] = mesh.genus();
  c.quantities["boundary_components"] = mesh.boundary_count();
  c.quantities["length"] = boundary_length(mesh);
  c.quantities["area"] = area(mesh);
  c.quantities["vertices"] = mesh.num_vertices();
  c.flag("converged", result.converged, result.grad_norm);
  return c;
}

// Test-function part of the length bound: balanced coordinates f1, f2 of a
// disk map and the energy bookkeeping that turns I(f_i, f_i) >= 0 into
// L <= 2 pi deg.
void audit_test_functions(Certificate& c, const SurfaceMesh& mesh, const QuadraticFormPair& pair,
                          const BalancedTestFunctions& t, const VerifyOptions& o) {
  const double length = boundary_length(mesh);
  const SparseMat boundary = boundary_mass_consistent(mesh);
  const EnergyBound eb = conformal_energy_bound(mesh, t.map);
  const int deg = t.map.degree;
  const Field* fields[2] = {&t.f1, &t.f2};
  double chain = 0.0;
  double forms = 0.0;
  for (int i = 0; i < 2; ++i) {
    const Field& f = *fields[i];
    const std::string suffix = "_f" + std::to_string(i + 1);
    const double form = index_form(pair, f, f);
    chain += dirichlet_energy(mesh, f) - f.dot(boundary * f);
    forms += form;
    c.quantities["index_form" + suffix] = form;
    c.lower("index_form" + suffix, form, 0.0, o.index_form_tolerance);
    c.upper("orthogonality" + suffix, t.orthogonality[i], 0.0, o.orthogonality_tolerance);
  }
  const double defect = 2.0 * eb.residual;
  const double bound = 2.0 * kPi * deg;
  c.quantities["energy"] = eb.energy;
  c.quantities["degree"] = deg;
  c.quantities["conformality_defect"] = defect;
  c.quantities["test_energy"] = chain;
  c.quantities["balance_point_modulus"] = std::abs(t.balance.point);
  c.quantities["balance_residual"] = t.balance.residual;
  c.quantities["balance_zeros"] = static_cast<double>(t.balance.zeros.size());
  c.flag("degree_one", deg == 1, deg);
  c.upper("energy_dominates_image", eb.image_area, eb.energy, 1e-12 * std::abs(eb.energy));
  c.upper("index_forms_below_test_energy", forms, chain, o.index_form_tolerance);
  c.equal("test_energy_identity", chain, bound - length + defect, o.chain_tolerance * bound);
  c.upper("length_bound_with_defect", length, bound + defect, o.relative_tolerance * bound);
}

double edge_quadrature(const Vec3& a, const Vec3& b, const Vec3& y0) {
  // Three-point Gauss-Legendre on [0, 1].
  static const double nodes[3] = {0.5 - 0.5 * std::sqrt(0.6), 0.5, 0.5 + 0.5 * std::sqrt(0.6)};
  static const double weights[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
  double s = 0.0;
  for (int k = 0; k < 3; ++k) s += weights[k] * (a + nodes[k] * (b - a) - y0).norm();
  return s * (b - a).norm();
}

}  // namespace

void EqualityDiagnostics::record(Certificate& c) const {
  c.diagnostics["max_A"] = max_second_form;
  c.diagnostics["max_K"] = max_gauss_curvature;
  c.diagnostics["max_kappa_minus_1"] = max_kappa_minus_one;
  c.diagnostics["max_kappa_minus_II_TT"] = max_kappa_minus_body;
  c.diagnostics["max_kappa_bar"] = max_kappa_bar;
  c.diagnostics["max_II_NN_minus_1"] = max_body_normal_minus_one;
}

EqualityDiagnostics equality_diagnostics(const SurfaceMesh& mesh, const ConvexBody& body) {
  const ShapeData shape = discrete_curvatures(mesh);
  EqualityDiagnostics d;
  d.max_second_form = std::sqrt(shape.second_form_norm2.maxCoeff());
  d.max_gauss_curvature = shape.gaussian_curvature.cwiseAbs().maxCoeff();
  const BoundaryCurvature bc = boundary_geodesic_curvature(mesh);
  for (size_t i = 0; i < bc.vertices.size(); ++i) {
    const int v = bc.vertices[i];
    const Vec3& x = mesh.vertex(v);
    const Vec3 t = (mesh.vertex(mesh.boundary_next(v)) - mesh.vertex(mesh.boundary_prev(v))).normalized();
    const double kappa = bc.kappa[i];
    d.max_kappa_minus_one = std::max(d.max_kappa_minus_one, std::abs(kappa - 1.0));
    d.max_kappa_minus_body = std::max(d.max_kappa_minus_body, std::abs(kappa - second_form(body, x, t)));
    d.max_kappa_bar = std::max(d.max_kappa_bar, std::abs(shape.normal_curvature(v, t)));
    d.max_body_normal_minus_one =
        std::max(d.max_body_normal_minus_one,
                 std::abs(second_form(body, x, shape.normals[static_cast<size_t>(v)]) - 1.0));
  }
  return d;
}

ConvexityReport require_unit_convexity(const ConvexBody& body, const VerifyOptions& options) {
  ConvexityReport report = certify_convexity(body, options.convexity_samples);
  if (report.min_curvature < 1.0 - options.convexity_tolerance) {
    throw Error(ErrorCode::NotStrictlyConvex,
                "II >= 1 fails for " + body.descriptor() + ": c = " +
                    std::to_string(report.min_curvature) + " < 1");
  }
  return report;
}

Certificate check_theorem1(const SolveResult& result, const ConvexBody& body,
                           const VerifyOptions& o) {
  require_unit_convexity(body, o);
  const SurfaceMesh& mesh = result.mesh;
  Certificate c = start("theorem1", result, body);
  const double length = c.quantities["length"];
  const int gr = mesh.genus() + mesh.boundary_count();
  const double bound = 2.0 * kPi * gr;

  const ShapeData shape = discrete_curvatures(mesh);
  const QuadraticFormPair pair = assemble_index_form(mesh, body, shape);
  const IndexReport index = analyze_index(mesh, body);
  const double lambda1 = index.spectrum.eigenvalues[0];
  c.quantities["index"] = index.index;
  c.quantities["nullity"] = index.nullity;
  c.quantities["lambda1"] = lambda1;
  if (index.index != 1) c.notes.push_back("IndexNotOne: index = " + std::to_string(index.index));
  c.flag("index_one", index.index == 1, index.index);
  c.flag("first_eigenvalue_negative", lambda1 < 0.0, lambda1);

  const BalancedTestFunctions tests =
      balanced_test_functions(mesh, index.spectrum.eigenfunctions.col(0), o.balance_tolerance);
  c.quantities["first_eigenfunction_clamp"] = tests.clamp;
  c.upper("first_eigenfunction_sign", tests.clamp, 0.0, 1e-6);
  audit_test_functions(c, mesh, pair, tests, o);

  c.upper("length_bound", length, bound, o.relative_tolerance * bound);
  c.upper("length_bound_nonsharp", length, 2.0 * bound, o.relative_tolerance * bound);
  const double sigma1 = steklov_spectrum(mesh, 2)[1];
  c.quantities["steklov_sigma1"] = sigma1;
  c.lower("steklov_lower_bound", sigma1, 0.5, 0.0);

  equality_diagnostics(mesh, body).record(c);
  const bool near_equality = std::abs(bound - length) <= o.equality_band * bound;
  c.quantities["equality_case"] = near_equality ? 1.0 : 0.0;
  if (near_equality) c.notes.push_back("length within the equality band of 2 pi (g + r)");
  return c;
}

Certificate check_corollary2(const SolveResult& result, const VerifyOptions& o) {
  const SurfaceMesh& mesh = result.mesh;
  if (mesh.genus() != 0 || mesh.boundary_count() != 1) {
    throw Error(ErrorCode::WrongTopology, "isoperimetric check needs a disk");
  }
  Certificate c;
  c.theorem = "corollary2";
  c.quantities["genus"] = 0;
  c.quantities["boundary_components"] = 1;
  const double length = boundary_length(mesh);
  const double a = area(mesh);
  c.quantities["length"] = length;
  c.quantities["area"] = a;
  c.quantities["vertices"] = mesh.num_vertices();
  c.flag("converged", result.converged, result.grad_norm);
  const double l2 = length * length;
  c.upper("isoperimetric", 4.0 * kPi * a, l2, o.relative_tolerance * l2);
  c.upper("area_bound", a, kPi, o.relative_tolerance * kPi);
  const bool iso_eq = std::abs(l2 - 4.0 * kPi * a) <= o.equality_band * l2;
  const bool area_eq = std::abs(kPi - a) <= o.equality_band * kPi;
  c.quantities["isoperimetric_equality"] = iso_eq ? 1.0 : 0.0;
  c.quantities["area_equality"] = area_eq ? 1.0 : 0.0;
  return c;
}

Certificate check_corollary3(const SolveResult& result, const ConvexBody& body,
                             const VerifyOptions& o) {
  const SurfaceMesh& mesh = result.mesh;
  Certificate c = start("corollary3", result, body);
  const GeometricConstants gc = geometric_constants(body, o.boundary_samples);
  const Vec3 y0 = gc.enclosing_center;
  const double radius = gc.enclosing_radius;
  const double length = c.quantities["length"];
  const double a = c.quantities["area"];
  const int gr = mesh.genus() + mesh.boundary_count();

  // Boundary edges with the face on their left: the outward conormal is
  // (b - a) x n_f, and <x - y0, nu> is affine along the edge.
  double flux = 0.0;
  double distance = 0.0;
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const auto& t = mesh.triangle(f);
    for (int k = 0; k < 3; ++k) {
      const int p = t[static_cast<size_t>(k)];
      const int q = t[static_cast<size_t>((k + 1) % 3)];
      if (mesh.boundary_next(p) != q) continue;
      const Vec3 e = mesh.vertex(q) - mesh.vertex(p);
      const Vec3 mid = 0.5 * (mesh.vertex(p) + mesh.vertex(q));
      flux += (mid - y0).dot(e.cross(face_normal(mesh, f)));
      distance += edge_quadrature(mesh.vertex(p), mesh.vertex(q), y0);
    }
  }
  c.quantities["enclosing_radius"] = radius;
  c.quantities["flux"] = flux;
  c.quantities["boundary_distance_integral"] = distance;
  c.equal("flux_identity", flux, 2.0 * a, o.flux_tolerance * 2.0 * a);
  c.upper("flux_below_distance", flux, distance, 1e-12 * distance);
  c.upper("distance_below_radius_length", distance, radius * length,
          o.relative_tolerance * radius * length);
  const double bound = kPi * gr * radius;
  c.upper("area_bound", a, bound, o.relative_tolerance * bound);
  c.quantities["equality_case"] = std::abs(bound - a) <= o.equality_band * bound ? 1.0 : 0.0;
  return c;
}

Certificate check_theorem2(const SolveResult& result, const ConvexBody& body,
                           const VerifyOptions& o) {
  require_unit_convexity(body, o);
  const SurfaceMesh& mesh = result.mesh;
  Certificate c = start("theorem2", result, body);
  const double length = c.quantities["length"];
  const int gr = mesh.genus() + mesh.boundary_count();
  const double bound = 2.0 * kPi * gr;
  c.quantities["mean_curvature"] = result.residuals.mean_h;
  c.quantities["cmc_residual"] = result.residuals.cmc;
  c.upper("constant_mean_curvature", result.residuals.cmc, 0.0, o.cmc_tolerance);

  const StabilityReport stability = cmc_stability_check(mesh, body, o.stability_tolerance);
  c.quantities["stability_min_eigenvalue"] = stability.min_eigenvalue;
  c.quantities["stability_raw_min_eigenvalue"] = stability.raw_min_eigenvalue;
  c.quantities["stability_null_modes"] = stability.null_modes;
  c.quantities["stability_zero_tolerance"] = stability.zero_tolerance;
  c.lower("stability", stability.min_eigenvalue, 0.0, o.stability_tolerance);
  if (stability.null_modes > 0) {
    c.notes.push_back(std::to_string(stability.null_modes) +
                      " constrained eigenvalue(s) identified as rotation Jacobi fields");
  }
  if (stability.stable) {
    c.upper("length_bound", length, bound, o.relative_tolerance * bound);
  } else {
    c.notes.push_back("length bound not asserted: surface is not stable");
  }

  const ShapeData shape = discrete_curvatures(mesh);
  const QuadraticFormPair pair = assemble_index_form(mesh, body, shape);
  const BalancedTestFunctions tests =
      balanced_test_functions(mesh, Field::Ones(mesh.num_vertices()), o.balance_tolerance);
  audit_test_functions(c, mesh, pair, tests, o);
  equality_diagnostics(mesh, body).record(c);
  return c;
}

Certificate check_corollary1_hypotheses(const ConvexBody& body, const VerifyOptions& o) {
  const ConvexityReport report = certify_convexity(body, o.convexity_samples);
  if (report.min_curvature < 1.0 - o.convexity_tolerance) {
    throw Error(ErrorCode::HypothesisFails,
                "II >= 1 fails for " + body.descriptor() + ": c = " +
                    std::to_string(report.min_curvature));
  }
  Certificate c;
  c.theorem = "corollary1";
  c.instance = body.descriptor();
  c.quantities["samples"] = report.samples;
  c.quantities["convexity_constant"] = report.min_curvature;
  c.quantities["min_boundary_gauss_curvature"] = report.min_gauss_curvature;
  // Flat ambient space.
  c.quantities["ambient_sectional_curvature"] = 0.0;
  c.quantities["ambient_ricci"] = 0.0;
  c.quantities["ambient_scalar_curvature"] = 0.0;
  c.lower("convexity_constant", report.min_curvature, 1.0, o.convexity_tolerance);
  c.lower("boundary_gauss_curvature", report.min_gauss_curvature, 1.0, o.convexity_tolerance);
  c.notes.push_back("rigidity of the ambient body is an imported theorem, not computed");
  return c;
}

}  // namespace freebound
