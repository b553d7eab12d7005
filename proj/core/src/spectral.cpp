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

#include "freebound/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <json.hpp>

#include "freebound/error.hpp"

namespace freebound {

namespace {

VecX window_tolerance(const VecX& values, double requested, double& tol) {
  tol = requested >= 0.0 ? requested : 1e-4 * values.cwiseAbs().maxCoeff();
  return values;
}

}  // namespace

QuadraticFormPair assemble_index_form(const SurfaceMesh& mesh, const ConvexBody& body,
                                      const ShapeData& shape, const IndexFormOptions& options) {
  const int n = mesh.num_vertices();
  QuadraticFormPair pair;
  pair.mass = lumped_mass(mesh);
  pair.potential = options.include_potential ? shape.second_form_norm2 : VecX::Zero(n);
  pair.boundary_weight = VecX::Zero(n);
  for (int v = 0; v < n; ++v) {
    if (mesh.is_boundary(v)) pair.boundary_weight[v] = second_form(body, mesh.vertex(v), shape.normals[v]);
  }
  if (!options.include_boundary) {
    pair.boundary = SparseMat(n, n);
  } else if (options.lumped_boundary) {
    const VecX b = boundary_mass(mesh).cwiseProduct(pair.boundary_weight);
    pair.boundary = SparseMat(n, n);
    std::vector<Eigen::Triplet<double>> trips;
    for (int v = 0; v < n; ++v) {
      if (b[v] != 0.0) trips.emplace_back(v, v, b[v]);
    }
    pair.boundary.setFromTriplets(trips.begin(), trips.end());
  } else {
    pair.boundary = boundary_mass_consistent(mesh, pair.boundary_weight);
  }
  SparseMat potential(n, n);
  {
    std::vector<Eigen::Triplet<double>> trips;
    for (int v = 0; v < n; ++v) trips.emplace_back(v, v, pair.potential[v] * pair.mass[v]);
    potential.setFromTriplets(trips.begin(), trips.end());
  }
  pair.form = cotan_stiffness(mesh) - potential - pair.boundary;
  pair.form.prune(0.0);
  return pair;
}

double index_form(const QuadraticFormPair& pair, const Field& a, const Field& b) {
  return a.dot(pair.form * b);
}

std::string Spectrum::to_json() const {
  nlohmann::json j;
  j["eigenvalues"] = std::vector<double>(eigenvalues.data(), eigenvalues.data() + eigenvalues.size());
  j["residuals"] = std::vector<double>(residuals.data(), residuals.data() + residuals.size());
  j["negative_count"] = negative_count;
  j["near_zero_count"] = near_zero_count;
  j["zero_tolerance"] = zero_tolerance;
  return j.dump(2);
}

Spectrum solve_spectrum(const SparseMat& form, const VecX& mass, int count, double zero_tolerance,
                        const EigenOptions& options) {
  const EigenResult r = lowest_eigenpairs(form, mass, count, options);
  Spectrum s;
  s.eigenvalues = window_tolerance(r.values, zero_tolerance, s.zero_tolerance);
  s.eigenfunctions = r.vectors;
  s.residuals = relative_residuals(form, mass, r);
  for (int k = 0; k < s.eigenvalues.size(); ++k) {
    if (std::abs(s.eigenvalues[k]) <= s.zero_tolerance) {
      ++s.near_zero_count;
    } else if (s.eigenvalues[k] < 0.0) {
      ++s.negative_count;
    }
  }
  return s;
}

Spectrum solve_spectrum(const QuadraticFormPair& pair, int count, double zero_tolerance,
                        const EigenOptions& options) {
  return solve_spectrum(pair.form, pair.mass, count, zero_tolerance, options);
}

std::vector<Field> jacobi_candidates(const SurfaceMesh& mesh, const ConvexBody& body,
                                     const ShapeData& shape) {
  std::vector<Field> out;
  for (const Vec3& w : body.symmetry_axes()) {
    Field f(mesh.num_vertices());
    for (int v = 0; v < mesh.num_vertices(); ++v) {
      f[v] = w.cross(mesh.vertex(v) - body.center()).dot(shape.normals[v]);
    }
    out.push_back(std::move(f));
  }
  return out;
}

double jacobi_mismatch(const Field& f, const std::vector<Field>& candidates, const VecX& mass) {
  const double fnorm = std::sqrt(f.dot(mass.cwiseProduct(f)));
  if (candidates.empty() || fnorm == 0.0) return 1.0;
  const int k = static_cast<int>(candidates.size());
  MatX g(k, k);
  VecX rhs(k);
  for (int i = 0; i < k; ++i) {
    rhs[i] = candidates[i].dot(mass.cwiseProduct(f));
    for (int j = 0; j < k; ++j) g(i, j) = candidates[i].dot(mass.cwiseProduct(candidates[j]));
  }
  // Candidates may vanish identically (rotation about the surface normal).
  Eigen::SelfAdjointEigenSolver<MatX> eig(g);
  const double cut = 1e-12 * std::max(eig.eigenvalues().maxCoeff(), 1e-300);
  Field proj = Field::Zero(f.size());
  for (int i = 0; i < k; ++i) {
    const double lam = eig.eigenvalues()[i];
    if (lam <= cut) continue;
    const VecX u = eig.eigenvectors().col(i);
    Field basis = Field::Zero(f.size());
    for (int j = 0; j < k; ++j) basis += u[j] * candidates[j];
    proj += (u.dot(rhs) / lam) * basis;
  }
  const Field r = f - proj;
  return std::sqrt(r.dot(mass.cwiseProduct(r))) / fnorm;
}

IndexReport analyze_index(const SurfaceMesh& mesh, const ConvexBody& body, int count) {
  const ShapeData shape = discrete_curvatures(mesh);
  const QuadraticFormPair pair = assemble_index_form(mesh, body, shape);
  IndexReport report;
  report.spectrum = solve_spectrum(pair, std::min(count, mesh.num_vertices()));
  report.index = report.spectrum.negative_count;
  report.nullity = report.spectrum.near_zero_count;
  const auto candidates = jacobi_candidates(mesh, body, shape);
  const Spectrum& s = report.spectrum;
  for (int k = 0; k < s.eigenvalues.size(); ++k) {
    if (std::abs(s.eigenvalues[k]) > 2.0 * s.zero_tolerance) continue;
    const double mismatch = jacobi_mismatch(s.eigenfunctions.col(k), candidates, pair.mass);
    if (std::abs(s.eigenvalues[k]) <= s.zero_tolerance) report.null_mismatch.push_back(mismatch);
    if (mismatch > 0.1) {
      throw Error(ErrorCode::AmbiguousIndex,
                  "eigenvalue " + std::to_string(s.eigenvalues[k]) +
                      " is within twice the zero tolerance and matches no Jacobi field");
    }
  }
  return report;
}

int morse_index(const SurfaceMesh& mesh, const ConvexBody& body) {
  return analyze_index(mesh, body).index;
}

VecX steklov_spectrum(const SurfaceMesh& mesh, int count) {
  if (mesh.boundary_count() < 1) throw Error(ErrorCode::InvalidInput, "mesh has no boundary");
  const int n = mesh.num_vertices();
  std::vector<int> local(static_cast<size_t>(n));
  std::vector<int> bverts, iverts;
  for (int v = 0; v < n; ++v) {
    if (mesh.is_boundary(v)) {
      local[v] = static_cast<int>(bverts.size());
      bverts.push_back(v);
    } else {
      local[v] = static_cast<int>(iverts.size());
      iverts.push_back(v);
    }
  }
  const int nb = static_cast<int>(bverts.size()), ni = static_cast<int>(iverts.size());
  if (count < 1 || count > nb) throw Error(ErrorCode::InvalidInput, "Steklov count out of range");
  const SparseMat k = cotan_stiffness(mesh);
  std::vector<Eigen::Triplet<double>> tii, tib;
  MatX kbb = MatX::Zero(nb, nb);
  for (int c = 0; c < k.outerSize(); ++c) {
    for (SparseMat::InnerIterator it(k, c); it; ++it) {
      const int r = static_cast<int>(it.row()), col = static_cast<int>(it.col());
      const bool rb = mesh.is_boundary(r), cb = mesh.is_boundary(col);
      if (rb && cb) {
        kbb(local[r], local[col]) += it.value();
      } else if (!rb && !cb) {
        tii.emplace_back(local[r], local[col], it.value());
      } else if (!rb && cb) {
        tib.emplace_back(local[r], local[col], it.value());
      }
    }
  }
  MatX schur = kbb;
  if (ni > 0) {
    SparseMat kii(ni, ni), kib(ni, nb);
    kii.setFromTriplets(tii.begin(), tii.end());
    kib.setFromTriplets(tib.begin(), tib.end());
    Eigen::SimplicialLDLT<SparseMat> ldlt(kii);
    if (ldlt.info() != Eigen::Success) {
      throw Error(ErrorCode::ConvergenceFailure, "interior stiffness factorization failed");
    }
    const MatX x = ldlt.solve(MatX(kib));
    schur -= MatX(kib.transpose()) * x;
  }
  const VecX bm = boundary_mass(mesh);
  VecX dinv(nb);
  for (int i = 0; i < nb; ++i) dinv[i] = 1.0 / std::sqrt(bm[bverts[i]]);
  MatX s = dinv.asDiagonal() * schur * dinv.asDiagonal();
  s = 0.5 * (s + s.transpose());
  Eigen::SelfAdjointEigenSolver<MatX> eig(s, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw Error(ErrorCode::ConvergenceFailure, "Steklov eigensolve failed");
  return eig.eigenvalues().head(count);
}

EigenResult constrained_eigenpairs(const SparseMat& form, const VecX& mass, const VecX& constraint,
                                   int count, const EigenOptions& options) {
  EigenOptions opts = options;
  opts.constraint = constraint;
  return lowest_eigenpairs(form, mass, count, opts);
}

StabilityReport cmc_stability_check(const SurfaceMesh& mesh, const ConvexBody& body,
                                    double tolerance) {
  const ShapeData shape = discrete_curvatures(mesh);
  const QuadraticFormPair pair = assemble_index_form(mesh, body, shape);
  const int count = std::min(6, mesh.num_vertices() - 1);
  const EigenResult r = constrained_eigenpairs(pair.form, pair.mass, pair.mass, count);
  const auto candidates = jacobi_candidates(mesh, body, shape);
  StabilityReport report;
  report.eigenvalues = r.values;
  report.raw_min_eigenvalue = r.values[0];
  report.tolerance = tolerance;
  report.zero_tolerance = 1e-4 * r.values.cwiseAbs().maxCoeff();
  report.eigenfunction = r.vectors.col(0);
  report.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (int k = 0; k < r.values.size(); ++k) {
    const double mismatch = jacobi_mismatch(r.vectors.col(k), candidates, pair.mass);
    report.mismatch.push_back(mismatch);
    double value = r.values[k];
    if (std::abs(value) <= report.zero_tolerance && mismatch <= 0.1) {
      ++report.null_modes;
      value = 0.0;
    }
    report.min_eigenvalue = std::min(report.min_eigenvalue, value);
  }
  report.stable = report.min_eigenvalue >= -tolerance;
  return report;
}

}  // namespace freebound
