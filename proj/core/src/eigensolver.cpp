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

#include "freebound/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/Householder>
#include <Eigen/QR>
#include <Eigen/SparseCholesky>

#include "freebound/error.hpp"

namespace freebound {

namespace {

double inf_norm(const SparseMat& a) {
  VecX rows = VecX::Zero(a.rows());
  for (int k = 0; k < a.outerSize(); ++k) {
    for (SparseMat::InnerIterator it(a, k); it; ++it) rows[it.row()] += std::abs(it.value());
  }
  return rows.size() ? rows.maxCoeff() : 0.0;
}

SparseMat shifted(const SparseMat& a, const VecX& mass, double sigma) {
  SparseMat s = a;
  for (int i = 0; i < a.rows(); ++i) s.coeffRef(i, i) -= sigma * mass[i];
  return s;
}

EigenResult dense_solve(const SparseMat& a, const VecX& mass, int count,
                        const std::optional<VecX>& constraint) {
  const int n = static_cast<int>(a.rows());
  const VecX dinv = mass.cwiseSqrt().cwiseInverse();
  MatX b = dinv.asDiagonal() * MatX(a) * dinv.asDiagonal();
  b = 0.5 * (b + b.transpose());
  MatX basis;
  if (constraint) {
    // Orthonormal basis of the complement of M^{-1/2} c.
    VecX w = dinv.cwiseProduct(*constraint);
    double tau = 0.0, beta = 0.0;
    VecX essential(n - 1);
    w.makeHouseholder(essential, tau, beta);
    MatX h = MatX::Identity(n, n);
    VecX workspace(n);
    h.applyHouseholderOnTheLeft(essential, tau, workspace.data());
    basis = h.transpose().rightCols(n - 1);
    b = basis.transpose() * b * basis;
  }
  Eigen::SelfAdjointEigenSolver<MatX> eig(b);
  if (eig.info() != Eigen::Success) throw Error(ErrorCode::ConvergenceFailure, "dense eigensolver failed");
  const int k = std::min<int>(count, static_cast<int>(b.rows()));
  EigenResult r;
  r.dense = true;
  r.values = eig.eigenvalues().head(k);
  MatX y = eig.eigenvectors().leftCols(k);
  if (constraint) y = basis * y;
  r.vectors = dinv.asDiagonal() * y;
  return r;
}

}  // namespace

int count_below(const SparseMat& a, const VecX& mass, double sigma) {
  Eigen::SimplicialLDLT<SparseMat> ldlt(shifted(a, mass, sigma));
  if (ldlt.info() != Eigen::Success) return -1;
  const VecX& d = ldlt.vectorD();
  return static_cast<int>((d.array() < 0.0).count());
}

VecX relative_residuals(const SparseMat& a, const VecX& mass, const EigenResult& result,
                        const VecX& constraint) {
  const double na = std::max(inf_norm(a), 1e-300);
  VecX res(result.values.size());
  for (int k = 0; k < result.values.size(); ++k) {
    const VecX x = result.vectors.col(k);
    VecX r = a * x - result.values[k] * mass.cwiseProduct(x);
    if (constraint.size() == r.size()) r -= (constraint.dot(r) / constraint.squaredNorm()) * constraint;
    res[k] = r.norm() / (na * x.norm());
  }
  return res;
}

EigenResult lowest_eigenpairs(const SparseMat& a, const VecX& mass, int count,
                              const EigenOptions& options) {
  const int n = static_cast<int>(a.rows());
  if (a.cols() != n || mass.size() != n) {
    throw Error(ErrorCode::InvalidInput, "matrix dimensions do not match");
  }
  if (count < 1 || count > n - (options.constraint ? 1 : 0)) {
    throw Error(ErrorCode::InvalidInput, "eigenpair count out of range");
  }
  if ((mass.array() <= 0.0).any()) throw Error(ErrorCode::InvalidInput, "mass must be positive");
  if (n <= options.dense_threshold) return dense_solve(a, mass, count, options.constraint);

  // Shift below the whole spectrum; lambda scales like 1 / length^2.
  const double unit = std::max(inf_norm(a) * 1e-6, 1.0 / mass.sum());
  double sigma = -unit;
  Eigen::SimplicialLDLT<SparseMat> ldlt;
  ldlt.analyzePattern(a);
  for (int k = 0;; ++k) {
    ldlt.factorize(shifted(a, mass, sigma));
    if (ldlt.info() == Eigen::Success && (ldlt.vectorD().array() > 0.0).all()) break;
    if (k == 60) throw Error(ErrorCode::ConvergenceFailure, "no positive definite shift found");
    sigma *= 2.0;
  }

  const int p = std::min(n - 1, count + std::max(count, options.guard_vectors));
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  MatX x(n, p);
  for (int j = 0; j < p; ++j) {
    for (int i = 0; i < n; ++i) x(i, j) = uni(rng);
  }

  VecX ainv_c;
  double c_ainv_c = 0.0;
  if (options.constraint) {
    ainv_c = ldlt.solve(*options.constraint);
    c_ainv_c = options.constraint->dot(ainv_c);
  }
  // y = (A - sigma M)^{-1} (M x - mu c) with c^T y = 0.
  auto apply = [&](const MatX& in) {
    MatX y = ldlt.solve(mass.asDiagonal() * in);
    if (options.constraint) {
      for (int j = 0; j < y.cols(); ++j) {
        y.col(j) -= (options.constraint->dot(y.col(j)) / c_ainv_c) * ainv_c;
      }
    }
    return y;
  };
  if (options.constraint) {
    const VecX& c = *options.constraint;
    for (int j = 0; j < p; ++j) x.col(j) -= (c.dot(x.col(j)) / c.squaredNorm()) * c;
  }

  const double na = std::max(inf_norm(a), 1e-300);
  EigenResult r;
  r.shift = sigma;
  for (int it = 1; it <= options.max_iterations; ++it) {
    MatX y = apply(x);
    Eigen::HouseholderQR<MatX> qr(y);
    y = qr.householderQ() * MatX::Identity(n, p);
    const MatX ar = y.transpose() * (a * y);
    const MatX mr = y.transpose() * mass.asDiagonal() * y;
    Eigen::GeneralizedSelfAdjointEigenSolver<MatX> eig(0.5 * (ar + ar.transpose()),
                                                       0.5 * (mr + mr.transpose()));
    if (eig.info() != Eigen::Success) {
      throw Error(ErrorCode::ConvergenceFailure, "Rayleigh-Ritz step failed");
    }
    x = y * eig.eigenvectors();
    bool done = true;
    for (int k = 0; k < count && done; ++k) {
      const VecX v = x.col(k);
      VecX rv = a * v - eig.eigenvalues()[k] * mass.cwiseProduct(v);
      if (options.constraint) {
        // A v - lambda M v = mu c for a constrained eigenpair.
        const VecX& c = *options.constraint;
        rv -= (c.dot(rv) / c.squaredNorm()) * c;
      }
      const double res = rv.norm() / (na * v.norm());
      done = res <= options.tolerance;
    }
    if (done) {
      r.values = eig.eigenvalues().head(count);
      r.vectors = x.leftCols(count);
      r.iterations = it;
      return r;
    }
  }
  throw Error(ErrorCode::ConvergenceFailure,
              "subspace iteration did not converge in " + std::to_string(options.max_iterations) +
                  " iterations");
}

}  // namespace freebound
