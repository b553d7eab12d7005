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

#include <cmath>

#include <gtest/gtest.h>

#include "freebound/eigensolver.hpp"
#include "freebound/error.hpp"
#include "freebound/instances.hpp"

using namespace freebound;

namespace {

// 1D Dirichlet Laplacian on n points with unit spacing; lambda_k = 4 sin^2(k pi / (2 (n + 1))).
SparseMat path_laplacian(int n) {
  std::vector<Eigen::Triplet<double>> t;
  for (int i = 0; i < n; ++i) {
    t.emplace_back(i, i, 2.0);
    if (i + 1 < n) {
      t.emplace_back(i, i + 1, -1.0);
      t.emplace_back(i + 1, i, -1.0);
    }
  }
  SparseMat a(n, n);
  a.setFromTriplets(t.begin(), t.end());
  return a;
}

double path_eigenvalue(int n, int k) {
  const double s = std::sin(k * kPi / (2.0 * (n + 1)));
  return 4.0 * s * s;
}

}  // namespace

class EigenPaths : public ::testing::TestWithParam<int> {};

TEST_P(EigenPaths, ClosedFormAndResiduals) {
  const int n = GetParam();
  const SparseMat a = path_laplacian(n);
  const VecX m = VecX::Ones(n);
  const EigenResult r = lowest_eigenpairs(a, m, 5);
  EXPECT_EQ(r.dense, n <= 1200);
  for (int k = 0; k < 5; ++k) EXPECT_NEAR(r.values[k], path_eigenvalue(n, k + 1), 1e-9);
  EXPECT_LE(relative_residuals(a, m, r).maxCoeff(), 1e-8);
  const MatX gram = r.vectors.transpose() * m.asDiagonal() * r.vectors;
  EXPECT_LE((gram - MatX::Identity(5, 5)).cwiseAbs().maxCoeff(), 1e-8);
}

INSTANTIATE_TEST_SUITE_P(DenseAndIterative, EigenPaths, ::testing::Values(200, 1500));

TEST(Eigensolver, InertiaCount) {
  const SparseMat a = path_laplacian(100);
  const VecX m = VecX::Ones(100);
  const double mid = 0.5 * (path_eigenvalue(100, 3) + path_eigenvalue(100, 4));
  EXPECT_EQ(count_below(a, m, mid), 3);
  EXPECT_EQ(count_below(a, m, 0.0), 0);
}

TEST(Eigensolver, DenseAndIterativeAgreeWithMassAndConstraint) {
  const SurfaceMesh disk = ring_disk(22);
  const SparseMat k = cotan_stiffness(disk);
  const VecX m = lumped_mass(disk);
  const int n = disk.num_vertices();
  ASSERT_GT(n, 1200);
  // Neumann spectrum; the constraint removes the constant mode.
  EigenOptions dense;
  dense.dense_threshold = n;
  dense.constraint = m;
  EigenOptions iter;
  iter.dense_threshold = 0;
  iter.constraint = m;
  const EigenResult d = lowest_eigenpairs(k, m, 4, dense);
  const EigenResult s = lowest_eigenpairs(k, m, 4, iter);
  EXPECT_FALSE(s.dense);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(d.values[i], s.values[i], 1e-8 * d.values[i]);
  EXPECT_LE(relative_residuals(k, m, s, m).maxCoeff(), 1e-8);
  EXPECT_LE(relative_residuals(k, m, d, m).maxCoeff(), 1e-8);
  for (int i = 0; i < 4; ++i) EXPECT_LE(std::abs(m.dot(s.vectors.col(i))), 1e-9);
  // First Neumann eigenvalue of the unit disk: j'_{1,1}^2.
  EXPECT_NEAR(d.values[0], 1.8411837813406593 * 1.8411837813406593, 1e-2);
}

TEST(Eigensolver, RejectsBadInput) {
  const SparseMat a = path_laplacian(10);
  for (auto fn : {+[](const SparseMat& x) { lowest_eigenpairs(x, VecX::Ones(10), 0); },
                  +[](const SparseMat& x) { lowest_eigenpairs(x, VecX::Ones(9), 2); },
                  +[](const SparseMat& x) { lowest_eigenpairs(x, -VecX::Ones(10), 2); }}) {
    try {
      fn(a);
      ADD_FAILURE();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InvalidInput);
    }
  }
}
