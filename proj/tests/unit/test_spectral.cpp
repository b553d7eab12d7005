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

#include "freebound/curvature.hpp"
#include "freebound/error.hpp"
#include "freebound/spectral.hpp"
#include "support.hpp"

using namespace freebound;

namespace {

// Modified Bessel functions by their power series.
double bessel_i(int n, double x) {
  double term = std::pow(0.5 * x, n);
  for (int k = 1; k <= n; ++k) term /= k;
  double sum = term;
  for (int k = 1; k < 60; ++k) {
    term *= 0.25 * x * x / (k * (k + n));
    sum += term;
  }
  return sum;
}

// Root of x I1(x) = I0(x): the radial Robin mode of the unit disk is I0(x r)
// with lambda = -x^2.
double bessel_root() {
  double lo = 1.6, hi = 1.7;
  auto g = [](double x) { return x * bessel_i(1, x) - bessel_i(0, x); };
  EXPECT_LT(g(lo), 0.0);
  EXPECT_GT(g(hi), 0.0);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST(Spectral, BesselOracle) {
  const double x0 = bessel_root();
  EXPECT_GT(x0, 1.6);
  EXPECT_LT(x0, 1.7);
  EXPECT_NEAR(bessel_i(0, 1.0), 1.2660658777520082, 1e-15);
  EXPECT_NEAR(bessel_i(1, 1.0), 0.5651591039924851, 1e-15);
}

TEST(Spectral, DiskIndexOne) {
  const SolveResult& r = fbtest::relaxed_disk();
  const ConvexBody ball = ConvexBody::ball(1.0);
  const IndexReport ix = analyze_index(r.mesh, ball);
  EXPECT_EQ(ix.index, 1);
  EXPECT_EQ(ix.nullity, 2);
  const double x0 = bessel_root();
  EXPECT_NEAR(ix.spectrum.eigenvalues[0], -x0 * x0, 0.02 * x0 * x0);
  EXPECT_LE(ix.spectrum.residuals.maxCoeff(), 1e-8);
  for (double mm : ix.null_mismatch) EXPECT_LE(mm, 0.1);
  EXPECT_EQ(morse_index(r.mesh, ball), 1);
}

TEST(Spectral, IndexFormPieces) {
  // On a flat disk the potential vanishes and only the boundary term is left.
  const SurfaceMesh disk = ring_disk(10);
  const ConvexBody ball = ConvexBody::ball(1.0);
  const QuadraticFormPair p = assemble_index_form(disk, ball, discrete_curvatures(disk));
  EXPECT_LE(p.potential.cwiseAbs().maxCoeff(), 1e-18);
  for (int v = 0; v < disk.num_vertices(); ++v) {
    EXPECT_NEAR(p.boundary_weight[v], disk.is_boundary(v) ? 1.0 : 0.0, 1e-12);
  }
  const Field ones = Field::Ones(disk.num_vertices());
  EXPECT_NEAR(index_form(p, ones, ones), -boundary_length(disk), 1e-12);
  IndexFormOptions lumped;
  lumped.lumped_boundary = true;
  const QuadraticFormPair q = assemble_index_form(disk, ball, discrete_curvatures(disk), lumped);
  EXPECT_NEAR(index_form(q, ones, ones), -boundary_length(disk), 1e-12);
}

TEST(Spectral, SteklovFlatDisk) {
  const VecX s = steklov_spectrum(ring_disk(40), 6);
  EXPECT_NEAR(s[0], 0.0, 1e-10);
  const double expected[] = {1, 1, 2, 2, 3};
  for (int k = 0; k < 5; ++k) EXPECT_NEAR(s[k + 1], expected[k], 0.02 * expected[k]);
}

TEST(Spectral, RotationJacobiFields) {
  const SolveResult& r = fbtest::relaxed_disk();
  const ConvexBody ball = ConvexBody::ball(1.0);
  const auto c = jacobi_candidates(r.mesh, ball, discrete_curvatures(r.mesh));
  // Rotations about x and y tilt the disk; rotation about z is tangential.
  EXPECT_EQ(c.size(), 3u);
  const VecX m = lumped_mass(r.mesh);
  Field x(r.mesh.num_vertices());
  for (int v = 0; v < r.mesh.num_vertices(); ++v) x[v] = r.mesh.vertex(v).x();
  EXPECT_LE(jacobi_mismatch(x, c, m), 1e-2);
  EXPECT_DOUBLE_EQ(jacobi_mismatch(x, {}, m), 1.0);
}

TEST(Spectral, CapIsStable) {
  const ConvexBody ball = ConvexBody::ball(1.0);
  const SurfaceMesh cap = spherical_cap(0.5, 16);
  SolverConfig cfg;
  cfg.volume_target = enclosed_volume(cap, ball);
  const SolveResult r = relax_cmc(perturb_interior(cap, 2e-3, 8), ball, cfg);
  const StabilityReport s = cmc_stability_check(r.mesh, ball);
  EXPECT_TRUE(s.stable);
  EXPECT_GE(s.min_eigenvalue, -1e-6);
  EXPECT_EQ(s.null_modes, 2);
  EXPECT_LE(s.raw_min_eigenvalue, s.min_eigenvalue);
  const VecX m = lumped_mass(r.mesh);
  EXPECT_LE(std::abs(m.dot(s.eigenfunction)), 1e-9);
}

TEST(Spectral, ToJsonHasFields) {
  const VecX s = steklov_spectrum(ring_disk(3), 2);
  EXPECT_NEAR(s[0], 0.0, 1e-12);
  const SparseMat k = cotan_stiffness(ring_disk(5));
  const Spectrum sp = solve_spectrum(k, lumped_mass(ring_disk(5)), 3);
  const std::string j = sp.to_json();
  for (const char* key : {"eigenvalues", "negative_count", "near_zero_count", "residuals"}) {
    EXPECT_NE(j.find(key), std::string::npos) << key;
  }
  EXPECT_EQ(sp.near_zero_count, 1);
}
