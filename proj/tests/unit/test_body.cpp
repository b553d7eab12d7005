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
#include <random>

#include <gtest/gtest.h>

#include "freebound/body.hpp"
#include "freebound/error.hpp"

using namespace freebound;

namespace {

std::vector<ConvexBody> bodies() {
  return {ConvexBody::ball(1.0), ConvexBody::ball(0.5, Vec3(0.2, -0.1, 0.3)),
          ConvexBody::ellipsoid(Vec3(2, 1, 1)), ConvexBody::ellipsoid(Vec3(0.9, 0.8, 0.7)),
          ConvexBody::perturbed_ball(0.9, 0.05, 2), ConvexBody::perturbed_ball(1.0, 0.02, 3)};
}

}  // namespace

TEST(Body, GradientAndHessianMatchFiniteDifferences) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-0.8, 0.8);
  const double h = 1e-5;
  for (const ConvexBody& b : bodies()) {
    for (int k = 0; k < 20; ++k) {
      const Vec3 x = b.center() + Vec3(u(rng), u(rng), u(rng));
      if (x.isApprox(b.center(), 1e-3)) continue;
      const Vec3 g = b.gradient(x);
      const Mat3 hs = b.hessian(x);
      for (int i = 0; i < 3; ++i) {
        const Vec3 e = h * Vec3::Unit(i);
        EXPECT_NEAR((b.value(x + e) - b.value(x - e)) / (2 * h), g[i], 1e-7) << b.descriptor();
        const Vec3 dg = (b.gradient(x + e) - b.gradient(x - e)) / (2 * h);
        EXPECT_LE((dg - hs.col(i)).norm(), 1e-6) << b.descriptor();
      }
    }
  }
}

TEST(Body, ProjectionLandsOnBoundary) {
  for (const ConvexBody& b : bodies()) {
    for (const Vec3& d : {Vec3(1, 0, 0), Vec3(0.3, -0.5, 0.8), Vec3(0, 0, -3)}) {
      const Vec3 p = project_to_boundary(b, b.center() + 0.7 * d);
      EXPECT_LE(std::abs(b.value(p)), 1e-12) << b.descriptor();
      const double t = b.radial_extent(d.normalized());
      EXPECT_LE(std::abs(b.value(b.center() + t * d.normalized())), 1e-12);
    }
  }
}

TEST(Body, BallCurvatures) {
  const BoundaryForm f = boundary_second_form(ConvexBody::ball(0.5), Vec3(0, 0, 0.5));
  EXPECT_NEAR(f.k1, 2.0, 1e-12);
  EXPECT_NEAR(f.k2, 2.0, 1e-12);
  const ConvexityReport r = certify_convexity(ConvexBody::ball(0.5), 500);
  EXPECT_NEAR(r.min_curvature, 2.0, 1e-12);
  EXPECT_NEAR(r.min_gauss_curvature, 4.0, 1e-11);
}

TEST(Body, EllipsoidCurvaturesClosedForm) {
  // At the end of semi-axis a the principal curvatures are a / b^2 and a / c^2.
  const ConvexBody e = ConvexBody::ellipsoid(Vec3(2, 1, 1));
  const BoundaryForm tip = boundary_second_form(e, Vec3(2, 0, 0));
  EXPECT_NEAR(tip.k1, 2.0, 1e-12);
  EXPECT_NEAR(tip.k2, 2.0, 1e-12);
  const BoundaryForm side = boundary_second_form(e, Vec3(0, 1, 0));
  EXPECT_NEAR(side.k1, 0.25, 1e-12);
  EXPECT_NEAR(side.k2, 1.0, 1e-12);
  EXPECT_NEAR(second_form(e, Vec3(0, 1, 0), Vec3(1, 0, 0)), 0.25, 1e-12);
  EXPECT_NEAR(certify_convexity(e, 4000).min_curvature, 0.25, 1e-3);
}

TEST(Body, NonConvexIsRejected) {
  try {
    certify_convexity(ConvexBody::perturbed_ball(1.0, 0.6, 4), 4000);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotStrictlyConvex);
  }
}

TEST(Body, GeometricConstantsOfBall) {
  const GeometricConstants g = geometric_constants(ConvexBody::ball(1.0), 4000);
  EXPECT_NEAR(g.enclosing_radius, 1.0, 1e-12);
  EXPECT_LE(g.enclosing_center.norm(), 1e-3);
  EXPECT_NEAR(g.diameter, 2.0, 1e-3);
  const GeometricConstants e = geometric_constants(ConvexBody::ellipsoid(Vec3(2, 1, 1)), 4000);
  // Sampled: the tips are only approached.
  EXPECT_NEAR(e.enclosing_radius, 2.0, 2e-3);
  EXPECT_LE(e.enclosing_radius, 2.0);
}

TEST(Body, BadParameters) {
  for (auto fn : {+[] { ConvexBody::ball(0.0); }, +[] { ConvexBody::ellipsoid(Vec3(1, -1, 1)); },
                  +[] { ConvexBody::perturbed_ball(1.0, 1.5, 2); }}) {
    try {
      fn();
      ADD_FAILURE();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::BadConfig);
    }
  }
}

TEST(Body, SymmetryAxes) {
  EXPECT_EQ(ConvexBody::ball(1.0).symmetry_axes().size(), 3u);
  EXPECT_EQ(ConvexBody::ellipsoid(Vec3(2, 1, 1)).symmetry_axes().size(), 1u);
  EXPECT_EQ(ConvexBody::ellipsoid(Vec3(3, 2, 1)).symmetry_axes().size(), 0u);
  EXPECT_EQ(ConvexBody::perturbed_ball(1.0, 0.1, 2).symmetry_axes().size(), 1u);
}
