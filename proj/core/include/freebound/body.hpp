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

#include <Eigen/Geometry>

#include "freebound/types.hpp"

namespace freebound {

enum class BodyKind { Ball, Ellipsoid, PerturbedBall };

/// Strictly convex body given by an implicit function psi (negative inside)
/// with analytic gradient and Hessian.
///
///   ball            psi = |x - c|^2 - rho^2
///   ellipsoid       psi = sum x_i^2 / a_i^2 - 1
///   perturbed-ball  psi = |x|^2 - rho^2 (1 + eps P_l(z / |x|)), P_l Legendre
///
/// All kinds are star-shaped about center(), and the boundary is the graph of
/// radial_extent() over the unit sphere of directions.
class ConvexBody {
 public:
  static ConvexBody ball(double radius, const Vec3& center = Vec3::Zero());
  static ConvexBody ellipsoid(const Vec3& semi_axes);
  static ConvexBody perturbed_ball(double radius, double epsilon, int harmonic);

  BodyKind kind() const { return kind_; }
  double value(const Vec3& x) const;
  Vec3 gradient(const Vec3& x) const;
  Mat3 hessian(const Vec3& x) const;

  const Vec3& center() const { return center_; }
  double radius() const { return radius_; }
  const Vec3& semi_axes() const { return axes_; }
  double epsilon() const { return epsilon_; }
  int harmonic() const { return harmonic_; }

  /// t > 0 with center() + t * direction on the boundary; direction is unit.
  double radial_extent(const Vec3& direction) const;
  Eigen::AlignedBox3d bounding_box() const;
  /// e.g. "ball:1", "ellipsoid:2,1,1", "perturbed-ball:0.9,0.05,2"
  std::string descriptor() const;

  /// Axes through center() of rotations mapping the body onto itself. Their
  /// normal components are Jacobi fields of any free boundary surface.
  std::vector<Vec3> symmetry_axes() const;

 private:
  ConvexBody() = default;

  BodyKind kind_ = BodyKind::Ball;
  Vec3 center_ = Vec3::Zero();
  double radius_ = 1.0;
  Vec3 axes_ = Vec3::Ones();
  double epsilon_ = 0.0;
  int harmonic_ = 0;
};

/// Newton iteration along grad psi until |psi| <= 1e-13 (or round-off floor).
/// Throws ProjectionDiverged if it fails.
Vec3 project_to_boundary(const ConvexBody& body, const Vec3& point);
Vec3 outward_normal(const ConvexBody& body, const Vec3& boundary_point);

struct BoundaryForm {
  Vec3 normal;
  Vec3 e1;
  Vec3 e2;
  Mat2 form;  // in (e1, e2)
  double k1;  // k1 <= k2
  double k2;
};

/// Shape operator of the level set with respect to the outward normal:
/// P Hess(psi) P / |grad psi| on the tangent plane.
BoundaryForm boundary_second_form(const ConvexBody& body, const Vec3& boundary_point);

/// II(v, v) for the unit tangent obtained by projecting v onto T(boundary).
double second_form(const ConvexBody& body, const Vec3& boundary_point, const Vec3& v);

/// Quasi-uniform boundary points: Fibonacci directions pushed radially.
std::vector<Vec3> sample_boundary(const ConvexBody& body, int count);

struct ConvexityReport {
  double min_curvature = 0.0;        // c = min k1
  double max_curvature = 0.0;        // max k2
  double min_gauss_curvature = 0.0;  // min k1 k2
  Vec3 argmin = Vec3::Zero();
  int samples = 0;
};

/// Throws NotStrictlyConvex if some sampled k1 <= 0. Requires count >= 100.
ConvexityReport certify_convexity(const ConvexBody& body, int sample_count);
double check_convexity(const ConvexBody& body, int sample_count);

struct GeometricConstants {
  double enclosing_radius = 0.0;  // R(Omega)
  Vec3 enclosing_center = Vec3::Zero();
  double diameter = 0.0;
  int samples = 0;
};

/// R(Omega) from the minimal enclosing ball of the samples, the diameter from
/// the farthest sample pair. Throws BoundViolation if diam/2 <= R <= diam
/// fails, or if R >= pi for a body whose certified constant is >= 1.
GeometricConstants geometric_constants(const ConvexBody& body, const std::vector<Vec3>& samples,
                                       double convexity_constant = 0.0);
GeometricConstants geometric_constants(const ConvexBody& body, int sample_count = 10000);

}  // namespace freebound
