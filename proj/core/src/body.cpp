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

#include "freebound/body.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "freebound/enclosing_ball.hpp"
#include "freebound/error.hpp"

namespace freebound {

namespace {

struct Legendre {
  double p;
  double dp;
  double ddp;
};

// P_l and its first two derivatives by the three-term recurrences.
Legendre legendre(int l, double x) {
  double p_prev = 1.0, p = x;
  double dp_prev = 0.0, dp = 1.0;
  double ddp_prev = 0.0, ddp = 0.0;
  if (l == 0) return {1.0, 0.0, 0.0};
  for (int k = 1; k < l; ++k) {
    const double p_next = ((2.0 * k + 1.0) * x * p - k * p_prev) / (k + 1.0);
    const double dp_next = dp_prev + (2.0 * k + 1.0) * p;
    const double ddp_next = ddp_prev + (2.0 * k + 1.0) * dp;
    p_prev = p;
    p = p_next;
    dp_prev = dp;
    dp = dp_next;
    ddp_prev = ddp;
    ddp = ddp_next;
  }
  return {p, dp, ddp};
}

void tangent_frame(const Vec3& n, Vec3& t1, Vec3& t2) {
  const Vec3 helper = std::abs(n.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  t1 = (helper - helper.dot(n) * n).normalized();
  t2 = n.cross(t1);
}

std::string format_number(double x) {
  std::ostringstream out;
  out.precision(12);
  out << x;
  return out.str();
}

}  // namespace

ConvexBody ConvexBody::ball(double radius, const Vec3& center) {
  if (!(radius > 0.0)) throw Error(ErrorCode::BadConfig, "ball radius must be positive");
  ConvexBody b;
  b.kind_ = BodyKind::Ball;
  b.radius_ = radius;
  b.center_ = center;
  b.axes_ = Vec3::Constant(radius);
  return b;
}

ConvexBody ConvexBody::ellipsoid(const Vec3& semi_axes) {
  if (!(semi_axes.minCoeff() > 0.0)) {
    throw Error(ErrorCode::BadConfig, "ellipsoid semi-axes must be positive");
  }
  ConvexBody b;
  b.kind_ = BodyKind::Ellipsoid;
  b.axes_ = semi_axes;
  b.radius_ = semi_axes.maxCoeff();
  return b;
}

ConvexBody ConvexBody::perturbed_ball(double radius, double epsilon, int harmonic) {
  if (!(radius > 0.0)) throw Error(ErrorCode::BadConfig, "radius must be positive");
  if (harmonic < 0) throw Error(ErrorCode::BadConfig, "harmonic index must be >= 0");
  // P_l ranges over [-1, 1], so |eps| < 1 keeps the radial function positive.
  if (!(std::abs(epsilon) < 1.0)) throw Error(ErrorCode::BadConfig, "|epsilon| must be < 1");
  ConvexBody b;
  b.kind_ = BodyKind::PerturbedBall;
  b.radius_ = radius;
  b.epsilon_ = epsilon;
  b.harmonic_ = harmonic;
  b.axes_ = Vec3::Constant(radius * std::sqrt(1.0 + std::abs(epsilon)));
  return b;
}

double ConvexBody::value(const Vec3& x) const {
  switch (kind_) {
    case BodyKind::Ball:
      return (x - center_).squaredNorm() - radius_ * radius_;
    case BodyKind::Ellipsoid:
      return x.cwiseQuotient(axes_).squaredNorm() - 1.0;
    case BodyKind::PerturbedBall: {
      const double r = x.norm();
      const double g = r > 0.0 ? x.z() / r : 0.0;
      return r * r - radius_ * radius_ * (1.0 + epsilon_ * legendre(harmonic_, g).p);
    }
  }
  return 0.0;
}

Vec3 ConvexBody::gradient(const Vec3& x) const {
  switch (kind_) {
    case BodyKind::Ball:
      return 2.0 * (x - center_);
    case BodyKind::Ellipsoid:
      return 2.0 * x.cwiseQuotient(axes_.cwiseProduct(axes_));
    case BodyKind::PerturbedBall: {
      const double r = x.norm();
      if (r == 0.0) return Vec3::Zero();
      const Vec3 u = x / r;
      const double g = u.z();
      const Vec3 grad_g = (Vec3::UnitZ() - g * u) / r;
      return 2.0 * x - radius_ * radius_ * epsilon_ * legendre(harmonic_, g).dp * grad_g;
    }
  }
  return Vec3::Zero();
}

Mat3 ConvexBody::hessian(const Vec3& x) const {
  switch (kind_) {
    case BodyKind::Ball:
      return 2.0 * Mat3::Identity();
    case BodyKind::Ellipsoid:
      return 2.0 * axes_.cwiseProduct(axes_).cwiseInverse().asDiagonal().toDenseMatrix();
    case BodyKind::PerturbedBall: {
      const double r = x.norm();
      if (r == 0.0) return 2.0 * Mat3::Identity();
      const double r3 = r * r * r;
      const double g = x.z() / r;
      const Vec3 ez = Vec3::UnitZ();
      const Vec3 grad_g = (ez - g * x / r) / r;
      const Mat3 hess_g = -(ez * x.transpose() + x * ez.transpose()) / r3 -
                          x.z() * Mat3::Identity() / r3 +
                          3.0 * x.z() * x * x.transpose() / (r3 * r * r);
      const Legendre leg = legendre(harmonic_, g);
      const Mat3 hess_h = leg.ddp * grad_g * grad_g.transpose() + leg.dp * hess_g;
      return 2.0 * Mat3::Identity() - radius_ * radius_ * epsilon_ * hess_h;
    }
  }
  return Mat3::Identity();
}

double ConvexBody::radial_extent(const Vec3& direction) const {
  const Vec3 d = direction.normalized();
  switch (kind_) {
    case BodyKind::Ball:
      return radius_;
    case BodyKind::Ellipsoid:
      return 1.0 / d.cwiseQuotient(axes_).norm();
    case BodyKind::PerturbedBall:
      return radius_ * std::sqrt(1.0 + epsilon_ * legendre(harmonic_, d.z()).p);
  }
  return radius_;
}

Eigen::AlignedBox3d ConvexBody::bounding_box() const {
  return Eigen::AlignedBox3d(center_ - axes_, center_ + axes_);
}

std::string ConvexBody::descriptor() const {
  switch (kind_) {
    case BodyKind::Ball: {
      std::string s = "ball:" + format_number(radius_);
      if (center_ != Vec3::Zero()) {
        s += "@" + format_number(center_.x()) + "," + format_number(center_.y()) + "," +
             format_number(center_.z());
      }
      return s;
    }
    case BodyKind::Ellipsoid:
      return "ellipsoid:" + format_number(axes_.x()) + "," + format_number(axes_.y()) + "," +
             format_number(axes_.z());
    case BodyKind::PerturbedBall:
      return "perturbed-ball:" + format_number(radius_) + "," + format_number(epsilon_) + "," +
             std::to_string(harmonic_);
  }
  return "unknown";
}

std::vector<Vec3> ConvexBody::symmetry_axes() const {
  switch (kind_) {
    case BodyKind::Ball:
      return {Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};
    case BodyKind::Ellipsoid: {
      std::vector<Vec3> axes;
      for (int i = 0; i < 3; ++i) {
        const double a = axes_[(i + 1) % 3];
        const double b = axes_[(i + 2) % 3];
        if (std::abs(a - b) <= 1e-12 * std::max(a, b)) axes.push_back(Vec3::Unit(i));
      }
      return axes;
    }
    case BodyKind::PerturbedBall:
      if (harmonic_ == 0 || epsilon_ == 0.0) return {Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};
      return {Vec3::UnitZ()};
  }
  return {};
}

Vec3 project_to_boundary(const ConvexBody& body, const Vec3& point) {
  Vec3 x = point;
  const double scale = std::max(body.semi_axes().maxCoeff(), 1e-300);
  for (int iter = 0; iter < 100; ++iter) {
    const double f = body.value(x);
    const Vec3 g = body.gradient(x);
    const double g2 = g.squaredNorm();
    if (!std::isfinite(f) || g2 < 1e-24 * scale * scale) break;
    const Vec3 step = f * g / g2;
    x -= step;
    if (step.norm() <= 1e-16 * scale) {
      if (std::abs(body.value(x)) <= 1e-12) return x;
    }
    if (std::abs(body.value(x)) <= 1e-14 * scale * scale) return x;
  }
  if (std::isfinite(body.value(x)) && std::abs(body.value(x)) <= 1e-12) return x;
  throw Error(ErrorCode::ProjectionDiverged, "Newton projection to the boundary did not converge");
}

Vec3 outward_normal(const ConvexBody& body, const Vec3& boundary_point) {
  return body.gradient(boundary_point).normalized();
}

BoundaryForm boundary_second_form(const ConvexBody& body, const Vec3& boundary_point) {
  const Vec3 grad = body.gradient(boundary_point);
  const double gnorm = grad.norm();
  BoundaryForm out;
  out.normal = grad / gnorm;
  tangent_frame(out.normal, out.e1, out.e2);
  const Mat3 hess = body.hessian(boundary_point);
  out.form(0, 0) = out.e1.dot(hess * out.e1) / gnorm;
  out.form(0, 1) = out.e1.dot(hess * out.e2) / gnorm;
  out.form(1, 0) = out.form(0, 1);
  out.form(1, 1) = out.e2.dot(hess * out.e2) / gnorm;
  Eigen::SelfAdjointEigenSolver<Mat2> eig(out.form);
  out.k1 = eig.eigenvalues()[0];
  out.k2 = eig.eigenvalues()[1];
  return out;
}

double second_form(const ConvexBody& body, const Vec3& boundary_point, const Vec3& v) {
  const Vec3 grad = body.gradient(boundary_point);
  const double gnorm = grad.norm();
  const Vec3 n = grad / gnorm;
  const Vec3 t = v - v.dot(n) * n;
  const double len = t.norm();
  if (len == 0.0) return 0.0;
  const Vec3 u = t / len;
  return u.dot(body.hessian(boundary_point) * u) / gnorm;
}

std::vector<Vec3> sample_boundary(const ConvexBody& body, int count) {
  if (count < 1) throw Error(ErrorCode::InvalidInput, "sample count must be positive");
  std::vector<Vec3> samples;
  samples.reserve(static_cast<size_t>(count));
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (int k = 0; k < count; ++k) {
    const double z = count == 1 ? 0.0 : 1.0 - 2.0 * (k + 0.5) / count;
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * k;
    const Vec3 d(rho * std::cos(phi), rho * std::sin(phi), z);
    samples.push_back(body.center() + body.radial_extent(d) * d);
  }
  return samples;
}

ConvexityReport certify_convexity(const ConvexBody& body, int sample_count) {
  if (sample_count < 100) throw Error(ErrorCode::InvalidInput, "need at least 100 samples");
  ConvexityReport report;
  report.samples = sample_count;
  report.min_curvature = std::numeric_limits<double>::infinity();
  report.max_curvature = -std::numeric_limits<double>::infinity();
  report.min_gauss_curvature = std::numeric_limits<double>::infinity();
  for (const auto& p : sample_boundary(body, sample_count)) {
    const BoundaryForm form = boundary_second_form(body, p);
    if (form.k1 < report.min_curvature) {
      report.min_curvature = form.k1;
      report.argmin = p;
    }
    report.max_curvature = std::max(report.max_curvature, form.k2);
    report.min_gauss_curvature = std::min(report.min_gauss_curvature, form.k1 * form.k2);
  }
  if (!(report.min_curvature > 0.0)) {
    throw Error(ErrorCode::NotStrictlyConvex,
                "principal curvature " + std::to_string(report.min_curvature) + " at sample");
  }
  return report;
}

double check_convexity(const ConvexBody& body, int sample_count) {
  return certify_convexity(body, sample_count).min_curvature;
}

GeometricConstants geometric_constants(const ConvexBody& /*body*/, const std::vector<Vec3>& samples,
                                       double convexity_constant) {
  if (samples.empty()) throw Error(ErrorCode::InvalidInput, "no boundary samples");
  const EnclosingBall ball = enclosing_ball(samples);
  double diam2 = 0.0;
  for (size_t i = 0; i < samples.size(); ++i) {
    for (size_t j = i + 1; j < samples.size(); ++j) {
      diam2 = std::max(diam2, (samples[i] - samples[j]).squaredNorm());
    }
  }
  GeometricConstants out;
  out.enclosing_radius = ball.radius;
  out.enclosing_center = ball.center;
  out.diameter = std::sqrt(diam2);
  out.samples = static_cast<int>(samples.size());
  const double slack = 1e-12 * std::max(1.0, out.diameter);
  if (out.diameter / 2.0 > out.enclosing_radius + slack ||
      out.enclosing_radius > out.diameter + slack) {
    throw Error(ErrorCode::BoundViolation, "diam/2 <= R <= diam fails; refine the sampling");
  }
  if (convexity_constant >= 1.0 && !(out.enclosing_radius < kPi)) {
    throw Error(ErrorCode::BoundViolation, "R >= pi although II >= 1");
  }
  return out;
}

GeometricConstants geometric_constants(const ConvexBody& body, int sample_count) {
  return geometric_constants(body, sample_boundary(body, sample_count));
}

}  // namespace freebound
