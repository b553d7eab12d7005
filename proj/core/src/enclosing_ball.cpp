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

#include "freebound/enclosing_ball.hpp"

#include <algorithm>
#include <cmath>
#include <list>
#include <random>

#include <Eigen/LU>

#include "freebound/error.hpp"

namespace freebound {

namespace {

/// Move-to-front Welzl. The current ball is only replaced by push(); pop()
/// shrinks the support stack but keeps the last ball, which is what makes the
/// recursion return the ball of every point processed so far.
class MoveToFront {
 public:
  MoveToFront(std::span<const Vec3> points, std::list<int> order, double scale2)
      : points_(points), order_(std::move(order)), eps_(1e-14 * scale2) {}

  void run() { solve(order_.end()); }

  const Vec3& center() const { return center_; }
  double radius2() const { return radius2_; }

 private:
  void solve(std::list<int>::iterator end) {
    if (support_.size() == 4) return;
    for (auto k = order_.begin(); k != end;) {
      auto j = k++;
      if (excess(*j) > 0.0 && push(*j)) {
        solve(j);
        support_.pop_back();
        order_.splice(order_.begin(), order_, j);
      }
    }
  }

  double excess(int index) const {
    if (radius2_ < 0.0) return 1.0;
    return (points_[static_cast<size_t>(index)] - center_).squaredNorm() - radius2_ - eps_;
  }

  // Sphere through support + {index}, centred in their affine hull. Rejects
  // affinely dependent sets.
  bool push(int index) {
    const Vec3& p0 = points_[static_cast<size_t>(support_.empty() ? index : support_[0])];
    std::vector<Vec3> dirs;
    for (size_t s = 1; s < support_.size(); ++s) {
      dirs.push_back(points_[static_cast<size_t>(support_[s])] - p0);
    }
    if (!support_.empty()) dirs.push_back(points_[static_cast<size_t>(index)] - p0);
    const int k = static_cast<int>(dirs.size());
    Vec3 offset = Vec3::Zero();
    if (k > 0) {
      MatX gram(k, k);
      VecX rhs(k);
      for (int a = 0; a < k; ++a) {
        for (int b = 0; b < k; ++b) {
          gram(a, b) = 2.0 * dirs[static_cast<size_t>(a)].dot(dirs[static_cast<size_t>(b)]);
        }
        rhs[a] = dirs[static_cast<size_t>(a)].squaredNorm();
      }
      Eigen::FullPivLU<MatX> lu(gram);
      lu.setThreshold(1e-12);
      if (lu.rank() < k) return false;
      const VecX lambda = lu.solve(rhs);
      for (int a = 0; a < k; ++a) offset += lambda[a] * dirs[static_cast<size_t>(a)];
    }
    center_ = p0 + offset;
    radius2_ = offset.squaredNorm();
    support_.push_back(index);
    return true;
  }

  std::span<const Vec3> points_;
  std::list<int> order_;
  double eps_;
  std::vector<int> support_;
  Vec3 center_ = Vec3::Zero();
  double radius2_ = -1.0;
};

}  // namespace

EnclosingBall enclosing_ball(std::span<const Vec3> points, std::uint64_t seed) {
  if (points.empty()) throw Error(ErrorCode::InvalidInput, "enclosing_ball needs a point");
  const int n = static_cast<int>(points.size());

  std::vector<int> perm(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<size_t>(i)] = i;
  std::mt19937_64 rng(seed);
  for (int i = n - 1; i > 0; --i) {
    const auto j = static_cast<int>(rng() % static_cast<std::uint64_t>(i + 1));
    std::swap(perm[static_cast<size_t>(i)], perm[static_cast<size_t>(j)]);
  }

  Vec3 lo = points[0];
  Vec3 hi = points[0];
  for (const auto& p : points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const double scale2 = std::max((hi - lo).squaredNorm(), 1e-300);

  MoveToFront mtf(points, std::list<int>(perm.begin(), perm.end()), scale2);
  mtf.run();

  EnclosingBall out;
  out.center = mtf.center();
  out.radius = std::sqrt(std::max(mtf.radius2(), 0.0));
  const double band = 1e-9 * std::sqrt(scale2);
  for (int i = 0; i < n; ++i) {
    if (std::abs((points[static_cast<size_t>(i)] - out.center).norm() - out.radius) <= band) {
      out.support.push_back(i);
    }
  }
  return out;
}

}  // namespace freebound
