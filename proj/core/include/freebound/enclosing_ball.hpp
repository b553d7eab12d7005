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

#include <cstdint>
#include <span>
#include <vector>

#include "freebound/types.hpp"

namespace freebound {

struct EnclosingBall {
  Vec3 center = Vec3::Zero();
  double radius = 0.0;
  /// Indices (into the input) of the points on the final sphere.
  std::vector<int> support;

  bool contains(const Vec3& p, double tolerance = 1e-12) const {
    return (p - center).norm() <= radius + tolerance;
  }
};

/// Smallest ball containing all points: Welzl's algorithm with the
/// move-to-front heuristic, after a shuffle seeded by `seed`. Requires at
/// least one point.
EnclosingBall enclosing_ball(std::span<const Vec3> points, std::uint64_t seed = 42);

}  // namespace freebound
