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

#include <cmath>
#include <vector>

#include "freebound/fbms.hpp"
#include "freebound/instances.hpp"
#include "freebound/mesh.hpp"

namespace fbtest {

using namespace freebound;

// Closed genus-0 surface; useful for topology rejections.
inline SurfaceMesh octahedron() {
  std::vector<Vec3> v = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  std::vector<Triangle> t = {{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4},
                             {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}};
  return SurfaceMesh::build(v, t);
}

// Planar annulus between radii 0.5 and 1 with n sectors.
inline SurfaceMesh annulus(int n = 24) {
  std::vector<Vec3> v;
  std::vector<Triangle> t;
  for (int k = 0; k < n; ++k) {
    const double a = 2.0 * kPi * k / n;
    v.emplace_back(0.5 * std::cos(a), 0.5 * std::sin(a), 0.0);
    v.emplace_back(std::cos(a), std::sin(a), 0.0);
  }
  for (int k = 0; k < n; ++k) {
    const int i0 = 2 * k, o0 = 2 * k + 1, i1 = 2 * ((k + 1) % n), o1 = i1 + 1;
    t.push_back({i0, o0, o1});
    t.push_back({i0, o1, i1});
  }
  return SurfaceMesh::build(v, t);
}

// Relaxed minimal disk in the unit ball, computed once per process.
inline const SolveResult& relaxed_disk(int rings = 20) {
  static const SolveResult r = [&] {
    const ConvexBody ball = ConvexBody::ball(1.0);
    const SurfaceMesh m = perturb_interior(body_disk(ball, rings), 1e-3 * 2.0, 42);
    return relax_minimal(m, ball, SolverConfig{});
  }();
  return r;
}

}  // namespace fbtest
