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

#include "freebound/instances.hpp"

#include <cmath>
#include <random>

#include "freebound/error.hpp"

namespace freebound {

namespace {

int ring_start(int k) { return k == 0 ? 0 : 1 + 3 * (k - 1) * k; }

// Triangles of the concentric-ring connectivity. Ring k >= 1 holds 6k
// vertices at angles 2 pi j / (6k); neighbouring rings are zipped in angle
// order so that the pattern is the usual hexagonal refinement.
std::vector<Triangle> ring_triangles(int rings) {
  std::vector<Triangle> tris;
  tris.reserve(static_cast<size_t>(6 * rings * rings));
  for (int j = 0; j < 6; ++j) tris.push_back({0, 1 + j, 1 + (j + 1) % 6});
  for (int k = 2; k <= rings; ++k) {
    const int ni = 6 * (k - 1), no = 6 * k;
    const int si = ring_start(k - 1), so = ring_start(k);
    int i = 0, j = 0;
    while (i < ni || j < no) {
      // Compare the angles of the next inner and outer vertices: (i+1)/ni vs (j+1)/no.
      const bool advance_outer = i == ni || (j < no && (j + 1) * ni <= (i + 1) * no);
      if (advance_outer) {
        tris.push_back({si + i % ni, so + j, so + (j + 1) % no});
        ++j;
      } else {
        tris.push_back({si + i, so + j % no, si + (i + 1) % ni});
        ++i;
      }
    }
  }
  return tris;
}

void check_rings(int rings) {
  if (rings < 1) throw Error(ErrorCode::BadConfig, "need at least one ring");
}

}  // namespace

SurfaceMesh ring_disk(int rings, double radius) {
  check_rings(rings);
  std::vector<Vec3> pts;
  pts.reserve(static_cast<size_t>(ring_start(rings + 1)));
  pts.emplace_back(0.0, 0.0, 0.0);
  for (int k = 1; k <= rings; ++k) {
    const double r = radius * k / rings;
    for (int j = 0; j < 6 * k; ++j) {
      const double t = 2.0 * kPi * j / (6.0 * k);
      pts.emplace_back(r * std::cos(t), r * std::sin(t), 0.0);
    }
  }
  return SurfaceMesh::build(std::move(pts), ring_triangles(rings));
}

int rings_for_vertices(int vertices) {
  int m = 1;
  while (ring_start(m + 1) < vertices) ++m;
  return m;
}

SurfaceMesh body_disk(const ConvexBody& body, int rings, const Mat3& rotation) {
  check_rings(rings);
  std::vector<Vec3> pts;
  pts.reserve(static_cast<size_t>(ring_start(rings + 1)));
  pts.push_back(body.center());
  for (int k = 1; k <= rings; ++k) {
    for (int j = 0; j < 6 * k; ++j) {
      const double t = 2.0 * kPi * j / (6.0 * k);
      const Vec3 d = rotation * Vec3(std::cos(t), std::sin(t), 0.0);
      Vec3 p = body.center() + (static_cast<double>(k) / rings) * body.radial_extent(d) * d;
      if (k == rings) p = project_to_boundary(body, p);
      pts.push_back(p);
    }
  }
  return SurfaceMesh::build(std::move(pts), ring_triangles(rings));
}

SurfaceMesh spherical_cap(double offset, int rings, double radius) {
  check_rings(rings);
  if (!(offset > 0.0 && offset < 1.0)) {
    throw Error(ErrorCode::BadConfig, "cap offset must lie in (0, 1)");
  }
  const CapGeometry g = cap_geometry(offset, radius);
  const double theta_max = std::asin(offset);
  const Vec3 c(0.0, 0.0, g.center_height);
  std::vector<Vec3> pts;
  pts.reserve(static_cast<size_t>(ring_start(rings + 1)));
  pts.push_back(c - g.sphere_radius * Vec3::UnitZ());
  for (int k = 1; k <= rings; ++k) {
    const double th = theta_max * k / rings;
    for (int j = 0; j < 6 * k; ++j) {
      const double t = 2.0 * kPi * j / (6.0 * k);
      Vec3 p = c + g.sphere_radius * Vec3(std::sin(th) * std::cos(t), std::sin(th) * std::sin(t),
                                          -std::cos(th));
      // Pin the boundary ring exactly onto the ambient sphere.
      if (k == rings) p *= radius / p.norm();
      pts.push_back(p);
    }
  }
  return SurfaceMesh::build(std::move(pts), ring_triangles(rings));
}

CapGeometry cap_geometry(double offset, double radius) {
  const double t = offset;
  const double a = std::sqrt(1.0 - t * t);
  const double rho = a / t;
  const double h = a * (1.0 - a) / t;  // depth of the cap below its boundary plane
  const double top = kPi * (1.0 - t) * (1.0 - t) * (2.0 + t) / 3.0;
  const double lens = kPi * h * h * (3.0 * rho - h) / 3.0;
  CapGeometry g;
  g.boundary_radius = radius * a;
  g.sphere_radius = radius * rho;
  g.center_height = radius / t;
  g.mean_curvature = 2.0 / (radius * rho);
  g.area = radius * radius * 2.0 * kPi * rho * h;
  g.volume = radius * radius * radius * (4.0 * kPi / 3.0 - top - lens);
  return g;
}

SurfaceMesh perturb_interior(const SurfaceMesh& mesh, double amplitude, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, amplitude);
  const std::vector<Vec3> n = vertex_normals(mesh);
  std::vector<Vec3> pts = mesh.vertices();
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    const double eps = normal(rng);
    if (!mesh.is_boundary(v)) pts[static_cast<size_t>(v)] += eps * n[static_cast<size_t>(v)];
  }
  return mesh.with_vertices(std::move(pts));
}

Mat3 rotation_x(double radians) {
  return Eigen::AngleAxisd(radians, Vec3::UnitX()).toRotationMatrix();
}

}  // namespace freebound
