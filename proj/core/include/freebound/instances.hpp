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

#include "freebound/body.hpp"
#include "freebound/mesh.hpp"

namespace freebound {

/// Concentric-ring disk: a center vertex plus rings k = 1..rings with 6k
/// vertices each, 1 + 3 rings (rings + 1) vertices in total. Oriented
/// counter-clockwise seen from +z.
SurfaceMesh ring_disk(int rings, double radius = 1.0);

/// Smallest ring count whose ring_disk has at least `vertices` vertices.
int rings_for_vertices(int vertices);

/// Planar disk through body.center() with normal rotation * e_z, reaching
/// radially to the body boundary; boundary vertices are Newton-polished.
SurfaceMesh body_disk(const ConvexBody& body, int rings, const Mat3& rotation = Mat3::Identity());

/// Spherical cap meeting the sphere of the given radius orthogonally. The
/// boundary circle lies in the plane z = offset * radius, 0 < offset < 1; the
/// cap sphere has center (0, 0, radius / offset) and radius
/// radius * sqrt(1 - offset^2) / offset. Geodesic-polar rings, 6k vertices.
SurfaceMesh spherical_cap(double offset, int rings, double radius = 1.0);

struct CapGeometry {
  double boundary_radius;  // a
  double sphere_radius;    // rho
  double center_height;    // d
  double mean_curvature;   // 2 / rho
  double area;
  double volume;  // region between the cap and the far side of the ball
};

/// Closed forms for spherical_cap in the unit ball scaled by `radius`.
CapGeometry cap_geometry(double offset, double radius = 1.0);

/// Adds N(0, amplitude) noise along the vertex normal of interior vertices.
SurfaceMesh perturb_interior(const SurfaceMesh& mesh, double amplitude, std::uint64_t seed);

Mat3 rotation_x(double radians);

}  // namespace freebound
