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

#include <vector>

#include "freebound/mesh.hpp"

namespace freebound {

/// Per-vertex extrinsic geometry. Signs follow A(Y, Z) = <D_Y N, Z>, so the
/// unit sphere with its outward normal has H = 2 and |A|^2 = 2.
struct ShapeData {
  std::vector<Vec3> normals;
  /// Orthonormal tangent frame in which shape_operator is expressed.
  std::vector<Vec3> tangent_u;
  std::vector<Vec3> tangent_v;
  std::vector<Mat2> shape_operator;
  VecX mean_curvature;     // k1 + k2
  VecX second_form_norm2;  // k1^2 + k2^2
  /// Angle defect over barycentric area at interior vertices; at boundary
  /// vertices the defect is a turning angle, so k1 * k2 of the fit is stored.
  VecX gaussian_curvature;
  VecX principal_min;
  VecX principal_max;

  /// A(t, t) for a tangent vector t at vertex v (t is projected and normalised).
  double normal_curvature(int v, const Vec3& t) const;
};

/// Quadric fit h = a u^2 + b uv + c v^2 + d u + e v over the 2-ring in the
/// tangent frame of the area-weighted normal. Throws InsufficientNeighborhood
/// when a vertex has fewer than three neighbours.
ShapeData discrete_curvatures(const SurfaceMesh& mesh);

}  // namespace freebound
