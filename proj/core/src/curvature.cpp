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

#include "freebound/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "freebound/error.hpp"

namespace freebound {

namespace {

void tangent_frame(const Vec3& n, Vec3& t1, Vec3& t2) {
  const Vec3 helper = std::abs(n.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  t1 = (helper - helper.dot(n) * n).normalized();
  t2 = n.cross(t1);
}

std::vector<int> two_ring(const SurfaceMesh& mesh, int v) {
  std::vector<int> ring;
  for (int a : mesh.vertex_neighbors(v)) {
    ring.push_back(a);
    for (int b : mesh.vertex_neighbors(a)) ring.push_back(b);
  }
  std::sort(ring.begin(), ring.end());
  ring.erase(std::unique(ring.begin(), ring.end()), ring.end());
  ring.erase(std::remove(ring.begin(), ring.end(), v), ring.end());
  return ring;
}

}  // namespace

double ShapeData::normal_curvature(int v, const Vec3& t) const {
  const auto i = static_cast<size_t>(v);
  Vec2 c(t.dot(tangent_u[i]), t.dot(tangent_v[i]));
  const double len = c.norm();
  if (len == 0.0) return 0.0;
  c /= len;
  return c.dot(shape_operator[i] * c);
}

ShapeData discrete_curvatures(const SurfaceMesh& mesh) {
  const int n = mesh.num_vertices();
  ShapeData out;
  out.normals = vertex_normals(mesh);
  out.tangent_u.resize(static_cast<size_t>(n));
  out.tangent_v.resize(static_cast<size_t>(n));
  out.shape_operator.resize(static_cast<size_t>(n));
  out.mean_curvature.resize(n);
  out.second_form_norm2.resize(n);
  out.gaussian_curvature.resize(n);
  out.principal_min.resize(n);
  out.principal_max.resize(n);

  const VecX defect = angle_defects(mesh);
  const VecX mass = lumped_mass(mesh);

  for (int v = 0; v < n; ++v) {
    const auto i = static_cast<size_t>(v);
    if (mesh.vertex_neighbors(v).size() < 3) {
      throw Error(ErrorCode::InsufficientNeighborhood,
                  "vertex " + std::to_string(v) + " has valence " +
                      std::to_string(mesh.vertex_neighbors(v).size()));
    }
    const Vec3& nrm = out.normals[i];
    Vec3 t1, t2;
    tangent_frame(nrm, t1, t2);

    const auto ring = two_ring(mesh, v);
    double scale = 0.0;
    for (int w : mesh.vertex_neighbors(v)) scale += (mesh.vertex(w) - mesh.vertex(v)).norm();
    scale /= static_cast<double>(mesh.vertex_neighbors(v).size());

    const bool with_slope = ring.size() >= 5;
    const int cols = with_slope ? 5 : 3;
    MatX design(static_cast<Eigen::Index>(ring.size()), cols);
    VecX rhs(static_cast<Eigen::Index>(ring.size()));
    for (size_t r = 0; r < ring.size(); ++r) {
      const Vec3 d = (mesh.vertex(ring[r]) - mesh.vertex(v)) / scale;
      const double u = d.dot(t1);
      const double w = d.dot(t2);
      const auto row = static_cast<Eigen::Index>(r);
      design(row, 0) = u * u;
      design(row, 1) = u * w;
      design(row, 2) = w * w;
      if (with_slope) {
        design(row, 3) = u;
        design(row, 4) = w;
      }
      rhs[row] = d.dot(nrm);
    }
    const VecX coef = design.colPivHouseholderQr().solve(rhs);
    // Undo the length normalisation: h(x) = scale * h~(x / scale).
    const double a = coef[0] / scale;
    const double b = coef[1] / scale;
    const double c = coef[2] / scale;
    const double du = with_slope ? coef[3] : 0.0;
    const double dv = with_slope ? coef[4] : 0.0;

    const double w = std::sqrt(1.0 + du * du + dv * dv);
    Mat2 first;
    first << 1.0 + du * du, du * dv, du * dv, 1.0 + dv * dv;
    Mat2 second;
    second << -2.0 * a / w, -b / w, -b / w, -2.0 * c / w;
    const Mat2 L = first.llt().matrixL();
    const Mat2 Linv = L.inverse();
    Mat2 shape = Linv * second * Linv.transpose();
    shape = 0.5 * (shape + shape.transpose());

    Eigen::SelfAdjointEigenSolver<Mat2> eig(shape);
    const double k1 = eig.eigenvalues()[0];
    const double k2 = eig.eigenvalues()[1];

    // The fitted graph gives a second-order normal; the frame follows it.
    const Vec3 fitted = (nrm - du * t1 - dv * t2) / w;
    out.normals[i] = fitted;
    out.tangent_u[i] = (t1 + du * nrm).normalized();
    out.tangent_v[i] = fitted.cross(out.tangent_u[i]);
    out.shape_operator[i] = shape;
    out.mean_curvature[v] = k1 + k2;
    out.second_form_norm2[v] = k1 * k1 + k2 * k2;
    out.principal_min[v] = k1;
    out.principal_max[v] = k2;
    out.gaussian_curvature[v] = mesh.is_boundary(v) ? k1 * k2 : defect[v] / mass[v];
  }
  return out;
}

}  // namespace freebound
