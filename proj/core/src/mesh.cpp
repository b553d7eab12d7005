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

#include "freebound/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Geometry>

#include "freebound/error.hpp"

namespace freebound {

struct SurfaceMesh::Connectivity {
  std::vector<Triangle> triangles;
  std::vector<std::array<int, 2>> edges;
  std::vector<std::array<int, 2>> edge_faces;
  std::vector<std::vector<int>> loops;
  std::vector<int> next;
  std::vector<int> prev;
  std::vector<std::vector<int>> vertex_faces;
  std::vector<std::vector<int>> neighbors;
  Topology topology;
};

namespace {

int find_root(std::vector<int>& parent, int x) {
  while (parent[static_cast<size_t>(x)] != x) {
    parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
    x = parent[static_cast<size_t>(x)];
  }
  return x;
}

double bbox_diagonal(const std::vector<Vec3>& positions) {
  if (positions.empty()) return 0.0;
  Vec3 lo = positions.front();
  Vec3 hi = positions.front();
  for (const auto& p : positions) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  return (hi - lo).norm();
}

struct HalfEdge {
  int lo;
  int hi;
  int face;
  bool forward;  // the face traverses lo -> hi
};

}  // namespace

SurfaceMesh::SurfaceMesh(std::shared_ptr<const Connectivity> conn, std::vector<Vec3> positions)
    : conn_(std::move(conn)), positions_(std::move(positions)) {}

SurfaceMesh SurfaceMesh::build(std::vector<Vec3> vertices, std::vector<Triangle> triangles) {
  if (triangles.empty()) throw Error(ErrorCode::InvalidInput, "triangle list is empty");
  const int nv = static_cast<int>(vertices.size());
  auto conn = std::make_shared<Connectivity>();

  std::vector<HalfEdge> halfedges;
  halfedges.reserve(triangles.size() * 3);
  std::vector<char> referenced(static_cast<size_t>(nv), 0);
  for (size_t f = 0; f < triangles.size(); ++f) {
    const auto& t = triangles[f];
    for (int k = 0; k < 3; ++k) {
      if (t[k] < 0 || t[k] >= nv) {
        throw Error(ErrorCode::InvalidInput,
                    "triangle " + std::to_string(f) + " references vertex " + std::to_string(t[k]));
      }
      referenced[static_cast<size_t>(t[k])] = 1;
    }
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
      throw Error(ErrorCode::DegenerateTriangle,
                  "triangle " + std::to_string(f) + " repeats a vertex");
    }
    for (int k = 0; k < 3; ++k) {
      const int a = t[k];
      const int b = t[(k + 1) % 3];
      halfedges.push_back({std::min(a, b), std::max(a, b), static_cast<int>(f), a < b});
    }
  }
  for (int v = 0; v < nv; ++v) {
    if (!referenced[static_cast<size_t>(v)]) {
      throw Error(ErrorCode::InvalidInput, "vertex " + std::to_string(v) + " is not used");
    }
  }

  std::sort(halfedges.begin(), halfedges.end(), [](const HalfEdge& x, const HalfEdge& y) {
    if (x.lo != y.lo) return x.lo < y.lo;
    if (x.hi != y.hi) return x.hi < y.hi;
    return x.face < y.face;
  });

  conn->next.assign(static_cast<size_t>(nv), -1);
  conn->prev.assign(static_cast<size_t>(nv), -1);
  std::vector<int> edge_count(static_cast<size_t>(nv), 0);
  std::vector<int> boundary_edges_at(static_cast<size_t>(nv), 0);

  for (size_t i = 0; i < halfedges.size();) {
    size_t j = i;
    while (j < halfedges.size() && halfedges[j].lo == halfedges[i].lo &&
           halfedges[j].hi == halfedges[i].hi) {
      ++j;
    }
    const auto& h = halfedges[i];
    const size_t count = j - i;
    if (count > 2) {
      throw Error(ErrorCode::NonManifold, "edge (" + std::to_string(h.lo) + "," +
                                              std::to_string(h.hi) + ") has " +
                                              std::to_string(count) + " faces");
    }
    conn->edges.push_back({h.lo, h.hi});
    edge_count[static_cast<size_t>(h.lo)]++;
    edge_count[static_cast<size_t>(h.hi)]++;
    if (count == 2) {
      if (halfedges[i].forward == halfedges[i + 1].forward) {
        throw Error(ErrorCode::InconsistentOrientation,
                    "faces " + std::to_string(halfedges[i].face) + " and " +
                        std::to_string(halfedges[i + 1].face) + " disagree on orientation");
      }
      conn->edge_faces.push_back({halfedges[i].face, halfedges[i + 1].face});
    } else {
      conn->edge_faces.push_back({h.face, -1});
      const int a = h.forward ? h.lo : h.hi;
      const int b = h.forward ? h.hi : h.lo;
      if (conn->next[static_cast<size_t>(a)] != -1 || conn->prev[static_cast<size_t>(b)] != -1) {
        throw Error(ErrorCode::NonManifold,
                    "boundary pinches at vertex " + std::to_string(a) + " or " + std::to_string(b));
      }
      conn->next[static_cast<size_t>(a)] = b;
      conn->prev[static_cast<size_t>(b)] = a;
      boundary_edges_at[static_cast<size_t>(a)]++;
      boundary_edges_at[static_cast<size_t>(b)]++;
    }
    i = j;
  }

  conn->triangles = std::move(triangles);
  const int nf = static_cast<int>(conn->triangles.size());
  conn->vertex_faces.assign(static_cast<size_t>(nv), {});
  conn->neighbors.assign(static_cast<size_t>(nv), {});
  for (int f = 0; f < nf; ++f) {
    for (int v : conn->triangles[static_cast<size_t>(f)]) {
      conn->vertex_faces[static_cast<size_t>(v)].push_back(f);
    }
  }
  for (const auto& e : conn->edges) {
    conn->neighbors[static_cast<size_t>(e[0])].push_back(e[1]);
    conn->neighbors[static_cast<size_t>(e[1])].push_back(e[0]);
  }
  for (int v = 0; v < nv; ++v) {
    auto& nb = conn->neighbors[static_cast<size_t>(v)];
    std::sort(nb.begin(), nb.end());
    // A single fan of faces: interior vertices have as many edges as faces,
    // boundary vertices one more.
    const int faces = static_cast<int>(conn->vertex_faces[static_cast<size_t>(v)].size());
    const bool on_boundary = conn->next[static_cast<size_t>(v)] != -1;
    const int expected = on_boundary ? faces + 1 : faces;
    if (edge_count[static_cast<size_t>(v)] != expected ||
        (on_boundary && boundary_edges_at[static_cast<size_t>(v)] != 2)) {
      throw Error(ErrorCode::NonManifold, "vertex " + std::to_string(v) + " is not a manifold fan");
    }
  }

  std::vector<char> visited(static_cast<size_t>(nv), 0);
  for (int v = 0; v < nv; ++v) {
    if (conn->next[static_cast<size_t>(v)] == -1 || visited[static_cast<size_t>(v)]) continue;
    std::vector<int> loop;
    int cur = v;
    do {
      visited[static_cast<size_t>(cur)] = 1;
      loop.push_back(cur);
      cur = conn->next[static_cast<size_t>(cur)];
    } while (cur != v && cur != -1 && !visited[static_cast<size_t>(cur)]);
    if (cur != v) throw Error(ErrorCode::NonManifold, "boundary is not a union of simple cycles");
    conn->loops.push_back(std::move(loop));
  }

  std::vector<int> parent(static_cast<size_t>(nv));
  std::iota(parent.begin(), parent.end(), 0);
  for (const auto& e : conn->edges) {
    const int ra = find_root(parent, e[0]);
    const int rb = find_root(parent, e[1]);
    if (ra != rb) parent[static_cast<size_t>(std::max(ra, rb))] = std::min(ra, rb);
  }
  int components = 0;
  for (int v = 0; v < nv; ++v) {
    if (find_root(parent, v) == v) ++components;
  }

  Topology& topo = conn->topology;
  topo.vertices = nv;
  topo.edges = static_cast<int>(conn->edges.size());
  topo.faces = nf;
  topo.euler = topo.vertices - topo.edges + topo.faces;
  topo.boundary_loops = static_cast<int>(conn->loops.size());
  topo.components = components;
  const int twice_genus = 2 * components - topo.euler - topo.boundary_loops;
  if (twice_genus < 0 || twice_genus % 2 != 0) {
    throw Error(ErrorCode::NonManifold, "Euler characteristic " + std::to_string(topo.euler) +
                                            " is incompatible with an orientable surface");
  }
  topo.genus = twice_genus / 2;

  check_degenerate(*conn, vertices);
  return SurfaceMesh(std::move(conn), std::move(vertices));
}

void SurfaceMesh::check_degenerate(const Connectivity& conn, const std::vector<Vec3>& positions) {
  const double scale = bbox_diagonal(positions);
  const double threshold = 1e-14 * scale * scale;
  for (size_t f = 0; f < conn.triangles.size(); ++f) {
    const auto& t = conn.triangles[f];
    const Vec3& a = positions[static_cast<size_t>(t[0])];
    const Vec3& b = positions[static_cast<size_t>(t[1])];
    const Vec3& c = positions[static_cast<size_t>(t[2])];
    const double area = 0.5 * (b - a).cross(c - a).norm();
    if (!(area > threshold)) {
      throw Error(ErrorCode::DegenerateTriangle,
                  "triangle " + std::to_string(f) + " has area " + std::to_string(area));
    }
  }
}

int SurfaceMesh::num_faces() const { return conn_->topology.faces; }
int SurfaceMesh::num_edges() const { return conn_->topology.edges; }
const std::vector<Triangle>& SurfaceMesh::triangles() const { return conn_->triangles; }
const Triangle& SurfaceMesh::triangle(int f) const {
  return conn_->triangles[static_cast<size_t>(f)];
}
const std::vector<std::array<int, 2>>& SurfaceMesh::edges() const { return conn_->edges; }
const std::vector<std::array<int, 2>>& SurfaceMesh::edge_faces() const {
  return conn_->edge_faces;
}
bool SurfaceMesh::is_boundary_edge(int e) const {
  return conn_->edge_faces[static_cast<size_t>(e)][1] < 0;
}
const std::vector<std::vector<int>>& SurfaceMesh::boundary_loops() const { return conn_->loops; }
bool SurfaceMesh::is_boundary(int v) const { return conn_->next[static_cast<size_t>(v)] != -1; }
int SurfaceMesh::boundary_next(int v) const { return conn_->next[static_cast<size_t>(v)]; }
int SurfaceMesh::boundary_prev(int v) const { return conn_->prev[static_cast<size_t>(v)]; }
const std::vector<int>& SurfaceMesh::vertex_faces(int v) const {
  return conn_->vertex_faces[static_cast<size_t>(v)];
}
const std::vector<int>& SurfaceMesh::vertex_neighbors(int v) const {
  return conn_->neighbors[static_cast<size_t>(v)];
}
const Topology& SurfaceMesh::topology() const { return conn_->topology; }

SurfaceMesh SurfaceMesh::with_vertices(std::vector<Vec3> positions) const {
  if (positions.size() != positions_.size()) {
    throw Error(ErrorCode::InvalidInput, "vertex count changed");
  }
  check_degenerate(*conn_, positions);
  return SurfaceMesh(conn_, std::move(positions));
}

SurfaceMesh SurfaceMesh::transformed(double scale, const Mat3& rotation, const Vec3& shift) const {
  std::vector<Vec3> moved(positions_.size());
  for (size_t i = 0; i < positions_.size(); ++i) moved[i] = shift + scale * (rotation * positions_[i]);
  return with_vertices(std::move(moved));
}

double SurfaceMesh::length_scale() const { return bbox_diagonal(positions_); }

double triangle_area(const SurfaceMesh& mesh, int f) {
  const auto& t = mesh.triangle(f);
  const Vec3& a = mesh.vertex(t[0]);
  return 0.5 * (mesh.vertex(t[1]) - a).cross(mesh.vertex(t[2]) - a).norm();
}

Vec3 face_normal(const SurfaceMesh& mesh, int f) {
  const auto& t = mesh.triangle(f);
  const Vec3& a = mesh.vertex(t[0]);
  return (mesh.vertex(t[1]) - a).cross(mesh.vertex(t[2]) - a).normalized();
}

std::vector<Vec3> vertex_normals(const SurfaceMesh& mesh) {
  std::vector<Vec3> normals(static_cast<size_t>(mesh.num_vertices()), Vec3::Zero());
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const auto& t = mesh.triangle(f);
    const Vec3& a = mesh.vertex(t[0]);
    const Vec3 n = (mesh.vertex(t[1]) - a).cross(mesh.vertex(t[2]) - a);
    for (int v : t) normals[static_cast<size_t>(v)] += n;
  }
  for (auto& n : normals) n.normalize();
  return normals;
}

double area(const SurfaceMesh& mesh) {
  double total = 0.0;
  for (int f = 0; f < mesh.num_faces(); ++f) total += triangle_area(mesh, f);
  return total;
}

double boundary_length(const SurfaceMesh& mesh) {
  double total = 0.0;
  for (const auto& loop : mesh.boundary_loops()) {
    for (size_t i = 0; i < loop.size(); ++i) {
      total += (mesh.vertex(loop[(i + 1) % loop.size()]) - mesh.vertex(loop[i])).norm();
    }
  }
  return total;
}

SparseMat cotan_stiffness(const SurfaceMesh& mesh) {
  const int n = mesh.num_vertices();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(mesh.num_faces()) * 9);
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const auto& t = mesh.triangle(f);
    const double twice_area = 2.0 * triangle_area(mesh, f);
    for (int k = 0; k < 3; ++k) {
      // The angle at t[k] weights the opposite edge (i, j).
      const int i = t[(k + 1) % 3];
      const int j = t[(k + 2) % 3];
      const Vec3 u = mesh.vertex(i) - mesh.vertex(t[k]);
      const Vec3 v = mesh.vertex(j) - mesh.vertex(t[k]);
      const double w = 0.5 * u.dot(v) / twice_area;  // cot(angle) / 2
      trips.emplace_back(i, j, -w);
      trips.emplace_back(j, i, -w);
      trips.emplace_back(i, i, w);
      trips.emplace_back(j, j, w);
    }
  }
  SparseMat K(n, n);
  K.setFromTriplets(trips.begin(), trips.end());
  return K;
}

VecX lumped_mass(const SurfaceMesh& mesh) {
  VecX m = VecX::Zero(mesh.num_vertices());
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const double third = triangle_area(mesh, f) / 3.0;
    for (int v : mesh.triangle(f)) m[v] += third;
  }
  return m;
}

VecX boundary_mass(const SurfaceMesh& mesh) {
  VecX b = VecX::Zero(mesh.num_vertices());
  for (const auto& loop : mesh.boundary_loops()) {
    for (size_t i = 0; i < loop.size(); ++i) {
      const int a = loop[i];
      const int c = loop[(i + 1) % loop.size()];
      const double half = 0.5 * (mesh.vertex(c) - mesh.vertex(a)).norm();
      b[a] += half;
      b[c] += half;
    }
  }
  return b;
}

SparseMat boundary_mass_consistent(const SurfaceMesh& mesh, const VecX& weights) {
  const int n = mesh.num_vertices();
  const bool weighted = weights.size() == n;
  std::vector<Eigen::Triplet<double>> trips;
  for (const auto& loop : mesh.boundary_loops()) {
    for (size_t i = 0; i < loop.size(); ++i) {
      const int a = loop[i];
      const int b = loop[(i + 1) % loop.size()];
      const double len = (mesh.vertex(b) - mesh.vertex(a)).norm();
      const double wa = weighted ? weights[a] : 1.0;
      const double wb = weighted ? weights[b] : 1.0;
      // Integral of (wa*s + wb*t)(f_a s + f_b t)^2 over the edge, s + t = 1.
      const double aa = len * (3.0 * wa + wb) / 12.0;
      const double bb = len * (wa + 3.0 * wb) / 12.0;
      const double ab = len * (wa + wb) / 12.0;
      trips.emplace_back(a, a, aa);
      trips.emplace_back(b, b, bb);
      trips.emplace_back(a, b, ab);
      trips.emplace_back(b, a, ab);
    }
  }
  SparseMat B(n, n);
  B.setFromTriplets(trips.begin(), trips.end());
  return B;
}

double dirichlet_energy(const SurfaceMesh& mesh, const Field& field) {
  if (field.size() != mesh.num_vertices()) {
    throw Error(ErrorCode::InvalidInput, "field length does not match vertex count");
  }
  double total = 0.0;
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const auto& t = mesh.triangle(f);
    const double twice_area = 2.0 * triangle_area(mesh, f);
    for (int k = 0; k < 3; ++k) {
      const int i = t[(k + 1) % 3];
      const int j = t[(k + 2) % 3];
      const Vec3 u = mesh.vertex(i) - mesh.vertex(t[k]);
      const Vec3 v = mesh.vertex(j) - mesh.vertex(t[k]);
      const double d = field[i] - field[j];
      total += 0.5 * u.dot(v) / twice_area * d * d;
    }
  }
  return total;
}

VecX angle_defects(const SurfaceMesh& mesh) {
  const int n = mesh.num_vertices();
  VecX angle_sum = VecX::Zero(n);
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const auto& t = mesh.triangle(f);
    for (int k = 0; k < 3; ++k) {
      const Vec3 u = mesh.vertex(t[(k + 1) % 3]) - mesh.vertex(t[k]);
      const Vec3 v = mesh.vertex(t[(k + 2) % 3]) - mesh.vertex(t[k]);
      angle_sum[t[k]] += std::atan2(u.cross(v).norm(), u.dot(v));
    }
  }
  VecX defect(n);
  for (int v = 0; v < n; ++v) {
    defect[v] = (mesh.is_boundary(v) ? kPi : 2.0 * kPi) - angle_sum[v];
  }
  return defect;
}

double BoundaryCurvature::total() const {
  double sum = 0.0;
  for (double t : turning_angle) sum += t;
  return sum;
}

BoundaryCurvature boundary_geodesic_curvature(const SurfaceMesh& mesh) {
  const VecX defect = angle_defects(mesh);
  BoundaryCurvature out;
  for (const auto& loop : mesh.boundary_loops()) {
    for (int v : loop) {
      const double dual = 0.5 * ((mesh.vertex(mesh.boundary_next(v)) - mesh.vertex(v)).norm() +
                                 (mesh.vertex(v) - mesh.vertex(mesh.boundary_prev(v))).norm());
      out.vertices.push_back(v);
      out.turning_angle.push_back(defect[v]);
      out.dual_length.push_back(dual);
      out.kappa.push_back(defect[v] / dual);
    }
  }
  return out;
}

double gauss_bonnet_residual(const SurfaceMesh& mesh) {
  const VecX defect = angle_defects(mesh);
  return std::abs(defect.sum() - 2.0 * kPi * mesh.euler_characteristic());
}

}  // namespace freebound
