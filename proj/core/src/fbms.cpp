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

#include "freebound/fbms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <Eigen/SparseCholesky>

#include "freebound/enclosing_ball.hpp"
#include "freebound/error.hpp"

namespace freebound {

namespace {

double mesh_scale(const SurfaceMesh& mesh) { return std::sqrt(area(mesh) / kPi); }

// Distance from origin to the body boundary along the unit direction dir.
double ray_extent(const ConvexBody& body, const Vec3& origin, const Vec3& dir) {
  double t = body.radial_extent(dir);
  if ((origin - body.center()).squaredNorm() == 0.0) return t;
  for (int iter = 0; iter < 60; ++iter) {
    const Vec3 p = origin + t * dir;
    const double f = body.value(p);
    const double df = body.gradient(p).dot(dir);
    if (df <= 0.0) break;
    const double step = f / df;
    t -= step;
    if (std::abs(step) <= 1e-15 * t) break;
  }
  return t;
}

// Signed solid angle of the spherical triangle (a, b, c), unit vectors.
double solid_angle(const Vec3& a, const Vec3& b, const Vec3& c) {
  const double num = a.dot(b.cross(c));
  const double den = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
  return 2.0 * std::atan2(num, den);
}

// Integral of rho^3 / 3 over the spherical triangle, by midpoint subdivision.
double cone_integral(const ConvexBody& body, const Vec3& origin, const Vec3& a, const Vec3& b,
                     const Vec3& c, int level) {
  if (level == 0) {
    const double rho = ray_extent(body, origin, (a + b + c).normalized());
    return solid_angle(a, b, c) * rho * rho * rho / 3.0;
  }
  const Vec3 ab = (a + b).normalized();
  const Vec3 bc = (b + c).normalized();
  const Vec3 ca = (c + a).normalized();
  return cone_integral(body, origin, a, ab, ca, level - 1) +
         cone_integral(body, origin, ab, b, bc, level - 1) +
         cone_integral(body, origin, ca, bc, c, level - 1) +
         cone_integral(body, origin, ab, bc, ca, level - 1);
}

bool centered_ball(const ConvexBody& body, const Vec3& origin) {
  return body.kind() == BodyKind::Ball && (origin - body.center()).squaredNorm() == 0.0;
}

double fan_term(const ConvexBody& body, const VolumeFrame& frame, const Vec3& p, const Vec3& q) {
  const Vec3 a = (p - frame.origin).normalized();
  const Vec3 b = (q - frame.origin).normalized();
  const int level = centered_ball(body, frame.origin) ? 0 : frame.subdivision;
  return cone_integral(body, frame.origin, frame.apex, a, b, level);
}

double cone_volume(const SurfaceMesh& mesh, const Vec3& origin) {
  double v = 0.0;
  for (const auto& t : mesh.triangles()) {
    const Vec3 a = mesh.vertex(t[0]) - origin;
    const Vec3 b = mesh.vertex(t[1]) - origin;
    const Vec3 c = mesh.vertex(t[2]) - origin;
    v += a.dot(b.cross(c)) / 6.0;
  }
  return v;
}

double cap_volume(const SurfaceMesh& mesh, const ConvexBody& body, const VolumeFrame& frame) {
  double v = 0.0;
  for (const auto& loop : mesh.boundary_loops()) {
    for (size_t k = 0; k < loop.size(); ++k) {
      v += fan_term(body, frame, mesh.vertex(loop[k]), mesh.vertex(loop[(k + 1) % loop.size()]));
    }
  }
  return v;
}

double quality(const SurfaceMesh& mesh) {
  double q = 1.0;
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const auto& t = mesh.triangle(f);
    const double l2 = (mesh.vertex(t[0]) - mesh.vertex(t[1])).squaredNorm() +
                      (mesh.vertex(t[1]) - mesh.vertex(t[2])).squaredNorm() +
                      (mesh.vertex(t[2]) - mesh.vertex(t[0])).squaredNorm();
    q = std::min(q, 4.0 * std::sqrt(3.0) * triangle_area(mesh, f) / l2);
  }
  return q;
}

double min_edge_length(const SurfaceMesh& mesh) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& e : mesh.edges()) m = std::min(m, (mesh.vertex(e[0]) - mesh.vertex(e[1])).norm());
  return m;
}

double max_boundary_psi(const SurfaceMesh& mesh, const ConvexBody& body) {
  double r = 0.0;
  for (const auto& loop : mesh.boundary_loops()) {
    for (int v : loop) r = std::max(r, std::abs(body.value(mesh.vertex(v))));
  }
  return r;
}

double angle_between(const Vec3& a, const Vec3& b) { return std::atan2(a.cross(b).norm(), a.dot(b)); }

double free_boundary_angle(const SurfaceMesh& mesh, const ConvexBody& body) {
  const std::vector<Vec3> nu = boundary_conormals(mesh);
  double r = 0.0;
  for (const auto& loop : mesh.boundary_loops()) {
    for (int v : loop) r = std::max(r, angle_between(nu[v], outward_normal(body, mesh.vertex(v))));
  }
  return r;
}

// Area descent in scalar speeds along per-vertex directions, with an H^1
// preconditioner and an optional enclosed-volume constraint.
class Descent {
 public:
  Descent(SurfaceMesh mesh, const ConvexBody& body, const SolverConfig& config, VolumeFrame frame)
      : mesh_(std::move(mesh)), body_(body), config_(config), frame_(frame) {
    scale_ = mesh_scale(mesh_);
    initial_quality_ = quality(mesh_);
  }

  const SurfaceMesh& mesh() const { return mesh_; }
  double scale() const { return scale_; }
  int iterations() const { return iterations_; }
  int accepted() const { return accepted_; }
  double grad_norm() const { return grad_norm_; }
  bool stalled() const { return stalled_; }
  double multiplier() const { return multiplier_; }
  double boundary_force_angle() const { return boundary_force_angle_; }
  std::vector<double>& history() { return history_; }

  /// Runs until the gradient tolerance, the iteration budget, or stagnation.
  bool run(std::optional<double> target) {
    target_ = target;
    stalled_ = false;
    if (history_.empty()) history_.push_back(area(mesh_));
    if (target_) {
      directions();
      gvol_ = volume_gradient();
      restore_volume(mesh_);
    }
    std::vector<double> norms;
    while (true) {
      evaluate();
      if (grad_norm_ <= config_.gradient_tolerance) return true;
      norms.push_back(grad_norm_);
      const size_t w = static_cast<size_t>(std::max(1, config_.stall_window));
      if (grad_norm_ <= config_.stall_tolerance && norms.size() > w &&
          grad_norm_ > 0.9 * norms[norms.size() - 1 - w]) {
        stalled_ = true;
        return true;
      }
      if (iterations_ >= config_.max_iterations) {
        throw Error(ErrorCode::MaxIterationsExceeded,
                    "no convergence after " + std::to_string(iterations_) + " iterations");
      }
      ++iterations_;
      if (!line_search()) {
        if (!smooth()) return false;
      } else if (config_.smoothing_interval > 0 && accepted_ % config_.smoothing_interval == 0 &&
                 quality(mesh_) < 0.5 * initial_quality_) {
        smooth();
      }
    }
  }

 private:
  void directions() {
    const std::vector<Vec3> n = vertex_normals(mesh_);
    dirs_.assign(n.begin(), n.end());
    for (int v = 0; v < mesh_.num_vertices(); ++v) {
      if (!mesh_.is_boundary(v)) continue;
      const Vec3 x = outward_normal(body_, mesh_.vertex(v));
      const Vec3 t = mesh_.vertex(mesh_.boundary_next(v)) - mesh_.vertex(mesh_.boundary_prev(v));
      Vec3 b = x.cross(t).normalized();
      if (b.dot(n[v]) < 0.0) b = -b;
      dirs_[v] = b;
    }
  }

  VecX volume_gradient() const {
    const int nv = mesh_.num_vertices();
    VecX g = VecX::Zero(nv);
    for (const auto& t : mesh_.triangles()) {
      for (int k = 0; k < 3; ++k) {
        const Vec3 b = mesh_.vertex(t[(k + 1) % 3]) - frame_.origin;
        const Vec3 c = mesh_.vertex(t[(k + 2) % 3]) - frame_.origin;
        g[t[k]] += b.cross(c).dot(dirs_[t[k]]) / 6.0;
      }
    }
    // The spherical part only depends on boundary positions; fourth-order
    // central differences along the sliding direction.
    const double h = 1e-4 * scale_;
    for (const auto& loop : mesh_.boundary_loops()) {
      const size_t n = loop.size();
      for (size_t k = 0; k < n; ++k) {
        const int v = loop[k];
        const Vec3& prev = mesh_.vertex(loop[(k + n - 1) % n]);
        const Vec3& next = mesh_.vertex(loop[(k + 1) % n]);
        auto part = [&](const Vec3& p) {
          return fan_term(body_, frame_, prev, p) + fan_term(body_, frame_, p, next);
        };
        const Vec3& x = mesh_.vertex(v);
        const Vec3& u = dirs_[v];
        const double d1 = part(x + h * u) - part(x - h * u);
        const double d2 = part(x + 2.0 * h * u) - part(x - 2.0 * h * u);
        g[v] += frame_.sign * (8.0 * d1 - d2) / (12.0 * h);
      }
    }
    return g;
  }

  void evaluate() {
    directions();
    const std::vector<Vec3> grad = area_gradient(mesh_);
    const int nv = mesh_.num_vertices();
    VecX gamma(nv);
    for (int v = 0; v < nv; ++v) gamma[v] = grad[v].dot(dirs_[v]);

    const VecX mass = lumped_mass(mesh_);
    SparseMat p = cotan_stiffness(mesh_);
    for (int v = 0; v < nv; ++v) p.coeffRef(v, v) += mass[v] / (scale_ * scale_);
    if (!factor_analyzed_) {
      ldlt_.analyzePattern(p);
      factor_analyzed_ = true;
    }
    ldlt_.factorize(p);
    if (ldlt_.info() != Eigen::Success) {
      throw Error(ErrorCode::MeshDegenerated, "preconditioner factorization failed");
    }
    VecX z = ldlt_.solve(gamma);
    multiplier_ = 0.0;
    VecX g = gamma;
    if (target_) {
      gvol_ = volume_gradient();
      const VecX w = ldlt_.solve(gvol_);
      multiplier_ = gvol_.dot(z) / gvol_.dot(w);
      z -= multiplier_ * w;
      g -= multiplier_ * gvol_;
    }
    step_ = -z;
    slope_ = g.dot(step_);
    // Interior: |H - lambda| in units of 1/scale. Boundary: the angle between
    // the vertex force and the plane of X and the boundary tangent.
    double interior = 0.0;
    boundary_force_angle_ = 0.0;
    for (int v = 0; v < nv; ++v) {
      if (mesh_.is_boundary(v)) {
        const double sine = std::min(1.0, std::abs(g[v]) / grad[v].norm());
        boundary_force_angle_ = std::max(boundary_force_angle_, std::asin(sine));
      } else {
        interior = std::max(interior, std::abs(g[v]) / mass[v]);
      }
    }
    grad_norm_ = std::max(interior * scale_, boundary_force_angle_);
    if (config_.on_iteration) {
      config_.on_iteration({iterations_, area(mesh_), grad_norm_, free_boundary_angle(mesh_, body_)});
    }
  }

  std::vector<Vec3> moved(const std::vector<Vec3>& base, const VecX& speed, double alpha) const {
    std::vector<Vec3> pts = base;
    for (int v = 0; v < mesh_.num_vertices(); ++v) {
      pts[v] += alpha * speed[v] * dirs_[v];
      if (mesh_.is_boundary(v)) pts[v] = project_to_boundary(body_, pts[v]);
    }
    return pts;
  }

  // Uniform shifts along the step directions until the volume matches.
  void restore_volume(SurfaceMesh& m) const {
    const double tol = 1e-14 * scale_ * scale_ * scale_;
    const double total = gvol_.sum();
    for (int k = 0; k < 8; ++k) {
      const double dv = *target_ - enclosed_volume(m, body_, frame_);
      if (std::abs(dv) <= tol) return;
      m = m.with_vertices(moved(m.vertices(), VecX::Constant(m.num_vertices(), 1.0), dv / total));
    }
  }

  bool line_search() {
    const double a0 = area(mesh_);
    double alpha = config_.initial_step;
    for (int k = 0; k < config_.max_backtracks; ++k, alpha *= config_.backtrack) {
      try {
        SurfaceMesh trial = mesh_.with_vertices(moved(mesh_.vertices(), step_, alpha));
        if (target_) restore_volume(trial);
        const double a1 = area(trial);
        if (a1 <= a0 + config_.armijo * alpha * slope_ + 1e-13 * a0) {
          mesh_ = std::move(trial);
          ++accepted_;
          history_.push_back(a1);
          return true;
        }
      } catch (const Error& e) {
        if (e.code() != ErrorCode::DegenerateTriangle) throw;
      }
    }
    return false;
  }

  // Interior vertices move toward their 1-ring centroid within the tangent
  // plane, by at most a tenth of the shortest edge.
  bool smooth() {
    if (smoothed_without_progress_) {
      throw Error(ErrorCode::MeshDegenerated, "line search failed after tangential smoothing");
    }
    const std::vector<Vec3> n = vertex_normals(mesh_);
    const double cap = 0.1 * min_edge_length(mesh_);
    std::vector<Vec3> pts = mesh_.vertices();
    for (int v = 0; v < mesh_.num_vertices(); ++v) {
      if (mesh_.is_boundary(v)) continue;
      Vec3 c = Vec3::Zero();
      for (int u : mesh_.vertex_neighbors(v)) c += mesh_.vertex(u);
      c /= static_cast<double>(mesh_.vertex_neighbors(v).size());
      Vec3 d = c - mesh_.vertex(v);
      d -= d.dot(n[v]) * n[v];
      if (d.norm() > cap) d *= cap / d.norm();
      pts[v] += d;
    }
    try {
      mesh_ = mesh_.with_vertices(std::move(pts));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateTriangle) throw;
      throw Error(ErrorCode::MeshDegenerated, "tangential smoothing produced a degenerate mesh");
    }
    smoothed_without_progress_ = true;
    return true;
  }

  SurfaceMesh mesh_;
  const ConvexBody& body_;
  const SolverConfig& config_;
  VolumeFrame frame_;
  std::optional<double> target_;
  double scale_ = 1.0;
  double initial_quality_ = 1.0;

  std::vector<Vec3> dirs_;
  VecX gvol_;
  VecX step_;
  double slope_ = 0.0;
  double grad_norm_ = 0.0;
  bool stalled_ = false;
  double multiplier_ = 0.0;
  double boundary_force_angle_ = 0.0;
  int iterations_ = 0;
  int accepted_ = 0;
  bool smoothed_without_progress_ = false;
  std::vector<double> history_;

  Eigen::SimplicialLDLT<SparseMat> ldlt_;
  bool factor_analyzed_ = false;

 public:
  void reset_smoothing() { smoothed_without_progress_ = false; }
};

void check_initial(const SurfaceMesh& mesh, const ConvexBody& body, const SolverConfig& config) {
  if (config.max_iterations < 1 || !(config.gradient_tolerance > 0.0) ||
      config.stall_tolerance < 0.0 ||
      !(config.projection_tolerance > 0.0)) {
    throw Error(ErrorCode::BadConfig, "solver tolerances must be positive");
  }
  if (mesh.boundary_count() < 1) throw Error(ErrorCode::InvalidInput, "surface has no boundary");
  const double scale = mesh.length_scale();
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    const double psi = body.value(mesh.vertex(v));
    if (mesh.is_boundary(v) ? std::abs(psi) > 1e-9 * std::max(1.0, scale * scale) : psi >= 0.0) {
      throw Error(ErrorCode::InvalidInput, "initial surface is not properly embedded");
    }
  }
}

SolveResult finish(Descent& d, const ConvexBody& body, bool converged, std::vector<int> updates,
                   const VolumeFrame& frame) {
  SolveResult r(d.mesh());
  r.iterations = d.iterations();
  r.accepted_steps = d.accepted();
  r.area_history = d.history();
  r.target_updates = std::move(updates);
  r.grad_norm = d.grad_norm();
  r.volume = enclosed_volume(d.mesh(), body, frame);
  r.multiplier = d.multiplier();
  r.residuals = compute_residuals(d.mesh(), body);
  r.residuals.free_boundary_force = d.boundary_force_angle();
  r.converged = converged;
  r.stalled = d.stalled();
  return r;
}

}  // namespace

void write_log_record(std::ostream& out, const IterationRecord& record) {
  const auto old = out.precision(17);
  out << "{\"area\":" << record.area << ",\"fb_residual\":" << record.fb_residual
      << ",\"grad_norm\":" << record.grad_norm << ",\"iter\":" << record.iter << "}\n";
  out.precision(old);
}

std::vector<Vec3> area_gradient(const SurfaceMesh& mesh) {
  std::vector<Vec3> g(static_cast<size_t>(mesh.num_vertices()), Vec3::Zero());
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const auto& t = mesh.triangle(f);
    const Vec3 n = face_normal(mesh, f);
    for (int k = 0; k < 3; ++k) {
      const Vec3 e = mesh.vertex(t[(k + 2) % 3]) - mesh.vertex(t[(k + 1) % 3]);
      g[t[k]] += 0.5 * n.cross(e);
    }
  }
  return g;
}

double first_variation(const SurfaceMesh& mesh, const std::vector<Vec3>& variation) {
  if (static_cast<int>(variation.size()) != mesh.num_vertices()) {
    throw Error(ErrorCode::InvalidInput, "variation field length differs from vertex count");
  }
  const std::vector<Vec3> g = area_gradient(mesh);
  double s = 0.0;
  for (size_t v = 0; v < g.size(); ++v) s += g[v].dot(variation[v]);
  return s;
}

std::vector<Vec3> area_vectors(const SurfaceMesh& mesh) {
  std::vector<Vec3> a(static_cast<size_t>(mesh.num_vertices()), Vec3::Zero());
  for (const auto& t : mesh.triangles()) {
    const Vec3 w = (mesh.vertex(t[1]) - mesh.vertex(t[0])).cross(mesh.vertex(t[2]) - mesh.vertex(t[0])) / 6.0;
    for (int k = 0; k < 3; ++k) a[t[k]] += w;
  }
  return a;
}

VecX variational_mean_curvature(const SurfaceMesh& mesh) {
  const std::vector<Vec3> g = area_gradient(mesh);
  const std::vector<Vec3> a = area_vectors(mesh);
  const std::vector<Vec3> n = vertex_normals(mesh);
  VecX h(mesh.num_vertices());
  for (int v = 0; v < mesh.num_vertices(); ++v) h[v] = g[v].dot(n[v]) / a[v].dot(n[v]);
  return h;
}

std::vector<Vec3> boundary_conormals(const SurfaceMesh& mesh) {
  std::vector<Vec3> nu(static_cast<size_t>(mesh.num_vertices()), Vec3::Zero());
  const auto& ef = mesh.edge_faces();
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (!mesh.is_boundary_edge(e)) continue;
    int a = mesh.edges()[e][0], b = mesh.edges()[e][1];
    if (mesh.boundary_next(a) != b) std::swap(a, b);
    const Vec3 c = (mesh.vertex(b) - mesh.vertex(a)).cross(face_normal(mesh, ef[e][0]));
    nu[a] += c;
    nu[b] += c;
  }
  for (auto& v : nu) {
    if (v.squaredNorm() > 0.0) v.normalize();
  }
  return nu;
}

VolumeFrame volume_frame(const SurfaceMesh& mesh, const ConvexBody& body) {
  VolumeFrame frame;
  const std::vector<Vec3> samples = sample_boundary(body, 2000);
  frame.origin = enclosing_ball(samples).center;
  if ((frame.origin - body.center()).norm() <= 1e-9 * body.semi_axes().maxCoeff()) {
    frame.origin = body.center();
  }
  Vec3 n = Vec3::Zero();
  for (const auto& a : area_vectors(mesh)) n += a;
  frame.apex = -n.normalized();
  double total = 0.0;
  for (const auto& loop : mesh.boundary_loops()) {
    for (size_t k = 0; k < loop.size(); ++k) {
      const Vec3 a = (mesh.vertex(loop[k]) - frame.origin).normalized();
      const Vec3 b = (mesh.vertex(loop[(k + 1) % loop.size()]) - frame.origin).normalized();
      total += solid_angle(frame.apex, a, b);
    }
  }
  // The fan covers the region around the apex, which lies on the side of the
  // body boundary opposite to the surface normal; orient it positively.
  frame.sign = total < 0.0 ? -1.0 : 1.0;
  return frame;
}

double enclosed_volume(const SurfaceMesh& mesh, const ConvexBody& body, const VolumeFrame& frame) {
  return cone_volume(mesh, frame.origin) + frame.sign * cap_volume(mesh, body, frame);
}

double enclosed_volume(const SurfaceMesh& mesh, const ConvexBody& body) {
  return enclosed_volume(mesh, body, volume_frame(mesh, body));
}

Residuals compute_residuals(const SurfaceMesh& mesh, const ConvexBody& body) {
  Residuals r;
  const double scale = mesh_scale(mesh);
  const VecX h = variational_mean_curvature(mesh);
  const VecX m = lumped_mass(mesh);
  double wsum = 0.0, hsum = 0.0;
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    if (mesh.is_boundary(v)) continue;
    wsum += m[v];
    hsum += m[v] * h[v];
    r.mean_curvature = std::max(r.mean_curvature, std::abs(h[v]) * scale);
  }
  r.mean_h = wsum > 0.0 ? hsum / wsum : 0.0;
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    if (!mesh.is_boundary(v)) r.cmc = std::max(r.cmc, std::abs(h[v] - r.mean_h));
  }
  r.free_boundary_angle = free_boundary_angle(mesh, body);
  r.containment = max_boundary_psi(mesh, body);
  return r;
}

SolveResult relax_cmc(const SurfaceMesh& initial, const ConvexBody& body, const SolverConfig& config) {
  if (!config.volume_target) throw Error(ErrorCode::BadConfig, "relax_cmc needs a volume target");
  check_initial(initial, body, config);
  const VolumeFrame frame = volume_frame(initial, body);
  Descent d(initial, body, config, frame);
  const bool ok = d.run(config.volume_target);
  return finish(d, body, ok, {}, frame);
}

SolveResult relax_minimal(const SurfaceMesh& initial, const ConvexBody& body,
                          const SolverConfig& config) {
  check_initial(initial, body, config);
  const VolumeFrame frame = volume_frame(initial, body);
  Descent d(initial, body, config, frame);
  double target = enclosed_volume(initial, body, frame);
  std::vector<int> updates;
  double prev_target = 0.0, prev_multiplier = 0.0;
  bool have_prev = false;
  bool ok = false;
  for (int outer = 0; outer <= config.max_target_updates; ++outer) {
    ok = d.run(target);
    const double lambda = d.multiplier();
    if (!ok || std::abs(lambda) * d.scale() <= config.multiplier_tolerance) break;
    if (outer == config.max_target_updates) {
      ok = false;
      break;
    }
    // d lambda / dV; the first guess has the magnitude of the flat disk value.
    double slope = -2.0 * kPi / std::pow(area(d.mesh()), 2);
    if (have_prev && target != prev_target) slope = (lambda - prev_multiplier) / (target - prev_target);
    prev_target = target;
    prev_multiplier = lambda;
    have_prev = true;
    target -= lambda / slope;
    updates.push_back(d.accepted());
    d.reset_smoothing();
  }
  return finish(d, body, ok, std::move(updates), frame);
}

}  // namespace freebound
