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

#include "freebound/diskmap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/LU>
#include <Eigen/SparseCholesky>
#include <json.hpp>

#include "freebound/error.hpp"

namespace freebound {

namespace {

constexpr double kProperTolerance = 1e-10;
constexpr double kZeroDistance = 1e-9;

void fill_properness(const SurfaceMesh& mesh, DiskMap& map) {
  map.interior_excess = 0.0;
  map.boundary_min_modulus = std::numeric_limits<double>::infinity();
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    const double r = std::abs(map.values[static_cast<size_t>(v)]);
    if (mesh.is_boundary(v)) {
      map.boundary_min_modulus = std::min(map.boundary_min_modulus, r);
    } else {
      map.interior_excess = std::max(map.interior_excess, r - 1.0);
    }
  }
}

double map_energy(const SurfaceMesh& mesh, const DiskMap& map) {
  return 0.5 * (dirichlet_energy(mesh, map.real_part()) + dirichlet_energy(mesh, map.imag_part()));
}

// Distance from the origin to the segment [p, q].
double origin_distance(Complex p, Complex q) {
  const Complex d = q - p;
  const double len2 = std::norm(d);
  if (len2 == 0.0) return std::abs(p);
  const double t = std::clamp(-(p.real() * d.real() + p.imag() * d.imag()) / len2, 0.0, 1.0);
  return std::abs(p + t * d);
}

}  // namespace

Field DiskMap::real_part() const {
  Field out(static_cast<Eigen::Index>(values.size()));
  for (size_t i = 0; i < values.size(); ++i) out[static_cast<Eigen::Index>(i)] = values[i].real();
  return out;
}

Field DiskMap::imag_part() const {
  Field out(static_cast<Eigen::Index>(values.size()));
  for (size_t i = 0; i < values.size(); ++i) out[static_cast<Eigen::Index>(i)] = values[i].imag();
  return out;
}

std::string DiskMap::to_json() const {
  nlohmann::json j;
  j["balance_point"] = {balance_point.real(), balance_point.imag()};
  j["degree"] = degree;
  j["energy"] = energy;
  j["interior_excess"] = interior_excess;
  j["boundary_min_modulus"] = boundary_min_modulus;
  auto& vals = j["values"] = nlohmann::json::array();
  for (const Complex& z : values) vals.push_back({z.real(), z.imag()});
  return j.dump();
}

DiskMap harmonic_disk_map(const SurfaceMesh& mesh) {
  if (mesh.genus() != 0 || mesh.boundary_count() != 1) {
    throw Error(ErrorCode::WrongTopology,
                "disk maps need genus 0 and one boundary loop, got genus " +
                    std::to_string(mesh.genus()) + " with " +
                    std::to_string(mesh.boundary_count()) + " loops");
  }
  const int n = mesh.num_vertices();
  const auto& loop = mesh.boundary_loops().front();

  DiskMap map;
  map.values.assign(static_cast<size_t>(n), Complex(0.0, 0.0));
  map.boundary = mesh.boundary_loops();

  const size_t nb = loop.size();
  std::vector<double> arclength(nb + 1, 0.0);
  for (size_t i = 0; i < nb; ++i) {
    arclength[i + 1] = arclength[i] + (mesh.vertex(loop[(i + 1) % nb]) - mesh.vertex(loop[i])).norm();
  }
  const double total = arclength[nb];
  for (size_t i = 0; i < nb; ++i) {
    map.values[static_cast<size_t>(loop[i])] = std::polar(1.0, 2.0 * kPi * arclength[i] / total);
  }

  std::vector<int> slot(static_cast<size_t>(n), -1);
  int ni = 0;
  for (int v = 0; v < n; ++v) {
    if (!mesh.is_boundary(v)) slot[static_cast<size_t>(v)] = ni++;
  }
  if (ni > 0) {
    const SparseMat k = cotan_stiffness(mesh);
    std::vector<Eigen::Triplet<double>> trips;
    MatX rhs = MatX::Zero(ni, 2);
    for (int col = 0; col < k.outerSize(); ++col) {
      for (SparseMat::InnerIterator it(k, col); it; ++it) {
        const int r = slot[static_cast<size_t>(it.row())];
        if (r < 0) continue;
        const int c = slot[static_cast<size_t>(col)];
        if (c >= 0) {
          trips.emplace_back(r, c, it.value());
        } else {
          const Complex b = map.values[static_cast<size_t>(col)];
          rhs(r, 0) -= it.value() * b.real();
          rhs(r, 1) -= it.value() * b.imag();
        }
      }
    }
    SparseMat kii(ni, ni);
    kii.setFromTriplets(trips.begin(), trips.end());
    Eigen::SimplicialLDLT<SparseMat> solver(kii);
    if (solver.info() != Eigen::Success) {
      throw Error(ErrorCode::MeshDegenerated, "interior stiffness is singular");
    }
    const MatX x = solver.solve(rhs);
    for (int v = 0; v < n; ++v) {
      const int s = slot[static_cast<size_t>(v)];
      if (s >= 0) map.values[static_cast<size_t>(v)] = Complex(x(s, 0), x(s, 1));
    }
  }

  fill_properness(mesh, map);
  if (map.interior_excess > kProperTolerance) {
    throw Error(ErrorCode::NonProper, "interior vertex maps outside the disk by " +
                                          std::to_string(map.interior_excess));
  }
  map.energy = map_energy(mesh, map);
  map.degree = degree(map);
  return map;
}

int winding_number(std::span<const Complex> loop) {
  const size_t n = loop.size();
  double turn = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const Complex p = loop[i];
    const Complex q = loop[(i + 1) % n];
    if (origin_distance(p, q) < kZeroDistance) {
      throw Error(ErrorCode::ZeroOnBoundary, "boundary image passes through the origin");
    }
    turn += std::arg(q / p);
  }
  return static_cast<int>(std::lround(turn / (2.0 * kPi)));
}

int degree(const DiskMap& map) {
  int total = 0;
  std::vector<Complex> image;
  for (const auto& loop : map.boundary) {
    image.clear();
    for (int v : loop) image.push_back(map.values[static_cast<size_t>(v)]);
    total += winding_number(image);
  }
  return total;
}

EnergyBound conformal_energy_bound(const SurfaceMesh& mesh, const DiskMap& map) {
  EnergyBound out;
  out.min_triangle_slack = std::numeric_limits<double>::infinity();
  double energy = 0.0;
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const auto& t = mesh.triangle(f);
    const double twice_area = 2.0 * triangle_area(mesh, f);
    double e = 0.0;
    for (int k = 0; k < 3; ++k) {
      const int o = t[static_cast<size_t>(k)];
      const int i = t[static_cast<size_t>((k + 1) % 3)];
      const int j = t[static_cast<size_t>((k + 2) % 3)];
      const Vec3 u = mesh.vertex(i) - mesh.vertex(o);
      const Vec3 v = mesh.vertex(j) - mesh.vertex(o);
      const double cot = u.dot(v) / twice_area;
      e += 0.25 * cot * std::norm(map.values[static_cast<size_t>(i)] - map.values[static_cast<size_t>(j)]);
    }
    const Complex a = map.values[static_cast<size_t>(t[1])] - map.values[static_cast<size_t>(t[0])];
    const Complex b = map.values[static_cast<size_t>(t[2])] - map.values[static_cast<size_t>(t[0])];
    const double image = 0.5 * (std::conj(a) * b).imag();
    energy += e;
    out.image_area += image;
    out.min_triangle_slack = std::min(out.min_triangle_slack, e - std::abs(image));
  }
  out.energy = energy;
  out.two_pi_degree = 2.0 * kPi * map.degree;
  out.residual = energy - kPi * map.degree;
  return out;
}

Complex mobius(Complex a, Complex z) { return (z - a) / (1.0 - std::conj(a) * z); }

DiskMap mobius_apply(const SurfaceMesh& mesh, const DiskMap& map, Complex a) {
  if (!(std::abs(a) < 1.0)) {
    throw Error(ErrorCode::InvalidInput, "Moebius parameter must lie in the open disk");
  }
  DiskMap out = map;
  for (Complex& z : out.values) z = mobius(a, z);
  // m_a o m_b = rotation o m_c with c = m_{-b}(a); only c is tracked.
  out.balance_point = mobius(-map.balance_point, a);
  fill_properness(mesh, out);
  out.energy = map_energy(mesh, out);
  out.degree = degree(out);
  return out;
}

Complex balance_function(std::span<const Complex> points, std::span<const double> weights,
                         Complex a) {
  Complex sum(0.0, 0.0);
  for (size_t k = 0; k < points.size(); ++k) sum += weights[k] * mobius(a, points[k]);
  return sum;
}

Mat2 balance_jacobian(std::span<const Complex> points, std::span<const double> weights,
                      Complex a) {
  // df = A da + B d(conj a).
  Complex da(0.0, 0.0);
  Complex dabar(0.0, 0.0);
  for (size_t k = 0; k < points.size(); ++k) {
    const Complex z = points[k];
    const Complex den = 1.0 - std::conj(a) * z;
    da -= weights[k] / den;
    dabar += weights[k] * z * (z - a) / (den * den);
  }
  const Complex dx = da + dabar;
  const Complex dy = Complex(0.0, 1.0) * (da - dabar);
  Mat2 j;
  j << dx.real(), dy.real(), dx.imag(), dy.imag();
  return j;
}

namespace {

struct NewtonOutcome {
  Complex point;
  double residual;
  int iterations;
};

NewtonOutcome newton(std::span<const Complex> points, std::span<const double> weights, Complex a,
                     double tolerance, int max_iterations) {
  Complex f = balance_function(points, weights, a);
  double r = std::abs(f);
  int it = 0;
  for (; it < max_iterations; ++it) {
    const Mat2 j = balance_jacobian(points, weights, a);
    const Eigen::FullPivLU<Mat2> lu(j);
    if (!lu.isInvertible()) break;
    const Vec2 step = lu.solve(Vec2(-f.real(), -f.imag()));
    double t = 1.0;
    bool moved = false;
    for (int h = 0; h < 40; ++h, t *= 0.5) {
      const Complex trial = a + t * Complex(step[0], step[1]);
      if (!(std::abs(trial) < 1.0)) continue;
      const Complex ft = balance_function(points, weights, trial);
      if (std::abs(ft) < r) {
        a = trial;
        f = ft;
        r = std::abs(ft);
        moved = true;
        break;
      }
    }
    if (!moved) break;
    if (r <= 1e-3 * tolerance) break;
  }
  return {a, r, it};
}

}  // namespace

BalanceResult balance(std::span<const Complex> points, std::span<const double> weights,
                      double tolerance) {
  if (points.size() != weights.size() || points.empty()) {
    throw Error(ErrorCode::InvalidInput, "balance needs one weight per point");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw Error(ErrorCode::InvalidInput, "balance weights must be finite and nonnegative");
    }
    total += w;
  }
  if (!(total > 0.0)) throw Error(ErrorCode::InvalidInput, "balance weights have zero mass");
  std::vector<double> w(weights.begin(), weights.end());
  for (double& x : w) x /= total;

  const size_t heaviest = static_cast<size_t>(std::max_element(w.begin(), w.end()) - w.begin());
  const Complex p = points[heaviest];
  double spread = 0.0;
  for (size_t k = 0; k < points.size(); ++k) spread += w[k] * std::abs(points[k] - p);
  if (spread <= 1e-9 && std::abs(p) >= 1.0 - 1e-9) {
    throw Error(ErrorCode::MassConcentrated, "all weight sits at one point of the unit circle");
  }

  BalanceResult result;
  result.residual = std::numeric_limits<double>::infinity();
  bool found = false;
  const auto record = [&](const NewtonOutcome& o) {
    result.iterations += o.iterations;
    if (o.residual > tolerance) {
      if (!found && o.residual < result.residual) {
        result.point = o.point;
        result.residual = o.residual;
      }
      return;
    }
    for (const Complex& z : result.zeros) {
      if (std::abs(z - o.point) < 1e-6) return;
    }
    result.zeros.push_back(o.point);
    if (!found) {
      result.point = o.point;
      result.residual = o.residual;
      found = true;
    }
  };

  // Seed grid: the origin and three rings of eight.
  record(newton(points, w, Complex(0.0, 0.0), tolerance, 100));
  for (double radius : {0.3, 0.6, 0.9}) {
    for (int k = 0; k < 8; ++k) {
      record(newton(points, w, std::polar(radius, 2.0 * kPi * k / 8.0), tolerance, 100));
    }
  }

  if (!found) {
    // Homotopy from f_0(a) = -a: shrink the points toward 0 and track the zero.
    result.continuation = true;
    std::vector<Complex> scaled(points.size());
    Complex a(0.0, 0.0);
    double s = 0.0;
    double ds = 0.05;
    while (s < 1.0 && ds > 1e-8) {
      const double next = std::min(1.0, s + ds);
      for (size_t k = 0; k < points.size(); ++k) scaled[k] = next * points[k];
      const NewtonOutcome o = newton(scaled, w, a, tolerance, 50);
      if (o.residual <= tolerance) {
        a = o.point;
        s = next;
        ds = std::min(0.2, 1.5 * ds);
      } else {
        ds *= 0.5;
      }
    }
    if (s >= 1.0) record(newton(points, w, a, tolerance, 50));
  }

  if (!found) {
    throw Error(ErrorCode::NoConvergence,
                "balance did not converge; best |f(a)| = " + std::to_string(result.residual));
  }
  return result;
}

BalancedMap balance(const SurfaceMesh& mesh, const DiskMap& map, const Field& phi,
                    double tolerance) {
  if (phi.size() != mesh.num_vertices()) {
    throw Error(ErrorCode::InvalidInput, "weight field length does not match vertex count");
  }
  const VecX m = lumped_mass(mesh);
  std::vector<double> w(static_cast<size_t>(m.size()));
  for (Eigen::Index v = 0; v < m.size(); ++v) w[static_cast<size_t>(v)] = phi[v] * m[v];
  BalancedMap out;
  out.balance = balance(map.values, w, tolerance);
  out.map = mobius_apply(mesh, map, out.balance.point);
  return out;
}

BalancedTestFunctions balanced_test_functions(const SurfaceMesh& mesh, const Field& phi,
                                              double tolerance) {
  if (phi.size() != mesh.num_vertices()) {
    throw Error(ErrorCode::InvalidInput, "eigenfunction length does not match vertex count");
  }
  const VecX m = lumped_mass(mesh);
  Field weight = m.dot(phi) < 0.0 ? Field(-phi) : phi;
  const double peak = weight.maxCoeff();
  if (!(peak > 0.0)) throw Error(ErrorCode::InvalidInput, "eigenfunction has no positive part");

  BalancedTestFunctions out;
  out.clamp = std::max(0.0, -weight.minCoeff()) / peak;
  weight = weight.cwiseMax(0.0);
  weight /= m.dot(weight);

  BalancedMap balanced = balance(mesh, harmonic_disk_map(mesh), weight, tolerance);
  out.map = std::move(balanced.map);
  out.balance = balanced.balance;
  out.f1 = out.map.real_part();
  out.f2 = out.map.imag_part();
  out.orthogonality[0] = std::abs(m.cwiseProduct(weight).dot(out.f1));
  out.orthogonality[1] = std::abs(m.cwiseProduct(weight).dot(out.f2));
  out.weight = std::move(weight);
  return out;
}

}  // namespace freebound
