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

#include "freebound/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "freebound/curvature.hpp"
#include "freebound/error.hpp"
#include "freebound/instances.hpp"
#include "freebound/off_io.hpp"
#include "freebound/spectral.hpp"
#include "freebound/verify.hpp"

namespace freebound {

namespace fs = std::filesystem;

namespace {

std::string format(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::BadConfig, "cannot write " + path.string());
  out << text;
}

bool wants(const std::vector<std::string>& checks, const std::string& name) {
  return std::find(checks.begin(), checks.end(), name) != checks.end();
}

double mean_edge_length(const SurfaceMesh& mesh) {
  double total = 0.0;
  for (const auto& e : mesh.edges()) total += (mesh.vertex(e[1]) - mesh.vertex(e[0])).norm();
  return total / static_cast<double>(mesh.num_edges());
}

SolveResult relax(const Instance& inst, const RunConfig& config, const SurfaceMesh& start,
                  std::ostream* log) {
  SolverConfig solver = config.solver;
  solver.seed = config.seed;
  if (log != nullptr) {
    solver.on_iteration = [log](const IterationRecord& r) { write_log_record(*log, r); };
  }
  if (inst.cmc) {
    solver.volume_target = config.volume ? *config.volume : enclosed_volume(inst.mesh, inst.body);
    return relax_cmc(start, inst.body, solver);
  }
  return relax_minimal(start, inst.body, solver);
}

SurfaceMesh perturbed(const Instance& inst, const RunConfig& config) {
  if (config.perturbation == 0.0) return inst.mesh;
  return perturb_interior(inst.mesh, config.perturbation * inst.mesh.length_scale(), config.seed);
}

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

}  // namespace

Instance generate(const RunConfig& config) {
  config.validate();
  return generate(config, rings_for_vertices(config.resolution));
}

Instance generate(const RunConfig& config, int rings) {
  const ConvexBody body = parse_body(config.body);
  const SurfaceSpec surface = parse_surface(config.surface);
  auto build = [&]() -> SurfaceMesh {
    switch (surface.kind) {
      case SurfaceSpec::Kind::EquatorialDisk:
        return body_disk(body, rings);
      case SurfaceSpec::Kind::TiltedDisk:
        return body_disk(body, rings, rotation_x(surface.parameter * kPi / 180.0));
      case SurfaceSpec::Kind::SphericalCap:
        if (body.kind() != BodyKind::Ball) {
          throw Error(ErrorCode::BadConfig, "spherical caps are generated for balls only");
        }
        return spherical_cap(surface.parameter, rings, body.radius())
            .transformed(1.0, Mat3::Identity(), body.center());
      case SurfaceSpec::Kind::MeshFile: {
        const SurfaceMesh m = read_off(surface.path);
        std::vector<Vec3> pts = m.vertices();
        for (int v = 0; v < m.num_vertices(); ++v) {
          if (m.is_boundary(v)) pts[static_cast<size_t>(v)] = project_to_boundary(body, pts[static_cast<size_t>(v)]);
        }
        return m.with_vertices(std::move(pts));
      }
    }
    throw Error(ErrorCode::BadConfig, "unknown surface kind");
  };
  SurfaceMesh mesh = build();
  Instance inst{body, mesh, surface, surface.kind == SurfaceSpec::Kind::SphericalCap, ""};
  inst.descriptor = body.descriptor() + " | " + surface_descriptor(surface) + " | " +
                    std::to_string(mesh.num_vertices());
  return inst;
}

RunOutcome run(const RunConfig& config) {
  config.validate();
  const auto wall = std::chrono::steady_clock::now();
  const std::vector<std::string> checks = config.effective_checks();
  const ConvexBody body = parse_body(config.body);
  const VerifyOptions options;
  // Hypotheses on the body come first so that a bad body fails before solving.
  std::vector<Certificate> certificates;
  if (wants(checks, "corollary1")) certificates.push_back(check_corollary1_hypotheses(body, options));
  if (wants(checks, "theorem1") || wants(checks, "theorem2")) require_unit_convexity(body, options);

  std::error_code ec;
  fs::create_directories(config.output, ec);
  if (ec || !fs::is_directory(config.output)) {
    throw Error(ErrorCode::BadConfig, "cannot create output directory " + config.output.string());
  }
  const Instance inst = generate(config);
  const SurfaceMesh start = perturbed(inst, config);

  std::vector<fs::path> artifacts;
  auto path = [&](const std::string& name) {
    artifacts.push_back(config.output / name);
    return artifacts.back();
  };
  write_text(path("config.ini"), to_config_text(config));
  write_off(path("initial.off"), start);

  std::ofstream log(path("solve.jsonl"), std::ios::binary);
  RunOutcome outcome(relax(inst, config, start, &log));
  log.close();
  const SolveResult& result = outcome.result;
  write_off(path("final.off"), result.mesh);

  {
    VecX values;
    if (inst.cmc) {
      values = cmc_stability_check(result.mesh, inst.body, options.stability_tolerance).eigenvalues;
    } else {
      const QuadraticFormPair pair =
          assemble_index_form(result.mesh, inst.body, discrete_curvatures(result.mesh));
      values = solve_spectrum(pair, std::min(8, result.mesh.num_vertices() - 1)).eigenvalues;
    }
    std::string csv = "index,value\n";
    for (Eigen::Index k = 0; k < values.size(); ++k) {
      csv += std::to_string(k + 1) + "," + format(values[k]) + "\n";
    }
    write_text(path("spectrum.csv"), csv);
  }

  for (const std::string& name : checks) {
    if (name == "theorem1") certificates.push_back(check_theorem1(result, inst.body, options));
    if (name == "theorem2") certificates.push_back(check_theorem2(result, inst.body, options));
    if (name == "corollary2") certificates.push_back(check_corollary2(result, options));
    if (name == "corollary3") certificates.push_back(check_corollary3(result, inst.body, options));
  }
  outcome.pass = true;
  for (Certificate& c : certificates) {
    c.instance = inst.descriptor;
    c.quantities["seed"] = static_cast<double>(config.seed);
    write_text(path("certificate_" + c.theorem + ".json"), c.to_json());
    outcome.pass = outcome.pass && c.pass();
  }

  if (config.refine > 0) {
    const RefinementStudy study = refine_study(config, config.refine);
    write_text(path("refinement.csv"), study.to_csv());
  }

  nlohmann::json meta;
  meta["created"] = timestamp();
  meta["wall_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall).count();
  meta["iterations"] = result.iterations;
  meta["stalled"] = result.stalled;
  meta["instance"] = inst.descriptor;
  write_text(path("metadata.json"), meta.dump(2) + "\n");

  outcome.certificates = std::move(certificates);
  outcome.artifacts = std::move(artifacts);
  return outcome;
}

std::string RefinementStudy::to_csv() const {
  std::string out =
      "level,vertices,h,length,length_error,area,area_error,mean_curvature_residual,cmc_residual,"
      "free_boundary_angle\n";
  for (const RefinementRow& r : rows) {
    out += std::to_string(r.level) + "," + std::to_string(r.vertices) + "," + format(r.h) + "," +
           format(r.length) + "," + format(r.length_error) + "," + format(r.area) + "," +
           format(r.area_error) + "," + format(r.mean_curvature) + "," + format(r.cmc) + "," +
           format(r.free_boundary_angle) + "\n";
  }
  return out;
}

std::string RefinementStudy::to_table() const {
  std::ostringstream out;
  out << (exact_reference ? "errors against closed forms\n" : "errors against the finest level\n");
  out << std::setw(6) << "level" << std::setw(10) << "vertices" << std::setw(14) << "h"
      << std::setw(14) << "|dL|" << std::setw(14) << "|dA|" << std::setw(14) << "fb angle" << "\n";
  out << std::scientific << std::setprecision(4);
  for (const RefinementRow& r : rows) {
    out << std::setw(6) << r.level << std::setw(10) << r.vertices << std::setw(14) << r.h
        << std::setw(14) << r.length_error << std::setw(14) << r.area_error << std::setw(14)
        << r.free_boundary_angle << "\n";
  }
  out << (monotone ? "monotone decrease: yes\n" : "monotone decrease: no\n");
  return out.str();
}

RefinementStudy refine_study(const RunConfig& config, int levels) {
  config.validate();
  if (levels < 1) throw Error(ErrorCode::BadConfig, "refinement needs at least one level");
  const int finest = rings_for_vertices(config.resolution);
  RefinementStudy study;
  for (int level = 0; level < levels; ++level) {
    const int rings = std::max(2, finest >> (levels - 1 - level));
    const Instance inst = generate(config, rings);
    const SolveResult result = relax(inst, config, perturbed(inst, config), nullptr);
    RefinementRow row;
    row.level = level;
    row.vertices = result.mesh.num_vertices();
    row.h = mean_edge_length(result.mesh);
    row.length = boundary_length(result.mesh);
    row.area = area(result.mesh);
    row.mean_curvature = result.residuals.mean_curvature;
    row.cmc = result.residuals.cmc;
    row.free_boundary_angle = result.residuals.free_boundary_angle;
    study.rows.push_back(row);
  }

  const ConvexBody body = parse_body(config.body);
  const SurfaceSpec surface = parse_surface(config.surface);
  double length_ref = study.rows.back().length;
  double area_ref = study.rows.back().area;
  if (body.kind() == BodyKind::Ball && surface.kind != SurfaceSpec::Kind::MeshFile) {
    study.exact_reference = true;
    const double r = body.radius();
    if (surface.kind == SurfaceSpec::Kind::SphericalCap) {
      const CapGeometry g = cap_geometry(surface.parameter, r);
      length_ref = 2.0 * kPi * g.boundary_radius;
      area_ref = g.area;
    } else {
      length_ref = 2.0 * kPi * r;
      area_ref = kPi * r * r;
    }
  }
  study.monotone = true;
  for (size_t k = 0; k < study.rows.size(); ++k) {
    RefinementRow& row = study.rows[k];
    row.length_error = std::abs(row.length - length_ref);
    row.area_error = std::abs(row.area - area_ref);
    if (k > 0 && (row.length_error >= study.rows[k - 1].length_error ||
                  row.area_error >= study.rows[k - 1].area_error)) {
      study.monotone = false;
    }
  }
  return study;
}

std::string Report::to_text() const {
  std::ostringstream out;
  out << "  " << std::left << std::setw(12) << "check" << std::setw(44) << "instance" << std::right
      << std::setw(12) << "L" << std::setw(12) << "2pi(g+r)" << std::setw(7) << "index"
      << std::setw(10) << "sigma1" << std::setw(12) << "A" << std::setw(12) << "bound"
      << std::setw(8) << "verdict" << "\n";
  out << std::fixed;
  for (const ReportRow& r : rows) {
    out << (r.pass ? "  " : "! ") << std::left << std::setw(12) << r.theorem << std::setw(44)
        << r.instance << std::right << std::setprecision(6) << std::setw(12) << r.length
        << std::setw(12) << r.length_bound;
    if (r.index >= 0.0) {
      out << std::setw(7) << static_cast<int>(r.index);
    } else {
      out << std::setw(7) << "-";
    }
    if (r.sigma1 >= 0.0) {
      out << std::setprecision(4) << std::setw(10) << r.sigma1;
    } else {
      out << std::setw(10) << "-";
    }
    out << std::setprecision(6) << std::setw(12) << r.area << std::setw(12) << r.bound
        << std::setw(8) << (r.pass ? "PASS" : "FAIL") << "\n";
  }
  return out.str();
}

Report report(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw Error(ErrorCode::MissingArtifacts, dir.string() + " is not a directory");
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (entry.is_regular_file() && name.rfind("certificate_", 0) == 0 &&
        entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  if (files.empty()) throw Error(ErrorCode::MissingArtifacts, "no certificates in " + dir.string());
  std::sort(files.begin(), files.end());

  Report rep;
  rep.all_pass = true;
  for (const fs::path& file : files) {
    std::ifstream in(file, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    const Certificate c = certificate_from_json(buf.str());
    auto quantity = [&](const std::string& key, double fallback) {
      const auto it = c.quantities.find(key);
      return it == c.quantities.end() ? fallback : it->second;
    };
    ReportRow row;
    row.file = fs::relative(file, dir).string();
    row.theorem = c.theorem;
    row.instance = c.instance;
    row.length = quantity("length", 0.0);
    row.length_bound = 2.0 * kPi * (quantity("genus", 0.0) + quantity("boundary_components", 0.0));
    row.index = quantity("index", -1.0);
    row.sigma1 = quantity("steklov_sigma1", -1.0);
    row.area = quantity("area", 0.0);
    for (const char* name : {"length_bound", "area_bound", "convexity_constant"}) {
      if (const Check* check = c.find(name)) {
        row.bound = check->bound;
        break;
      }
    }
    row.pass = c.pass();
    rep.all_pass = rep.all_pass && row.pass;
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace freebound
