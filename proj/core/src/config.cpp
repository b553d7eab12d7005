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

#include "freebound/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "freebound/error.hpp"

namespace freebound {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

double to_double(const std::string& key, const std::string& text) {
  double x = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, x);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw Error(ErrorCode::BadConfig, key + ": '" + text + "' is not a number");
  }
  return x;
}

long long to_integer(const std::string& key, const std::string& text) {
  long long x = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, x);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw Error(ErrorCode::BadConfig, key + ": '" + text + "' is not an integer");
  }
  return x;
}

int to_int(const std::string& key, const std::string& text) {
  const long long x = to_integer(key, text);
  if (x < -2147483647LL || x > 2147483647LL) {
    throw Error(ErrorCode::BadConfig, key + ": '" + text + "' is out of range");
  }
  return static_cast<int>(x);
}

std::vector<double> numbers(const std::string& what, const std::string& list) {
  std::vector<double> out;
  for (const std::string& item : split(list, ',')) out.push_back(to_double(what, item));
  return out;
}

std::string format(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"instance.body", [](RunConfig& c, const std::string&, const std::string& v) { c.body = v; }},
      {"instance.surface",
       [](RunConfig& c, const std::string&, const std::string& v) { c.surface = v; }},
      {"instance.resolution",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.resolution = to_int(k, v); }},
      {"instance.perturbation",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.perturbation = to_double(k, v);
       }},
      {"instance.volume",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         if (v.empty() || v == "auto") {
           c.volume.reset();
         } else {
           c.volume = to_double(k, v);
         }
       }},
      {"instance.seed",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         const long long s = to_integer(k, v);
         if (s < 0) throw Error(ErrorCode::BadConfig, k + " must be nonnegative");
         c.seed = static_cast<std::uint64_t>(s);
       }},
      {"solver.max_iterations",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.solver.max_iterations = to_int(k, v);
       }},
      {"solver.gradient_tolerance",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.solver.gradient_tolerance = to_double(k, v);
       }},
      {"solver.projection_tolerance",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.solver.projection_tolerance = to_double(k, v);
       }},
      {"solver.armijo",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.solver.armijo = to_double(k, v);
       }},
      {"solver.backtrack",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.solver.backtrack = to_double(k, v);
       }},
      {"solver.max_backtracks",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.solver.max_backtracks = to_int(k, v);
       }},
      {"solver.initial_step",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.solver.initial_step = to_double(k, v);
       }},
      {"solver.smoothing_interval",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.solver.smoothing_interval = to_int(k, v);
       }},
      {"solver.stall_tolerance",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.solver.stall_tolerance = to_double(k, v);
       }},
      {"solver.stall_window",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.solver.stall_window = to_int(k, v);
       }},
      {"solver.multiplier_tolerance",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.solver.multiplier_tolerance = to_double(k, v);
       }},
      {"solver.max_target_updates",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.solver.max_target_updates = to_int(k, v);
       }},
      {"run.checks",
       [](RunConfig& c, const std::string&, const std::string& v) { c.checks = parse_checks(v); }},
      {"run.output", [](RunConfig& c, const std::string&, const std::string& v) { c.output = v; }},
      {"run.refine",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.refine = to_int(k, v); }},
  };
  return table;
}

const std::vector<std::string> kChecks = {"theorem1", "theorem2", "corollary1", "corollary2",
                                          "corollary3"};

}  // namespace

ConfigMap parse_config(std::istream& in) {
  ConfigMap out;
  std::string section = "run";
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string s = trim(line);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']' || s.size() < 3) {
        throw Error(ErrorCode::ParseError, "line " + std::to_string(number) + ": bad section header");
      }
      section = trim(s.substr(1, s.size() - 2));
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(number) + ": expected key = value");
    }
    const std::string key = trim(s.substr(0, eq));
    if (key.empty()) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(number) + ": empty key");
    }
    out[section + "." + key] = trim(s.substr(eq + 1));
  }
  return out;
}

ConfigMap read_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::BadConfig, "cannot open config file " + path.string());
  return parse_config(in);
}

ConvexBody parse_body(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "ball") {
    const auto at = args.find('@');
    const std::vector<double> r = numbers("ball radius", args.substr(0, at));
    if (r.size() != 1) throw Error(ErrorCode::BadConfig, "ball takes one radius: " + spec);
    Vec3 center = Vec3::Zero();
    if (at != std::string::npos) {
      const std::vector<double> c = numbers("ball center", args.substr(at + 1));
      if (c.size() != 3) throw Error(ErrorCode::BadConfig, "ball center needs 3 numbers: " + spec);
      center = Vec3(c[0], c[1], c[2]);
    }
    return ConvexBody::ball(r[0], center);
  }
  if (kind == "ellipsoid") {
    const std::vector<double> a = numbers("ellipsoid axes", args);
    if (a.size() != 3) throw Error(ErrorCode::BadConfig, "ellipsoid needs 3 semi-axes: " + spec);
    return ConvexBody::ellipsoid(Vec3(a[0], a[1], a[2]));
  }
  if (kind == "perturbed-ball") {
    const std::vector<double> p = numbers("perturbed-ball", args);
    if (p.size() != 3 || p[2] != static_cast<int>(p[2])) {
      throw Error(ErrorCode::BadConfig, "perturbed-ball needs radius,epsilon,harmonic: " + spec);
    }
    return ConvexBody::perturbed_ball(p[0], p[1], static_cast<int>(p[2]));
  }
  throw Error(ErrorCode::BadConfig, "unknown body '" + spec + "'");
}

SurfaceSpec parse_surface(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  SurfaceSpec s;
  if (kind == "equatorial-disk" && colon == std::string::npos) {
    s.kind = SurfaceSpec::Kind::EquatorialDisk;
  } else if (kind == "tilted-disk") {
    s.kind = SurfaceSpec::Kind::TiltedDisk;
    s.parameter = to_double("tilted-disk angle", arg);
  } else if (kind == "spherical-cap") {
    s.kind = SurfaceSpec::Kind::SphericalCap;
    s.parameter = to_double("spherical-cap height", arg);
    if (!(s.parameter > 0.0 && s.parameter < 1.0)) {
      throw Error(ErrorCode::BadConfig, "spherical-cap height must lie in (0, 1)");
    }
  } else if (kind == "mesh" && !arg.empty()) {
    s.kind = SurfaceSpec::Kind::MeshFile;
    s.path = arg;
  } else {
    throw Error(ErrorCode::BadConfig, "unknown surface '" + spec + "'");
  }
  return s;
}

std::string surface_descriptor(const SurfaceSpec& spec) {
  switch (spec.kind) {
    case SurfaceSpec::Kind::EquatorialDisk:
      return "equatorial-disk";
    case SurfaceSpec::Kind::TiltedDisk:
      return "tilted-disk:" + format(spec.parameter);
    case SurfaceSpec::Kind::SphericalCap:
      return "spherical-cap:" + format(spec.parameter);
    case SurfaceSpec::Kind::MeshFile:
      return "mesh:" + spec.path.filename().string();
  }
  return "unknown";
}

std::vector<std::string> parse_checks(const std::string& list) {
  std::vector<std::string> out;
  for (const std::string& item : split(list, ',')) {
    if (item.empty()) continue;
    if (std::find(kChecks.begin(), kChecks.end(), item) == kChecks.end()) {
      throw Error(ErrorCode::BadConfig, "unknown check '" + item + "'");
    }
    if (std::find(out.begin(), out.end(), item) == out.end()) out.push_back(item);
  }
  return out;
}

void RunConfig::validate() const {
  if (resolution < 50) throw Error(ErrorCode::BadConfig, "resolution must be at least 50");
  if (!(perturbation >= 0.0 && perturbation < 0.1)) {
    throw Error(ErrorCode::BadConfig, "perturbation must lie in [0, 0.1)");
  }
  if (refine < 0 || refine > 6) throw Error(ErrorCode::BadConfig, "refine must lie in [0, 6]");
  if (output.empty()) throw Error(ErrorCode::BadConfig, "output directory is empty");
  if (volume && !(*volume > 0.0)) throw Error(ErrorCode::BadConfig, "volume must be positive");
  if (solver.max_iterations < 1 || !(solver.gradient_tolerance > 0.0)) {
    throw Error(ErrorCode::BadConfig, "solver budget and tolerance must be positive");
  }
  parse_body(body);
  parse_surface(surface);
  for (const std::string& c : checks) parse_checks(c);
}

std::vector<std::string> RunConfig::effective_checks() const {
  if (!checks.empty()) return checks;
  if (parse_surface(surface).kind == SurfaceSpec::Kind::SphericalCap) return {"theorem2"};
  return {"theorem1", "corollary2", "corollary3"};
}

void apply_config(RunConfig& config, const ConfigMap& values) {
  const auto& table = setters();
  for (const auto& [key, value] : values) {
    const auto it = table.find(key);
    if (it == table.end()) throw Error(ErrorCode::BadConfig, "unknown config key '" + key + "'");
    it->second(config, key, value);
  }
}

std::string to_config_text(const RunConfig& c) {
  std::ostringstream out;
  std::string checks;
  for (const std::string& s : c.checks) checks += (checks.empty() ? "" : ",") + s;
  out << "[instance]\n"
      << "body = " << c.body << "\n"
      << "surface = " << c.surface << "\n"
      << "resolution = " << c.resolution << "\n"
      << "perturbation = " << format(c.perturbation) << "\n"
      << "volume = " << (c.volume ? format(*c.volume) : "auto") << "\n"
      << "seed = " << c.seed << "\n"
      << "\n[solver]\n"
      << "max_iterations = " << c.solver.max_iterations << "\n"
      << "gradient_tolerance = " << format(c.solver.gradient_tolerance) << "\n"
      << "projection_tolerance = " << format(c.solver.projection_tolerance) << "\n"
      << "armijo = " << format(c.solver.armijo) << "\n"
      << "backtrack = " << format(c.solver.backtrack) << "\n"
      << "max_backtracks = " << c.solver.max_backtracks << "\n"
      << "initial_step = " << format(c.solver.initial_step) << "\n"
      << "smoothing_interval = " << c.solver.smoothing_interval << "\n"
      << "stall_tolerance = " << format(c.solver.stall_tolerance) << "\n"
      << "stall_window = " << c.solver.stall_window << "\n"
      << "multiplier_tolerance = " << format(c.solver.multiplier_tolerance) << "\n"
      << "max_target_updates = " << c.solver.max_target_updates << "\n"
      << "\n[run]\n"
      << "checks = " << checks << "\n"
      << "output = " << c.output.string() << "\n"
      << "refine = " << c.refine << "\n";
  return out.str();
}

}  // namespace freebound
