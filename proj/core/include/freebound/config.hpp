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
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "freebound/body.hpp"
#include "freebound/fbms.hpp"

namespace freebound {

/// Flat "section.key" -> value view of a config file.
using ConfigMap = std::map<std::string, std::string>;

/// Lines are "key = value", "[section]", blank, or comments starting with '#'
/// or ';'. Keys before the first section header belong to "run". Throws
/// ParseError with the line number.
ConfigMap parse_config(std::istream& in);
ConfigMap read_config(const std::filesystem::path& path);

struct SurfaceSpec {
  enum class Kind { EquatorialDisk, TiltedDisk, SphericalCap, MeshFile };
  Kind kind = Kind::EquatorialDisk;
  double parameter = 0.0;  // tilt in degrees, or the cap's boundary-plane height
  std::filesystem::path path;
};

/// "ball:r", "ball:r@x,y,z", "ellipsoid:a,b,c", "perturbed-ball:r,eps,k".
ConvexBody parse_body(const std::string& spec);
/// "equatorial-disk", "tilted-disk:deg", "spherical-cap:t" (0 < t < 1),
/// "mesh:path".
SurfaceSpec parse_surface(const std::string& spec);
std::string surface_descriptor(const SurfaceSpec& spec);

/// Known check names: theorem1, theorem2, corollary1, corollary2, corollary3.
std::vector<std::string> parse_checks(const std::string& list);

struct RunConfig {
  std::string body = "ball:1";
  std::string surface = "equatorial-disk";
  /// Target vertex count.
  int resolution = 10000;
  /// Interior noise along normals before relaxing, relative to the mesh size.
  double perturbation = 1e-3;
  /// CMC volume target; defaults to the volume of the initial surface.
  std::optional<double> volume;
  std::uint64_t seed = 42;
  SolverConfig solver;
  /// Empty: theorem1, corollary2, corollary3 for disks and theorem2 for caps.
  std::vector<std::string> checks;
  std::filesystem::path output = "freebound-out";
  /// Refinement levels for a residual-vs-h study; 0 disables it.
  int refine = 0;

  /// Throws BadConfig.
  void validate() const;
  std::vector<std::string> effective_checks() const;
};

/// Overwrites fields named in the map. Throws BadConfig on unknown keys or
/// malformed values.
void apply_config(RunConfig& config, const ConfigMap& values);
std::string to_config_text(const RunConfig& config);

}  // namespace freebound
