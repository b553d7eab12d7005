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

#include <filesystem>
#include <string>
#include <vector>

#include "freebound/body.hpp"
#include "freebound/certificate.hpp"
#include "freebound/config.hpp"
#include "freebound/fbms.hpp"
#include "freebound/mesh.hpp"

namespace freebound {

struct Instance {
  ConvexBody body;
  SurfaceMesh mesh;
  SurfaceSpec surface;
  bool cmc = false;
  /// "body | surface | vertices"
  std::string descriptor;
};

/// Structured initial surface with boundary vertices on the body boundary.
/// Throws BadConfig for unsupported combinations (caps need a ball).
Instance generate(const RunConfig& config);
/// Same, with an explicit ring count instead of the target resolution.
Instance generate(const RunConfig& config, int rings);

struct RunOutcome {
  explicit RunOutcome(SolveResult r) : result(std::move(r)) {}
  SolveResult result;
  std::vector<Certificate> certificates;
  std::vector<std::filesystem::path> artifacts;
  bool pass = false;
};

/// generate -> perturb -> relax -> spectrum -> certificates. Writes into
/// config.output: initial.off, final.off, solve.jsonl, spectrum.csv,
/// certificate_<check>.json, config.ini, metadata.json, and refinement.csv
/// when config.refine > 0. Body hypotheses are checked before solving.
RunOutcome run(const RunConfig& config);

struct RefinementRow {
  int level = 0;
  int vertices = 0;
  double h = 0.0;  // mean edge length
  double length = 0.0;
  double length_error = 0.0;
  double area = 0.0;
  double area_error = 0.0;
  double mean_curvature = 0.0;
  double cmc = 0.0;
  double free_boundary_angle = 0.0;
};

struct RefinementStudy {
  std::vector<RefinementRow> rows;
  /// Errors are against closed forms (ball instances) rather than the
  /// finest level.
  bool exact_reference = false;
  /// Length and area errors strictly decrease with the level.
  bool monotone = false;

  std::string to_csv() const;
  std::string to_table() const;
};

/// Halves the ring spacing per level, ending at the configured resolution.
RefinementStudy refine_study(const RunConfig& config, int levels);

struct ReportRow {
  std::string file;
  std::string theorem;
  std::string instance;
  double length = 0.0;
  double length_bound = 0.0;  // 2 pi (g + r)
  double index = -1.0;        // -1 when not computed
  double sigma1 = -1.0;
  double area = 0.0;
  double bound = 0.0;  // main bound of the check
  bool pass = false;
};

struct Report {
  std::vector<ReportRow> rows;
  bool all_pass = false;
  std::string to_text() const;
};

/// Collects certificate_*.json below dir. Throws MissingArtifacts when none
/// is found.
Report report(const std::filesystem::path& dir);

}  // namespace freebound
