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
#include <iosfwd>

#include "freebound/mesh.hpp"

namespace freebound {

/// Reads the triangle subset of OFF: "OFF", a counts line, vertex lines and
/// face lines that start with 3. Comments (#) and blank lines are skipped.
SurfaceMesh read_off(std::istream& in);
SurfaceMesh read_off(const std::filesystem::path& path);

/// Writes 17 significant digits so a read-back is bit-exact.
void write_off(std::ostream& out, const SurfaceMesh& mesh);
void write_off(const std::filesystem::path& path, const SurfaceMesh& mesh);

}  // namespace freebound
