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

#include "freebound/off_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include "freebound/error.hpp"

namespace freebound {

namespace {

bool next_content_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
  }
  return false;
}

}  // namespace

SurfaceMesh read_off(std::istream& in) {
  std::string line;
  if (!next_content_line(in, line)) throw Error(ErrorCode::ParseError, "empty OFF stream");
  std::istringstream header(line);
  std::string magic;
  header >> magic;
  if (magic != "OFF") throw Error(ErrorCode::ParseError, "missing OFF header");

  // Counts may share the header line.
  long nv = -1, nf = -1, ne = 0;
  if (!(header >> nv >> nf)) {
    if (!next_content_line(in, line)) throw Error(ErrorCode::ParseError, "missing counts line");
    std::istringstream counts(line);
    if (!(counts >> nv >> nf)) throw Error(ErrorCode::ParseError, "malformed counts line");
    counts >> ne;
  }
  if (nv <= 0 || nf <= 0) throw Error(ErrorCode::ParseError, "non-positive element counts");

  std::vector<Vec3> vertices;
  vertices.reserve(static_cast<size_t>(nv));
  for (long i = 0; i < nv; ++i) {
    if (!next_content_line(in, line)) throw Error(ErrorCode::ParseError, "truncated vertex list");
    std::istringstream row(line);
    Vec3 p;
    if (!(row >> p.x() >> p.y() >> p.z())) {
      throw Error(ErrorCode::ParseError, "malformed vertex line " + std::to_string(i));
    }
    vertices.push_back(p);
  }
  std::vector<Triangle> triangles;
  triangles.reserve(static_cast<size_t>(nf));
  for (long i = 0; i < nf; ++i) {
    if (!next_content_line(in, line)) throw Error(ErrorCode::ParseError, "truncated face list");
    std::istringstream row(line);
    int arity = 0;
    Triangle t{};
    if (!(row >> arity) || arity != 3) {
      throw Error(ErrorCode::ParseError, "face " + std::to_string(i) + " is not a triangle");
    }
    if (!(row >> t[0] >> t[1] >> t[2])) {
      throw Error(ErrorCode::ParseError, "malformed face line " + std::to_string(i));
    }
    triangles.push_back(t);
  }
  return SurfaceMesh::build(std::move(vertices), std::move(triangles));
}

SurfaceMesh read_off(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
  return read_off(in);
}

void write_off(std::ostream& out, const SurfaceMesh& mesh) {
  const auto old_precision = out.precision();
  out << "OFF\n" << mesh.num_vertices() << ' ' << mesh.num_faces() << ' ' << mesh.num_edges()
      << '\n';
  out << std::setprecision(17);
  for (const auto& p : mesh.vertices()) out << p.x() << ' ' << p.y() << ' ' << p.z() << '\n';
  for (const auto& t : mesh.triangles()) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  out.precision(old_precision);
}

void write_off(const std::filesystem::path& path, const SurfaceMesh& mesh) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::InvalidInput, "cannot write " + path.string());
  write_off(out, mesh);
}

}  // namespace freebound
