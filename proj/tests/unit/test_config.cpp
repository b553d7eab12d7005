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

#include <sstream>

#include <gtest/gtest.h>

#include "freebound/config.hpp"
#include "freebound/error.hpp"

using namespace freebound;

namespace {

template <class Fn>
void expect_code(ErrorCode code, Fn fn) {
  try {
    fn();
    ADD_FAILURE() << "expected " << to_string(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

ConfigMap parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

}  // namespace

TEST(Config, ParsesSectionsAndComments) {
  const ConfigMap m = parse(
      "output = out-dir\n"
      "# comment\n"
      "; another\n"
      "\n"
      "[instance]\n"
      "  body = ball:2   \n"
      "resolution=500\n"
      "[solver]\n"
      "max_iterations = 77\n");
  EXPECT_EQ(m.at("run.output"), "out-dir");
  EXPECT_EQ(m.at("instance.body"), "ball:2");
  EXPECT_EQ(m.at("instance.resolution"), "500");
  EXPECT_EQ(m.at("solver.max_iterations"), "77");
}

TEST(Config, ParseErrorsCarryLine) {
  try {
    parse("[instance]\nbody = ball:1\nthis line is wrong\n");
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
    EXPECT_NE(std::string(e.what()).find('3'), std::string::npos) << e.what();
  }
  expect_code(ErrorCode::ParseError, [] { parse("[unterminated\n"); });
}

TEST(Config, ApplyAndValidate) {
  RunConfig c;
  apply_config(c, parse("[instance]\nbody = ellipsoid:1.2,1,1\nsurface = tilted-disk:30\n"
                        "resolution = 800\nseed = 9\nvolume = 1.25\n"
                        "[solver]\nmax_iterations = 900\nstall_window = 10\n"
                        "[run]\nchecks = theorem1, corollary2, theorem1\nrefine = 2\n"));
  EXPECT_EQ(c.body, "ellipsoid:1.2,1,1");
  EXPECT_EQ(c.surface, "tilted-disk:30");
  EXPECT_EQ(c.resolution, 800);
  EXPECT_EQ(c.seed, 9u);
  ASSERT_TRUE(c.volume.has_value());
  EXPECT_EQ(*c.volume, 1.25);
  EXPECT_EQ(c.solver.max_iterations, 900);
  EXPECT_EQ(c.solver.stall_window, 10);
  EXPECT_EQ(c.checks, (std::vector<std::string>{"theorem1", "corollary2"}));
  EXPECT_EQ(c.refine, 2);
  c.validate();
  apply_config(c, {{"instance.volume", "auto"}});
  EXPECT_FALSE(c.volume.has_value());
}

TEST(Config, RejectsBadValues) {
  RunConfig c;
  expect_code(ErrorCode::BadConfig, [&] { apply_config(c, {{"instance.colour", "red"}}); });
  expect_code(ErrorCode::BadConfig, [&] { apply_config(c, {{"instance.resolution", "12x"}}); });
  expect_code(ErrorCode::BadConfig, [&] { apply_config(c, {{"run.checks", "theorem9"}}); });
  RunConfig small;
  small.resolution = 10;
  expect_code(ErrorCode::BadConfig, [&] { small.validate(); });
  RunConfig noisy;
  noisy.perturbation = 0.5;
  expect_code(ErrorCode::BadConfig, [&] { noisy.validate(); });
}

TEST(Config, BodyAndSurfaceSpecs) {
  EXPECT_EQ(parse_body("ball:1").descriptor(), "ball:1");
  EXPECT_EQ(parse_body("ball:0.5@0.1,0,0").center(), Vec3(0.1, 0, 0));
  EXPECT_EQ(parse_body("ellipsoid:2,1,1").kind(), BodyKind::Ellipsoid);
  EXPECT_EQ(parse_body("perturbed-ball:0.9,0.05,2").harmonic(), 2);
  for (const char* bad : {"cube:1", "ball:", "ball:x", "ellipsoid:1,2", "ball:1@1,2"}) {
    expect_code(ErrorCode::BadConfig, [&] { parse_body(bad); });
  }
  EXPECT_EQ(parse_surface("equatorial-disk").kind, SurfaceSpec::Kind::EquatorialDisk);
  EXPECT_EQ(parse_surface("tilted-disk:30").parameter, 30.0);
  EXPECT_EQ(parse_surface("spherical-cap:0.5").kind, SurfaceSpec::Kind::SphericalCap);
  EXPECT_EQ(parse_surface("mesh:a/b.off").path, "a/b.off");
  for (const char* bad : {"spherical-cap:1.5", "spherical-cap:0", "torus", "mesh:"}) {
    expect_code(ErrorCode::BadConfig, [&] { parse_surface(bad); });
  }
  EXPECT_EQ(surface_descriptor(parse_surface("spherical-cap:0.5")), "spherical-cap:0.5");
}

TEST(Config, DefaultChecksDependOnSurface) {
  RunConfig disk;
  EXPECT_EQ(disk.effective_checks(),
            (std::vector<std::string>{"theorem1", "corollary2", "corollary3"}));
  RunConfig cap;
  cap.surface = "spherical-cap:0.3";
  EXPECT_EQ(cap.effective_checks(), std::vector<std::string>{"theorem2"});
}

TEST(Config, TextRoundTrip) {
  RunConfig c;
  c.body = "ball:0.75";
  c.resolution = 1234;
  c.perturbation = 2.5e-3;
  c.solver.gradient_tolerance = 3e-10;
  c.checks = {"theorem2"};
  c.volume = 0.1;
  std::istringstream in(to_config_text(c));
  RunConfig r;
  apply_config(r, parse_config(in));
  EXPECT_EQ(to_config_text(r), to_config_text(c));
  EXPECT_EQ(r.solver.gradient_tolerance, 3e-10);
  EXPECT_EQ(r.volume, c.volume);
}
