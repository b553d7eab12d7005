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

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

namespace fs = std::filesystem;

namespace {

struct Result {
  int status = -1;
  std::string out;
};

Result cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + FREEBOUND_CLI + " " + args + " 2>&1";
  Result r;
  FILE* p = popen(cmd.c_str(), "r");
  if (p == nullptr) return r;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int raw = pclose(p);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("freebound_cli_" + name);
  fs::remove_all(d);
  return d;
}

}  // namespace

TEST(Cli, HelpListsVerbs) {
  const Result r = cli("--help");
  EXPECT_EQ(r.status, 0);
  for (const char* verb : {"generate", "run", "report", "refine-study"}) {
    EXPECT_NE(r.out.find(verb), std::string::npos) << verb;
  }
  const Result run = cli("run --help");
  for (const char* flag : {"--config", "--body", "--surface", "--resolution", "--seed", "--check",
                           "--output", "--refine", "--max-iterations"}) {
    EXPECT_NE(run.out.find(flag), std::string::npos) << flag;
  }
}

TEST(Cli, GenerateWritesMesh) {
  const fs::path d = dir("generate");
  const Result r = cli("generate --resolution 300 --output " + d.string());
  EXPECT_EQ(r.status, 0) << r.out;
  EXPECT_TRUE(fs::exists(d / "initial.off"));
  EXPECT_NE(r.out.find("genus 0, boundary loops 1"), std::string::npos) << r.out;
}

TEST(Cli, RunPassesOnEquatorialDisk) {
  const fs::path d = dir("run");
  const Result r = cli("run --body ball:1 --surface equatorial-disk --resolution 600 "
                       "--check theorem1,corollary2,corollary3 --output " + d.string());
  EXPECT_EQ(r.status, 0) << r.out;
  EXPECT_NE(r.out.find("PASS theorem1"), std::string::npos);
  EXPECT_NE(r.out.find("PASS corollary2"), std::string::npos);
  EXPECT_NE(r.out.find("PASS corollary3"), std::string::npos);
  const Result rep = cli("report " + d.string());
  EXPECT_EQ(rep.status, 0) << rep.out;
}

TEST(Cli, NonConvexBodyAbortsBeforeSolving) {
  const fs::path d = dir("ellipsoid");
  const Result r = cli("run --check theorem1 --body ellipsoid:2,1,1 --output " + d.string());
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.out.find("error: NotStrictlyConvex"), std::string::npos) << r.out;
  EXPECT_FALSE(fs::exists(d));
}

TEST(Cli, BadInputExitsTwo) {
  EXPECT_EQ(cli("run --body cube:1 --output " + dir("bad").string()).status, 2);
  EXPECT_EQ(cli("run --resolution 10").status, 2);
  const fs::path empty = dir("empty");
  fs::create_directories(empty);
  const Result r = cli("report " + empty.string());
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.out.find("MissingArtifacts"), std::string::npos);
  EXPECT_NE(cli("frobnicate").status, 0);
}

TEST(Cli, FailingCertificateExitsOne) {
  const fs::path d = dir("fail");
  fs::create_directories(d);
  std::ofstream(d / "certificate_theorem1.json") << R"({
  "checks": [{"bound": 1.0, "kind": "upper", "name": "forced", "residual": -1.0,
              "tolerance": 0.0, "value": 2.0, "verdict": "FAIL"}],
  "diagnostics": {}, "instance": "x", "notes": [], "quantities": {},
  "theorem": "theorem1", "verdict": "FAIL"
})";
  const Result r = cli("report " + d.string());
  EXPECT_EQ(r.status, 1) << r.out;
  EXPECT_NE(r.out.find("! "), std::string::npos) << r.out;
}

TEST(Cli, DeterministicCertificates) {
  const fs::path a = dir("det_a"), b = dir("det_b");
  ASSERT_EQ(cli("run --resolution 500 --seed 5 --output " + a.string()).status, 0);
  ASSERT_EQ(cli("run --resolution 500 --seed 5 --output " + b.string()).status, 0);
  for (const char* f : {"certificate_theorem1.json", "certificate_corollary2.json",
                        "certificate_corollary3.json"}) {
    const std::string x = slurp(a / f);
    EXPECT_FALSE(x.empty()) << f;
    EXPECT_EQ(x, slurp(b / f)) << f;
  }
}

TEST(Cli, SeedPrecedence) {
  const fs::path d = dir("seed");
  fs::create_directories(d);
  const fs::path ini = d / "run.ini";
  std::ofstream(ini) << "[instance]\nresolution = 200\nseed = 7\n[run]\noutput = "
                     << (d / "out").string() << "\nchecks = corollary2\n";
  auto seed_of_run = [&](const std::string& env, const std::string& flags) {
    cli("run --config " + ini.string() + " " + flags, env);
    const std::string text = slurp(d / "out" / "config.ini");
    const auto pos = text.find("seed = ");
    return pos == std::string::npos ? std::string() : text.substr(pos + 7, text.find('\n', pos) - pos - 7);
  };
  EXPECT_EQ(seed_of_run("", ""), "7");
  EXPECT_EQ(seed_of_run("FBMS_SEED=9", ""), "9");
  EXPECT_EQ(seed_of_run("FBMS_SEED=9", "--seed 11"), "11");
}

TEST(Cli, FlagsOverrideConfigFile) {
  const fs::path d = dir("override");
  fs::create_directories(d);
  const fs::path ini = d / "run.ini";
  std::ofstream(ini) << "[instance]\nresolution = 200\nbody = ball:2\n[run]\noutput = "
                     << (d / "out").string() << "\nchecks = corollary2\n";
  ASSERT_EQ(cli("run --config " + ini.string() + " --body ball:1").status, 0);
  EXPECT_NE(slurp(d / "out" / "config.ini").find("body = ball:1"), std::string::npos);
}

TEST(Cli, RefineStudyTable) {
  const fs::path d = dir("refine");
  const Result r = cli("refine-study --resolution 800 --refine 3 --output " + d.string());
  EXPECT_EQ(r.status, 0) << r.out;
  EXPECT_NE(r.out.find("monotone decrease: yes"), std::string::npos) << r.out;
  EXPECT_TRUE(fs::exists(d / "refinement.csv"));
}
