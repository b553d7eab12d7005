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

// freebound: instance generation, pipeline runs, reports and refinement
// studies. Every option maps onto a config-file key; precedence is
// defaults < --config file < FBMS_SEED < command-line flags.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "freebound/config.hpp"
#include "freebound/error.hpp"
#include "freebound/instances.hpp"
#include "freebound/off_io.hpp"
#include "freebound/pipeline.hpp"

namespace fb = freebound;

namespace {

struct Flag {
  const char* name;
  const char* key;
  const char* help;
};

const std::vector<Flag> kInstanceFlags = {
    {"--body", "instance.body", "ball:r[@x,y,z] | ellipsoid:a,b,c | perturbed-ball:r,eps,k"},
    {"--surface", "instance.surface",
     "equatorial-disk | tilted-disk:deg | spherical-cap:t | mesh:file.off"},
    {"--resolution", "instance.resolution", "target vertex count (>= 50)"},
    {"--perturbation", "instance.perturbation", "interior noise relative to the mesh size"},
    {"--volume", "instance.volume", "CMC volume target (default: initial volume)"},
    {"--seed", "instance.seed", "random seed"},
};

const std::vector<Flag> kSolverFlags = {
    {"--max-iterations", "solver.max_iterations", "descent iteration budget"},
    {"--gradient-tolerance", "solver.gradient_tolerance", "stopping tolerance"},
    {"--projection-tolerance", "solver.projection_tolerance", "boundary projection tolerance"},
    {"--armijo", "solver.armijo", "sufficient decrease constant"},
    {"--backtrack", "solver.backtrack", "step reduction factor"},
    {"--max-backtracks", "solver.max_backtracks", "line search budget"},
    {"--initial-step", "solver.initial_step", "first trial step"},
    {"--smoothing-interval", "solver.smoothing_interval", "accepted steps between smoothing"},
    {"--stall-tolerance", "solver.stall_tolerance", "accept a stalled descent below this"},
    {"--stall-window", "solver.stall_window", "iterations without progress before stalling"},
    {"--multiplier-tolerance", "solver.multiplier_tolerance", "minimal surfaces: |H| target"},
    {"--max-target-updates", "solver.max_target_updates", "minimal surfaces: volume updates"},
};

const std::vector<Flag> kRunFlags = {
    {"--check", "run.checks", "theorem1,theorem2,corollary1,corollary2,corollary3"},
    {"--output", "run.output", "artifact directory"},
    {"--refine", "run.refine", "refinement levels (0: none)"},
};

struct Options {
  std::string config_file;
};

void add_flags(CLI::App* app, const std::vector<Flag>& flags,
               std::vector<std::pair<CLI::Option*, const char*>>& bound,
               std::deque<std::string>& storage) {
  for (const Flag& f : flags) {
    storage.emplace_back();
    bound.emplace_back(app->add_option(f.name, storage.back(), f.help), f.key);
  }
}

fb::RunConfig load(const Options& opts,
                   const std::vector<std::pair<CLI::Option*, const char*>>& bound) {
  fb::RunConfig config;
  if (!opts.config_file.empty()) fb::apply_config(config, fb::read_config(opts.config_file));
  if (const char* seed = std::getenv("FBMS_SEED"); seed != nullptr && *seed != '\0') {
    fb::apply_config(config, {{"instance.seed", seed}});
  }
  fb::ConfigMap flags;
  for (const auto& [option, key] : bound) {
    if (option->count() > 0) flags[key] = option->as<std::string>();
  }
  fb::apply_config(config, flags);
  config.validate();
  return config;
}

int cmd_generate(const fb::RunConfig& config) {
  const fb::Instance inst = fb::generate(config);
  std::filesystem::create_directories(config.output);
  const auto path = config.output / "initial.off";
  fb::write_off(path, inst.mesh);
  double psi = 0.0;
  for (int v = 0; v < inst.mesh.num_vertices(); ++v) {
    if (inst.mesh.is_boundary(v)) psi = std::max(psi, std::abs(inst.body.value(inst.mesh.vertex(v))));
  }
  std::cout << inst.descriptor << "\n"
            << "genus " << inst.mesh.genus() << ", boundary loops " << inst.mesh.boundary_count()
            << ", faces " << inst.mesh.num_faces() << "\n"
            << "max |psi| on boundary " << psi << "\n"
            << "wrote " << path.string() << "\n";
  return 0;
}

int cmd_run(const fb::RunConfig& config) {
  const fb::RunOutcome outcome = fb::run(config);
  const auto& r = outcome.result;
  std::cout << "relaxed in " << r.iterations << " iterations, grad " << r.grad_norm
            << (r.stalled ? " (stalled)" : "") << "\n";
  for (const fb::Certificate& c : outcome.certificates) {
    std::cout << (c.pass() ? "PASS " : "FAIL ") << c.theorem;
    for (const fb::Check& check : c.checks) {
      if (!check.pass) std::cout << " [" << check.name << "]";
    }
    std::cout << "\n";
  }
  if (config.refine > 0) {
    std::cout << fb::refine_study(config, config.refine).to_table();
  }
  std::cout << "artifacts in " << config.output.string() << "\n";
  return outcome.pass ? 0 : 1;
}

int cmd_refine(fb::RunConfig config) {
  if (config.refine == 0) config.refine = 3;
  const fb::RefinementStudy study = fb::refine_study(config, config.refine);
  std::filesystem::create_directories(config.output);
  std::ofstream(config.output / "refinement.csv", std::ios::binary) << study.to_csv();
  std::cout << study.to_table();
  return study.monotone ? 0 : 1;
}

int cmd_report(const std::string& dir) {
  const fb::Report rep = fb::report(dir);
  std::cout << rep.to_text();
  return rep.all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"freebound: free boundary minimal and CMC surfaces with length-bound certificates"};
  app.require_subcommand(1);

  Options opts;
  std::vector<std::pair<CLI::Option*, const char*>> bound;
  std::deque<std::string> storage;

  auto* generate = app.add_subcommand("generate", "build the initial mesh and write initial.off");
  auto* run = app.add_subcommand("run", "relax, analyse and certify one instance");
  auto* refine = app.add_subcommand("refine-study", "residual-vs-h table over refinement levels");
  auto* report = app.add_subcommand("report", "summarise the certificates in a directory");

  std::vector<std::vector<std::pair<CLI::Option*, const char*>>> per_command(3);
  CLI::App* configurable[3] = {generate, run, refine};
  for (int i = 0; i < 3; ++i) {
    configurable[i]->add_option("--config", opts.config_file, "key=value config file");
    add_flags(configurable[i], kInstanceFlags, per_command[static_cast<size_t>(i)], storage);
    add_flags(configurable[i], kSolverFlags, per_command[static_cast<size_t>(i)], storage);
    add_flags(configurable[i], kRunFlags, per_command[static_cast<size_t>(i)], storage);
  }
  std::string report_dir;
  report->add_option("dir", report_dir, "artifact directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*report) return cmd_report(report_dir);
    for (int i = 0; i < 3; ++i) {
      if (!*configurable[i]) continue;
      const fb::RunConfig config = load(opts, per_command[static_cast<size_t>(i)]);
      if (i == 0) return cmd_generate(config);
      if (i == 1) return cmd_run(config);
      return cmd_refine(config);
    }
  } catch (const fb::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
