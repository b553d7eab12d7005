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

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "freebound/curvature.hpp"
#include "freebound/diskmap.hpp"
#include "freebound/enclosing_ball.hpp"
#include "freebound/fbms.hpp"
#include "freebound/instances.hpp"
#include "freebound/spectral.hpp"
#include "freebound/verify.hpp"

using namespace freebound;

namespace {

const ConvexBody& unit_ball() {
  static const ConvexBody b = ConvexBody::ball(1.0);
  return b;
}

SolveResult relaxed(int rings) {
  return relax_minimal(perturb_interior(body_disk(unit_ball(), rings), 2e-3, 42), unit_ball(), {});
}

void BM_Stiffness(benchmark::State& state) {
  const SurfaceMesh m = ring_disk(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(cotan_stiffness(m));
  state.counters["vertices"] = m.num_vertices();
}
BENCHMARK(BM_Stiffness)->Arg(20)->Arg(57);

void BM_Curvatures(benchmark::State& state) {
  const SurfaceMesh m = spherical_cap(0.5, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(discrete_curvatures(m));
  state.counters["vertices"] = m.num_vertices();
}
BENCHMARK(BM_Curvatures)->Arg(20)->Arg(57);

void BM_RelaxMinimal(benchmark::State& state) {
  const int rings = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(relaxed(rings));
}
BENCHMARK(BM_RelaxMinimal)->Arg(20)->Arg(57)->Unit(benchmark::kMillisecond);

void BM_RelaxCmcCap(benchmark::State& state) {
  const SurfaceMesh cap = spherical_cap(0.5, static_cast<int>(state.range(0)));
  SolverConfig cfg;
  cfg.volume_target = enclosed_volume(cap, unit_ball());
  const SurfaceMesh start = perturb_interior(cap, 2e-3, 42);
  for (auto _ : state) benchmark::DoNotOptimize(relax_cmc(start, unit_ball(), cfg));
}
BENCHMARK(BM_RelaxCmcCap)->Arg(20)->Arg(57)->Unit(benchmark::kMillisecond);

void BM_MorseIndex(benchmark::State& state) {
  const SolveResult r = relaxed(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(analyze_index(r.mesh, unit_ball()));
}
BENCHMARK(BM_MorseIndex)->Arg(20)->Arg(57)->Unit(benchmark::kMillisecond);

void BM_Steklov(benchmark::State& state) {
  const SurfaceMesh m = ring_disk(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(steklov_spectrum(m, 6));
}
BENCHMARK(BM_Steklov)->Arg(20)->Arg(57)->Unit(benchmark::kMillisecond);

void BM_Theorem1(benchmark::State& state) {
  const SolveResult r = relaxed(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(check_theorem1(r, unit_ball()));
}
BENCHMARK(BM_Theorem1)->Arg(20)->Arg(57)->Unit(benchmark::kMillisecond);

void BM_Welzl(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Vec3> pts(static_cast<size_t>(state.range(0)));
  for (Vec3& p : pts) p = Vec3(g(rng), g(rng), g(rng));
  for (auto _ : state) benchmark::DoNotOptimize(enclosing_ball(pts));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Welzl)->RangeMultiplier(10)->Range(100, 100000)->Complexity(benchmark::oN);

void BM_Balance(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int n = static_cast<int>(state.range(0));
  std::vector<Complex> z(static_cast<size_t>(n));
  std::vector<double> w(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    z[i] = std::polar(std::sqrt(u(rng)), 2.0 * kPi * u(rng)) * 0.5 + Complex(0.3, 0.0);
    w[i] = u(rng);
  }
  for (auto _ : state) benchmark::DoNotOptimize(balance(z, w));
}
BENCHMARK(BM_Balance)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
