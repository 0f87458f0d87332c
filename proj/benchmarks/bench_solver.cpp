#include "wvhdg/condensation.hpp"
#include "wvhdg/problems.hpp"
#include "wvhdg/time_integrator.hpp"

#include <benchmark/benchmark.h>

using namespace wvhdg;

namespace {

void BM_Assembly(benchmark::State& st) {
  const Mesh mesh = generate_structured_mesh(static_cast<int>(st.range(0)));
  const int p = static_cast<int>(st.range(1));
  for (auto _ : st) {
    Discretization disc(mesh, p);
    benchmark::DoNotOptimize(disc.operators());
  }
  st.counters["elements"] = mesh.num_elements();
}
BENCHMARK(BM_Assembly)->Args({16, 1})->Args({32, 1})->Args({16, 3})->Unit(benchmark::kMillisecond);

void BM_Condensation(benchmark::State& st) {
  const Discretization disc(generate_structured_mesh(static_cast<int>(st.range(0))), static_cast<int>(st.range(1)));
  const SchemeParameters params{100.0, 6e-9, 1e-3, 0.5, 0.25};
  for (auto _ : st) {
    CondensedOperators cond(disc, params);
    benchmark::DoNotOptimize(cond.mu());
  }
  st.counters["facet_dofs"] = disc.layout().n_facet();
}
BENCHMARK(BM_Condensation)->Args({16, 1})->Args({32, 1})->Args({16, 3})->Unit(benchmark::kMillisecond);

void BM_TimeStep(benchmark::State& st) {
  const Discretization disc(generate_structured_mesh(static_cast<int>(st.range(0))), static_cast<int>(st.range(1)));
  const ProblemDefinition prob = manufactured_problem();
  NewmarkConfig cfg;
  cfg.dt = 1e-3;
  const CondensedOperators cond(disc, scheme_parameters(prob, cfg));
  State s = compute_initial_state(prob, cond);
  compute_initial_acceleration(s, prob, cond, cfg);
  int n = 0;
  int iterations = 0;
  for (auto _ : st)
    iterations += advance_step(s, cfg, prob, cond, n++);
  st.counters["iterations_per_step"] = benchmark::Counter(static_cast<double>(iterations) / n);
}
BENCHMARK(BM_TimeStep)->Args({16, 1})->Args({32, 1})->Args({16, 3})->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
