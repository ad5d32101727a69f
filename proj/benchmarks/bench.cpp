#include <benchmark/benchmark.h>

#include "kripkesec/report.hpp"

using namespace kripkesec;

namespace {

const char* kRow = "var u, s, h in {0,1}; var p in {0}\n(if u = 1 then p := s); if s and h then loop";

std::pair<Program, SecurityContext> row_six() {
  Program p = parse_program(kRow);
  SecurityContext ctx = bind_policy(figure1_policy(), p);
  return {std::move(p), std::move(ctx)};
}

void BM_BuildFrame(benchmark::State& state) {
  auto [p, ctx] = row_six();
  for (auto _ : state) benchmark::DoNotOptimize(build_frame(p, ctx));
}
BENCHMARK(BM_BuildFrame);

void BM_CheckRunset(benchmark::State& state) {
  auto [p, ctx] = row_six();
  SecurityFrame f = build_frame(p, ctx);
  CheckOptions opt;
  opt.mode = SearchMode::runset(static_cast<unsigned>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(check(f, PropertyId::kTiRd, {}, opt));
}
BENCHMARK(BM_CheckRunset)->DenseRange(0, 3);

void BM_CheckExhaustive(benchmark::State& state) {
  Program p = parse_program("var u, s in {0,1}; var p in {0}\nif u = 1 then p := s");
  SecurityFrame f = build_frame(p, bind_policy(figure1_policy(), p));
  CheckOptions opt;
  opt.mode = SearchMode::exhaustive();
  for (auto _ : state) benchmark::DoNotOptimize(check(f, PropertyId::kRd, {}, opt));
}
BENCHMARK(BM_CheckExhaustive);

void BM_Figure1(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(figure1(false));
}
BENCHMARK(BM_Figure1)->Unit(benchmark::kMillisecond);

void BM_TraceOracle(benchmark::State& state) {
  auto [p, ctx] = row_six();
  for (auto _ : state) benchmark::DoNotOptimize(trace_check(p, ctx, TraceId::kTraceRd));
}
BENCHMARK(BM_TraceOracle);

void BM_Differential(benchmark::State& state) {
  std::uint64_t seed = 0;
  for (auto _ : state) {
    Generated g = gen_program(seed++ % 200);
    benchmark::DoNotOptimize(differential(g.program, g.ctx));
  }
}
BENCHMARK(BM_Differential)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
