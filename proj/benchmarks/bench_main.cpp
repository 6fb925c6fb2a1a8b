#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>

#include "momentforge/parser.hpp"
#include "momentforge/pipeline.hpp"
#include "momentforge/power_reduction.hpp"

namespace {

using namespace momentforge;

std::string read_program(const std::string& name) {
  std::ifstream in(std::string(MOMENTFORGE_PROGRAMS_DIR) + "/" + name + ".prob");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void BM_parse(benchmark::State& state) {
  std::string src = read_program("running-example");
  for (auto _ : state) {
    benchmark::DoNotOptimize(parse_program(src));
  }
}
BENCHMARK(BM_parse);

void BM_normalize(benchmark::State& state) {
  Program p = parse_program(read_program("running-example"));
  for (auto _ : state) {
    benchmark::DoNotOptimize(normalize(p));
  }
}
BENCHMARK(BM_normalize);

void BM_moment_pipeline_multipath(benchmark::State& state) {
  Program p = parse_program(read_program("running-example"));
  for (auto _ : state) {
    Analysis a = analyze_program(p);
    auto mc = compute_moments(a, {GoalSpec{"z", 1}});
    benchmark::DoNotOptimize(mc);
  }
}
BENCHMARK(BM_moment_pipeline_multipath);

void BM_moment_pipeline_token_ring(benchmark::State& state) {
  Program p = parse_program(read_program("herman3"));
  for (auto _ : state) {
    Analysis a = analyze_program(p);
    auto mc = compute_moments(a, {GoalSpec{"tokens", 3}});
    benchmark::DoNotOptimize(mc);
  }
}
BENCHMARK(BM_moment_pipeline_token_ring);

void BM_power_reduction(benchmark::State& state) {
  std::vector<Scalar> support{Scalar(rat(-2)), Scalar(rat(0)), Scalar(rat(1)),
                              Scalar(rat(3))};
  for (auto _ : state) {
    benchmark::DoNotOptimize(reduce_power(support, 10));
  }
}
BENCHMARK(BM_power_reduction);

}  // namespace

BENCHMARK_MAIN();
