// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include <numeric>
#include <random>

#include "citecast/kernels.hpp"
#include "citecast/network.hpp"

using namespace citecast;

namespace {

std::vector<GraphEdge> random_graph(std::size_t n, std::size_t degree) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::uint32_t> node(0, static_cast<std::uint32_t>(n - 1));
  std::vector<GraphEdge> edges;
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < degree; ++k) {
      auto j = node(rng);
      if (j != i) edges.push_back({i, j});
    }
  }
  return edges;
}

struct NetworkFixture {
  NetworkParams params;
  std::vector<TrainingExample> examples;
  std::vector<std::size_t> batch;

  explicit NetworkFixture(std::size_t batch_size) {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> normal(0.0, 1.0);
    NetworkConfig config;
    config.seed = 3;
    params = init_params(config, 20, 1);
    for (std::size_t i = 0; i < batch_size; ++i) {
      TrainingExample ex;
      ex.features.per_paper = Matrix(20, 60);
      for (auto& v : ex.features.per_paper.data()) v = normal(rng);
      ex.features.author_inputs = {normal(rng)};
      ex.target.assign(10, 0.5);
      examples.push_back(std::move(ex));
    }
    batch.resize(batch_size);
    std::iota(batch.begin(), batch.end(), std::size_t{0});
  }
};

void BM_PagerankSerial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto edges = random_graph(n, 8);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::pagerank_serial(n, edges, PagerankOptions{}));
}

void BM_PagerankParallel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto graph = kernels::PagerankGraph::build(n, random_graph(n, 8));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::pagerank_parallel(graph, PagerankOptions{}));
}

void BM_BatchGradientSerial(benchmark::State& state) {
  NetworkFixture f(static_cast<std::size_t>(state.range(0)));
  std::vector<double> grad(f.params.values.size());
  for (auto _ : state) benchmark::DoNotOptimize(kernels::batch_gradient_serial(f.params, f.examples, f.batch, grad));
}

void BM_BatchGradientParallel(benchmark::State& state) {
  NetworkFixture f(static_cast<std::size_t>(state.range(0)));
  std::vector<double> grad(f.params.values.size());
  for (auto _ : state) benchmark::DoNotOptimize(kernels::batch_gradient_parallel(f.params, f.examples, f.batch, grad));
}

}  // namespace

BENCHMARK(BM_PagerankSerial)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PagerankParallel)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BatchGradientSerial)->Arg(50)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BatchGradientParallel)->Arg(50)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
