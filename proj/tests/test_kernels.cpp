#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "helpers.hpp"

#include "citecast/errors.hpp"
#include "citecast/kernels.hpp"
#include "citecast/training.hpp"

using namespace citecast;

namespace {

std::vector<GraphEdge> random_graph(std::mt19937_64& rng, std::size_t n, double p) {
  std::bernoulli_distribution coin(p);
  std::vector<GraphEdge> edges;
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < n; ++j) {
      if (i != j && coin(rng)) edges.push_back({i, j});
    }
  }
  return edges;
}

struct ThreadGuard {
  int saved = kernels::thread_count();
  ~ThreadGuard() { kernels::set_thread_count(saved); }
};

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("pagerank CSR layout") {
  std::vector<GraphEdge> edges = {{0, 2}, {1, 2}, {2, 0}};
  auto g = kernels::PagerankGraph::build(3, edges);
  CHECK(g.in_offsets == std::vector<std::size_t>{0, 1, 1, 3});
  CHECK(g.out_degree == std::vector<std::uint32_t>{1, 1, 1});
  CHECK(g.in_sources[0] == 2);
  CHECK_THROWS_AS(kernels::PagerankGraph::build(2, edges), ArgumentError);
}

TEST_CASE("pagerank parallel and serial agree") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t n = std::uniform_int_distribution<std::size_t>(1, 300)(rng);
    auto edges = random_graph(rng, n, 3.0 / static_cast<double>(n));
    auto par = kernels::pagerank_parallel(kernels::PagerankGraph::build(n, edges), PagerankOptions{});
    auto ser = kernels::pagerank_serial(n, edges, PagerankOptions{});
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(par.scores[i] - ser.scores[i]) < 1e-9);
  }
  PagerankOptions bad;
  bad.damping = 1.0;
  CHECK_THROWS_AS(kernels::pagerank_serial(2, {}, bad), ArgumentError);
}

TEST_CASE("pagerank is bit stable across thread counts") {
  ThreadGuard guard;
  std::mt19937_64 rng(22);
  auto edges = random_graph(rng, 500, 0.01);
  auto graph = kernels::PagerankGraph::build(500, edges);
  kernels::set_thread_count(1);
  auto one = kernels::pagerank_parallel(graph, PagerankOptions{});
  kernels::set_thread_count(4);
  auto four = kernels::pagerank_parallel(graph, PagerankOptions{});
  CHECK(one.scores == four.scores);
  CHECK(one.iterations_used == four.iterations_used);
}

TEST_CASE("batch gradient parallel, serial and reference agree") {
  std::mt19937_64 rng(23);
  auto params = testing::random_params(rng, 4, 1, 6, 5, 3);
  std::vector<TrainingExample> examples;
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int i = 0; i < 13; ++i) {
    TrainingExample ex;
    ex.features = testing::random_features(rng, 4, 5, 1);
    ex.target = {u(rng), u(rng), u(rng)};
    examples.push_back(ex);
  }
  std::vector<std::size_t> batch = {3, 7, 0, 12, 5, 5};
  std::vector<double> gp(params.values.size()), gs(params.values.size());
  double lp = kernels::batch_gradient_parallel(params, examples, batch, gp);
  double ls = kernels::batch_gradient_serial(params, examples, batch, gs);
  CHECK(lp == doctest::Approx(ls).epsilon(1e-13));
  std::vector<TrainingExample> picked;
  for (auto i : batch) picked.push_back(examples[i]);
  auto ref = gradients(params, picked);
  CHECK(lp / (6.0 * 3.0) == doctest::Approx(loss(params, picked)).epsilon(1e-13));
  for (std::size_t i = 0; i < gp.size(); ++i) {
    CHECK(gp[i] == doctest::Approx(gs[i]).epsilon(1e-12).scale(1e-12));
    CHECK(gp[i] == ref.values[i]);
  }

  ThreadGuard guard;
  kernels::set_thread_count(1);
  std::vector<double> g1(gp.size());
  kernels::batch_gradient_parallel(params, examples, batch, g1);
  kernels::set_thread_count(3);
  std::vector<double> g3(gp.size());
  kernels::batch_gradient_parallel(params, examples, batch, g3);
  CHECK(g1 == g3);

  std::vector<std::size_t> out_of_range = {20};
  CHECK_THROWS_AS(kernels::batch_gradient_serial(params, examples, out_of_range, gs), ArgumentError);
  CHECK_THROWS_AS(kernels::batch_gradient_parallel(params, examples, {}, gs), ArgumentError);
}

TEST_CASE("training result does not depend on the thread count") {
  ThreadGuard guard;
  std::mt19937_64 rng(24);
  std::vector<TrainingExample> examples;
  for (int i = 0; i < 30; ++i) {
    TrainingExample ex;
    ex.features = testing::random_features(rng, 3, 4, 1);
    ex.target = {1.0, 0.5};
    examples.push_back(ex);
  }
  NetworkConfig net;
  net.per_paper_units = 6;
  net.hidden_units = 5;
  net.output_units = 2;
  TrainingConfig t;
  t.epochs = 5;
  t.batch_size = 8;
  kernels::set_thread_count(1);
  auto a = train(examples, net, t);
  kernels::set_thread_count(4);
  auto b = train(examples, net, t);
  CHECK(a.params == b.params);
}

}
