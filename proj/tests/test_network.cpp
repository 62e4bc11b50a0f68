#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"

#include "citecast/errors.hpp"

using namespace citecast;

namespace {

std::vector<TrainingExample> random_batch(std::mt19937_64& rng, std::size_t n, std::size_t channels,
                                          std::size_t columns, std::size_t author_inputs, std::size_t outputs) {
  std::uniform_real_distribution<double> target(0.0, 2.0);
  std::vector<TrainingExample> batch;
  for (std::size_t i = 0; i < n; ++i) {
    TrainingExample ex;
    ex.features = testing::random_features(rng, channels, columns, author_inputs);
    for (std::size_t o = 0; o < outputs; ++o) ex.target.push_back(target(rng));
    batch.push_back(std::move(ex));
  }
  return batch;
}

}  // namespace

TEST_SUITE("network") {

TEST_CASE("init is deterministic, Glorot bounded and has zero biases") {
  NetworkConfig c;
  c.seed = 42;
  auto a = init_params(c, 100, 1);
  auto b = init_params(c, 100, 1);
  CHECK(a == b);
  c.seed = 43;
  CHECK_FALSE(init_params(c, 100, 1) == a);
  const double bound1 = std::sqrt(6.0 / (100 + 70));
  for (double w : a.w1()) CHECK(std::abs(w) <= bound1);
  const double bound2 = std::sqrt(6.0 / (71 + 70));
  for (double w : a.w2()) CHECK(std::abs(w) <= bound2);
  const double bound3 = std::sqrt(6.0 / (70 + 10));
  for (double w : a.w3()) CHECK(std::abs(w) <= bound3);
  for (auto span : {a.b1(), a.b2(), a.b3()}) {
    CHECK(std::all_of(span.begin(), span.end(), [](double v) { return v == 0.0; }));
  }
  CHECK(a.shape.size() == 70 * 100 + 70 + 70 * 71 + 70 + 10 * 70 + 10);
  NetworkConfig bad;
  bad.hidden_units = 0;
  CHECK_THROWS_AS(bad.validate(), ArgumentError);
}

TEST_CASE("zero input and zero params give zero output") {
  NetworkConfig c;
  auto p = init_params(c, 4, 1);
  std::fill(p.values.begin(), p.values.end(), 0.0);
  AuthorFeatures f;
  f.per_paper = Matrix(4, 6);
  f.author_inputs = {0.0};
  CHECK(forward(p, f) == std::vector<double>(10, 0.0));
}

TEST_CASE("hand-computed single unit network") {
  NetworkConfig c;
  c.per_paper_units = 1;
  c.hidden_units = 1;
  c.output_units = 1;
  auto p = init_params(c, 1, 1);
  p.w1()[0] = 0.5;
  p.b1()[0] = 0.1;
  p.w2()[0] = 2.0;   // pooled
  p.w2()[1] = -0.3;  // author input
  p.b2()[0] = 0.2;
  p.w3()[0] = 1.5;
  p.b3()[0] = 0.05;
  AuthorFeatures f;
  f.per_paper = Matrix(1, 2);
  f.per_paper(0, 0) = 1.0;
  f.per_paper(0, 1) = -2.0;
  f.author_inputs = {0.7};
  const double pooled = (std::tanh(0.5 * 1.0 + 0.1) + std::tanh(0.5 * -2.0 + 0.1)) / 2.0;
  const double hidden = std::tanh(2.0 * pooled - 0.3 * 0.7 + 0.2);
  const double out = std::max(0.0, 1.5 * hidden + 0.05);
  auto y = forward(p, f);
  REQUIRE(y.size() == 1);
  CHECK(y[0] == doctest::Approx(out).epsilon(1e-14));
  p.b3()[0] = -5.0;
  CHECK(forward(p, f)[0] == 0.0);
}

TEST_CASE("forward rejects mismatched shapes") {
  std::mt19937_64 rng(1);
  auto p = testing::random_params(rng, 3, 1, 4, 4, 2);
  auto f = testing::random_features(rng, 4, 5, 1);
  CHECK_THROWS_AS(forward(p, f), ArgumentError);
  auto g = testing::random_features(rng, 3, 5, 0);
  CHECK_THROWS_AS(forward(p, g), ArgumentError);
}

TEST_CASE("forward is invariant under column permutations") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    auto p = testing::random_params(rng, 5, 1, 6, 5, 4);
    auto f = testing::random_features(rng, 5, 9, 1);
    auto base = forward(p, f);
    std::vector<std::size_t> perm(9);
    std::iota(perm.begin(), perm.end(), 0);
    for (int k = 0; k < 10; ++k) {
      std::shuffle(perm.begin(), perm.end(), rng);
      AuthorFeatures g = f;
      for (std::size_t r = 0; r < 5; ++r) {
        for (std::size_t c = 0; c < 9; ++c) g.per_paper(r, c) = f.per_paper(r, perm[c]);
      }
      auto y = forward(p, g);
      for (std::size_t o = 0; o < y.size(); ++o) CHECK(std::abs(y[o] - base[o]) <= 1e-12);
    }
  }
}

TEST_CASE("decode and encode") {
  std::vector<double> raw = {5, 0, 1, 0, 0, 0, 0, 0, 0, 0};
  CHECK(decode_prediction(raw) == std::vector<double>{5, 5, 6, 6, 6, 6, 6, 6, 6, 6});
  CHECK(decode_prediction(std::vector<double>(10, 0.0)) == std::vector<double>(10, 0.0));
  std::vector<double> ones(10, 1.0);
  std::vector<double> seq(10);
  std::iota(seq.begin(), seq.end(), 1.0);
  CHECK(decode_prediction(ones) == seq);
  CHECK(encode_targets(seq) == ones);
  CHECK_THROWS_AS(decode_prediction(std::vector<double>{1.0, -0.5}), ContractError);
  CHECK_THROWS_AS(decode_prediction(std::vector<double>{1.0, std::nan("")}), ContractError);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int i = 0; i < 200; ++i) {
    std::vector<double> r(10);
    for (auto& v : r) v = u(rng);
    auto d = decode_prediction(r);
    CHECK(std::is_sorted(d.begin(), d.end()));
    auto back = encode_targets(d);
    for (std::size_t k = 0; k < 10; ++k) CHECK(back[k] == doctest::Approx(r[k]).epsilon(1e-12));
  }
}

TEST_CASE("loss arithmetic") {
  NetworkConfig c;
  c.per_paper_units = 1;
  c.hidden_units = 1;
  auto p = init_params(c, 1, 0);
  std::fill(p.values.begin(), p.values.end(), 0.0);
  p.b3()[0] = 1.0;  // raw output [1, 0, ..., 0]
  TrainingExample ex;
  ex.features.per_paper = Matrix(1, 3);
  ex.target = std::vector<double>(10, 0.0);
  ex.target[0] = 3.0;
  std::vector<TrainingExample> batch = {ex};
  CHECK(loss(p, batch) == doctest::Approx(0.4).epsilon(1e-15));
  ex.target[0] = 1.0;
  batch = {ex};
  CHECK(loss(p, batch) == 0.0);
  auto g = gradients(p, batch);
  CHECK(std::all_of(g.values.begin(), g.values.end(), [](double v) { return v == 0.0; }));
  CHECK_THROWS_AS(loss(p, std::vector<TrainingExample>{}), ArgumentError);
}

TEST_CASE("loss and gradients are batch symmetric") {
  std::mt19937_64 rng(8);
  auto p = testing::random_params(rng, 3, 1, 5, 4, 3);
  auto batch = random_batch(rng, 6, 3, 4, 1, 3);
  const double l = loss(p, batch);
  auto g = gradients(p, batch);
  auto reversed = batch;
  std::reverse(reversed.begin(), reversed.end());
  CHECK(loss(p, reversed) == doctest::Approx(l).epsilon(1e-14));
  auto doubled = batch;
  doubled.insert(doubled.end(), batch.begin(), batch.end());
  CHECK(loss(p, doubled) == doctest::Approx(l).epsilon(1e-14));
  auto g2 = gradients(p, doubled);
  for (std::size_t i = 0; i < g.values.size(); ++i) CHECK(g2.values[i] == doctest::Approx(g.values[i]).epsilon(1e-12));
}

TEST_CASE("analytic gradients match finite differences") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 8; ++trial) {
    const std::size_t channels = 2 + trial % 3;
    const std::size_t inputs = trial % 2;
    auto p = testing::random_params(rng, channels, inputs, 4, 3, 3);
    for (auto& b : p.b3()) b = 0.3;
    auto batch = random_batch(rng, 4, channels, 3 + trial % 2, inputs, 3);
    CHECK(oracle::gradient_check(p, batch) < 1e-4);
  }
}

}
