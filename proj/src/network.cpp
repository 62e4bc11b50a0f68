#include "citecast/network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "citecast/errors.hpp"
#include "citecast/kernels.hpp"
#include "network_detail.hpp"

namespace citecast {

namespace detail {

void AuthorWorkspace::resize(const NetworkShape& shape, std::size_t columns) {
  a1.resize(shape.per_paper_units * columns);
  dz1.resize(shape.per_paper_units * columns);
  hidden_in.resize(shape.hidden_inputs());
  a2.resize(shape.hidden_units);
  dz2.resize(shape.hidden_units);
  dpooled.resize(shape.per_paper_units);
  z3.resize(shape.output_units);
  out.resize(shape.output_units);
  dz3.resize(shape.output_units);
}

void check_input_shape(const NetworkShape& shape, const AuthorFeatures& features) {
  if (features.per_paper.rows() != shape.channels || features.author_inputs.size() != shape.author_inputs) {
    throw ArgumentError("feature shape (" + std::to_string(features.per_paper.rows()) + " channels, " +
                        std::to_string(features.author_inputs.size()) + " author inputs) does not match network (" +
                        std::to_string(shape.channels) + ", " + std::to_string(shape.author_inputs) + ")");
  }
  if (features.per_paper.cols() == 0) throw ArgumentError("feature matrix has no paper columns");
}

void forward_author(const NetworkParams& params, const AuthorFeatures& features, AuthorWorkspace& ws) {
  const auto& s = params.shape;
  const std::size_t C = s.channels, P = s.per_paper_units, H = s.hidden_units, O = s.output_units;
  const std::size_t M = features.per_paper.cols();
  const std::size_t K = s.hidden_inputs();
  ws.resize(s, M);
  auto w1 = params.w1();
  auto b1 = params.b1();
  auto x = features.per_paper.data();

  // Per-paper layer: the same weights applied to every column.
  const double inv_m = 1.0 / static_cast<double>(M);
  for (std::size_t p = 0; p < P; ++p) {
    double* z = ws.a1.data() + p * M;
    std::fill(z, z + M, b1[p]);
    for (std::size_t c = 0; c < C; ++c) {
      const double w = w1[p * C + c];
      const double* xc = x.data() + c * M;
      for (std::size_t m = 0; m < M; ++m) z[m] += w * xc[m];
    }
    double pooled = 0.0;
    for (std::size_t m = 0; m < M; ++m) {
      z[m] = std::tanh(z[m]);
      pooled += z[m];
    }
    ws.hidden_in[p] = pooled * inv_m;
  }
  for (std::size_t k = 0; k < s.author_inputs; ++k) ws.hidden_in[P + k] = features.author_inputs[k];

  auto w2 = params.w2();
  auto b2 = params.b2();
  for (std::size_t h = 0; h < H; ++h) {
    double z = b2[h];
    for (std::size_t k = 0; k < K; ++k) z += w2[h * K + k] * ws.hidden_in[k];
    ws.a2[h] = std::tanh(z);
  }

  auto w3 = params.w3();
  auto b3 = params.b3();
  for (std::size_t o = 0; o < O; ++o) {
    double z = b3[o];
    for (std::size_t h = 0; h < H; ++h) z += w3[o * H + h] * ws.a2[h];
    ws.z3[o] = z;
    ws.out[o] = z > 0.0 ? z : 0.0;
  }
}

double accumulate_author_gradient(const NetworkParams& params, const TrainingExample& example, double scale,
                                  AuthorWorkspace& ws, std::span<double> grad) {
  const auto& s = params.shape;
  const std::size_t C = s.channels, P = s.per_paper_units, H = s.hidden_units, O = s.output_units;
  const std::size_t K = s.hidden_inputs();
  if (example.target.size() != O) throw ArgumentError("target length does not match output units");
  forward_author(params, example.features, ws);
  const std::size_t M = example.features.per_paper.cols();

  double sse = 0.0;
  for (std::size_t o = 0; o < O; ++o) {
    double err = ws.out[o] - example.target[o];
    sse += err * err;
    ws.dz3[o] = ws.z3[o] > 0.0 ? 2.0 * err * scale : 0.0;
  }

  double* g = grad.data();
  auto w3 = params.w3();
  std::fill(ws.dz2.begin(), ws.dz2.end(), 0.0);
  for (std::size_t o = 0; o < O; ++o) {
    const double d = ws.dz3[o];
    g[s.b3_offset() + o] += d;
    if (d == 0.0) continue;
    double* gw3 = g + s.w3_offset() + o * H;
    for (std::size_t h = 0; h < H; ++h) {
      gw3[h] += d * ws.a2[h];
      ws.dz2[h] += w3[o * H + h] * d;
    }
  }
  for (std::size_t h = 0; h < H; ++h) ws.dz2[h] *= 1.0 - ws.a2[h] * ws.a2[h];

  auto w2 = params.w2();
  std::fill(ws.dpooled.begin(), ws.dpooled.end(), 0.0);
  for (std::size_t h = 0; h < H; ++h) {
    const double d = ws.dz2[h];
    g[s.b2_offset() + h] += d;
    double* gw2 = g + s.w2_offset() + h * K;
    for (std::size_t k = 0; k < K; ++k) gw2[k] += d * ws.hidden_in[k];
    for (std::size_t p = 0; p < P; ++p) ws.dpooled[p] += w2[h * K + p] * d;
  }

  // Back through the average: every column receives dpooled / M.
  auto x = example.features.per_paper.data();
  const double inv_m = 1.0 / static_cast<double>(M);
  for (std::size_t p = 0; p < P; ++p) {
    const double dp = ws.dpooled[p] * inv_m;
    const double* a = ws.a1.data() + p * M;
    double* dz = ws.dz1.data() + p * M;
    double bias = 0.0;
    for (std::size_t m = 0; m < M; ++m) {
      dz[m] = dp * (1.0 - a[m] * a[m]);
      bias += dz[m];
    }
    g[s.b1_offset() + p] += bias;
    double* gw1 = g + s.w1_offset() + p * C;
    for (std::size_t c = 0; c < C; ++c) {
      const double* xc = x.data() + c * M;
      double acc = 0.0;
      for (std::size_t m = 0; m < M; ++m) acc += dz[m] * xc[m];
      gw1[c] += acc;
    }
  }
  return sse;
}

}  // namespace detail

void NetworkConfig::validate() const {
  if (per_paper_units < 1 || hidden_units < 1 || output_units < 1) {
    throw ArgumentError("network unit counts must be >= 1");
  }
}

NetworkParams init_params(const NetworkConfig& config, std::size_t channels, std::size_t author_inputs) {
  config.validate();
  if (channels < 1) throw ArgumentError("network needs at least one input channel");
  NetworkShape shape{channels, author_inputs, static_cast<std::size_t>(config.per_paper_units),
                     static_cast<std::size_t>(config.hidden_units), static_cast<std::size_t>(config.output_units)};
  NetworkParams params(shape);
  std::mt19937_64 rng(config.seed);
  auto glorot = [&](std::span<double> w, std::size_t fan_in, std::size_t fan_out) {
    double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (double& v : w) v = dist(rng);
  };
  glorot(params.w1(), shape.channels, shape.per_paper_units);
  glorot(params.w2(), shape.hidden_inputs(), shape.hidden_units);
  glorot(params.w3(), shape.hidden_units, shape.output_units);
  return params;
}

std::vector<double> forward(const NetworkParams& params, const AuthorFeatures& features) {
  detail::check_input_shape(params.shape, features);
  detail::AuthorWorkspace ws;
  detail::forward_author(params, features, ws);
  return ws.out;
}

std::vector<double> decode_prediction(std::span<const double> raw) {
  std::vector<double> out;
  out.reserve(raw.size());
  double total = 0.0;
  for (double r : raw) {
    if (!(r >= 0.0)) throw ContractError("raw network output must be nonnegative");
    total += r;
    out.push_back(total);
  }
  return out;
}

std::vector<double> encode_targets(std::span<const double> series) {
  std::vector<double> out(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) {
    out[i] = i == 0 ? series[0] : series[i] - series[i - 1];
    if (out[i] < 0.0) throw ContractError("target series must be nonnegative and nondecreasing");
  }
  return out;
}

namespace {

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return idx;
}

}  // namespace

double loss(const NetworkParams& params, std::span<const TrainingExample> batch) {
  if (batch.empty()) throw ArgumentError("loss needs a nonempty batch");
  double sse = 0.0;
  detail::AuthorWorkspace ws;
  for (const auto& ex : batch) {
    detail::check_input_shape(params.shape, ex.features);
    if (ex.target.size() != params.shape.output_units) throw ArgumentError("target length does not match output units");
    detail::forward_author(params, ex.features, ws);
    for (std::size_t o = 0; o < ws.out.size(); ++o) {
      double e = ws.out[o] - ex.target[o];
      sse += e * e;
    }
  }
  return sse / static_cast<double>(batch.size() * params.shape.output_units);
}

NetworkParams gradients(const NetworkParams& params, std::span<const TrainingExample> batch) {
  if (batch.empty()) throw ArgumentError("gradients need a nonempty batch");
  NetworkParams grad(params.shape);
  auto idx = all_indices(batch.size());
  kernels::batch_gradient_parallel(params, batch, idx, grad.values);
  return grad;
}

}  // namespace citecast
