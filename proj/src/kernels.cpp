#include "citecast/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "citecast/errors.hpp"
#include "citecast/network.hpp"
#include "network_detail.hpp"

namespace citecast::kernels {

void set_thread_count(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

// --- pagerank -------------------------------------------------------------------

namespace {

void check_graph(std::size_t node_count, std::span<const GraphEdge> edges) {
  if (node_count == 0) throw ArgumentError("pagerank needs a nonempty node set");
  for (const auto& e : edges) {
    if (e.from >= node_count || e.to >= node_count) throw ArgumentError("pagerank edge endpoint out of range");
  }
}

void check_options(const PagerankOptions& o) {
  if (!(o.damping > 0.0 && o.damping < 1.0)) throw ArgumentError("damping must lie in (0, 1)");
  if (!(o.tolerance > 0.0) || o.max_iterations < 1) throw ArgumentError("invalid pagerank tolerance or iteration cap");
}

}  // namespace

PagerankGraph PagerankGraph::build(std::size_t node_count, std::span<const GraphEdge> edges) {
  check_graph(node_count, edges);
  PagerankGraph g;
  g.node_count = node_count;
  g.out_degree.assign(node_count, 0);
  g.in_offsets.assign(node_count + 1, 0);
  for (const auto& e : edges) {
    ++g.out_degree[e.from];
    ++g.in_offsets[e.to + 1];
  }
  std::partial_sum(g.in_offsets.begin(), g.in_offsets.end(), g.in_offsets.begin());
  g.in_sources.resize(edges.size());
  auto cursor = g.in_offsets;
  for (const auto& e : edges) g.in_sources[cursor[e.to]++] = e.from;
  for (std::size_t v = 0; v < node_count; ++v) {
    std::sort(g.in_sources.begin() + static_cast<std::ptrdiff_t>(g.in_offsets[v]),
              g.in_sources.begin() + static_cast<std::ptrdiff_t>(g.in_offsets[v + 1]));
  }
  return g;
}

PagerankScores pagerank_parallel(const PagerankGraph& graph, const PagerankOptions& options) {
  check_options(options);
  const std::size_t n = graph.node_count;
  if (n == 0) throw ArgumentError("pagerank needs a nonempty node set");
  const double d = options.damping;
  const double inv_n = 1.0 / static_cast<double>(n);
  std::vector<double> rank(n, inv_n), next(n), share(n);
  double residual = 0.0;
  for (int it = 1; it <= options.max_iterations; ++it) {
    double dangling = 0.0;
    for (std::size_t u = 0; u < n; ++u) {
      if (graph.out_degree[u] == 0) {
        dangling += rank[u];
        share[u] = 0.0;
      } else {
        share[u] = rank[u] / graph.out_degree[u];
      }
    }
    const double base = (1.0 - d) * inv_n + d * dangling * inv_n;
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t v = 0; v < count; ++v) {
      double acc = 0.0;
      for (std::size_t k = graph.in_offsets[v]; k < graph.in_offsets[v + 1]; ++k) acc += share[graph.in_sources[k]];
      next[static_cast<std::size_t>(v)] = base + d * acc;
    }
    residual = 0.0;
    for (std::size_t v = 0; v < n; ++v) residual += std::abs(next[v] - rank[v]);
    rank.swap(next);
    if (residual < options.tolerance) return {std::move(rank), d, it, residual};
  }
  throw ConvergenceError("pagerank did not converge in " + std::to_string(options.max_iterations) + " iterations",
                         residual);
}

PagerankScores pagerank_serial(std::size_t node_count, std::span<const GraphEdge> edges,
                               const PagerankOptions& options) {
  check_graph(node_count, edges);
  check_options(options);
  const std::size_t n = node_count;
  const double d = options.damping;
  std::vector<std::size_t> out_degree(n, 0);
  for (const auto& e : edges) ++out_degree[e.from];
  std::vector<double> rank(n, 1.0 / static_cast<double>(n)), next(n);
  double residual = 0.0;
  for (int it = 1; it <= options.max_iterations; ++it) {
    std::fill(next.begin(), next.end(), (1.0 - d) / static_cast<double>(n));
    double dangling = 0.0;
    for (std::size_t u = 0; u < n; ++u) {
      if (out_degree[u] == 0) dangling += rank[u];
    }
    for (const auto& e : edges) next[e.to] += d * rank[e.from] / static_cast<double>(out_degree[e.from]);
    for (auto& v : next) v += d * dangling / static_cast<double>(n);
    residual = 0.0;
    for (std::size_t v = 0; v < n; ++v) residual += std::abs(next[v] - rank[v]);
    rank.swap(next);
    if (residual < options.tolerance) return {std::move(rank), d, it, residual};
  }
  throw ConvergenceError("pagerank did not converge in " + std::to_string(options.max_iterations) + " iterations",
                         residual);
}

// --- network batch gradient -----------------------------------------------------

namespace {

void check_batch(const NetworkParams& params, std::span<const TrainingExample> examples,
                 std::span<const std::size_t> batch, std::span<double> grad) {
  if (batch.empty()) throw ArgumentError("empty batch");
  if (grad.size() != params.values.size()) throw ArgumentError("gradient buffer has wrong size");
  for (auto i : batch) {
    if (i >= examples.size()) throw ArgumentError("batch index out of range");
    detail::check_input_shape(params.shape, examples[i].features);
    if (examples[i].target.size() != params.shape.output_units) {
      throw ArgumentError("target length does not match output units");
    }
  }
}

}  // namespace

double batch_gradient_parallel(const NetworkParams& params, std::span<const TrainingExample> examples,
                               std::span<const std::size_t> batch, std::span<double> grad) {
  check_batch(params, examples, batch, grad);
  const std::size_t b = batch.size();
  const std::size_t n = grad.size();
  const double scale = 1.0 / static_cast<double>(b * params.shape.output_units);
  std::vector<double> per_author(b * n, 0.0);
  std::vector<double> sse(b, 0.0);
  const auto count = static_cast<std::ptrdiff_t>(b);

#pragma omp parallel
  {
    detail::AuthorWorkspace ws;
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
      auto k = static_cast<std::size_t>(i);
      sse[k] = detail::accumulate_author_gradient(params, examples[batch[k]], scale, ws,
                                                  std::span<double>(per_author.data() + k * n, n));
    }
  }

  // Reduce in batch order for every coordinate.
  const auto params_count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < params_count; ++j) {
    double acc = 0.0;
    for (std::size_t k = 0; k < b; ++k) acc += per_author[k * n + static_cast<std::size_t>(j)];
    grad[static_cast<std::size_t>(j)] = acc;
  }
  double total = 0.0;
  for (double s : sse) total += s;
  return total;
}

double batch_gradient_serial(const NetworkParams& params, std::span<const TrainingExample> examples,
                             std::span<const std::size_t> batch, std::span<double> grad) {
  check_batch(params, examples, batch, grad);
  const auto& s = params.shape;
  const std::size_t C = s.channels, P = s.per_paper_units, H = s.hidden_units, O = s.output_units;
  const std::size_t K = s.hidden_inputs();
  const double scale = 1.0 / static_cast<double>(batch.size() * O);
  std::fill(grad.begin(), grad.end(), 0.0);
  const auto& v = params.values;
  auto W1 = [&](std::size_t p, std::size_t c) { return v[s.w1_offset() + p * C + c]; };
  auto W2 = [&](std::size_t h, std::size_t k) { return v[s.w2_offset() + h * K + k]; };
  auto W3 = [&](std::size_t o, std::size_t h) { return v[s.w3_offset() + o * H + h]; };

  double total = 0.0;
  for (auto idx : batch) {
    const auto& ex = examples[idx];
    const auto& x = ex.features.per_paper;
    const std::size_t M = x.cols();

    std::vector<double> a1(P * M);
    std::vector<double> in(K, 0.0);
    for (std::size_t m = 0; m < M; ++m) {
      for (std::size_t p = 0; p < P; ++p) {
        double z = v[s.b1_offset() + p];
        for (std::size_t c = 0; c < C; ++c) z += W1(p, c) * x(c, m);
        a1[p * M + m] = std::tanh(z);
        in[p] += a1[p * M + m] / static_cast<double>(M);
      }
    }
    for (std::size_t k = 0; k < s.author_inputs; ++k) in[P + k] = ex.features.author_inputs[k];

    std::vector<double> a2(H);
    for (std::size_t h = 0; h < H; ++h) {
      double z = v[s.b2_offset() + h];
      for (std::size_t k = 0; k < K; ++k) z += W2(h, k) * in[k];
      a2[h] = std::tanh(z);
    }
    std::vector<double> dz3(O);
    for (std::size_t o = 0; o < O; ++o) {
      double z = v[s.b3_offset() + o];
      for (std::size_t h = 0; h < H; ++h) z += W3(o, h) * a2[h];
      double out = std::max(z, 0.0);
      double err = out - ex.target[o];
      total += err * err;
      dz3[o] = z > 0.0 ? 2.0 * err * scale : 0.0;
    }

    std::vector<double> dz2(H, 0.0);
    for (std::size_t o = 0; o < O; ++o) {
      grad[s.b3_offset() + o] += dz3[o];
      for (std::size_t h = 0; h < H; ++h) {
        grad[s.w3_offset() + o * H + h] += dz3[o] * a2[h];
        dz2[h] += W3(o, h) * dz3[o];
      }
    }
    std::vector<double> din(K, 0.0);
    for (std::size_t h = 0; h < H; ++h) {
      dz2[h] *= 1.0 - a2[h] * a2[h];
      grad[s.b2_offset() + h] += dz2[h];
      for (std::size_t k = 0; k < K; ++k) {
        grad[s.w2_offset() + h * K + k] += dz2[h] * in[k];
        din[k] += W2(h, k) * dz2[h];
      }
    }
    for (std::size_t m = 0; m < M; ++m) {
      for (std::size_t p = 0; p < P; ++p) {
        double a = a1[p * M + m];
        double dz = din[p] / static_cast<double>(M) * (1.0 - a * a);
        grad[s.b1_offset() + p] += dz;
        for (std::size_t c = 0; c < C; ++c) grad[s.w1_offset() + p * C + c] += dz * x(c, m);
      }
    }
  }
  return total;
}

}  // namespace citecast::kernels
