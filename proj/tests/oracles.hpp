#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "citecast/metrics.hpp"
#include "citecast/network.hpp"

namespace oracle {

// Tries every h from the top down.
inline int h_index(const std::vector<int>& counts) {
  for (int h = static_cast<int>(counts.size()); h > 0; --h) {
    int at_least = 0;
    for (int c : counts) at_least += c >= h ? 1 : 0;
    if (at_least >= h) return h;
  }
  return 0;
}

// Dense power iteration on the Google matrix.
inline std::vector<double> pagerank(std::size_t n, const std::vector<citecast::GraphEdge>& edges, double d,
                                    int iterations) {
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
  std::vector<int> out(n, 0);
  for (const auto& e : edges) ++out[e.from];
  for (const auto& e : edges) m[e.to][e.from] += 1.0 / out[e.from];
  for (std::size_t j = 0; j < n; ++j) {
    if (out[j] == 0) {
      for (std::size_t i = 0; i < n; ++i) m[i][j] = 1.0 / static_cast<double>(n);
    }
  }
  std::vector<double> p(n, 1.0 / static_cast<double>(n));
  for (int it = 0; it < iterations; ++it) {
    std::vector<double> next(n, (1.0 - d) / static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) next[i] += d * m[i][j] * p[j];
    }
    p = next;
  }
  return p;
}

// Largest relative disagreement between gradients() and central differences
// of loss(). Coordinates where both sides are below `floor` in magnitude are
// compared against the floor instead.
inline double gradient_check(const citecast::NetworkParams& params,
                             std::span<const citecast::TrainingExample> batch, double step = 1e-5,
                             double floor = 1e-7) {
  auto analytic = citecast::gradients(params, batch);
  auto probe = params;
  double worst = 0.0;
  for (std::size_t i = 0; i < params.values.size(); ++i) {
    const double x = params.values[i];
    probe.values[i] = x + step;
    const double up = citecast::loss(probe, batch);
    probe.values[i] = x - step;
    const double down = citecast::loss(probe, batch);
    probe.values[i] = x;
    const double numeric = (up - down) / (2.0 * step);
    const double a = analytic.values[i];
    const double scale = std::max({std::abs(a), std::abs(numeric), floor});
    worst = std::max(worst, std::abs(a - numeric) / scale);
  }
  return worst;
}

}  // namespace oracle
