#pragma once

// Hot loops in two flavours: an OpenMP version used by the library and a plain
// serial version kept as the reference the tests and benchmarks compare against.
// Parallel versions reduce in a fixed order, so their results do not depend on
// the thread count.

#include <cstddef>
#include <span>
#include <vector>

#include "citecast/metrics.hpp"

namespace citecast {

struct NetworkParams;
struct TrainingExample;

namespace kernels {

// Sets the OpenMP thread count (no-op without OpenMP). 0 keeps the runtime default.
void set_thread_count(int threads);
int thread_count();

// Incoming-edge CSR used by the pagerank kernels.
struct PagerankGraph {
  std::size_t node_count = 0;
  std::vector<std::size_t> in_offsets;
  std::vector<std::uint32_t> in_sources;
  std::vector<std::uint32_t> out_degree;

  static PagerankGraph build(std::size_t node_count, std::span<const GraphEdge> edges);
};

PagerankScores pagerank_parallel(const PagerankGraph& graph, const PagerankOptions& options);
PagerankScores pagerank_serial(std::size_t node_count, std::span<const GraphEdge> edges,
                               const PagerankOptions& options);

// Sum over the batch of squared output errors; `grad` (same layout as
// params.values) receives the gradient of the mean loss over batch and outputs.
double batch_gradient_parallel(const NetworkParams& params, std::span<const TrainingExample> examples,
                               std::span<const std::size_t> batch, std::span<double> grad);
double batch_gradient_serial(const NetworkParams& params, std::span<const TrainingExample> examples,
                             std::span<const std::size_t> batch, std::span<double> grad);

}  // namespace kernels
}  // namespace citecast
