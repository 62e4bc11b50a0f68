#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "citecast/network.hpp"

namespace citecast::detail {

// Scratch buffers for one author's forward/backward pass.
struct AuthorWorkspace {
  std::vector<double> a1;  // P x M, tanh of the per-paper layer
  std::vector<double> hidden_in;
  std::vector<double> a2;
  std::vector<double> z3;
  std::vector<double> out;
  std::vector<double> dz3;
  std::vector<double> dz2;
  std::vector<double> dpooled;
  std::vector<double> dz1;  // P x M

  void resize(const NetworkShape& shape, std::size_t columns);
};

void check_input_shape(const NetworkShape& shape, const AuthorFeatures& features);

// Fills ws.out with rectified outputs.
void forward_author(const NetworkParams& params, const AuthorFeatures& features, AuthorWorkspace& ws);

// Runs forward, then accumulates `scale` * d(sum of squared errors)/d(params)
// into grad. Returns this author's sum of squared errors.
double accumulate_author_gradient(const NetworkParams& params, const TrainingExample& example, double scale,
                                  AuthorWorkspace& ws, std::span<double> grad);

}  // namespace citecast::detail
