#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "citecast/features.hpp"

namespace citecast {

// Shared per-paper tanh layer -> average over paper columns -> concatenate
// author inputs -> tanh dense layer -> rectified dense output layer.
struct NetworkConfig {
  int per_paper_units = 70;
  int hidden_units = 70;
  int output_units = 10;
  std::uint64_t seed = 0;

  void validate() const;
};

struct NetworkShape {
  std::size_t channels = 0;
  std::size_t author_inputs = 0;
  std::size_t per_paper_units = 0;
  std::size_t hidden_units = 0;
  std::size_t output_units = 0;

  std::size_t hidden_inputs() const { return per_paper_units + author_inputs; }
  std::size_t w1_offset() const { return 0; }
  std::size_t b1_offset() const { return per_paper_units * channels; }
  std::size_t w2_offset() const { return b1_offset() + per_paper_units; }
  std::size_t b2_offset() const { return w2_offset() + hidden_units * hidden_inputs(); }
  std::size_t w3_offset() const { return b2_offset() + hidden_units; }
  std::size_t b3_offset() const { return w3_offset() + output_units * hidden_units; }
  std::size_t size() const { return b3_offset() + output_units; }

  bool operator==(const NetworkShape&) const = default;
};

// All trainable values in one buffer: W1 (P x C), b1, W2 (H x (P + A)), b2,
// W3 (O x H), b3; matrices row-major. Gradients use the same layout.
struct NetworkParams {
  NetworkShape shape;
  std::vector<double> values;

  NetworkParams() = default;
  explicit NetworkParams(const NetworkShape& s) : shape(s), values(s.size(), 0.0) {}

  std::span<double> w1() { return slice(shape.w1_offset(), shape.b1_offset()); }
  std::span<double> b1() { return slice(shape.b1_offset(), shape.w2_offset()); }
  std::span<double> w2() { return slice(shape.w2_offset(), shape.b2_offset()); }
  std::span<double> b2() { return slice(shape.b2_offset(), shape.w3_offset()); }
  std::span<double> w3() { return slice(shape.w3_offset(), shape.b3_offset()); }
  std::span<double> b3() { return slice(shape.b3_offset(), shape.size()); }
  std::span<const double> w1() const { return slice(shape.w1_offset(), shape.b1_offset()); }
  std::span<const double> b1() const { return slice(shape.b1_offset(), shape.w2_offset()); }
  std::span<const double> w2() const { return slice(shape.w2_offset(), shape.b2_offset()); }
  std::span<const double> b2() const { return slice(shape.b2_offset(), shape.w3_offset()); }
  std::span<const double> w3() const { return slice(shape.w3_offset(), shape.b3_offset()); }
  std::span<const double> b3() const { return slice(shape.b3_offset(), shape.size()); }

  bool operator==(const NetworkParams&) const = default;

 private:
  std::span<double> slice(std::size_t a, std::size_t b) { return {values.data() + a, b - a}; }
  std::span<const double> slice(std::size_t a, std::size_t b) const { return {values.data() + a, b - a}; }
};

// One author's (normalized) inputs and the first-difference encoding of the
// target series.
struct TrainingExample {
  AuthorFeatures features;
  std::vector<double> target;
};

// Glorot-uniform weights, zero biases, drawn from mt19937_64(config.seed).
NetworkParams init_params(const NetworkConfig& config, std::size_t channels, std::size_t author_inputs);

// Raw rectified outputs, one per horizon.
std::vector<double> forward(const NetworkParams& params, const AuthorFeatures& features);

// Running sum of the raw outputs. Negative entries throw ContractError.
std::vector<double> decode_prediction(std::span<const double> raw);
// Inverse of decode_prediction: first value, then successive differences.
std::vector<double> encode_targets(std::span<const double> series);

// Mean over examples and outputs of the squared raw-output error.
double loss(const NetworkParams& params, std::span<const TrainingExample> batch);
// Gradient of loss() with respect to every parameter.
NetworkParams gradients(const NetworkParams& params, std::span<const TrainingExample> batch);

}  // namespace citecast
