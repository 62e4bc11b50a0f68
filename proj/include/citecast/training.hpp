#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "citecast/features.hpp"
#include "citecast/network.hpp"

namespace citecast {

struct TrainingConfig {
  int epochs = 150;
  int batch_size = 50;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t shuffle_seed = 0;

  void validate() const;
};

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::int64_t step = 0;

  static AdamState zeros(std::size_t size) { return {std::vector<double>(size, 0.0), std::vector<double>(size, 0.0), 0}; }
  bool operator==(const AdamState&) const = default;
};

// Bias-corrected Adam update, in place.
void adam_step(NetworkParams& params, std::span<const double> grad, AdamState& state, const TrainingConfig& config);

// Mini-batch Adam over a fixed example set. Each epoch is shuffled with a
// generator seeded from (shuffle_seed, epoch), so training for 150 epochs and
// then 10 more gives the same parameters as training for 160.
class Trainer {
 public:
  // `examples` must outlive the trainer.
  Trainer(NetworkParams initial, TrainingConfig config, std::span<const TrainingExample> examples);

  // Throws TrainingError on a non-finite batch loss.
  void run_epochs(int count);

  int epochs_completed() const noexcept { return epoch_; }
  const NetworkParams& params() const noexcept { return params_; }
  const AdamState& adam_state() const noexcept { return adam_; }
  // Mean training loss of each completed epoch, measured on the batches as they
  // were visited.
  const std::vector<double>& loss_trace() const noexcept { return trace_; }

 private:
  NetworkParams params_;
  TrainingConfig config_;
  std::span<const TrainingExample> examples_;
  AdamState adam_;
  std::vector<double> grad_;
  std::vector<double> trace_;
  int epoch_ = 0;
};

struct TrainResult {
  NetworkParams params;
  std::vector<double> loss_trace;
};

// Trains on already normalized examples.
TrainResult train(std::span<const TrainingExample> examples, const NetworkConfig& network,
                  const TrainingConfig& training);
// Normalizes raw examples with `normalizer`, then trains.
TrainResult train(std::span<const TrainingExample> raw_examples, const NetworkConfig& network,
                  const TrainingConfig& training, const NormalizationStats& normalizer);

std::vector<TrainingExample> normalize_examples(std::span<const TrainingExample> raw,
                                                const NormalizationStats& normalizer);

// Monotone forecast series for one author from raw (unnormalized) features.
std::vector<double> predict(const NetworkParams& params, const AuthorFeatures& raw_features,
                            const NormalizationStats& normalizer);

}  // namespace citecast
