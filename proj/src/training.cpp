#include "citecast/training.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "citecast/errors.hpp"
#include "citecast/kernels.hpp"

namespace citecast {

void TrainingConfig::validate() const {
  if (epochs < 1) throw ArgumentError("epochs must be >= 1");
  if (batch_size < 1) throw ArgumentError("batch_size must be >= 1");
  if (!(learning_rate > 0.0)) throw ArgumentError("learning_rate must be > 0");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw ArgumentError("Adam betas must lie in [0, 1)");
  }
  if (!(epsilon > 0.0)) throw ArgumentError("Adam epsilon must be > 0");
}

void adam_step(NetworkParams& params, std::span<const double> grad, AdamState& state, const TrainingConfig& config) {
  const std::size_t n = params.values.size();
  if (grad.size() != n || state.m.size() != n || state.v.size() != n) {
    throw ArgumentError("Adam step: parameter, gradient and moment sizes differ");
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(config.beta1, t);
  const double correction2 = 1.0 - std::pow(config.beta2, t);
  for (std::size_t i = 0; i < n; ++i) {
    const double g = grad[i];
    state.m[i] = config.beta1 * state.m[i] + (1.0 - config.beta1) * g;
    state.v[i] = config.beta2 * state.v[i] + (1.0 - config.beta2) * g * g;
    const double m_hat = state.m[i] / correction1;
    const double v_hat = state.v[i] / correction2;
    params.values[i] -= config.learning_rate * m_hat / (std::sqrt(v_hat) + config.epsilon);
  }
}

Trainer::Trainer(NetworkParams initial, TrainingConfig config, std::span<const TrainingExample> examples)
    : params_(std::move(initial)),
      config_(config),
      examples_(examples),
      adam_(AdamState::zeros(params_.values.size())),
      grad_(params_.values.size(), 0.0) {
  config_.validate();
  if (examples_.empty()) throw ArgumentError("training set is empty");
}

void Trainer::run_epochs(int count) {
  if (count < 0) throw ArgumentError("epoch count must be nonnegative");
  const std::size_t n = examples_.size();
  const auto batch = static_cast<std::size_t>(config_.batch_size);
  std::vector<std::size_t> order(n);
  for (int e = 0; e < count; ++e) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::seed_seq seq{static_cast<std::uint32_t>(config_.shuffle_seed),
                      static_cast<std::uint32_t>(config_.shuffle_seed >> 32), static_cast<std::uint32_t>(epoch_)};
    std::mt19937_64 rng(seq);
    std::shuffle(order.begin(), order.end(), rng);

    double sse = 0.0;
    std::size_t batch_no = 0;
    for (std::size_t start = 0; start < n; start += batch, ++batch_no) {
      std::span<const std::size_t> ids(order.data() + start, std::min(batch, n - start));
      double batch_sse = kernels::batch_gradient_parallel(params_, examples_, ids, grad_);
      if (!std::isfinite(batch_sse)) {
        throw TrainingError("non-finite loss at epoch " + std::to_string(epoch_ + 1) + ", batch " +
                            std::to_string(batch_no + 1));
      }
      sse += batch_sse;
      adam_step(params_, grad_, adam_, config_);
    }
    ++epoch_;
    trace_.push_back(sse / static_cast<double>(n * params_.shape.output_units));
  }
}

TrainResult train(std::span<const TrainingExample> examples, const NetworkConfig& network,
                  const TrainingConfig& training) {
  if (examples.empty()) throw ArgumentError("training set is empty");
  const auto& first = examples.front().features;
  Trainer trainer(init_params(network, first.per_paper.rows(), first.author_inputs.size()), training, examples);
  trainer.run_epochs(training.epochs);
  return {trainer.params(), trainer.loss_trace()};
}

TrainResult train(std::span<const TrainingExample> raw_examples, const NetworkConfig& network,
                  const TrainingConfig& training, const NormalizationStats& normalizer) {
  auto normalized = normalize_examples(raw_examples, normalizer);
  return train(normalized, network, training);
}

std::vector<TrainingExample> normalize_examples(std::span<const TrainingExample> raw,
                                                const NormalizationStats& normalizer) {
  std::vector<TrainingExample> out;
  out.reserve(raw.size());
  for (const auto& ex : raw) out.push_back({apply_normalizer(ex.features, normalizer), ex.target});
  return out;
}

std::vector<double> predict(const NetworkParams& params, const AuthorFeatures& raw_features,
                            const NormalizationStats& normalizer) {
  return decode_prediction(forward(params, apply_normalizer(raw_features, normalizer)));
}

}  // namespace citecast
