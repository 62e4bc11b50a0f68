#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "citecast/baselines.hpp"
#include "citecast/dataset.hpp"
#include "citecast/elastic_net.hpp"
#include "citecast/matrix.hpp"
#include "citecast/network.hpp"
#include "citecast/training.hpp"

namespace citecast {

// Sample Pearson correlation. Throws UndefinedCorrelationError when either side
// has zero variance.
double pearson_r(std::span<const double> predictions, std::span<const double> actuals);
// 1 - SS_res / SS_tot. Throws UndefinedCorrelationError when the actuals are constant.
double r_squared(std::span<const double> predictions, std::span<const double> actuals);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // population
};
MeanStd mean_std(std::span<const double> values);

enum class PredictorKind { kNetwork, kNaive, kElasticNet };
std::string predictor_name(PredictorKind kind);
PredictorKind parse_predictor(std::string_view name);

struct CrossValidationConfig {
  int rounds = 20;
  std::size_t train_count = 0;  // 0: the same training share as 28000 of 39412
  NetworkConfig network;
  TrainingConfig training;
  std::vector<PredictorKind> predictors = {PredictorKind::kNetwork, PredictorKind::kNaive,
                                           PredictorKind::kElasticNet};
  ElasticNetOptions elastic_net;
  std::uint64_t master_seed = 1;

  void validate() const;
  std::size_t resolved_train_count(std::size_t cohort_size) const;
};

struct PredictorReport {
  PredictorKind kind = PredictorKind::kNetwork;
  std::vector<std::vector<double>> r2;  // [round][horizon]
  std::vector<double> r_final;          // [round], at the last horizon
  std::vector<MeanStd> r2_summary;      // [horizon]
  MeanStd r_summary;
};

// Validation-set predictions of one round, kept for the figures.
struct RoundPredictions {
  std::vector<std::size_t> authors;  // indices into the dataset, ascending
  std::vector<std::vector<std::vector<double>>> series;  // [predictor][author][horizon]
};

struct EvaluationReport {
  Task task = Task::kCumulativeH;
  int rounds = 0;
  int horizons = 0;
  std::size_t train_count = 0;
  std::size_t validation_count = 0;
  std::vector<std::uint64_t> round_seeds;
  std::vector<PredictorReport> predictors;
  RoundPredictions first_round;
  std::string fingerprint;  // hex FNV-1a over configuration, seeds and trained weights

  const PredictorReport& predictor(PredictorKind kind) const;
};

// Seed of round `round`; every random choice in the round derives from it.
std::uint64_t round_seed(std::uint64_t master_seed, int round);

EvaluationReport run_cross_validation(const Dataset& dataset, const CrossValidationConfig& config);

struct EpochStudyReport {
  std::vector<int> checkpoints;
  std::vector<std::vector<std::vector<double>>> r2;  // [checkpoint][round][horizon]
  std::vector<std::vector<MeanStd>> averaged;        // [checkpoint][horizon]
};

// Network only. Training continues from one checkpoint to the next.
EpochStudyReport run_epoch_study(const Dataset& dataset, const CrossValidationConfig& config,
                                 std::vector<int> checkpoints = {150, 155, 160});

struct AblationEntry {
  std::string removed;
  std::vector<int> horizons;                // 1-based
  std::vector<std::vector<double>> ratios;  // [round][horizon index]
  std::vector<MeanStd> ratio_summary;       // [horizon index]
  MeanStd r_ratio;                          // r at the last horizon
};

struct AblationReport {
  std::vector<int> horizons;
  std::vector<AblationEntry> entries;
};

// Retrains the network with each named channel or group switched off and
// reports per-round R^2 ratios against `baseline` (computed when null).
AblationReport run_ablation(const Dataset& dataset, const CrossValidationConfig& config,
                            std::span<const std::string> removals, const EvaluationReport* baseline = nullptr,
                            std::vector<int> horizons = {1, 5, 10});

// Correlations between h(t1), sqrt Nc(0,t1), h(t2), h(t1,t2), sqrt Nc(t1,t2),
// with times counted from each author's first paper. Entries are NaN where a
// quantity has no variance.
struct HirschGrid {
  std::array<std::string, 5> names = {"h(t1)", "sqrt Nc(0,t1)", "h(t2)", "h(t1,t2)", "sqrt Nc(t1,t2)"};
  std::vector<std::string> author_ids;
  Matrix values;        // authors x 5
  Matrix correlations;  // 5 x 5, symmetric, unit diagonal
};

HirschGrid hirsch_grid(const Corpus& corpus, std::span<const CohortEntry> cohort, int t1_years = 10,
                       int t2_years = 20, NcReading reading = NcReading::kCitedAndCitingInWindow);

}  // namespace citecast
