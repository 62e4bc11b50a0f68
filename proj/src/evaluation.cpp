#include "citecast/evaluation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "citecast/errors.hpp"

namespace citecast {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) { return splitmix64(seed ^ splitmix64(stream)); }

class Fnv1a {
 public:
  void bytes(const void* data, std::size_t size) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < size; ++i) {
      hash_ ^= p[i];
      hash_ *= 0x100000001b3ULL;
    }
  }
  void text(std::string_view s) { bytes(s.data(), s.size()); }
  void u64(std::uint64_t v) {
    unsigned char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
    bytes(buf, 8);
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  std::string hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash_));
    return buf;
  }

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

double r2_or_nan(std::span<const double> p, std::span<const double> a) {
  try {
    return r_squared(p, a);
  } catch (const UndefinedCorrelationError&) {
    return kNaN;
  }
}

double r_or_nan(std::span<const double> p, std::span<const double> a) {
  try {
    return pearson_r(p, a);
  } catch (const UndefinedCorrelationError&) {
    return kNaN;
  }
}

using Series = std::vector<std::vector<double>>;  // [author][horizon]

struct RoundResult {
  CohortSplit split;
  std::vector<Series> network;  // [checkpoint]
  Series naive;
  Series elastic_net;
  std::vector<double> final_params;
};

RoundResult run_round(const Dataset& ds, const CrossValidationConfig& config, int round,
                      std::span<const int> checkpoints, bool want_network, bool want_naive, bool want_enet) {
  const std::uint64_t seed = round_seed(config.master_seed, round);
  RoundResult out;
  out.split = split_train_validation(ds.authors.size(), config.resolved_train_count(ds.authors.size()),
                                     derive(seed, 1));
  const auto& train = out.split.train;
  const auto& val = out.split.validation;

  if (want_network) {
    std::vector<AuthorFeatures> train_features;
    train_features.reserve(train.size());
    for (auto i : train) train_features.push_back(ds.authors[i].features);
    auto stats = fit_normalizer(train_features, ds.manifest);
    std::vector<TrainingExample> examples;
    examples.reserve(train.size());
    for (std::size_t k = 0; k < train.size(); ++k) {
      examples.push_back({apply_normalizer(train_features[k], stats), encode_targets(ds.authors[train[k]].target)});
    }
    std::vector<AuthorFeatures> val_features;
    val_features.reserve(val.size());
    for (auto i : val) val_features.push_back(apply_normalizer(ds.authors[i].features, stats));

    NetworkConfig net = config.network;
    net.seed = derive(seed, 2);
    TrainingConfig training = config.training;
    training.shuffle_seed = derive(seed, 3);
    const auto& first = examples.front().features;
    Trainer trainer(init_params(net, first.per_paper.rows(), first.author_inputs.size()), training, examples);
    for (int checkpoint : checkpoints) {
      try {
        trainer.run_epochs(checkpoint - trainer.epochs_completed());
      } catch (const TrainingError& e) {
        throw TrainingError("round " + std::to_string(round) + ": " + e.what());
      }
      Series predictions;
      predictions.reserve(val.size());
      for (const auto& f : val_features) predictions.push_back(decode_prediction(forward(trainer.params(), f)));
      out.network.push_back(std::move(predictions));
    }
    out.final_params = trainer.params().values;
  }

  if (want_naive) {
    std::vector<int> h0;
    std::vector<std::vector<double>> targets;
    for (auto i : train) {
      h0.push_back(ds.authors[i].h0);
      targets.push_back(ds.authors[i].target);
    }
    auto model = fit_naive(h0, targets);
    for (auto i : val) out.naive.push_back(model.predict(ds.authors[i].h0));
  }

  if (want_enet) {
    const std::size_t features = ds.authors.front().acuna.size();
    Matrix x(train.size(), features);
    Matrix y(train.size(), static_cast<std::size_t>(ds.horizons));
    for (std::size_t k = 0; k < train.size(); ++k) {
      const auto& a = ds.authors[train[k]];
      std::copy(a.acuna.begin(), a.acuna.end(), x.row(k).begin());
      std::copy(a.target.begin(), a.target.end(), y.row(k).begin());
    }
    ElasticNetOptions options = config.elastic_net;
    options.fold_seed = derive(seed, 4);
    auto model = fit_elastic_net(x, y, options);
    for (auto i : val) out.elastic_net.push_back(model.predict(ds.authors[i].acuna));
  }
  return out;
}

// R^2 per horizon and r at the last horizon of one round's predictions.
std::pair<std::vector<double>, double> score(const Dataset& ds, std::span<const std::size_t> val,
                                             const Series& predictions) {
  const auto horizons = static_cast<std::size_t>(ds.horizons);
  std::vector<double> r2(horizons);
  double r = kNaN;
  std::vector<double> p(val.size());
  std::vector<double> a(val.size());
  for (std::size_t h = 0; h < horizons; ++h) {
    for (std::size_t k = 0; k < val.size(); ++k) {
      p[k] = predictions[k][h];
      a[k] = ds.authors[val[k]].target[h];
    }
    r2[h] = r2_or_nan(p, a);
    if (h + 1 == horizons) r = r_or_nan(p, a);
  }
  return {r2, r};
}

void summarize(PredictorReport& report) {
  const std::size_t horizons = report.r2.empty() ? 0 : report.r2.front().size();
  report.r2_summary.clear();
  for (std::size_t h = 0; h < horizons; ++h) {
    std::vector<double> column;
    for (const auto& row : report.r2) column.push_back(row[h]);
    report.r2_summary.push_back(mean_std(column));
  }
  report.r_summary = mean_std(report.r_final);
}

void check_dataset(const Dataset& ds, const CrossValidationConfig& config) {
  config.validate();
  if (ds.authors.size() < 4) throw ArgumentError("cross-validation needs at least 4 authors");
  if (config.network.output_units != ds.horizons) {
    throw ArgumentError("network output_units (" + std::to_string(config.network.output_units) +
                        ") must equal the number of horizons (" + std::to_string(ds.horizons) + ")");
  }
}

}  // namespace

double pearson_r(std::span<const double> predictions, std::span<const double> actuals) {
  if (predictions.size() != actuals.size()) throw ArgumentError("pearson_r: length mismatch");
  if (predictions.size() < 2) throw ArgumentError("pearson_r needs at least two values");
  const double n = static_cast<double>(predictions.size());
  const double mp = std::accumulate(predictions.begin(), predictions.end(), 0.0) / n;
  const double ma = std::accumulate(actuals.begin(), actuals.end(), 0.0) / n;
  double spp = 0.0, saa = 0.0, spa = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    double dp = predictions[i] - mp;
    double da = actuals[i] - ma;
    spp += dp * dp;
    saa += da * da;
    spa += dp * da;
  }
  if (spp == 0.0 || saa == 0.0) throw UndefinedCorrelationError("correlation undefined for zero variance");
  return spa / std::sqrt(spp * saa);
}

double r_squared(std::span<const double> predictions, std::span<const double> actuals) {
  if (predictions.size() != actuals.size()) throw ArgumentError("r_squared: length mismatch");
  if (predictions.size() < 2) throw ArgumentError("r_squared needs at least two values");
  const double ma = std::accumulate(actuals.begin(), actuals.end(), 0.0) / static_cast<double>(actuals.size());
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < actuals.size(); ++i) {
    ss_res += (actuals[i] - predictions[i]) * (actuals[i] - predictions[i]);
    ss_tot += (actuals[i] - ma) * (actuals[i] - ma);
  }
  if (ss_tot == 0.0) throw UndefinedCorrelationError("R^2 undefined for constant actual values");
  return 1.0 - ss_res / ss_tot;
}

MeanStd mean_std(std::span<const double> values) {
  if (values.empty()) return {kNaN, kNaN};
  const double n = static_cast<double>(values.size());
  double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  return {mean, std::sqrt(var / n)};
}

std::string predictor_name(PredictorKind kind) {
  switch (kind) {
    case PredictorKind::kNetwork: return "network";
    case PredictorKind::kNaive: return "naive";
    case PredictorKind::kElasticNet: return "elastic_net";
  }
  return "unknown";
}

PredictorKind parse_predictor(std::string_view name) {
  for (auto k : {PredictorKind::kNetwork, PredictorKind::kNaive, PredictorKind::kElasticNet}) {
    if (predictor_name(k) == name) return k;
  }
  throw ArgumentError("unknown predictor '" + std::string(name) + "'; expected network, naive or elastic_net");
}

void CrossValidationConfig::validate() const {
  if (rounds < 1) throw ArgumentError("rounds must be >= 1");
  if (predictors.empty()) throw ArgumentError("no predictors selected");
  network.validate();
  training.validate();
  elastic_net.validate();
}

std::size_t CrossValidationConfig::resolved_train_count(std::size_t cohort_size) const {
  std::size_t count = train_count;
  if (count == 0) count = cohort_size * 28000 / 39412;
  if (count < 2 || count + 2 > cohort_size) {
    throw ArgumentError("train_count " + std::to_string(count) + " leaves fewer than two authors on a side of " +
                        std::to_string(cohort_size));
  }
  return count;
}

const PredictorReport& EvaluationReport::predictor(PredictorKind kind) const {
  for (const auto& p : predictors) {
    if (p.kind == kind) return p;
  }
  throw ArgumentError("report has no results for predictor " + predictor_name(kind));
}

std::uint64_t round_seed(std::uint64_t master_seed, int round) {
  return derive(master_seed, 0x726f756e64ULL + static_cast<std::uint64_t>(round));
}

EvaluationReport run_cross_validation(const Dataset& dataset, const CrossValidationConfig& config) {
  check_dataset(dataset, config);
  auto has = [&](PredictorKind k) {
    return std::find(config.predictors.begin(), config.predictors.end(), k) != config.predictors.end();
  };
  const int epochs[] = {config.training.epochs};

  EvaluationReport report;
  report.task = dataset.task;
  report.rounds = config.rounds;
  report.horizons = dataset.horizons;
  report.train_count = config.resolved_train_count(dataset.authors.size());
  report.validation_count = dataset.authors.size() - report.train_count;
  for (auto k : config.predictors) {
    PredictorReport pr;
    pr.kind = k;
    report.predictors.push_back(std::move(pr));
  }

  Fnv1a hash;
  hash.text(task_name(dataset.task));
  hash.u64(static_cast<std::uint64_t>(config.rounds));
  hash.u64(report.train_count);
  hash.u64(config.master_seed);
  for (int v : {config.network.per_paper_units, config.network.hidden_units, config.network.output_units,
                config.training.epochs, config.training.batch_size}) {
    hash.u64(static_cast<std::uint64_t>(v));
  }
  for (double v : {config.training.learning_rate, config.training.beta1, config.training.beta2,
                   config.training.epsilon, config.elastic_net.alpha}) {
    hash.f64(v);
  }
  for (const auto& ch : dataset.manifest) hash.text(ch.name);

  for (int round = 0; round < config.rounds; ++round) {
    report.round_seeds.push_back(round_seed(config.master_seed, round));
    hash.u64(report.round_seeds.back());
    auto result = run_round(dataset, config, round, epochs, has(PredictorKind::kNetwork),
                            has(PredictorKind::kNaive), has(PredictorKind::kElasticNet));
    for (double v : result.final_params) hash.f64(v);

    if (round == 0) report.first_round.authors = result.split.validation;
    for (auto& pr : report.predictors) {
      const Series& predictions = pr.kind == PredictorKind::kNetwork ? result.network.front()
                                  : pr.kind == PredictorKind::kNaive ? result.naive
                                                                     : result.elastic_net;
      auto [r2, r] = score(dataset, result.split.validation, predictions);
      pr.r2.push_back(std::move(r2));
      pr.r_final.push_back(r);
      if (round == 0) report.first_round.series.push_back(predictions);
    }
  }
  for (auto& pr : report.predictors) summarize(pr);
  report.fingerprint = hash.hex();
  return report;
}

EpochStudyReport run_epoch_study(const Dataset& dataset, const CrossValidationConfig& config,
                                 std::vector<int> checkpoints) {
  check_dataset(dataset, config);
  if (checkpoints.empty()) throw ArgumentError("no epoch checkpoints");
  for (std::size_t k = 0; k < checkpoints.size(); ++k) {
    if (checkpoints[k] < 1) throw ArgumentError("epoch checkpoints must be >= 1");
    if (k > 0 && checkpoints[k] < checkpoints[k - 1]) throw ArgumentError("epoch checkpoints must be ascending");
  }
  EpochStudyReport report;
  report.checkpoints = checkpoints;
  report.r2.resize(checkpoints.size());
  for (int round = 0; round < config.rounds; ++round) {
    auto result = run_round(dataset, config, round, checkpoints, true, false, false);
    for (std::size_t c = 0; c < checkpoints.size(); ++c) {
      report.r2[c].push_back(score(dataset, result.split.validation, result.network[c]).first);
    }
  }
  for (const auto& per_round : report.r2) {
    PredictorReport tmp;
    tmp.r2 = per_round;
    summarize(tmp);
    report.averaged.push_back(tmp.r2_summary);
  }
  return report;
}

AblationReport run_ablation(const Dataset& dataset, const CrossValidationConfig& config,
                            std::span<const std::string> removals, const EvaluationReport* baseline,
                            std::vector<int> horizons) {
  check_dataset(dataset, config);
  for (int h : horizons) {
    if (h < 1 || h > dataset.horizons) throw ArgumentError("ablation horizon " + std::to_string(h) + " out of range");
  }
  std::vector<Dataset> reduced;
  for (const auto& name : removals) {
    std::string one[] = {name};
    reduced.push_back(dataset.without(one));
  }

  CrossValidationConfig network_only = config;
  network_only.predictors = {PredictorKind::kNetwork};
  EvaluationReport own;
  if (baseline == nullptr) {
    own = run_cross_validation(dataset, network_only);
    baseline = &own;
  }
  const auto& base = baseline->predictor(PredictorKind::kNetwork);
  if (static_cast<int>(base.r2.size()) != config.rounds) {
    throw ArgumentError("baseline report has a different number of rounds");
  }

  AblationReport report;
  report.horizons = horizons;
  for (std::size_t k = 0; k < removals.size(); ++k) {
    auto removed = run_cross_validation(reduced[k], network_only).predictor(PredictorKind::kNetwork);
    AblationEntry entry;
    entry.removed = removals[k];
    entry.horizons = horizons;
    std::vector<double> r_ratio;
    for (int round = 0; round < config.rounds; ++round) {
      std::vector<double> row;
      for (int h : horizons) {
        auto i = static_cast<std::size_t>(h - 1);
        row.push_back(removed.r2[static_cast<std::size_t>(round)][i] / base.r2[static_cast<std::size_t>(round)][i]);
      }
      entry.ratios.push_back(std::move(row));
      r_ratio.push_back(removed.r_final[static_cast<std::size_t>(round)] / base.r_final[static_cast<std::size_t>(round)]);
    }
    for (std::size_t i = 0; i < horizons.size(); ++i) {
      std::vector<double> column;
      for (const auto& row : entry.ratios) column.push_back(row[i]);
      entry.ratio_summary.push_back(mean_std(column));
    }
    entry.r_ratio = mean_std(r_ratio);
    report.entries.push_back(std::move(entry));
  }
  return report;
}

HirschGrid hirsch_grid(const Corpus& corpus, std::span<const CohortEntry> cohort, int t1_years, int t2_years,
                       NcReading reading) {
  if (cohort.empty()) throw ArgumentError("hirsch grid needs a nonempty cohort");
  if (t1_years < 1 || t2_years <= t1_years) throw ArgumentError("need 1 <= t1_years < t2_years");
  HirschGrid grid;
  grid.values = Matrix(cohort.size(), 5);
  for (std::size_t i = 0; i < cohort.size(); ++i) {
    const auto& e = cohort[i];
    grid.author_ids.push_back(e.author_id);
    const Date t0 = e.first_paper_date;
    const Date t1 = add_years(t0, t1_years);
    const Date t2 = add_years(t0, t2_years);
    const auto& papers = e.career_papers;
    grid.values(i, 0) = h_index_within(corpus, papers, {t0, t1});
    grid.values(i, 1) = std::sqrt(static_cast<double>(nc_window(corpus, papers, {t0, t1}, reading)));
    grid.values(i, 2) = h_index_within(corpus, papers, {t0, t2});
    grid.values(i, 3) = h_index_within(corpus, papers, {t1, t2});
    grid.values(i, 4) = std::sqrt(static_cast<double>(nc_window(corpus, papers, {t1, t2}, reading)));
  }
  grid.correlations = Matrix(5, 5);
  std::array<std::vector<double>, 5> columns;
  for (std::size_t q = 0; q < 5; ++q) {
    for (std::size_t i = 0; i < cohort.size(); ++i) columns[q].push_back(grid.values(i, q));
  }
  for (std::size_t a = 0; a < 5; ++a) {
    for (std::size_t b = a; b < 5; ++b) {
      double r = cohort.size() < 2 ? kNaN : r_or_nan(columns[a], columns[b]);
      grid.correlations(a, b) = r;
      grid.correlations(b, a) = r;
    }
  }
  return grid;
}

}  // namespace citecast
