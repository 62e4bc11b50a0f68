#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "citecast/corpus.hpp"

namespace citecast {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double operator()(double x) const { return intercept + slope * x; }
};

// Per-h0 training means of the target series, with one least-squares line per
// horizon over the (h0, mean) pairs for h0 values absent from the table.
class NaivePredictor {
 public:
  NaivePredictor() = default;

  // Requires a nonempty training set with equal-length, nonempty series and h0 >= 0.
  static NaivePredictor fit(std::span<const int> h0, std::span<const std::vector<double>> targets);

  // Table row or extrapolated line, then clamped to be nondecreasing.
  std::vector<double> predict(int h0) const;

  const std::map<int, std::vector<double>>& table() const noexcept { return table_; }
  const std::vector<LinearFit>& extrapolation() const noexcept { return lines_; }
  std::size_t horizons() const noexcept { return lines_.size(); }

 private:
  std::map<int, std::vector<double>> table_;
  std::vector<LinearFit> lines_;
};

NaivePredictor fit_naive(std::span<const int> h0, std::span<const std::vector<double>> targets);
std::vector<double> predict_naive(const NaivePredictor& model, int h0);

// CSV h0,horizon,prediction for every table key; horizons count from 1.
void write_naive_table_csv(const std::string& path, const NaivePredictor& model);

// Simplified regression inputs: h-index at cutoff, sqrt(paper count), years
// since the first paper, distinct journals, papers in Science, Nature, PNAS
// or PRL. Only papers dated <= cutoff contribute.
std::vector<double> acuna_features(const Corpus& corpus, const CohortEntry& entry, Date cutoff);
std::vector<std::string> acuna_feature_names();

// Whether a free-text journal reference names one of the four selected journals.
bool is_top_journal(std::string_view journal_ref);

}  // namespace citecast
