#include "citecast/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "citecast/errors.hpp"
#include "citecast/format.hpp"
#include "citecast/metrics.hpp"

namespace citecast {

NaivePredictor NaivePredictor::fit(std::span<const int> h0, std::span<const std::vector<double>> targets) {
  if (h0.empty()) throw ArgumentError("naive predictor needs a nonempty training set");
  if (h0.size() != targets.size()) throw ArgumentError("h0 and target counts differ");
  const std::size_t horizons = targets.front().size();
  if (horizons == 0) throw ArgumentError("target series are empty");

  std::map<int, std::vector<std::vector<double>>> groups;  // h0 -> horizon -> values
  for (std::size_t i = 0; i < h0.size(); ++i) {
    if (h0[i] < 0) throw ArgumentError("h0 must be nonnegative");
    if (targets[i].size() != horizons) throw ArgumentError("target series lengths differ");
    auto& g = groups[h0[i]];
    g.resize(horizons);
    for (std::size_t n = 0; n < horizons; ++n) g[n].push_back(targets[i][n]);
  }

  NaivePredictor model;
  for (auto& [key, columns] : groups) {
    std::vector<double> mean(horizons);
    for (std::size_t n = 0; n < horizons; ++n) {
      auto& values = columns[n];
      std::sort(values.begin(), values.end());
      double sum = 0.0;
      for (double v : values) sum += v;
      mean[n] = sum / static_cast<double>(values.size());
    }
    model.table_.emplace(key, std::move(mean));
  }

  model.lines_.resize(horizons);
  const double k = static_cast<double>(model.table_.size());
  double mx = 0.0;
  for (const auto& [key, _] : model.table_) mx += key;
  mx /= k;
  double sxx = 0.0;
  for (const auto& [key, _] : model.table_) sxx += (key - mx) * (key - mx);
  for (std::size_t n = 0; n < horizons; ++n) {
    double my = 0.0;
    for (const auto& [_, mean] : model.table_) my += mean[n];
    my /= k;
    if (sxx == 0.0) {
      model.lines_[n] = {0.0, my};
      continue;
    }
    double sxy = 0.0;
    for (const auto& [key, mean] : model.table_) sxy += (key - mx) * (mean[n] - my);
    double slope = sxy / sxx;
    model.lines_[n] = {slope, my - slope * mx};
  }
  return model;
}

std::vector<double> NaivePredictor::predict(int h0) const {
  if (h0 < 0) throw ArgumentError("h0 must be nonnegative");
  if (lines_.empty()) throw ContractError("naive predictor is not fitted");
  std::vector<double> out;
  if (auto it = table_.find(h0); it != table_.end()) {
    out = it->second;
  } else {
    for (const auto& line : lines_) out.push_back(line(h0));
  }
  for (std::size_t n = 1; n < out.size(); ++n) out[n] = std::max(out[n], out[n - 1]);
  return out;
}

NaivePredictor fit_naive(std::span<const int> h0, std::span<const std::vector<double>> targets) {
  return NaivePredictor::fit(h0, targets);
}

std::vector<double> predict_naive(const NaivePredictor& model, int h0) { return model.predict(h0); }

void write_naive_table_csv(const std::string& path, const NaivePredictor& model) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << "h0,horizon,prediction\n";
  for (const auto& [key, _] : model.table()) {
    auto series = model.predict(key);
    for (std::size_t n = 0; n < series.size(); ++n) {
      out << key << ',' << n + 1 << ',' << format_number(series[n]) << '\n';
    }
  }
  if (!out) throw IoError("failed writing '" + path + "'");
}

bool is_top_journal(std::string_view journal_ref) {
  static const std::set<std::string, std::less<>> top = {
      "science", "nature", "pnas", "procnatlacadsci", "procnatlacadsciusa", "physrevlett", "prl"};
  return top.contains(reduce_journal_reference(journal_ref));
}

std::vector<double> acuna_features(const Corpus& corpus, const CohortEntry& entry, Date cutoff) {
  std::vector<PaperIndex> papers;
  for (auto p : entry.papers) {
    if (corpus.paper(p).date <= cutoff) papers.push_back(p);
  }
  std::set<std::string> journals;
  int top = 0;
  for (auto p : papers) {
    const auto& ref = corpus.paper(p).journal_ref;
    if (!ref) continue;
    auto reduced = reduce_journal_reference(*ref);
    if (!reduced.empty()) journals.insert(reduced);
    if (is_top_journal(*ref)) ++top;
  }
  return {static_cast<double>(h_index_as_of(corpus, papers, cutoff)),
          std::sqrt(static_cast<double>(papers.size())),
          years_between(entry.first_paper_date, cutoff),
          static_cast<double>(journals.size()),
          static_cast<double>(top)};
}

std::vector<std::string> acuna_feature_names() {
  return {"h_index", "sqrt_papers", "career_years", "distinct_journals", "top_journal_papers"};
}

}  // namespace citecast
