#include "citecast/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "citecast/baselines.hpp"
#include "citecast/errors.hpp"

namespace citecast {

std::string task_name(Task task) { return task == Task::kSqrtNc ? "sqrt-nc" : "cumulative-h"; }

Task parse_task(std::string_view name) {
  if (name == "sqrt-nc") return Task::kSqrtNc;
  if (name == "cumulative-h") return Task::kCumulativeH;
  throw ArgumentError("unknown task '" + std::string(name) + "'; expected sqrt-nc or cumulative-h");
}

Dataset Dataset::without(std::span<const std::string> channels) const {
  FeatureConfig reduced = feature_config;
  for (const auto& c : channels) {
    if (std::find(reduced.disabled.begin(), reduced.disabled.end(), c) == reduced.disabled.end()) {
      reduced.disabled.push_back(c);
    }
  }
  reduced.validate();
  Dataset out;
  out.task = task;
  out.cutoff = cutoff;
  out.horizons = horizons;
  out.feature_config = reduced;
  out.manifest = channel_manifest(reduced);
  out.broadness_source = broadness_enabled(reduced) ? broadness_source : "none";
  out.authors.reserve(authors.size());
  for (const auto& a : authors) {
    AuthorRecord r = a;
    r.features = drop_channels(a.features, feature_config, reduced);
    out.authors.push_back(std::move(r));
  }
  return out;
}

std::vector<double> target_series(const Corpus& corpus, const CohortEntry& entry, Date cutoff, Task task,
                                  int horizons, NcReading reading) {
  if (horizons < 1) throw ArgumentError("horizons must be >= 1");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(horizons));
  if (task == Task::kCumulativeH) {
    for (int h : cumulative_h_series(corpus, entry.career_papers, cutoff, horizons)) out.push_back(h);
  } else {
    for (int n = 1; n <= horizons; ++n) {
      CitationWindow w{cutoff, add_years(cutoff, n)};
      out.push_back(std::sqrt(static_cast<double>(nc_window(corpus, entry.career_papers, w, reading))));
    }
  }
  return out;
}

Dataset build_dataset(const Corpus& corpus, std::span<const CohortEntry> cohort, const DatasetOptions& options) {
  options.cohort.validate();
  if (options.horizons < 1) throw ArgumentError("horizons must be >= 1");
  if (cohort.empty()) throw ArgumentError("cohort is empty");

  Dataset ds;
  ds.task = options.task;
  ds.cutoff = options.cohort.cutoff;
  ds.horizons = options.horizons;

  auto& fc = ds.feature_config;
  std::set<std::string> vocabulary;
  bool all_topics = true;
  for (const auto& e : cohort) {
    fc.max_papers = std::max(fc.max_papers, static_cast<int>(e.papers.size()));
    for (auto p : e.papers) {
      const auto& paper = corpus.paper(p);
      for (const auto& c : paper.categories) vocabulary.insert(top_level_category(c));
      all_topics = all_topics && paper.topic_vector.has_value();
    }
  }
  fc.category_vocabulary.assign(vocabulary.begin(), vocabulary.end());
  fc.include_topic_vectors = options.include_topic_vectors.value_or(all_topics);
  fc.include_broadness = options.include_broadness;
  fc.disabled = options.disabled_channels;
  fc.validate();
  ds.manifest = channel_manifest(fc);
  if (!broadness_enabled(fc)) {
    ds.broadness_source = "none";
  } else {
    ds.broadness_source = options.broadness.empty() ? "category-entropy" : "sidecar";
  }

  auto context = FeatureContext::prepare(corpus, ds.cutoff, options.cohort.max_authors_per_paper, options.pagerank);
  context.broadness = options.broadness;

  ds.authors.resize(cohort.size());
  const auto n = static_cast<std::ptrdiff_t>(cohort.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto& e = cohort[static_cast<std::size_t>(i)];
    auto& r = ds.authors[static_cast<std::size_t>(i)];
    r.author_id = e.author_id;
    r.features = build_features(corpus, e, context, fc);
    r.target = target_series(corpus, e, ds.cutoff, ds.task, ds.horizons, options.nc_reading);
    r.h0 = h_index_as_of(corpus, e.papers, ds.cutoff);
    r.acuna = acuna_features(corpus, e, ds.cutoff);
  }
  return ds;
}

Dataset build_dataset(const Corpus& corpus, const DatasetOptions& options) {
  auto cohort = select_cohort(corpus, options.cohort);
  return build_dataset(corpus, cohort, options);
}

std::map<std::string, double> load_broadness(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open broadness file '" + path + "'");
  std::map<std::string, double> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos) throw ParseError(path, line_no, "expected author_id,broadness");
    std::string id = line.substr(0, comma);
    std::string value = line.substr(comma + 1);
    double v = 0.0;
    try {
      std::size_t used = 0;
      v = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      if (line_no == 1) continue;
      throw ParseError(path, line_no, "invalid broadness value '" + value + "'");
    }
    if (!std::isfinite(v)) throw ParseError(path, line_no, "non-finite broadness value");
    out[id] = v;
  }
  return out;
}

}  // namespace citecast
