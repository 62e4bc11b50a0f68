#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "citecast/corpus.hpp"
#include "citecast/features.hpp"
#include "citecast/metrics.hpp"

namespace citecast {

// sqrt-nc: sqrt(Nc(cutoff, cutoff + n years)); cumulative-h: h-index at
// cutoff + n years.
enum class Task { kSqrtNc, kCumulativeH };

std::string task_name(Task task);
// Throws ArgumentError for anything other than "sqrt-nc" or "cumulative-h".
Task parse_task(std::string_view name);

struct DatasetOptions {
  CohortSpec cohort;
  Task task = Task::kCumulativeH;
  int horizons = 10;
  NcReading nc_reading = NcReading::kCitedAndCitingInWindow;
  std::vector<std::string> disabled_channels;
  std::optional<bool> include_topic_vectors;  // unset: on when every cohort paper has one
  bool include_broadness = true;
  std::map<std::string, double> broadness;    // per-author values; fallback otherwise
  PagerankOptions pagerank;
};

struct AuthorRecord {
  std::string author_id;
  AuthorFeatures features;     // unnormalized
  std::vector<double> target;  // one value per horizon, nondecreasing
  int h0 = 0;                  // h-index at the cutoff
  std::vector<double> acuna;   // baseline regression inputs
};

struct Dataset {
  Task task = Task::kCumulativeH;
  Date cutoff{};
  int horizons = 10;
  FeatureConfig feature_config;
  std::vector<ChannelInfo> manifest;
  std::string broadness_source;  // "sidecar", "category-entropy" or "none"
  std::vector<AuthorRecord> authors;

  // Copy with additional channels switched off. Unknown names throw
  // ArgumentError listing the valid ones.
  Dataset without(std::span<const std::string> channels) const;
};

std::vector<double> target_series(const Corpus& corpus, const CohortEntry& entry, Date cutoff, Task task,
                                  int horizons, NcReading reading = NcReading::kCitedAndCitingInWindow);

Dataset build_dataset(const Corpus& corpus, std::span<const CohortEntry> cohort, const DatasetOptions& options);
// Selects the cohort with options.cohort first.
Dataset build_dataset(const Corpus& corpus, const DatasetOptions& options);

// Two-column CSV author_id,broadness, header optional.
std::map<std::string, double> load_broadness(const std::string& path);

}  // namespace citecast
