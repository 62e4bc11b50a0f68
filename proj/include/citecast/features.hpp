#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "citecast/corpus.hpp"
#include "citecast/matrix.hpp"
#include "citecast/metrics.hpp"

namespace citecast {

struct ChannelInfo {
  std::string name;
  std::string group;  // ablations may remove a whole group at once
  bool normalized = true;
};

struct FeatureConfig {
  int max_papers = 1;  // padded list length
  std::vector<std::string> category_vocabulary;  // top-level categories, one channel each
  bool include_topic_vectors = false;
  bool include_broadness = true;
  std::vector<std::string> disabled;  // channel or group names

  void validate() const;
};

// Every channel the configuration could produce, in the fixed order:
// indicator, citations, date, pagerank, length, has_journal_ref, jif,
// coauthors, coauthor_pagerank_{min,max,avg}, category:*, topic:*.
std::vector<ChannelInfo> all_channels(const FeatureConfig& config);
// The enabled subset, same order.
std::vector<ChannelInfo> channel_manifest(const FeatureConfig& config);
// Channel names, group names and "broadness"; what `disabled` may contain.
std::vector<std::string> toggle_names(const FeatureConfig& config);
bool broadness_enabled(const FeatureConfig& config);

struct AuthorFeatures {
  Matrix per_paper;                  // channels x max_papers
  std::vector<double> author_inputs; // broadness, or empty when disabled
};

// Corpus-wide quantities shared by every author's features.
struct FeatureContext {
  Date cutoff{};
  std::vector<int> citations;            // per paper, citing papers dated <= cutoff
  std::vector<double> paper_pagerank;    // per paper
  std::vector<double> coauthor_pagerank; // per author
  std::vector<double> jif;               // per paper, 0 when unresolved
  std::map<std::string, double> broadness;  // optional per-author values

  static FeatureContext prepare(const Corpus& corpus, Date cutoff, int max_authors_per_paper = 30,
                                const PagerankOptions& pagerank = {});
};

// Papers of the entry in feature column order: most cited first, then
// earlier date, then paper id.
std::vector<PaperIndex> feature_paper_order(const Corpus& corpus, const CohortEntry& entry,
                                            const FeatureContext& context);

AuthorFeatures build_features(const Corpus& corpus, const CohortEntry& entry, const FeatureContext& context,
                              const FeatureConfig& config);

// Shannon entropy (nats) of the author's top-level category counts over papers
// dated <= cutoff.
double broadness_fallback(const Corpus& corpus, const CohortEntry& entry, Date cutoff);

// Drops the rows of channels disabled in `reduced` relative to `full`.
AuthorFeatures drop_channels(const AuthorFeatures& features, const FeatureConfig& full,
                             const FeatureConfig& reduced);

struct NormalizationStats {
  std::vector<double> mean;    // per channel
  std::vector<double> stddev;
  std::vector<bool> normalized;
  std::vector<double> author_mean;  // per author input
  std::vector<double> author_stddev;
  std::vector<bool> author_normalized;
  std::vector<std::string> degenerate;  // channels skipped for zero variance
};

// Mean and population std over every matrix entry (padding included) of the
// training authors. Channels marked unnormalized in the manifest, and
// zero-variance channels, pass through.
NormalizationStats fit_normalizer(std::span<const AuthorFeatures> training,
                                  std::span<const ChannelInfo> manifest);

AuthorFeatures apply_normalizer(const AuthorFeatures& features, const NormalizationStats& stats);

void write_channel_manifest(const std::string& path, std::span<const ChannelInfo> manifest,
                            const FeatureConfig& config);
// Channel-major CSV: author_id,channel,column,value.
void write_feature_dump(const std::string& path, std::span<const std::string> author_ids,
                        std::span<const AuthorFeatures> features, std::span<const ChannelInfo> manifest);

}  // namespace citecast
