#include "citecast/features.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "citecast/errors.hpp"
#include "citecast/format.hpp"

namespace citecast {

namespace {

constexpr const char* kBroadness = "broadness";

enum Slot {
  kIndicator,
  kCitations,
  kDate,
  kPagerank,
  kLength,
  kHasJournalRef,
  kJif,
  kCoauthors,
  kCoauthorPrMin,
  kCoauthorPrMax,
  kCoauthorPrAvg,
  kFixedSlots
};

bool is_disabled(const FeatureConfig& config, const ChannelInfo& ch) {
  return std::any_of(config.disabled.begin(), config.disabled.end(),
                     [&](const std::string& d) { return d == ch.name || d == ch.group; });
}

}  // namespace

void FeatureConfig::validate() const {
  if (max_papers < 1) throw ArgumentError("max_papers must be >= 1");
  std::set<std::string> seen;
  for (const auto& c : category_vocabulary) {
    if (!seen.insert(c).second) throw ArgumentError("duplicate category '" + c + "' in vocabulary");
  }
  auto valid = toggle_names(*this);
  for (const auto& d : disabled) {
    if (std::find(valid.begin(), valid.end(), d) == valid.end()) {
      std::string list;
      for (const auto& v : valid) list += (list.empty() ? "" : ", ") + v;
      throw ArgumentError("unknown channel '" + d + "'; valid channels: " + list);
    }
  }
}

std::vector<ChannelInfo> all_channels(const FeatureConfig& config) {
  std::vector<ChannelInfo> out = {
      {"indicator", "indicator", true},
      {"citations", "citations", true},
      {"date", "date", true},
      {"pagerank", "pagerank", true},
      {"length", "length", true},
      {"has_journal_ref", "journal_ref", true},
      {"jif", "jif", true},
      {"coauthors", "coauthors", true},
      {"coauthor_pagerank_min", "coauthor_pagerank", true},
      {"coauthor_pagerank_max", "coauthor_pagerank", true},
      {"coauthor_pagerank_avg", "coauthor_pagerank", true},
  };
  for (const auto& c : config.category_vocabulary) out.push_back({"category:" + c, "categories", false});
  if (config.include_topic_vectors) {
    for (std::size_t k = 0; k < kTopicDimensions; ++k) out.push_back({"topic:" + std::to_string(k), "topics", false});
  }
  return out;
}

std::vector<ChannelInfo> channel_manifest(const FeatureConfig& config) {
  std::vector<ChannelInfo> out;
  for (auto& ch : all_channels(config)) {
    if (!is_disabled(config, ch)) out.push_back(std::move(ch));
  }
  return out;
}

std::vector<std::string> toggle_names(const FeatureConfig& config) {
  std::vector<std::string> names;
  for (const auto& ch : all_channels(config)) {
    if (std::find(names.begin(), names.end(), ch.group) == names.end()) names.push_back(ch.group);
    if (std::find(names.begin(), names.end(), ch.name) == names.end()) names.push_back(ch.name);
  }
  names.push_back(kBroadness);
  return names;
}

bool broadness_enabled(const FeatureConfig& config) {
  return config.include_broadness &&
         std::find(config.disabled.begin(), config.disabled.end(), kBroadness) == config.disabled.end();
}

FeatureContext FeatureContext::prepare(const Corpus& corpus, Date cutoff, int max_authors_per_paper,
                                       const PagerankOptions& pagerank) {
  FeatureContext ctx;
  ctx.cutoff = cutoff;
  ctx.citations.resize(corpus.paper_count());
  ctx.jif.resize(corpus.paper_count());
  JifResolver resolver(corpus.jif_table(), corpus.jif_translation());
  for (PaperIndex p = 0; p < corpus.paper_count(); ++p) {
    ctx.citations[p] = citations_as_of(corpus, p, cutoff);
    const auto& ref = corpus.paper(p).journal_ref;
    ctx.jif[p] = ref ? resolver.resolve(*ref).value_or(0.0) : 0.0;
  }
  ctx.paper_pagerank = paper_pagerank_as_of(corpus, cutoff, pagerank);
  ctx.coauthor_pagerank = coauthor_pagerank_as_of(corpus, cutoff, max_authors_per_paper, pagerank);
  return ctx;
}

std::vector<PaperIndex> feature_paper_order(const Corpus& corpus, const CohortEntry& entry,
                                            const FeatureContext& context) {
  std::vector<PaperIndex> order = entry.papers;
  std::sort(order.begin(), order.end(), [&](PaperIndex a, PaperIndex b) {
    int ca = context.citations[a];
    int cb = context.citations[b];
    if (ca != cb) return ca > cb;
    const auto& pa = corpus.paper(a);
    const auto& pb = corpus.paper(b);
    return std::tie(pa.date, pa.id) < std::tie(pb.date, pb.id);
  });
  return order;
}

double broadness_fallback(const Corpus& corpus, const CohortEntry& entry, Date cutoff) {
  std::map<std::string, double> counts;
  double total = 0.0;
  for (auto p : entry.papers) {
    const auto& paper = corpus.paper(p);
    if (paper.date > cutoff) continue;
    std::set<std::string> tops;
    for (const auto& c : paper.categories) tops.insert(top_level_category(c));
    for (const auto& t : tops) {
      counts[t] += 1.0;
      total += 1.0;
    }
  }
  double entropy = 0.0;
  for (const auto& [cat, n] : counts) {
    double q = n / total;
    entropy -= q * std::log(q);
  }
  return entropy == 0.0 ? 0.0 : entropy;  // no -0
}

AuthorFeatures build_features(const Corpus& corpus, const CohortEntry& entry, const FeatureContext& context,
                              const FeatureConfig& config) {
  if (entry.papers.size() > static_cast<std::size_t>(config.max_papers)) {
    throw ArgumentError("author '" + entry.author_id + "' has " + std::to_string(entry.papers.size()) +
                        " papers, more than max_papers " + std::to_string(config.max_papers));
  }
  auto channels = all_channels(config);
  std::vector<int> row_of(channels.size(), -1);
  int rows = 0;
  for (std::size_t c = 0; c < channels.size(); ++c) {
    if (!is_disabled(config, channels[c])) row_of[c] = rows++;
  }
  AuthorFeatures f;
  f.per_paper = Matrix(static_cast<std::size_t>(rows), static_cast<std::size_t>(config.max_papers));
  auto put = [&](std::size_t channel, std::size_t col, double v) {
    if (row_of[channel] >= 0) f.per_paper(static_cast<std::size_t>(row_of[channel]), col) = v;
  };

  auto order = feature_paper_order(corpus, entry, context);
  for (std::size_t col = 0; col < order.size(); ++col) {
    auto p = order[col];
    const auto& paper = corpus.paper(p);
    put(kIndicator, col, 1.0);
    put(kCitations, col, context.citations[p]);
    put(kDate, col, years_between(context.cutoff, paper.date));
    put(kPagerank, col, context.paper_pagerank[p]);
    put(kLength, col, paper.length);
    put(kHasJournalRef, col, paper.journal_ref ? 1.0 : 0.0);
    put(kJif, col, context.jif[p]);
    put(kCoauthors, col, static_cast<double>(paper.author_names.size() - 1));

    double lo = 0.0, hi = 0.0, sum = 0.0;
    std::size_t n = 0;
    for (auto a : corpus.paper_authors(p)) {
      if (a == entry.author) continue;
      double pr = context.coauthor_pagerank[a];
      lo = n == 0 ? pr : std::min(lo, pr);
      hi = n == 0 ? pr : std::max(hi, pr);
      sum += pr;
      ++n;
    }
    put(kCoauthorPrMin, col, lo);
    put(kCoauthorPrMax, col, hi);
    put(kCoauthorPrAvg, col, n ? sum / static_cast<double>(n) : 0.0);

    std::size_t channel = kFixedSlots;
    for (const auto& cat : config.category_vocabulary) {
      bool hit = std::any_of(paper.categories.begin(), paper.categories.end(),
                             [&](const std::string& c) { return top_level_category(c) == cat; });
      put(channel++, col, hit ? 1.0 : 0.0);
    }
    if (config.include_topic_vectors && paper.topic_vector) {
      for (std::size_t k = 0; k < kTopicDimensions; ++k) put(channel + k, col, (*paper.topic_vector)[k]);
    }
  }

  if (broadness_enabled(config)) {
    auto it = context.broadness.find(entry.author_id);
    f.author_inputs.push_back(it != context.broadness.end() ? it->second
                                                            : broadness_fallback(corpus, entry, context.cutoff));
  }
  return f;
}

AuthorFeatures drop_channels(const AuthorFeatures& features, const FeatureConfig& full,
                             const FeatureConfig& reduced) {
  auto full_manifest = channel_manifest(full);
  auto kept = channel_manifest(reduced);
  if (features.per_paper.rows() != full_manifest.size()) throw ArgumentError("feature rows do not match manifest");
  AuthorFeatures out;
  out.per_paper = Matrix(kept.size(), features.per_paper.cols());
  std::size_t r = 0;
  for (std::size_t i = 0; i < full_manifest.size() && r < kept.size(); ++i) {
    if (full_manifest[i].name != kept[r].name) continue;
    auto src = features.per_paper.row(i);
    std::copy(src.begin(), src.end(), out.per_paper.row(r).begin());
    ++r;
  }
  if (r != kept.size()) throw ArgumentError("reduced feature configuration is not a subset of the full one");
  if (broadness_enabled(reduced)) {
    if (!broadness_enabled(full)) throw ArgumentError("reduced configuration enables broadness");
    out.author_inputs = features.author_inputs;
  }
  return out;
}

NormalizationStats fit_normalizer(std::span<const AuthorFeatures> training, std::span<const ChannelInfo> manifest) {
  if (training.size() < 2) throw ArgumentError("normalizer needs at least 2 training authors");
  const std::size_t rows = manifest.size();
  const std::size_t author_inputs = training.front().author_inputs.size();
  for (const auto& f : training) {
    if (f.per_paper.rows() != rows || f.author_inputs.size() != author_inputs ||
        f.per_paper.cols() != training.front().per_paper.cols()) {
      throw ArgumentError("training features have inconsistent shapes");
    }
  }
  NormalizationStats s;
  s.mean.assign(rows, 0.0);
  s.stddev.assign(rows, 1.0);
  s.normalized.assign(rows, false);

  auto finish = [&](double mean, double var, const std::string& name, double& out_mean, double& out_std,
                    bool requested) -> bool {
    double sd = std::sqrt(var);
    if (!requested) return false;
    if (!(sd > 1e-12 * std::max(1.0, std::abs(mean)))) {
      s.degenerate.push_back(name);
      return false;
    }
    out_mean = mean;
    out_std = sd;
    return true;
  };

  for (std::size_t r = 0; r < rows; ++r) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& f : training) {
      for (double v : f.per_paper.row(r)) sum += v;
      n += f.per_paper.cols();
    }
    double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (const auto& f : training) {
      for (double v : f.per_paper.row(r)) ss += (v - mean) * (v - mean);
    }
    double m = 0.0, sd = 1.0;
    if (finish(mean, ss / static_cast<double>(n), manifest[r].name, m, sd, manifest[r].normalized)) {
      s.mean[r] = m;
      s.stddev[r] = sd;
      s.normalized[r] = true;
    }
  }

  s.author_mean.assign(author_inputs, 0.0);
  s.author_stddev.assign(author_inputs, 1.0);
  s.author_normalized.assign(author_inputs, false);
  for (std::size_t k = 0; k < author_inputs; ++k) {
    double sum = 0.0;
    for (const auto& f : training) sum += f.author_inputs[k];
    double mean = sum / static_cast<double>(training.size());
    double ss = 0.0;
    for (const auto& f : training) ss += (f.author_inputs[k] - mean) * (f.author_inputs[k] - mean);
    double m = 0.0, sd = 1.0;
    if (finish(mean, ss / static_cast<double>(training.size()), kBroadness, m, sd, true)) {
      s.author_mean[k] = m;
      s.author_stddev[k] = sd;
      s.author_normalized[k] = true;
    }
  }
  return s;
}

AuthorFeatures apply_normalizer(const AuthorFeatures& features, const NormalizationStats& stats) {
  if (features.per_paper.rows() != stats.mean.size() || features.author_inputs.size() != stats.author_mean.size()) {
    throw ArgumentError("feature shape does not match normalization statistics");
  }
  AuthorFeatures out = features;
  for (std::size_t r = 0; r < stats.mean.size(); ++r) {
    if (!stats.normalized[r]) continue;
    for (double& v : out.per_paper.row(r)) v = (v - stats.mean[r]) / stats.stddev[r];
  }
  for (std::size_t k = 0; k < stats.author_mean.size(); ++k) {
    if (!stats.author_normalized[k]) continue;
    out.author_inputs[k] = (out.author_inputs[k] - stats.author_mean[k]) / stats.author_stddev[k];
  }
  return out;
}

void write_channel_manifest(const std::string& path, std::span<const ChannelInfo> manifest,
                            const FeatureConfig& config) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << "# max_papers=" << config.max_papers << "\n";
  out << "row,channel,group,normalized\n";
  for (std::size_t r = 0; r < manifest.size(); ++r) {
    out << r << ',' << manifest[r].name << ',' << manifest[r].group << ',' << (manifest[r].normalized ? 1 : 0)
        << '\n';
  }
  if (broadness_enabled(config)) out << "author," << kBroadness << ',' << kBroadness << ",1\n";
}

void write_feature_dump(const std::string& path, std::span<const std::string> author_ids,
                        std::span<const AuthorFeatures> features, std::span<const ChannelInfo> manifest) {
  if (author_ids.size() != features.size()) throw ArgumentError("author id count does not match features");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << "author_id,channel,column,value\n";
  for (std::size_t i = 0; i < features.size(); ++i) {
    const auto& m = features[i].per_paper;
    for (std::size_t r = 0; r < m.rows(); ++r) {
      for (std::size_t c = 0; c < m.cols(); ++c) {
        out << author_ids[i] << ',' << manifest[r].name << ',' << c << ',' << format_number(m(r, c)) << '\n';
      }
    }
    for (double v : features[i].author_inputs) out << author_ids[i] << ',' << kBroadness << ",0," << format_number(v) << '\n';
  }
}

}  // namespace citecast
