#include "citecast/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>

#include "citecast/errors.hpp"
#include "citecast/kernels.hpp"

namespace citecast {

int h_index(std::span<const int> citation_counts) {
  std::vector<int> sorted(citation_counts.begin(), citation_counts.end());
  if (std::any_of(sorted.begin(), sorted.end(), [](int c) { return c < 0; })) {
    throw ArgumentError("citation counts must be nonnegative");
  }
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  int h = 0;
  while (h < static_cast<int>(sorted.size()) && sorted[static_cast<std::size_t>(h)] >= h + 1) ++h;
  return h;
}

void CitationWindow::validate() const {
  if (!(t1 < t2)) throw ArgumentError("citation window requires t1 < t2");
}

namespace {

bool in_window(Date d, const CitationWindow& w) { return w.t1 <= d && d < w.t2; }

}  // namespace

std::int64_t nc_window(const Corpus& corpus, std::span<const PaperIndex> author_papers,
                       const CitationWindow& window, NcReading reading) {
  window.validate();
  std::int64_t total = 0;
  for (auto p : author_papers) {
    if (reading == NcReading::kCitedAndCitingInWindow && !in_window(corpus.paper(p).date, window)) continue;
    for (auto citing : corpus.cited_by(p)) {
      if (in_window(corpus.paper(citing).date, window)) ++total;
    }
  }
  return total;
}

std::int64_t nc_window(const Corpus& corpus, std::string_view author_id, const CitationWindow& window,
                       NcReading reading) {
  auto a = corpus.require_author(author_id);
  return nc_window(corpus, corpus.author_papers(a), window, reading);
}

int citations_as_of(const Corpus& corpus, PaperIndex paper, Date as_of) {
  int n = 0;
  for (auto citing : corpus.cited_by(paper)) {
    if (corpus.paper(citing).date <= as_of) ++n;
  }
  return n;
}

int h_index_as_of(const Corpus& corpus, std::span<const PaperIndex> author_papers, Date as_of) {
  std::vector<int> counts;
  counts.reserve(author_papers.size());
  for (auto p : author_papers) {
    if (corpus.paper(p).date <= as_of) counts.push_back(citations_as_of(corpus, p, as_of));
  }
  return h_index(counts);
}

int h_index_within(const Corpus& corpus, std::span<const PaperIndex> author_papers,
                   const CitationWindow& window) {
  window.validate();
  std::vector<int> counts;
  for (auto p : author_papers) {
    if (!in_window(corpus.paper(p).date, window)) continue;
    int n = 0;
    for (auto citing : corpus.cited_by(p)) {
      if (in_window(corpus.paper(citing).date, window)) ++n;
    }
    counts.push_back(n);
  }
  return h_index(counts);
}

std::vector<int> cumulative_h_series(const Corpus& corpus, std::span<const PaperIndex> author_papers,
                                     Date cutoff, int horizons) {
  if (horizons < 1) throw ArgumentError("horizons must be >= 1");
  std::vector<int> series;
  series.reserve(static_cast<std::size_t>(horizons));
  for (int n = 1; n <= horizons; ++n) series.push_back(h_index_as_of(corpus, author_papers, add_years(cutoff, n)));
  return series;
}

std::vector<int> cumulative_h_series(const Corpus& corpus, std::string_view author_id, Date cutoff,
                                     int horizons) {
  auto a = corpus.require_author(author_id);
  return cumulative_h_series(corpus, corpus.author_papers(a), cutoff, horizons);
}

// --- pagerank -------------------------------------------------------------------

PagerankScores pagerank(std::size_t node_count, std::span<const GraphEdge> edges,
                        const PagerankOptions& options) {
  return kernels::pagerank_parallel(kernels::PagerankGraph::build(node_count, edges), options);
}

void write_pagerank_csv(const std::string& path, const PagerankScores& scores,
                        std::span<const std::string> node_ids) {
  if (node_ids.size() != scores.scores.size()) throw ArgumentError("node id count does not match scores");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << "node_id,score\n";
  char buf[32];
  for (std::size_t i = 0; i < node_ids.size(); ++i) {
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, scores.scores[i]);
    out << node_ids[i] << ',' << std::string_view(buf, static_cast<std::size_t>(ptr - buf)) << '\n';
  }
}

std::vector<double> paper_pagerank_as_of(const Corpus& corpus, Date cutoff, const PagerankOptions& options) {
  constexpr auto kAbsent = static_cast<std::uint32_t>(-1);
  std::vector<std::uint32_t> node_of(corpus.paper_count(), kAbsent);
  std::vector<PaperIndex> paper_of;
  for (PaperIndex p = 0; p < corpus.paper_count(); ++p) {
    if (corpus.paper(p).date <= cutoff) {
      node_of[p] = static_cast<std::uint32_t>(paper_of.size());
      paper_of.push_back(p);
    }
  }
  std::vector<double> out(corpus.paper_count(), 0.0);
  if (paper_of.empty()) return out;
  std::vector<GraphEdge> edges;
  for (const auto& e : corpus.citations()) {
    if (node_of[e.citing] != kAbsent && node_of[e.cited] != kAbsent) {
      edges.push_back({node_of[e.citing], node_of[e.cited]});
    }
  }
  auto scores = pagerank(paper_of.size(), edges, options);
  for (std::size_t i = 0; i < paper_of.size(); ++i) out[paper_of[i]] = scores.scores[i];
  return out;
}

std::vector<std::pair<AuthorIndex, AuthorIndex>> coauthor_graph(const Corpus& corpus, Date cutoff,
                                                                int max_authors_per_paper) {
  std::vector<std::pair<AuthorIndex, AuthorIndex>> edges;
  for (PaperIndex p = 0; p < corpus.paper_count(); ++p) {
    const auto& paper = corpus.paper(p);
    if (paper.date > cutoff) continue;
    if (paper.author_names.size() > static_cast<std::size_t>(max_authors_per_paper)) continue;
    auto authors = corpus.paper_authors(p);
    for (std::size_t i = 0; i < authors.size(); ++i) {
      for (std::size_t j = i + 1; j < authors.size(); ++j) {
        edges.emplace_back(std::min(authors[i], authors[j]), std::max(authors[i], authors[j]));
      }
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

std::vector<double> coauthor_pagerank_as_of(const Corpus& corpus, Date cutoff, int max_authors_per_paper,
                                            const PagerankOptions& options) {
  if (corpus.author_count() == 0) return {};
  std::vector<GraphEdge> directed;
  for (auto [a, b] : coauthor_graph(corpus, cutoff, max_authors_per_paper)) {
    directed.push_back({a, b});
    directed.push_back({b, a});
  }
  return pagerank(corpus.author_count(), directed, options).scores;
}

// --- journal impact factors -----------------------------------------------------

std::string reduce_journal_abbreviation(std::string_view abbreviation) {
  std::string out;
  for (char ch : abbreviation) {
    auto c = static_cast<unsigned char>(ch);
    if (std::isdigit(c)) break;
    if (std::isalpha(c)) out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

std::string reduce_journal_reference(std::string_view journal_ref) {
  std::string out = reduce_journal_abbreviation(journal_ref);
  for (std::string_view suffix : {"volume", "vol"}) {
    if (out.size() >= suffix.size() && std::string_view(out).substr(out.size() - suffix.size()) == suffix) {
      out.resize(out.size() - suffix.size());
      break;
    }
  }
  return out;
}

JifResolver::JifResolver(const JifTable& table, const JifTranslation& translation) {
  for (const auto& [abbrev, jif] : table) {
    auto reduced = reduce_journal_abbreviation(abbrev);
    if (!reduced.empty()) direct_.emplace(reduced, Match{abbrev, jif});  // first abbreviation wins
  }
  for (const auto& [reduced_ref, abbrev] : translation) {
    if (auto it = table.find(abbrev); it != table.end()) {
      translated_.emplace(reduced_ref, Match{abbrev, it->second});
    } else if (auto d = direct_.find(reduce_journal_abbreviation(abbrev)); d != direct_.end()) {
      translated_.emplace(reduced_ref, d->second);
    }
  }
}

std::optional<JifResolver::Match> JifResolver::lookup(std::string_view journal_ref) const {
  auto reduced = reduce_journal_reference(journal_ref);
  if (reduced.empty()) return std::nullopt;
  if (auto it = direct_.find(reduced); it != direct_.end()) return it->second;
  if (auto it = translated_.find(reduced); it != translated_.end()) return it->second;
  return std::nullopt;
}

std::optional<double> JifResolver::resolve(std::string_view journal_ref) const {
  if (auto m = lookup(journal_ref)) return m->jif;
  return std::nullopt;
}

std::optional<std::string> JifResolver::journal(std::string_view journal_ref) const {
  if (auto m = lookup(journal_ref)) return m->journal;
  return std::nullopt;
}

std::optional<double> resolve_jif(std::string_view journal_ref, const JifTable& table,
                                  const JifTranslation& translation) {
  return JifResolver(table, translation).resolve(journal_ref);
}

}  // namespace citecast
