#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "citecast/corpus.hpp"

namespace citecast {

// Largest h such that at least h entries are >= h.
int h_index(std::span<const int> citation_counts);

struct CitationWindow {
  Date t1{};
  Date t2{};  // half-open [t1, t2)

  void validate() const;
};

// Which papers count toward Nc(t1, t2). The default restricts both the cited
// and the citing paper to the window; the alternative restricts only the
// citing paper.
enum class NcReading { kCitedAndCitingInWindow, kCitingInWindow };

std::int64_t nc_window(const Corpus& corpus, std::span<const PaperIndex> author_papers,
                       const CitationWindow& window,
                       NcReading reading = NcReading::kCitedAndCitingInWindow);
std::int64_t nc_window(const Corpus& corpus, std::string_view author_id, const CitationWindow& window,
                       NcReading reading = NcReading::kCitedAndCitingInWindow);

// Citations to `paper` from papers dated <= as_of.
int citations_as_of(const Corpus& corpus, PaperIndex paper, Date as_of);

// h-index over papers dated <= as_of, counting citations dated <= as_of.
int h_index_as_of(const Corpus& corpus, std::span<const PaperIndex> author_papers, Date as_of);

// h-index restricted to papers and citations dated inside [t1, t2).
int h_index_within(const Corpus& corpus, std::span<const PaperIndex> author_papers,
                   const CitationWindow& window);

// Entry n-1 is h_index_as_of(cutoff + n years), n = 1..horizons.
std::vector<int> cumulative_h_series(const Corpus& corpus, std::span<const PaperIndex> author_papers,
                                     Date cutoff, int horizons);
std::vector<int> cumulative_h_series(const Corpus& corpus, std::string_view author_id, Date cutoff,
                                     int horizons);

// --- pagerank -----------------------------------------------------------------

struct GraphEdge {
  std::uint32_t from;
  std::uint32_t to;
  bool operator==(const GraphEdge&) const = default;
};

struct PagerankOptions {
  double damping = 0.85;
  double tolerance = 1e-10;  // L1 change between iterations
  int max_iterations = 200;
};

struct PagerankScores {
  std::vector<double> scores;  // indexed by node
  double damping = 0.85;
  int iterations_used = 0;
  double residual = 0.0;
};

// Power iteration; dangling nodes spread their mass uniformly. Throws
// ConvergenceError when max_iterations is exceeded.
PagerankScores pagerank(std::size_t node_count, std::span<const GraphEdge> edges,
                        const PagerankOptions& options = {});

void write_pagerank_csv(const std::string& path, const PagerankScores& scores,
                        std::span<const std::string> node_ids);

// Pagerank of every paper on the citation graph of papers dated <= cutoff.
// Later papers get 0.
std::vector<double> paper_pagerank_as_of(const Corpus& corpus, Date cutoff,
                                         const PagerankOptions& options = {});

// Undirected coauthor edges (a < b) from papers dated <= cutoff with at most
// max_authors_per_paper authors. Sorted, unique.
std::vector<std::pair<AuthorIndex, AuthorIndex>> coauthor_graph(const Corpus& corpus, Date cutoff,
                                                                int max_authors_per_paper = 30);

// Pagerank over all authors on the symmetric coauthor graph.
std::vector<double> coauthor_pagerank_as_of(const Corpus& corpus, Date cutoff,
                                            int max_authors_per_paper = 30,
                                            const PagerankOptions& options = {});

// --- journal impact factors ---------------------------------------------------

// Lowercase alphanumerics up to the first digit.
std::string reduce_journal_abbreviation(std::string_view abbreviation);
// As above, then a trailing "volume" or "vol" is removed.
std::string reduce_journal_reference(std::string_view journal_ref);

class JifResolver {
 public:
  JifResolver() = default;
  JifResolver(const JifTable& table, const JifTranslation& translation);

  // Direct match on reduced abbreviations first, then the translation table.
  std::optional<double> resolve(std::string_view journal_ref) const;
  std::optional<std::string> journal(std::string_view journal_ref) const;

 private:
  struct Match {
    std::string journal;
    double jif;
  };
  std::optional<Match> lookup(std::string_view journal_ref) const;

  std::map<std::string, Match, std::less<>> direct_;      // reduced abbreviation
  std::map<std::string, Match, std::less<>> translated_;  // reduced arXiv reference
};

std::optional<double> resolve_jif(std::string_view journal_ref, const JifTable& table,
                                  const JifTranslation& translation);

}  // namespace citecast
