#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "citecast/date.hpp"

namespace citecast {

using PaperIndex = std::uint32_t;
using AuthorIndex = std::uint32_t;

inline constexpr std::size_t kTopicDimensions = 50;

struct PaperRecord {
  std::string id;
  std::vector<std::string> author_names;
  Date date{};
  std::vector<std::string> categories;
  std::optional<std::string> journal_ref;
  int length = 0;  // page count, 0 when unknown
  std::optional<std::vector<double>> topic_vector;
};

struct CitationEdge {
  PaperIndex citing;
  PaperIndex cited;
  bool operator==(const CitationEdge&) const = default;
};

// Counts of edges dropped while building a corpus.
struct LoadDiagnostics {
  std::size_t dangling_edges = 0;
  std::size_t self_citations = 0;
  std::size_t duplicate_edges = 0;

  std::size_t warnings() const { return dangling_edges + self_citations + duplicate_edges; }
};

using JifTable = std::map<std::string, double>;          // journal abbreviation -> JIF
using JifTranslation = std::map<std::string, std::string>;  // reduced ref -> journal abbreviation

struct CohortEntry;

// Immutable, indexed publication store. Papers are held in the order given;
// authors are derived from the papers' raw names with author_key().
class Corpus {
 public:
  Corpus() = default;

  // Validates and indexes. Duplicate paper ids and invalid records throw
  // ArgumentError; dangling, self and repeated citation edges are dropped and
  // counted in diagnostics().
  static Corpus build(std::vector<PaperRecord> papers,
                      const std::vector<std::pair<std::string, std::string>>& citations,
                      JifTable jif_table = {}, JifTranslation jif_translation = {});

  std::size_t paper_count() const noexcept { return papers_.size(); }
  std::size_t author_count() const noexcept { return author_ids_.size(); }

  const PaperRecord& paper(PaperIndex p) const { return papers_.at(p); }
  std::span<const PaperRecord> papers() const noexcept { return papers_; }
  std::optional<PaperIndex> find_paper(std::string_view id) const;

  std::span<const CitationEdge> citations() const noexcept { return edges_; }
  // Papers citing `p`, ordered by index.
  std::span<const PaperIndex> cited_by(PaperIndex p) const;

  // Author ids, sorted; AuthorIndex is the position in this list.
  const std::vector<std::string>& author_ids() const noexcept { return author_ids_; }
  const std::string& author_id(AuthorIndex a) const { return author_ids_.at(a); }
  std::optional<AuthorIndex> find_author(std::string_view id) const;
  // Throws UnknownEntityError.
  AuthorIndex require_author(std::string_view id) const;

  // The author's papers ordered by (date, paper id).
  std::span<const PaperIndex> author_papers(AuthorIndex a) const;
  // Distinct raw name spellings grouped under this author, sorted.
  const std::vector<std::string>& author_names(AuthorIndex a) const { return author_names_.at(a); }
  // Distinct authors of a paper, by index.
  std::span<const AuthorIndex> paper_authors(PaperIndex p) const;

  const JifTable& jif_table() const noexcept { return jif_table_; }
  const JifTranslation& jif_translation() const noexcept { return jif_translation_; }
  const LoadDiagnostics& diagnostics() const noexcept { return diagnostics_; }

 private:
  friend Corpus restrict_to_cohort(const Corpus& corpus, std::span<const CohortEntry> cohort);

  static Corpus build_impl(std::vector<PaperRecord> papers,
                           const std::vector<std::pair<std::string, std::string>>& citations,
                           JifTable jif_table, JifTranslation jif_translation,
                           const std::vector<std::string>* keep_authors);

  std::vector<PaperRecord> papers_;
  std::unordered_map<std::string, PaperIndex> paper_index_;
  std::vector<CitationEdge> edges_;
  std::vector<std::size_t> cited_by_offsets_;
  std::vector<PaperIndex> cited_by_;
  std::vector<std::string> author_ids_;
  std::vector<std::vector<std::string>> author_names_;
  std::vector<std::vector<PaperIndex>> author_papers_;
  std::vector<std::vector<AuthorIndex>> paper_authors_;
  JifTable jif_table_;
  JifTranslation jif_translation_;
  LoadDiagnostics diagnostics_;
};

// Author-name key: lowercase, diacritics folded to ASCII, punctuation removed,
// then "<last name>_<first initial>". "Last, First" ordering is honoured.
// "J. Smith" and "John Smith" both map to "smith_j".
std::string author_key(std::string_view raw_name);

// Groups papers by author_key of each raw name. Returns author id -> sorted
// paper ids. Independent of the order of `papers`.
std::map<std::string, std::vector<std::string>> group_authors(std::span<const PaperRecord> papers);

// Top-level category: "astro-ph.CO" -> "astro-ph".
std::string top_level_category(std::string_view category);

// --- file formats ---------------------------------------------------------

// Loads the four corpus files. `translation_path` may be empty.
Corpus load_corpus(const std::string& papers_path, const std::string& citations_path,
                   const std::string& jif_path, const std::string& translation_path = {});

PaperRecord parse_paper_line(std::string_view line, const std::string& file, std::size_t line_no);
std::string format_paper_line(const PaperRecord& paper);

void write_papers(const std::string& path, std::span<const PaperRecord> papers);
void write_citations(const std::string& path, const Corpus& corpus);
void write_jif_table(const std::string& path, const JifTable& table);
void write_translation_table(const std::string& path, const JifTranslation& table);

// --- cohort -----------------------------------------------------------------

struct CohortSpec {
  Date cutoff = make_date(2008, 1, 1);
  Date window_start = make_date(1996, 1, 1);  // first paper in [start, end)
  Date window_end = make_date(2003, 1, 1);
  int min_papers = 5;
  int max_papers = 500;
  int max_authors_per_paper = 30;  // papers with more authors are dropped
  std::string collaboration_keyword = "collaboration";

  void validate() const;
};

struct CohortEntry {
  std::string author_id;
  AuthorIndex author = 0;
  // Surviving papers dated <= cutoff, ordered by (date, id).
  std::vector<PaperIndex> papers;
  // All surviving papers regardless of date; targets are computed from these.
  std::vector<PaperIndex> career_papers;
  Date first_paper_date{};
};

// Applies the collaboration and paper-count filters; entries sorted by author id.
std::vector<CohortEntry> select_cohort(const Corpus& corpus, const CohortSpec& spec);

// Same corpus restricted to the listed authors' papers.
Corpus restrict_to_cohort(const Corpus& corpus, std::span<const CohortEntry> cohort);

struct CohortSplit {
  std::vector<std::size_t> train;       // indices into the cohort
  std::vector<std::size_t> validation;  // both ascending
};

// Random partition; requires 0 < train_count < cohort_size.
CohortSplit split_train_validation(std::size_t cohort_size, std::size_t train_count,
                                   std::uint64_t seed);

}  // namespace citecast
