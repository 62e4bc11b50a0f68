#include "citecast/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"

#include "citecast/errors.hpp"

namespace citecast {

namespace {

// ASCII folding for U+00C0..U+017F.
std::string_view fold_code_point(char32_t cp) {
  static constexpr std::string_view latin1[64] = {
      "a", "a", "a", "a", "a", "a", "ae", "c", "e", "e", "e", "e", "i", "i", "i", "i",
      "d", "n", "o", "o", "o", "o", "o", "",  "o", "u", "u", "u", "u", "y", "th", "ss",
      "a", "a", "a", "a", "a", "a", "ae", "c", "e", "e", "e", "e", "i", "i", "i", "i",
      "d", "n", "o", "o", "o", "o", "o", "",  "o", "u", "u", "u", "u", "y", "th", "y"};
  if (cp >= 0xC0 && cp <= 0xFF) return latin1[cp - 0xC0];
  struct Range {
    char32_t lo, hi;
    std::string_view ascii;
  };
  static constexpr Range extended[] = {
      {0x100, 0x105, "a"}, {0x106, 0x10D, "c"}, {0x10E, 0x111, "d"}, {0x112, 0x11B, "e"},
      {0x11C, 0x123, "g"}, {0x124, 0x127, "h"}, {0x128, 0x131, "i"}, {0x132, 0x133, "ij"},
      {0x134, 0x135, "j"}, {0x136, 0x138, "k"}, {0x139, 0x142, "l"}, {0x143, 0x14B, "n"},
      {0x14C, 0x151, "o"}, {0x152, 0x153, "oe"}, {0x154, 0x159, "r"}, {0x15A, 0x161, "s"},
      {0x162, 0x167, "t"}, {0x168, 0x173, "u"}, {0x174, 0x175, "w"}, {0x176, 0x178, "y"},
      {0x179, 0x17E, "z"}, {0x17F, 0x17F, "s"}};
  for (const auto& r : extended) {
    if (cp >= r.lo && cp <= r.hi) return r.ascii;
  }
  return {};
}

// Lowercase ASCII with diacritics folded. Undecodable bytes are dropped.
std::string fold_to_ascii(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) {
    auto c = static_cast<unsigned char>(text[i]);
    if (c < 0x80) {
      out.push_back(static_cast<char>(std::tolower(c)));
      ++i;
      continue;
    }
    std::size_t len = (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xE ? 3 : (c >> 3) == 0x1E ? 4 : 1;
    if (len == 2 && i + 1 < text.size()) {
      char32_t cp = ((c & 0x1F) << 6) | (static_cast<unsigned char>(text[i + 1]) & 0x3F);
      out += fold_code_point(cp);
    }
    i += len;
  }
  return out;
}

std::vector<std::string> name_tokens(std::string_view folded) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };
  for (char ch : folded) {
    if (std::isalnum(static_cast<unsigned char>(ch))) {
      current.push_back(ch);
    } else if (ch == '.' || ch == ',' || std::isspace(static_cast<unsigned char>(ch))) {
      flush();
    }
  }
  flush();
  return tokens;
}

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out.push_back(sep);
    out += parts[i];
  }
  return out;
}

bool contains_case_insensitive(std::string_view haystack, std::string_view needle) {
  if (needle.empty()) return false;
  auto it = std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end(),
                        [](char a, char b) {
                          return std::tolower(static_cast<unsigned char>(a)) ==
                                 std::tolower(static_cast<unsigned char>(b));
                        });
  return it != haystack.end();
}

void validate_record(const PaperRecord& p) {
  if (p.id.empty()) throw ArgumentError("paper with empty id");
  if (p.author_names.empty()) throw ArgumentError("paper '" + p.id + "' has no authors");
  if (p.length < 0) throw ArgumentError("paper '" + p.id + "' has negative length");
  if (p.topic_vector && p.topic_vector->size() != kTopicDimensions) {
    throw ArgumentError("paper '" + p.id + "' topic vector has " +
                        std::to_string(p.topic_vector->size()) + " entries, expected 50");
  }
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  return out;
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

bool parse_double(std::string_view s, double& out) {
  auto t = trim(s);
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  return ec == std::errc{} && ptr == t.data() + t.size() && !t.empty();
}

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

std::string author_key(std::string_view raw_name) {
  std::string folded = fold_to_ascii(raw_name);
  std::string last;
  std::string first;
  if (auto comma = folded.find(','); comma != std::string::npos) {
    auto last_tokens = name_tokens(std::string_view(folded).substr(0, comma));
    auto first_tokens = name_tokens(std::string_view(folded).substr(comma + 1));
    last = join(last_tokens, '-');
    if (!first_tokens.empty()) first = first_tokens.front();
  } else {
    auto tokens = name_tokens(folded);
    if (!tokens.empty()) {
      last = tokens.back();
      if (tokens.size() > 1) first = tokens.front();
    }
  }
  if (last.empty()) return "anonymous";
  if (first.empty()) return last;
  return last + "_" + first.substr(0, 1);
}

std::map<std::string, std::vector<std::string>> group_authors(std::span<const PaperRecord> papers) {
  std::map<std::string, std::set<std::string>> grouped;
  for (const auto& p : papers) {
    for (const auto& name : p.author_names) grouped[author_key(name)].insert(p.id);
  }
  std::map<std::string, std::vector<std::string>> out;
  for (auto& [key, ids] : grouped) out.emplace(key, std::vector<std::string>(ids.begin(), ids.end()));
  return out;
}

std::string top_level_category(std::string_view category) {
  return std::string(category.substr(0, category.find('.')));
}

Corpus Corpus::build(std::vector<PaperRecord> papers,
                     const std::vector<std::pair<std::string, std::string>>& citations,
                     JifTable jif_table, JifTranslation jif_translation) {
  return build_impl(std::move(papers), citations, std::move(jif_table), std::move(jif_translation),
                    nullptr);
}

Corpus Corpus::build_impl(std::vector<PaperRecord> papers,
                          const std::vector<std::pair<std::string, std::string>>& citations,
                          JifTable jif_table, JifTranslation jif_translation,
                          const std::vector<std::string>* keep_authors) {
  Corpus c;
  c.papers_ = std::move(papers);
  c.jif_table_ = std::move(jif_table);
  c.jif_translation_ = std::move(jif_translation);

  c.paper_index_.reserve(c.papers_.size());
  for (std::size_t i = 0; i < c.papers_.size(); ++i) {
    const auto& p = c.papers_[i];
    validate_record(p);
    if (!c.paper_index_.emplace(p.id, static_cast<PaperIndex>(i)).second) {
      throw ArgumentError("duplicate paper id '" + p.id + "'");
    }
  }

  c.edges_.reserve(citations.size());
  for (const auto& [citing, cited] : citations) {
    auto from = c.paper_index_.find(citing);
    auto to = c.paper_index_.find(cited);
    if (from == c.paper_index_.end() || to == c.paper_index_.end()) {
      ++c.diagnostics_.dangling_edges;
      continue;
    }
    if (from->second == to->second) {
      ++c.diagnostics_.self_citations;
      continue;
    }
    c.edges_.push_back({from->second, to->second});
  }
  std::sort(c.edges_.begin(), c.edges_.end(), [](const CitationEdge& a, const CitationEdge& b) {
    return std::tie(a.citing, a.cited) < std::tie(b.citing, b.cited);
  });
  auto last = std::unique(c.edges_.begin(), c.edges_.end());
  c.diagnostics_.duplicate_edges = static_cast<std::size_t>(c.edges_.end() - last);
  c.edges_.erase(last, c.edges_.end());

  // CSR of incoming edges; edges are sorted by citing so each bucket is ascending.
  c.cited_by_offsets_.assign(c.papers_.size() + 1, 0);
  for (const auto& e : c.edges_) ++c.cited_by_offsets_[e.cited + 1];
  std::partial_sum(c.cited_by_offsets_.begin(), c.cited_by_offsets_.end(), c.cited_by_offsets_.begin());
  c.cited_by_.resize(c.edges_.size());
  {
    auto cursor = c.cited_by_offsets_;
    for (const auto& e : c.edges_) c.cited_by_[cursor[e.cited]++] = e.citing;
  }

  std::map<std::string, std::pair<std::set<std::string>, std::set<PaperIndex>>> grouped;
  for (std::size_t i = 0; i < c.papers_.size(); ++i) {
    for (const auto& name : c.papers_[i].author_names) {
      auto key = author_key(name);
      if (keep_authors && !std::binary_search(keep_authors->begin(), keep_authors->end(), key)) continue;
      auto& slot = grouped[key];
      slot.first.insert(name);
      slot.second.insert(static_cast<PaperIndex>(i));
    }
  }
  c.paper_authors_.assign(c.papers_.size(), {});
  for (auto& [key, slot] : grouped) {
    auto a = static_cast<AuthorIndex>(c.author_ids_.size());
    c.author_ids_.push_back(key);
    c.author_names_.emplace_back(slot.first.begin(), slot.first.end());
    std::vector<PaperIndex> ps(slot.second.begin(), slot.second.end());
    std::sort(ps.begin(), ps.end(), [&](PaperIndex x, PaperIndex y) {
      const auto& px = c.papers_[x];
      const auto& py = c.papers_[y];
      return std::tie(px.date, px.id) < std::tie(py.date, py.id);
    });
    for (auto p : ps) c.paper_authors_[p].push_back(a);
    c.author_papers_.push_back(std::move(ps));
  }
  return c;
}

std::optional<PaperIndex> Corpus::find_paper(std::string_view id) const {
  auto it = paper_index_.find(std::string(id));
  if (it == paper_index_.end()) return std::nullopt;
  return it->second;
}

std::span<const PaperIndex> Corpus::cited_by(PaperIndex p) const {
  if (p >= papers_.size()) throw ArgumentError("paper index out of range");
  return {cited_by_.data() + cited_by_offsets_[p], cited_by_offsets_[p + 1] - cited_by_offsets_[p]};
}

std::optional<AuthorIndex> Corpus::find_author(std::string_view id) const {
  auto it = std::lower_bound(author_ids_.begin(), author_ids_.end(), id);
  if (it == author_ids_.end() || *it != id) return std::nullopt;
  return static_cast<AuthorIndex>(it - author_ids_.begin());
}

AuthorIndex Corpus::require_author(std::string_view id) const {
  if (auto a = find_author(id)) return *a;
  throw UnknownEntityError("unknown author '" + std::string(id) + "'");
}

std::span<const PaperIndex> Corpus::author_papers(AuthorIndex a) const { return author_papers_.at(a); }

std::span<const AuthorIndex> Corpus::paper_authors(PaperIndex p) const { return paper_authors_.at(p); }

// --- file formats -------------------------------------------------------------

PaperRecord parse_paper_line(std::string_view line, const std::string& file, std::size_t line_no) {
  using nlohmann::json;
  auto fail = [&](const std::string& why) -> ParseError { return ParseError(file, line_no, why); };
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw fail(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw fail("record is not an object");
  auto field = [&](const char* key) -> const json& {
    auto it = j.find(key);
    if (it == j.end()) throw fail(std::string("missing key '") + key + "'");
    return *it;
  };

  PaperRecord p;
  const auto& id = field("id");
  if (!id.is_string()) throw fail("'id' must be a string");
  p.id = id.get<std::string>();

  const auto& authors = field("authors");
  if (!authors.is_array() || authors.empty()) throw fail("'authors' must be a nonempty array");
  for (const auto& a : authors) {
    if (!a.is_string()) throw fail("'authors' entries must be strings");
    p.author_names.push_back(a.get<std::string>());
  }

  const auto& date = field("date");
  if (!date.is_string()) throw fail("'date' must be a string");
  try {
    p.date = parse_date(date.get<std::string>());
  } catch (const ArgumentError& e) {
    throw fail(e.what());
  }

  const auto& cats = field("categories");
  if (!cats.is_array()) throw fail("'categories' must be an array");
  for (const auto& cat : cats) {
    if (!cat.is_string()) throw fail("'categories' entries must be strings");
    p.categories.push_back(cat.get<std::string>());
  }

  const auto& jref = field("journal_ref");
  if (jref.is_string()) {
    auto s = jref.get<std::string>();
    if (!trim(s).empty()) p.journal_ref = std::move(s);
  } else if (!jref.is_null()) {
    throw fail("'journal_ref' must be a string or null");
  }

  const auto& len = field("length");
  if (!len.is_number_integer() || len.get<long long>() < 0) throw fail("'length' must be a nonnegative integer");
  p.length = static_cast<int>(len.get<long long>());

  const auto& topic = field("topic_vector");
  if (topic.is_array()) {
    if (topic.size() != kTopicDimensions) throw fail("'topic_vector' must have 50 entries");
    std::vector<double> v;
    v.reserve(kTopicDimensions);
    for (const auto& x : topic) {
      if (!x.is_number()) throw fail("'topic_vector' entries must be numbers");
      v.push_back(x.get<double>());
    }
    p.topic_vector = std::move(v);
  } else if (!topic.is_null()) {
    throw fail("'topic_vector' must be an array or null");
  }
  return p;
}

std::string format_paper_line(const PaperRecord& paper) {
  nlohmann::ordered_json j;
  j["id"] = paper.id;
  j["authors"] = paper.author_names;
  j["date"] = format_date(paper.date);
  j["categories"] = paper.categories;
  j["journal_ref"] = paper.journal_ref ? nlohmann::ordered_json(*paper.journal_ref) : nlohmann::ordered_json();
  j["length"] = paper.length;
  j["topic_vector"] = paper.topic_vector ? nlohmann::ordered_json(*paper.topic_vector) : nlohmann::ordered_json();
  return j.dump();
}

Corpus load_corpus(const std::string& papers_path, const std::string& citations_path,
                   const std::string& jif_path, const std::string& translation_path) {
  std::vector<PaperRecord> papers;
  {
    auto in = open_input(papers_path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (trim(line).empty()) continue;
      papers.push_back(parse_paper_line(line, papers_path, line_no));
    }
  }

  std::vector<std::pair<std::string, std::string>> edges;
  {
    auto in = open_input(citations_path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (trim(line).empty()) continue;
      auto tab = line.find('\t');
      if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
        throw ParseError(citations_path, line_no, "expected 'citing_id<TAB>cited_id'");
      }
      auto citing = trim(std::string_view(line).substr(0, tab));
      auto cited = trim(std::string_view(line).substr(tab + 1));
      if (citing.empty() || cited.empty()) throw ParseError(citations_path, line_no, "empty paper id");
      edges.emplace_back(std::move(citing), std::move(cited));
    }
  }

  JifTable jif;
  {
    auto in = open_input(jif_path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (trim(line).empty()) continue;
      auto comma = line.rfind(',');
      if (comma == std::string::npos) throw ParseError(jif_path, line_no, "expected 'journal_abbreviation,impact_factor'");
      auto name = trim(std::string_view(line).substr(0, comma));
      double value = 0.0;
      if (!parse_double(std::string_view(line).substr(comma + 1), value)) {
        if (line_no == 1) continue;  // header
        throw ParseError(jif_path, line_no, "impact factor is not a number");
      }
      if (name.empty()) throw ParseError(jif_path, line_no, "empty journal abbreviation");
      jif[name] = value;
    }
  }

  JifTranslation translation;
  if (!translation_path.empty()) {
    auto in = open_input(translation_path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (trim(line).empty()) continue;
      auto comma = line.find(',');
      if (comma == std::string::npos) throw ParseError(translation_path, line_no, "expected 'reduced_ref,journal_abbreviation'");
      auto reduced = trim(std::string_view(line).substr(0, comma));
      auto journal = trim(std::string_view(line).substr(comma + 1));
      if (line_no == 1 && reduced == "reduced_ref") continue;
      if (reduced.empty() || journal.empty()) throw ParseError(translation_path, line_no, "empty field");
      translation[reduced] = journal;
    }
  }
  return Corpus::build(std::move(papers), edges, std::move(jif), std::move(translation));
}

void write_papers(const std::string& path, std::span<const PaperRecord> papers) {
  auto out = open_output(path);
  for (const auto& p : papers) out << format_paper_line(p) << '\n';
  if (!out) throw IoError("failed writing '" + path + "'");
}

void write_citations(const std::string& path, const Corpus& corpus) {
  auto out = open_output(path);
  for (const auto& e : corpus.citations()) {
    out << corpus.paper(e.citing).id << '\t' << corpus.paper(e.cited).id << '\n';
  }
  if (!out) throw IoError("failed writing '" + path + "'");
}

void write_jif_table(const std::string& path, const JifTable& table) {
  auto out = open_output(path);
  out << "journal_abbreviation,impact_factor\n";
  for (const auto& [name, value] : table) out << name << ',' << format_double(value) << '\n';
  if (!out) throw IoError("failed writing '" + path + "'");
}

void write_translation_table(const std::string& path, const JifTranslation& table) {
  auto out = open_output(path);
  out << "reduced_ref,journal_abbreviation\n";
  for (const auto& [reduced, journal] : table) out << reduced << ',' << journal << '\n';
  if (!out) throw IoError("failed writing '" + path + "'");
}

// --- cohort -------------------------------------------------------------------

void CohortSpec::validate() const {
  if (!(window_start < window_end) || window_end > cutoff) {
    throw ArgumentError("cohort window must satisfy start < end <= cutoff");
  }
  if (min_papers <= 0 || min_papers > max_papers) {
    throw ArgumentError("cohort paper bounds must satisfy 0 < min_papers <= max_papers");
  }
  if (max_authors_per_paper < 1) throw ArgumentError("max_authors_per_paper must be >= 1");
}

std::vector<CohortEntry> select_cohort(const Corpus& corpus, const CohortSpec& spec) {
  spec.validate();
  std::vector<CohortEntry> cohort;
  for (AuthorIndex a = 0; a < corpus.author_count(); ++a) {
    const auto& names = corpus.author_names(a);
    bool is_collaboration = std::any_of(names.begin(), names.end(), [&](const std::string& n) {
      return contains_case_insensitive(n, spec.collaboration_keyword);
    });
    if (is_collaboration) continue;

    CohortEntry entry;
    for (auto p : corpus.author_papers(a)) {
      const auto& paper = corpus.paper(p);
      if (paper.author_names.size() > static_cast<std::size_t>(spec.max_authors_per_paper)) continue;
      entry.career_papers.push_back(p);
      if (paper.date <= spec.cutoff) entry.papers.push_back(p);
    }
    if (entry.career_papers.empty()) continue;
    entry.first_paper_date = corpus.paper(entry.career_papers.front()).date;
    if (entry.first_paper_date < spec.window_start || !(entry.first_paper_date < spec.window_end)) continue;
    auto count = static_cast<int>(entry.papers.size());
    if (count < spec.min_papers || count > spec.max_papers) continue;
    entry.author = a;
    entry.author_id = corpus.author_id(a);
    cohort.push_back(std::move(entry));
  }
  return cohort;
}

Corpus restrict_to_cohort(const Corpus& corpus, std::span<const CohortEntry> cohort) {
  std::vector<std::string> keep;
  keep.reserve(cohort.size());
  for (const auto& e : cohort) keep.push_back(e.author_id);
  std::sort(keep.begin(), keep.end());
  std::vector<std::pair<std::string, std::string>> edges;
  edges.reserve(corpus.citations().size());
  for (const auto& e : corpus.citations()) edges.emplace_back(corpus.paper(e.citing).id, corpus.paper(e.cited).id);
  std::vector<PaperRecord> papers(corpus.papers().begin(), corpus.papers().end());
  return Corpus::build_impl(std::move(papers), edges, corpus.jif_table(), corpus.jif_translation(), &keep);
}

CohortSplit split_train_validation(std::size_t cohort_size, std::size_t train_count, std::uint64_t seed) {
  if (train_count == 0 || train_count >= cohort_size) {
    throw ArgumentError("train_count must satisfy 0 < train_count < cohort size (" +
                        std::to_string(train_count) + " vs " + std::to_string(cohort_size) + ")");
  }
  std::vector<std::size_t> order(cohort_size);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  CohortSplit split;
  split.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(train_count));
  split.validation.assign(order.begin() + static_cast<std::ptrdiff_t>(train_count), order.end());
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.validation.begin(), split.validation.end());
  return split;
}

}  // namespace citecast
