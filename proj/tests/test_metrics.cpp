#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"

#include "citecast/errors.hpp"
#include "citecast/kernels.hpp"

using namespace citecast;
using testing::paper;

TEST_SUITE("metrics") {

TEST_CASE("h-index examples") {
  CHECK(h_index(std::vector<int>{}) == 0);
  CHECK(h_index(std::vector<int>{3, 0, 6, 1, 5}) == 3);
  CHECK(h_index(std::vector<int>{9, 9, 9}) == 3);
  CHECK(h_index(std::vector<int>{0, 0}) == 0);
  CHECK_THROWS_AS(h_index(std::vector<int>{1, -1}), ArgumentError);
}

TEST_CASE("h-index against brute force and its bounds") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<int> counts(std::uniform_int_distribution<int>(0, 25)(rng));
    for (auto& c : counts) c = std::uniform_int_distribution<int>(0, 30)(rng);
    int h = h_index(counts);
    CHECK(h == oracle::h_index(counts));
    CHECK(h <= static_cast<int>(counts.size()));
    CHECK(h <= (counts.empty() ? 0 : *std::max_element(counts.begin(), counts.end())));
    std::shuffle(counts.begin(), counts.end(), rng);
    CHECK(h_index(counts) == h);
  }
}

namespace {

// Author A writes a0 (2005) and a1 (2009); b* are citing papers by B.
Corpus window_corpus() {
  std::vector<PaperRecord> papers = {
      paper("a0", {"A. Author"}, "2005-01-01"), paper("a1", {"A. Author"}, "2009-01-01"),
      paper("b-pre", {"B. Other"}, "2007-06-01"), paper("b-in1", {"B. Other"}, "2009-06-01"),
      paper("b-in2", {"B. Other"}, "2010-06-01"), paper("b-t2", {"B. Other"}, "2011-01-01")};
  std::vector<std::pair<std::string, std::string>> edges = {
      {"b-pre", "a0"}, {"b-in1", "a0"}, {"b-in1", "a1"}, {"b-in2", "a1"}, {"b-t2", "a1"}, {"b-t2", "a0"}};
  return Corpus::build(papers, edges);
}

}  // namespace

TEST_CASE("windowed citation counts") {
  auto corpus = window_corpus();
  CitationWindow w{parse_date("2008-01-01"), parse_date("2011-01-01")};
  // a1 is the only in-window paper: cited by b-in1 and b-in2; b-t2 sits on the open end.
  CHECK(nc_window(corpus, "author_a", w) == 2);
  // Citing-only reading also counts b-in1 -> a0.
  CHECK(nc_window(corpus, "author_a", w, NcReading::kCitingInWindow) == 3);
  CitationWindow empty{parse_date("2012-01-01"), parse_date("2013-01-01")};
  CHECK(nc_window(corpus, "author_a", empty) == 0);
  CHECK_THROWS_AS(nc_window(corpus, "author_a", CitationWindow{w.t2, w.t1}), ArgumentError);
  CHECK_THROWS_AS(nc_window(corpus, "nobody_z", w), UnknownEntityError);
}

TEST_CASE("citations and h-index as of a date") {
  auto corpus = window_corpus();
  auto a0 = *corpus.find_paper("a0");
  CHECK(citations_as_of(corpus, a0, parse_date("2007-06-01")) == 1);
  CHECK(citations_as_of(corpus, a0, parse_date("2007-05-31")) == 0);
  auto a = corpus.require_author("author_a");
  CHECK(h_index_as_of(corpus, corpus.author_papers(a), parse_date("2010-12-31")) == 2);
  CHECK(h_index_as_of(corpus, corpus.author_papers(a), parse_date("2008-01-01")) == 1);
  CitationWindow w{parse_date("2008-01-01"), parse_date("2011-01-01")};
  CHECK(h_index_within(corpus, corpus.author_papers(a), w) == 1);
}

TEST_CASE("cumulative h series matches per-year recomputation") {
  std::vector<PaperRecord> papers = {
      paper("p0", {"A. Author"}, "2006-03-01"), paper("p1", {"A. Author"}, "2007-03-01"),
      paper("p2", {"A. Author"}, "2008-05-01"), paper("p3", {"A. Author"}, "2010-01-01"),
      paper("p4", {"A. Author"}, "2012-07-01")};
  std::vector<std::pair<std::string, std::string>> edges;
  for (int y = 2006; y <= 2017; ++y) {
    std::string id = "c" + std::to_string(y);
    papers.push_back(paper(id, {"C. Citer"}, std::to_string(y) + "-09-01"));
    for (const auto* cited : {"p0", "p1", "p2", "p3", "p4"}) {
      if ((y + cited[1]) % 3 != 0) edges.emplace_back(id, cited);
    }
  }
  auto corpus = Corpus::build(papers, edges);
  const Date cutoff = parse_date("2008-01-01");
  auto series = cumulative_h_series(corpus, "author_a", cutoff, 10);
  REQUIRE(series.size() == 10);
  auto a = corpus.require_author("author_a");
  for (int n = 1; n <= 10; ++n) {
    Date as_of = add_years(cutoff, n);
    std::vector<int> counts;
    for (auto p : corpus.author_papers(a)) {
      if (corpus.paper(p).date > as_of) continue;
      int c = 0;
      for (const auto& e : corpus.citations()) {
        if (e.cited == p && corpus.paper(e.citing).date <= as_of) ++c;
      }
      counts.push_back(c);
    }
    CHECK(series[static_cast<std::size_t>(n - 1)] == oracle::h_index(counts));
  }
  CHECK(std::is_sorted(series.begin(), series.end()));

  auto uncited = Corpus::build({paper("x", {"U. Lone"}, "2000-01-01")}, {});
  CHECK(cumulative_h_series(uncited, "lone_u", cutoff, 10) == std::vector<int>(10, 0));
  CHECK_THROWS_AS(cumulative_h_series(uncited, "lone_u", cutoff, 0), ArgumentError);
}

TEST_CASE("pagerank fixtures") {
  std::vector<GraphEdge> cycle = {{0, 1}, {1, 2}, {2, 0}};
  auto s = pagerank(3, cycle);
  for (double v : s.scores) CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  std::vector<GraphEdge> two = {{0, 1}};
  auto t = pagerank(2, two);
  auto ref = oracle::pagerank(2, two, 0.85, 50);
  CHECK(std::abs(t.scores[0] - ref[0]) < 1e-8);
  CHECK(std::abs(t.scores[1] - ref[1]) < 1e-8);

  std::vector<GraphEdge> dangling = {{0, 1}, {1, 2}, {0, 2}};
  auto u = pagerank(4, dangling);
  CHECK(std::accumulate(u.scores.begin(), u.scores.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  for (double v : u.scores) CHECK(v > 0.0);
  CHECK(u.residual < 1e-10);

  PagerankOptions strict;
  strict.max_iterations = 2;
  CHECK_THROWS_AS(pagerank(4, dangling, strict), ConvergenceError);
  CHECK_THROWS_AS(pagerank(0, {}), ArgumentError);
}

TEST_CASE("pagerank agrees with a dense oracle and the serial kernel") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t n = std::uniform_int_distribution<std::size_t>(1, 40)(rng);
    std::vector<GraphEdge> edges;
    std::bernoulli_distribution coin(0.1);
    for (std::uint32_t i = 0; i < n; ++i) {
      for (std::uint32_t j = 0; j < n; ++j) {
        if (i != j && coin(rng)) edges.push_back({i, j});
      }
    }
    auto s = pagerank(n, edges);
    auto ref = oracle::pagerank(n, edges, 0.85, 300);
    auto serial = kernels::pagerank_serial(n, edges, PagerankOptions{});
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(std::abs(s.scores[i] - ref[i]) < 1e-8);
      CHECK(std::abs(s.scores[i] - serial.scores[i]) < 1e-9);
      total += s.scores[i];
    }
    CHECK(std::abs(total - 1.0) < 1e-8);
  }
}

TEST_CASE("pagerank CSV export") {
  testing::TempDir dir;
  auto s = pagerank(2, std::vector<GraphEdge>{{0, 1}});
  std::vector<std::string> ids = {"a", "b"};
  write_pagerank_csv(dir / "pr.csv", s, ids);
  auto text = testing::read_file(dir / "pr.csv");
  CHECK(text.rfind("node_id,score\na,", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 3);
}

TEST_CASE("citation pagerank ignores later papers") {
  auto corpus = window_corpus();
  auto pr = paper_pagerank_as_of(corpus, parse_date("2008-01-01"));
  CHECK(pr[*corpus.find_paper("a1")] == 0.0);
  CHECK(pr[*corpus.find_paper("a0")] > pr[*corpus.find_paper("b-pre")]);
}

TEST_CASE("coauthor graph") {
  const Date cutoff = parse_date("2008-01-01");
  auto joint = Corpus::build({paper("p", {"A. One", "B. Two"}, "2000-01-01")}, {});
  CHECK(coauthor_graph(joint, cutoff).size() == 1);
  auto solo = Corpus::build({paper("p", {"A. One"}, "2000-01-01"), paper("q", {"B. Two"}, "2000-01-01")}, {});
  CHECK(coauthor_graph(solo, cutoff).empty());
  auto triangle = Corpus::build({paper("p", {"A. One", "B. Two", "C. Three"}, "2000-01-01"),
                                 paper("q", {"A. One", "B. Two"}, "2001-01-01"),
                                 paper("late", {"A. One", "D. Four"}, "2009-01-01")},
                                {});
  auto edges = coauthor_graph(triangle, cutoff);
  CHECK(edges.size() == 3);
  std::vector<std::string> big = {"A. One"};
  for (int i = 0; i < 31; ++i) big.push_back("X. Person" + std::string(1, static_cast<char>('a' + i % 26)) + std::to_string(i));
  auto crowded = Corpus::build({paper("p", big, "2000-01-01")}, {});
  CHECK(coauthor_graph(crowded, cutoff).empty());
  auto pr = coauthor_pagerank_as_of(triangle, cutoff);
  CHECK(pr.size() == triangle.author_count());
  CHECK(std::accumulate(pr.begin(), pr.end(), 0.0) == doctest::Approx(1.0));
}

TEST_CASE("journal reference reduction") {
  CHECK(reduce_journal_reference("Phys.Rev.Lett. vol. 89 (2002)") == "physrevlett");
  CHECK(reduce_journal_reference("Phys. Rev. Lett. 95, 061301 (2005)") == "physrevlett");
  CHECK(reduce_journal_reference("Astrophys. J. Volume 600 (2004) 1") == "astrophysj");
  CHECK(reduce_journal_reference("Nucl.Phys. B700 (2004) 3") == "nuclphysb");
  CHECK(reduce_journal_reference("") == "");
  CHECK(reduce_journal_abbreviation("Phys. Rev. D") == "physrevd");
  // Only the arXiv side loses the suffix.
  CHECK(reduce_journal_abbreviation("Rev. Mod. Phys. Vol") == "revmodphysvol");
}

TEST_CASE("JIF resolution") {
  JifTable table = {{"Phys. Rev. Lett.", 7.5}, {"J. High Energy Phys.", 5.8}};
  JifTranslation translation = {{"jhep", "J. High Energy Phys."}};
  CHECK(resolve_jif("Phys.Rev.Lett. vol. 89 (2002)", table, translation) == 7.5);
  CHECK(resolve_jif("PHYS REV LETT 89", table, translation) == 7.5);
  CHECK(resolve_jif("P.h.y.s. Rev., Lett. 89", table, translation) == 7.5);
  CHECK_FALSE(resolve_jif("JHEP 0305 (2003) 012", table, {}));
  CHECK(resolve_jif("JHEP 0305 (2003) 012", table, translation) == 5.8);
  CHECK_FALSE(resolve_jif("", table, translation));
  CHECK_FALSE(resolve_jif("Unknown Journal 3", table, translation));
  JifResolver resolver(table, translation);
  CHECK(*resolver.journal("JHEP 05 (2003) 1") == "J. High Energy Phys.");
}

}
