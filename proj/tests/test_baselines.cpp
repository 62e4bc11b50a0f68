#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "doctest.h"
#include "helpers.hpp"

#include "citecast/baselines.hpp"
#include "citecast/errors.hpp"

using namespace citecast;
using testing::paper;

TEST_SUITE("baselines") {

TEST_CASE("naive table means") {
  std::vector<int> h0 = {3, 3, 5};
  std::vector<std::vector<double>> t = {{4, 4}, {6, 6}, {9, 10}};
  auto m = fit_naive(h0, t);
  CHECK(m.table().at(3) == std::vector<double>{5, 5});
  CHECK(predict_naive(m, 3) == std::vector<double>{5, 5});
  CHECK(predict_naive(m, 5) == std::vector<double>{9, 10});
  // Line through (3, 5) and (5, 9): 2 h0 - 1.
  CHECK(m.extrapolation()[0].slope == doctest::Approx(2.0));
  CHECK(m.extrapolation()[0].intercept == doctest::Approx(-1.0));
  auto far = predict_naive(m, 10);
  CHECK(far[0] == doctest::Approx(19.0));
  // (3, 5) and (5, 10): 2.5 h0 - 2.5.
  CHECK(far[1] == doctest::Approx(22.5));
  CHECK(predict_naive(m, 0) == std::vector<double>{-1.0, -1.0});
  CHECK_THROWS_AS(predict_naive(m, -1), ArgumentError);
}

TEST_CASE("single group gives a constant line") {
  std::vector<int> h0 = {4, 4};
  std::vector<std::vector<double>> t = {{2, 3}, {4, 5}};
  auto m = fit_naive(h0, t);
  CHECK(m.extrapolation()[0].slope == 0.0);
  CHECK(m.extrapolation()[1].intercept == 4.0);
  CHECK(predict_naive(m, 17) == std::vector<double>{3, 4});
}

TEST_CASE("predictions are clamped to be nondecreasing") {
  std::vector<int> h0 = {1, 2};
  std::vector<std::vector<double>> t = {{3, 2, 4}, {1, 5, 2}};
  auto m = fit_naive(h0, t);
  CHECK(predict_naive(m, 1) == std::vector<double>{3, 3, 4});
  for (int h = 0; h < 30; ++h) {
    auto p = predict_naive(m, h);
    CHECK(std::is_sorted(p.begin(), p.end()));
  }
}

TEST_CASE("table matches a group-by oracle and ignores order") {
  std::mt19937_64 rng(31);
  std::vector<int> h0;
  std::vector<std::vector<double>> t;
  for (int i = 0; i < 300; ++i) {
    int h = std::uniform_int_distribution<int>(0, 12)(rng);
    h0.push_back(h);
    std::vector<double> s(5);
    double acc = h;
    for (auto& v : s) v = acc += std::uniform_real_distribution<double>(0.0, 1.3)(rng);
    t.push_back(s);
  }
  std::map<int, std::vector<std::vector<double>>> groups;
  for (std::size_t i = 0; i < h0.size(); ++i) groups[h0[i]].push_back(t[i]);
  auto m = fit_naive(h0, t);
  REQUIRE(m.table().size() == groups.size());
  for (const auto& [h, rows] : groups) {
    for (std::size_t k = 0; k < 5; ++k) {
      std::vector<double> vals;
      for (const auto& r : rows) vals.push_back(r[k]);
      std::sort(vals.begin(), vals.end());
      double sum = 0.0;
      for (double v : vals) sum += v;
      CHECK(m.table().at(h)[k] == sum / static_cast<double>(vals.size()));
    }
  }
  std::vector<std::size_t> perm(h0.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<int> h2;
  std::vector<std::vector<double>> t2;
  for (auto i : perm) {
    h2.push_back(h0[i]);
    t2.push_back(t[i]);
  }
  auto m2 = fit_naive(h2, t2);
  CHECK(m2.table() == m.table());
  for (std::size_t k = 0; k < 5; ++k) {
    CHECK(m2.extrapolation()[k].slope == m.extrapolation()[k].slope);
    CHECK(m2.extrapolation()[k].intercept == m.extrapolation()[k].intercept);
  }
}

TEST_CASE("naive fit input validation and CSV") {
  std::vector<int> h0 = {1};
  std::vector<std::vector<double>> t = {{1.0, 2.0}};
  CHECK_THROWS_AS(fit_naive(std::vector<int>{}, std::vector<std::vector<double>>{}), ArgumentError);
  CHECK_THROWS_AS(fit_naive(std::vector<int>{-1}, t), ArgumentError);
  CHECK_THROWS_AS(fit_naive(std::vector<int>{1, 2}, t), ArgumentError);
  testing::TempDir dir;
  write_naive_table_csv(dir / "n.csv", fit_naive(h0, t));
  CHECK(testing::read_file(dir / "n.csv") == "h0,horizon,prediction\n1,1,1\n1,2,2\n");
}

TEST_CASE("acuna features") {
  std::vector<PaperRecord> papers;
  const char* refs[] = {"Phys. Rev. Lett. 90 (2003) 1", "Nature 420 (2002) 5", "Phys. Rev. D 66 (2002) 1",
                        "Phys. Rev. D 67 (2003) 2", "Proc. Natl. Acad. Sci. USA 100 (2003) 1"};
  for (int i = 0; i < 9; ++i) {
    std::optional<std::string> ref;
    if (i < 5) ref = refs[i];
    papers.push_back(paper("p" + std::to_string(i), {"A. Author"}, std::to_string(1998 + i) + "-01-01", {"hep-th"}, ref));
  }
  papers.push_back(paper("after", {"A. Author"}, "2009-01-01", {"hep-th"}, "Science 1 (2009) 1"));
  auto corpus = Corpus::build(papers, {});
  CohortEntry e;
  e.author_id = "author_a";
  e.author = 0;
  for (PaperIndex p = 0; p < 9; ++p) e.papers.push_back(p);
  e.career_papers = e.papers;
  e.first_paper_date = parse_date("1998-01-01");
  e.career_papers.push_back(9);
  auto f = acuna_features(corpus, e, parse_date("2008-01-01"));
  REQUIRE(f.size() == acuna_feature_names().size());
  CHECK(f[0] == 0.0);
  CHECK(f[1] == 3.0);
  CHECK(f[2] == 10.0);
  CHECK(f[3] == 4.0);  // physrevlett, nature, physrevd, procnatlacadsciusa
  CHECK(f[4] == 3.0);
  CHECK(is_top_journal("Science 300 (2003)"));
  CHECK(is_top_journal("PNAS 99 (2002) 1"));
  CHECK_FALSE(is_top_journal("Phys. Rev. D 66"));
  CHECK_FALSE(is_top_journal(""));
}

}
