#include <algorithm>
#include <filesystem>
#include <map>
#include <sstream>

#ifdef CITECAST_HAVE_BOOST_XML
#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#endif

#include "doctest.h"
#include "eval_fixtures.hpp"
#include "helpers.hpp"

#include "citecast/errors.hpp"
#include "citecast/figures.hpp"

using namespace citecast;

namespace {

std::size_t lines(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

void check_svg(const std::string& path) {
  auto text = testing::read_file(path);
  CHECK(text.find("<svg") != std::string::npos);
  CHECK(text.find("<script") == std::string::npos);
#ifdef CITECAST_HAVE_BOOST_XML
  std::istringstream in(text);
  boost::property_tree::ptree tree;
  CHECK_NOTHROW(boost::property_tree::read_xml(in, tree));
  CHECK(tree.count("svg") == 1);
#else
  CHECK(text.find("</svg>") != std::string::npos);
#endif
}

const EvaluationReport& shared_report(const Dataset& ds) {
  static const EvaluationReport report = run_cross_validation(ds, testing::small_cv(4, 2, 5));
  return report;
}

}  // namespace

TEST_SUITE("figures") {

TEST_CASE("evaluation figures have the documented shapes") {
  static const auto ds = testing::signal_dataset(50, 4, 9);
  const auto& report = shared_report(ds);
  testing::TempDir dir;
  auto files = emit_figures(report, ds, dir / "figs");
  CHECK(files.size() == 10);
  for (const auto& f : files) {
    CHECK(std::filesystem::exists(f));
    if (f.ends_with(".svg")) check_svg(f);
  }
  auto scatter = testing::read_file(dir / "figs/fig2_scatter.csv");
  CHECK(scatter.rfind("author_id,actual,network,naive,elastic_net\n", 0) == 0);
  CHECK(lines(scatter) == 1 + report.validation_count);
  auto r2 = testing::read_file(dir / "figs/fig3_r2_by_horizon.csv");
  CHECK(lines(r2) == 1 + 3 * 4);
  std::istringstream rows(r2);
  std::string line;
  std::getline(rows, line);
  std::map<std::string, int> per_predictor;
  while (std::getline(rows, line)) ++per_predictor[line.substr(0, line.find(','))];
  CHECK(per_predictor == std::map<std::string, int>{{"elastic_net", 4}, {"naive", 4}, {"network", 4}});
  CHECK(lines(testing::read_file(dir / "figs/fig4_rounds.csv")) == 1 + 3 * 2);
  auto traj = testing::read_file(dir / "figs/fig5_trajectories.csv");
  CHECK(lines(traj) == 1 + 5 * 4);
  auto summary = testing::read_file(dir / "figs/summary.csv");
  CHECK(lines(summary) == 1 + 3 * 5);
  auto meta = testing::read_file(dir / "figs/report_meta.csv");
  CHECK(meta.find("fingerprint," + report.fingerprint + "\n") != std::string::npos);
  CHECK(meta.find("broadness_source,category-entropy\n") != std::string::npos);

  testing::TempDir again;
  emit_figures(report, ds, again / "figs");
  for (const auto& name : {"fig2_scatter.svg", "fig3_r2_by_horizon.csv", "fig5_trajectories.svg"}) {
    CHECK(testing::read_file(dir / (std::string("figs/") + name)) == testing::read_file(again / (std::string("figs/") + name)));
  }
}

TEST_CASE("epoch, ablation and grid outputs") {
  testing::TempDir dir;
  EpochStudyReport epochs;
  epochs.checkpoints = {150, 155};
  epochs.r2 = {{{0.5, 0.6}}, {{0.51, 0.61}}};
  epochs.averaged = {{{0.5, 0.0}, {0.6, 0.0}}, {{0.51, 0.0}, {0.61, 0.0}}};
  for (const auto& f : emit_epoch_figures(epochs, dir.path().string())) {
    if (f.ends_with(".svg")) check_svg(f);
  }
  CHECK(lines(testing::read_file(dir / "epoch_study.csv")) == 1 + 2 * 2);

  AblationReport ablation;
  ablation.horizons = {1, 10};
  AblationEntry e;
  e.removed = "citations";
  e.horizons = {1, 10};
  e.ratios = {{0.9, 0.95}};
  e.ratio_summary = {{0.9, 0.0}, {0.95, 0.0}};
  e.r_ratio = {0.97, 0.0};
  ablation.entries = {e};
  for (const auto& f : emit_ablation_figures(ablation, dir.path().string())) {
    if (f.ends_with(".svg")) check_svg(f);
  }
  CHECK(testing::read_file(dir / "ablation.csv") ==
        "removed,horizon,ratio_mean,ratio_std\ncitations,1,0.9,0\ncitations,10,0.95,0\n");

  HirschGrid grid;
  grid.author_ids = {"a_a", "b_b"};
  grid.values = Matrix(2, 5, 1.0);
  grid.correlations = Matrix(5, 5, 1.0);
  grid.correlations(0, 1) = std::nan("");
  grid.correlations(1, 0) = std::nan("");
  for (const auto& f : emit_hirsch_grid(grid, dir.path().string())) {
    if (f.ends_with(".svg")) check_svg(f);
  }
  auto csv = testing::read_file(dir / "hirsch_grid.csv");
  CHECK(csv.find("nan") != std::string::npos);
}

TEST_CASE("chart rendering escapes labels") {
  SvgChart chart("a < b & c", "x", "y");
  chart.add_points("p", {{0.0, 1.0}, {2.0, 3.0}});
  chart.add_line("l", {{0.0, 0.0}, {1.0, 1.0}}, {0.1, 0.2});
  chart.add_bars("b", {1.0, 2.0});
  auto svg = chart.render();
  CHECK(svg.find("a &lt; b &amp; c") != std::string::npos);
  CHECK(svg == chart.render());
}

TEST_CASE("unwritable output directory") {
  testing::TempDir dir;
  testing::write_file(dir / "file", "x");
  CHECK_THROWS_AS(ensure_directory(dir / "file"), IoError);
  CHECK_THROWS_AS(ensure_directory(dir / "file/sub"), IoError);
}

}
