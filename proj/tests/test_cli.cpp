#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"

#include "citecast/commands.hpp"
#include "citecast/errors.hpp"
#include "citecast/run_config.hpp"

using namespace citecast;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "citecast");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

// Writes a small synthetic corpus into dir and returns the -D flags that
// point the other commands at it.
std::vector<std::string> corpus_flags(const testing::TempDir& dir) {
  auto r = cli({"synth", "--out", dir / "corpus", "--seed", "3", "-D", "synth_authors=120", "-D", "synth_papers=2500"});
  REQUIRE(r.code == 0);
  return {"-D", "papers=" + dir / "corpus/papers.jsonl", "-D", "citations=" + dir / "corpus/citations.tsv",
          "-D", "jif=" + dir / "corpus/jif.csv"};
}

std::vector<std::string> small_network() {
  return {"-D", "per_paper_units=6", "-D", "hidden_units=6", "-D", "epochs=4", "-D", "batch_size=25"};
}

std::vector<std::string> join(std::initializer_list<std::vector<std::string>> parts) {
  std::vector<std::string> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

std::size_t lines(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("config text round trip and precedence") {
  RunConfig c;
  c.apply_text("# comment\nepochs = 12\nrounds=3\npredictors = network, naive\n\n", "cfg");
  CHECK(c.epochs == 12);
  CHECK(c.rounds == 3);
  CHECK(c.predictors == std::vector<std::string>{"network", "naive"});
  RunConfig d;
  d.apply_text(c.to_text(), "roundtrip");
  CHECK(d.to_text() == c.to_text());
  for (const auto& key : RunConfig::keys()) CHECK(d.get(key) == c.get(key));
  try {
    c.apply_text("epochs = 3\nbogus = 1\n", "cfg");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(c.apply_text("epochs 3\n", "cfg"), ParseError);
  CHECK_THROWS_AS(c.set("epochs", "many"), ArgumentError);
  CHECK_THROWS_AS(split_assignment("novalue"), ArgumentError);
  CHECK(split_assignment("a = b") == std::pair<std::string, std::string>{"a", "b"});
  c.out = "o";
  CHECK(c.model_path() == (std::filesystem::path("o") / "model.bin").string());
}

TEST_CASE("usage errors exit with 2") {
  CHECK(cli({}).code == 2);
  CHECK(cli({"frobnicate"}).code == 2);
  CHECK(cli({"evaluate", "-D", "nokey=1"}).code == 2);
  testing::TempDir dir;
  auto r = cli({"train", "--out", dir / "o", "-D", "papers=" + dir / "nope.jsonl"});
  CHECK(r.code == 2);
  CHECK(r.err.find(dir / "nope.jsonl") != std::string::npos);
  CHECK(cli({"cohort", "--config", dir / "missing.cfg"}).code == 2);
  CHECK(cli({"synth", "--jobs", "0"}).code == 2);
}

TEST_CASE("synth is byte reproducible and validates first") {
  testing::TempDir dir;
  std::vector<std::string> flags = {"-D", "synth_authors=50", "-D", "synth_papers=600", "--seed", "9"};
  auto a = cli(join({{"synth", "--out", dir / "a"}, flags}));
  auto b = cli(join({{"synth", "--out", dir / "b"}, flags}));
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  for (const auto* f : {"papers.jsonl", "citations.tsv", "jif.csv"}) {
    auto x = testing::read_file(dir / (std::string("a/") + f));
    CHECK_FALSE(x.empty());
    CHECK(x == testing::read_file(dir / (std::string("b/") + f)));
  }
  auto zero = cli({"synth", "--out", dir / "z", "-D", "synth_authors=0"});
  CHECK(zero.code == 2);
  CHECK_FALSE(std::filesystem::exists(dir / "z"));
}

TEST_CASE("config file from the environment with overrides on top") {
  testing::TempDir dir;
  testing::write_file(dir / "run.cfg", "synth_authors = 30\nsynth_papers = 200\nseed = 4\n");
  ::setenv(kConfigEnvVar, (dir / "run.cfg").c_str(), 1);
  auto r = cli({"synth", "--out", dir / "env", "-D", "synth_papers=300"});
  ::unsetenv(kConfigEnvVar);
  REQUIRE(r.code == 0);
  RunConfig resolved;
  resolved.apply_file(dir / "env/resolved_config.txt");
  CHECK(resolved.synth_authors == 30);
  CHECK(resolved.synth_papers == 300);
  CHECK(resolved.seed == 4);
  CHECK(r.out.find("wrote 300 papers") != std::string::npos);
}

TEST_CASE("train, predict and the model file") {
  testing::TempDir dir;
  auto corpus = corpus_flags(dir);
  auto cohort = cli(join({{"cohort", "--out", dir / "run"}, corpus}));
  REQUIRE(cohort.code == 0);
  auto cohort_csv = testing::read_file(dir / "run/cohort.csv");
  REQUIRE(lines(cohort_csv) > 3);
  std::istringstream rows(cohort_csv);
  std::string line;
  std::getline(rows, line);
  std::getline(rows, line);
  const std::string author = line.substr(0, line.find(','));

  auto train = cli(join({{"train", "--out", dir / "run"}, corpus, small_network()}));
  REQUIRE(train.code == 0);
  auto log = testing::read_file(dir / "run/train_log.csv");
  CHECK(log.rfind("epoch,loss\n", 0) == 0);
  CHECK(lines(log) == 1 + 4);
  CHECK(std::filesystem::exists(dir / "run/model.bin"));
  CHECK(std::filesystem::exists(dir / "run/channel_manifest.csv"));

  auto predict = cli(join({{"predict", "--author", author, "--out", dir / "run"}, corpus}));
  REQUIRE(predict.code == 0);
  std::istringstream pred(predict.out);
  std::getline(pred, line);
  CHECK(line == "horizon,prediction");
  std::vector<double> series;
  while (std::getline(pred, line)) series.push_back(std::stod(line.substr(line.find(',') + 1)));
  CHECK(series.size() == 10);
  CHECK(std::is_sorted(series.begin(), series.end()));

  auto unknown = cli(join({{"predict", "--author", "nobody_x", "--out", dir / "run"}, corpus}));
  CHECK(unknown.code == 3);
  CHECK(unknown.err.find("nobody_x") != std::string::npos);
}

TEST_CASE("evaluate with one round reports zero spread") {
  testing::TempDir dir;
  auto corpus = corpus_flags(dir);
  auto r = cli(join({{"evaluate", "--out", dir / "eval", "-D", "rounds=1", "-D", "enet_folds=3"}, corpus,
                     small_network()}));
  REQUIRE(r.code == 0);
  auto summary = testing::read_file(dir / "eval/summary.csv");
  std::istringstream rows(summary);
  std::string line;
  std::getline(rows, line);
  CHECK(line == "predictor,metric,horizon,mean,std");
  int checked = 0;
  while (std::getline(rows, line)) {
    CHECK(line.substr(line.rfind(',') + 1) == "0");
    ++checked;
  }
  CHECK(checked == 3 * 11);
  CHECK(std::filesystem::exists(dir / "eval/resolved_config.txt"));
}

TEST_CASE("ablate rejects unknown channels and lists the valid ones") {
  testing::TempDir dir;
  auto corpus = corpus_flags(dir);
  auto r = cli(join({{"ablate", "--channels", "citations,warp_drive", "--out", dir / "ab"}, corpus, small_network()}));
  CHECK(r.code == 2);
  CHECK(r.err.find("warp_drive") != std::string::npos);
  CHECK(r.err.find("coauthor_pagerank") != std::string::npos);
  CHECK_FALSE(std::filesystem::exists(dir / "ab/ablation.csv"));
}

TEST_CASE("baseline and hirsch-grid outputs") {
  testing::TempDir dir;
  auto corpus = corpus_flags(dir);
  auto b = cli(join({{"baseline", "--out", dir / "base", "-D", "enet_folds=3"}, corpus}));
  REQUIRE(b.code == 0);
  CHECK(testing::read_file(dir / "base/naive_table.csv").rfind("h0,horizon,prediction\n", 0) == 0);
  CHECK(lines(testing::read_file(dir / "base/elastic_net.csv")) == 11);
  auto g = cli(join({{"hirsch-grid", "--out", dir / "grid"}, corpus}));
  REQUIRE(g.code == 0);
  CHECK(lines(testing::read_file(dir / "grid/hirsch_grid.csv")) == 6);
}

}
