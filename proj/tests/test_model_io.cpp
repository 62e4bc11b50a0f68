#include <fstream>
#include <random>

#include "doctest.h"
#include "helpers.hpp"

#include "citecast/errors.hpp"
#include "citecast/model_io.hpp"
#include "citecast/training.hpp"

using namespace citecast;

namespace {

ModelBundle sample_bundle() {
  std::mt19937_64 rng(77);
  ModelBundle m;
  m.task = Task::kSqrtNc;
  m.cutoff = parse_date("2008-01-01");
  m.horizons = 4;
  m.broadness_source = "category-entropy";
  m.features.max_papers = 5;
  m.features.category_vocabulary = {"astro-ph", "hep-th"};
  m.features.disabled = {"jif"};
  m.manifest = channel_manifest(m.features);
  m.network.per_paper_units = 6;
  m.network.hidden_units = 5;
  m.network.output_units = 4;
  m.network.seed = 1234567890123ULL;
  m.params = testing::random_params(rng, m.manifest.size(), 1, 6, 5, 4);
  std::vector<AuthorFeatures> train;
  for (int i = 0; i < 6; ++i) train.push_back(testing::random_features(rng, m.manifest.size(), 5, 1));
  for (auto& f : train) f.per_paper(4, 0) = 2.0;
  m.normalizer = fit_normalizer(train, m.manifest);
  return m;
}

}  // namespace

TEST_SUITE("model_io") {

TEST_CASE("save and load round trip") {
  testing::TempDir dir;
  auto m = sample_bundle();
  save_model(dir / "m.bin", m);
  auto back = load_model(dir / "m.bin");
  CHECK(back == m);
  CHECK(back.params.values == m.params.values);
  CHECK(back.normalizer.degenerate == m.normalizer.degenerate);
  std::mt19937_64 rng(5);
  auto f = testing::random_features(rng, m.manifest.size(), 5, 1);
  auto a = predict(m.params, f, m.normalizer);
  auto b = predict(back.params, f, back.normalizer);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-12);
  auto bytes = testing::read_file(dir / "m.bin");
  CHECK(bytes.substr(0, 8) == "CITECAST");
  CHECK(static_cast<unsigned char>(bytes[8]) == kModelFormatVersion);
  save_model(dir / "again.bin", back);
  CHECK(testing::read_file(dir / "again.bin") == bytes);
}

TEST_CASE("malformed files are rejected") {
  testing::TempDir dir;
  CHECK_THROWS_AS(load_model(dir / "missing.bin"), IoError);
  auto m = sample_bundle();
  save_model(dir / "m.bin", m);
  auto bytes = testing::read_file(dir / "m.bin");

  testing::write_file(dir / "magic.bin", "NOTAMODL" + bytes.substr(8));
  CHECK_THROWS_AS(load_model(dir / "magic.bin"), ParseError);
  auto version = bytes;
  version[8] = 9;
  testing::write_file(dir / "version.bin", version);
  CHECK_THROWS_AS(load_model(dir / "version.bin"), ParseError);
  testing::write_file(dir / "short.bin", bytes.substr(0, bytes.size() / 2));
  CHECK_THROWS_AS(load_model(dir / "short.bin"), ParseError);
  testing::write_file(dir / "long.bin", bytes + "x");
  CHECK_THROWS_AS(load_model(dir / "long.bin"), ParseError);
  CHECK_THROWS_AS(save_model(dir / "no/such/dir/m.bin", m), IoError);
}

}
