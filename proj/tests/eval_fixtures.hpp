#pragma once

#include <algorithm>
#include <cmath>
#include <random>

#include "citecast/dataset.hpp"
#include "citecast/evaluation.hpp"

namespace testing {

using namespace citecast;

// Authors whose target grows with the column sum of the citations channel.
// The length channel is all zero.
inline Dataset signal_dataset(std::size_t authors, int horizons, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<int> count(1, 6);
  Dataset ds;
  ds.task = Task::kCumulativeH;
  ds.cutoff = make_date(2008, 1, 1);
  ds.horizons = horizons;
  ds.feature_config.max_papers = 6;
  ds.manifest = channel_manifest(ds.feature_config);
  ds.broadness_source = "category-entropy";
  for (std::size_t i = 0; i < authors; ++i) {
    AuthorRecord r;
    r.author_id = "author_" + std::to_string(1000 + i);
    r.features.per_paper = Matrix(ds.manifest.size(), 6);
    const int papers = count(rng);
    double cites = 0.0;
    for (int c = 0; c < papers; ++c) {
      r.features.per_paper(0, static_cast<std::size_t>(c)) = 1.0;
      const double v = std::floor(std::exp(1.2 * normal(rng) + 1.0));
      r.features.per_paper(1, static_cast<std::size_t>(c)) = v;
      cites += v;
      for (std::size_t ch = 2; ch < ds.manifest.size(); ++ch) {
        if (ds.manifest[ch].name != "length") r.features.per_paper(ch, static_cast<std::size_t>(c)) = normal(rng);
      }
    }
    r.features.author_inputs = {std::abs(normal(rng))};
    const double level = std::sqrt(cites);
    r.h0 = static_cast<int>(std::floor(level * 0.6));
    double acc = level;
    for (int n = 0; n < horizons; ++n) {
      acc += 0.25 * level;
      r.target.push_back(acc);
    }
    r.acuna = {static_cast<double>(r.h0), std::sqrt(static_cast<double>(papers)), 5.0 + normal(rng), 1.0, 0.0};
    ds.authors.push_back(std::move(r));
  }
  return ds;
}

inline CrossValidationConfig small_cv(int horizons, int rounds, int epochs) {
  CrossValidationConfig c;
  c.rounds = rounds;
  c.network.per_paper_units = 12;
  c.network.hidden_units = 12;
  c.network.output_units = horizons;
  c.training.epochs = epochs;
  c.training.batch_size = 20;
  c.training.learning_rate = 5e-3;
  c.elastic_net.lambda_count = 20;
  c.elastic_net.cv_folds = 4;
  c.master_seed = 5;
  return c;
}

}  // namespace testing
