#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace citecast {

inline constexpr const char* kConfigEnvVar = "CITECAST_CONFIG";

// Everything a command needs, as plain values. Text form is one `key = value`
// per line; `#` starts a comment.
struct RunConfig {
  // paths
  std::string papers = "papers.jsonl";
  std::string citations = "citations.tsv";
  std::string jif = "jif.csv";
  std::string translation;  // optional
  std::string broadness;    // optional author_id,broadness CSV
  std::string out = "out";
  std::string model;        // empty: <out>/model.bin

  // synthetic corpus
  int synth_authors = 800;
  int synth_papers = 16000;

  // cohort
  std::string cutoff = "2008-01-01";
  std::string window_start = "1996-01-01";
  std::string window_end = "2003-01-01";
  int min_papers = 5;
  int max_papers = 500;
  int max_authors_per_paper = 30;

  // task and features
  std::string task = "cumulative-h";
  int horizons = 10;
  std::string nc_reading = "cited-and-citing";  // or "citing"
  std::vector<std::string> disabled_channels;
  std::string include_topic_vectors = "auto";   // auto, true, false
  bool include_broadness = true;

  // network and training
  int per_paper_units = 70;
  int hidden_units = 70;
  int epochs = 150;
  int batch_size = 50;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  // evaluation
  int rounds = 20;
  int train_count = 0;  // 0: default training share
  std::uint64_t seed = 1;
  int jobs = 1;
  std::vector<std::string> predictors = {"network", "naive", "elastic_net"};
  double enet_alpha = 0.2;
  int enet_folds = 10;
  std::vector<int> epoch_checkpoints = {150, 155, 160};
  std::vector<std::string> ablate;  // empty: every channel group
  int t1_years = 10;
  int t2_years = 20;

  // predict
  std::string author;

  // Throws ArgumentError for unknown keys or unparsable values.
  void set(std::string_view key, std::string_view value);
  std::string get(std::string_view key) const;
  static std::vector<std::string> keys();

  // Throws ParseError with the line number.
  void apply_text(std::string_view text, const std::string& source);
  void apply_file(const std::string& path);

  std::string to_text() const;
  std::string model_path() const;
};

// Splits "key=value"; throws ArgumentError without '='.
std::pair<std::string, std::string> split_assignment(std::string_view text);

}  // namespace citecast
