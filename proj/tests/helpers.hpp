#pragma once

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "citecast/corpus.hpp"
#include "citecast/features.hpp"
#include "citecast/network.hpp"

namespace testing {

using namespace citecast;

inline PaperRecord paper(std::string id, std::vector<std::string> authors, std::string date,
                         std::vector<std::string> categories = {"hep-th"},
                         std::optional<std::string> journal = std::nullopt, int length = 10) {
  PaperRecord p;
  p.id = std::move(id);
  p.author_names = std::move(authors);
  p.date = parse_date(date);
  p.categories = std::move(categories);
  p.journal_ref = std::move(journal);
  p.length = length;
  return p;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("citecast_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string operator/(const std::string& name) const { return (path_ / name).string(); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline AuthorFeatures random_features(std::mt19937_64& rng, std::size_t channels, std::size_t columns,
                                      std::size_t author_inputs) {
  std::normal_distribution<double> normal(0.0, 1.0);
  AuthorFeatures f;
  f.per_paper = Matrix(channels, columns);
  for (auto& v : f.per_paper.data()) v = normal(rng);
  for (std::size_t i = 0; i < author_inputs; ++i) f.author_inputs.push_back(normal(rng));
  return f;
}

inline NetworkParams random_params(std::mt19937_64& rng, std::size_t channels, std::size_t author_inputs,
                                   int per_paper, int hidden, int outputs, double scale = 0.5) {
  NetworkConfig config;
  config.per_paper_units = per_paper;
  config.hidden_units = hidden;
  config.output_units = outputs;
  config.seed = rng();
  auto params = init_params(config, channels, author_inputs);
  std::normal_distribution<double> normal(0.0, scale);
  for (auto& v : params.values) v = normal(rng);
  return params;
}

}  // namespace testing
