#pragma once

#include <string>
#include <vector>

#include "citecast/dataset.hpp"
#include "citecast/features.hpp"
#include "citecast/network.hpp"

namespace citecast {

inline constexpr std::uint32_t kModelFormatVersion = 1;

// Everything needed to predict for a new author.
struct ModelBundle {
  Task task = Task::kCumulativeH;
  Date cutoff{};
  int horizons = 10;
  std::string broadness_source;
  NetworkConfig network;
  FeatureConfig features;
  std::vector<ChannelInfo> manifest;
  NormalizationStats normalizer;
  NetworkParams params;

  bool operator==(const ModelBundle&) const;
};

// Little-endian binary; layout documented in the README. Throws IoError.
void save_model(const std::string& path, const ModelBundle& model);
// Throws IoError when unreadable and ParseError on a malformed or
// unsupported-version file.
ModelBundle load_model(const std::string& path);

}  // namespace citecast
