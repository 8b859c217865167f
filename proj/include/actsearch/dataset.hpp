#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "actsearch/errors.hpp"

namespace actsearch {

// A finite point set with hidden ground-truth binary labels. Ids are dense
// 0..N-1 and the feature dimension is uniform.
struct Dataset {
  std::vector<std::vector<double>> features;
  std::vector<int> labels;
  std::string name;

  int num_points() const { return static_cast<int>(features.size()); }
  int dim() const { return features.empty() ? 0 : static_cast<int>(features[0].size()); }
  int target_count() const;
};

// n uniform points in the unit square; a point is a target iff it lies
// strictly within distance 1/4 of a corner or the center. Expected target
// fraction is pi/8.
Dataset generate_disks(int n, std::uint64_t seed);

// CSV with header `id,f1,...,fd,label`, dense ids, labels in {0,1}, LF line
// endings. Throws parse_error naming the offending line.
Dataset load_dataset(const std::filesystem::path& path);
void save_dataset(const Dataset& data, const std::filesystem::path& path);

}  // namespace actsearch
