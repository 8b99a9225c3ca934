#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace pothole::dataset {

inline constexpr std::array<const char*, 3> kSplits{"training", "validation", "testing"};
/// Pairs per split of the reference road-pothole collection.
inline constexpr std::array<std::size_t, 3> kReferenceSplitSizes{240, 180, 180};

/// One rgb/disparity/label triplet matched by filename stem. Missing parts are empty paths.
struct Item {
  std::string stem;
  std::filesystem::path rgb;
  std::filesystem::path disparity;
  std::filesystem::path label;
};

/// root/<split>/{rgb,tdisp|disp,label}/<stem>.png
class DatasetLayout {
 public:
  explicit DatasetLayout(std::filesystem::path root) : root_(std::move(root)) {}

  const std::filesystem::path& root() const { return root_; }
  std::filesystem::path split_dir(const std::string& split) const { return root_ / split; }
  /// tdisp/ when present, else disp/.
  std::filesystem::path disparity_dir(const std::string& split) const;

  /// Items of a split sorted by stem. Throws InvalidArgument when a label
  /// has no disparity file or the split directory is missing.
  std::vector<Item> items(const std::string& split) const;
  /// Item counts per split in kSplits order; missing splits count 0.
  std::array<std::size_t, 3> split_sizes() const;

  /// Creates rgb/, disp/ and label/ for every split.
  void create() const;

 private:
  std::filesystem::path root_;
};

}  // namespace pothole::dataset
