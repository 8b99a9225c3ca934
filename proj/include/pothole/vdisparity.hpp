#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "pothole/image.hpp"

namespace pothole {

/// Row-wise disparity histogram: counts(v, bin) with bin = ⌊g / bin_width⌋.
struct VDisparityHistogram {
  int rows = 0;
  int cols = 0;
  double bin_width = 1.0;
  std::vector<std::uint64_t> counts;  // rows × cols, row-major

  std::uint64_t at(int v, int bin) const {
    return counts[static_cast<std::size_t>(v) * static_cast<std::size_t>(cols) +
                  static_cast<std::size_t>(bin)];
  }
  std::uint64_t total() const;
};

/// Histogram wide enough to hold every valid disparity.
VDisparityHistogram v_disparity(const DisparityImage& img, double bin_width = 1.0);
/// Fixed width; disparities at or beyond cols·bin_width are dropped, not clamped.
VDisparityHistogram v_disparity(const DisparityImage& img, double bin_width, int cols);

/// PGM with counts scaled so the largest maps to 255.
void save_vdisparity_pgm(const std::filesystem::path& path, const VDisparityHistogram& hist);
/// CSV `v,g_bin,count`, non-zero bins only.
void save_vdisparity_csv(const std::filesystem::path& path, const VDisparityHistogram& hist);

}  // namespace pothole
