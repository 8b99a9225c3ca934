#include "pothole/vdisparity.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "pothole/error.hpp"
#include "pothole/io.hpp"
#include "pothole/kernels.hpp"

namespace pothole {

std::uint64_t VDisparityHistogram::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

VDisparityHistogram v_disparity(const DisparityImage& img, double bin_width) {
  if (!(bin_width > 0.0) || !std::isfinite(bin_width)) {
    throw InvalidArgument("bin_width must be positive");
  }
  const auto [lo, hi] = img.valid_range();
  const int cols = std::isnan(hi) ? 1 : static_cast<int>(std::floor(hi / bin_width)) + 1;
  return v_disparity(img, bin_width, cols);
}

VDisparityHistogram v_disparity(const DisparityImage& img, double bin_width, int cols) {
  if (!(bin_width > 0.0) || !std::isfinite(bin_width)) {
    throw InvalidArgument("bin_width must be positive");
  }
  if (cols < 1) throw InvalidArgument("histogram needs at least one column");
  VDisparityHistogram h;
  h.rows = img.height();
  h.cols = cols;
  h.bin_width = bin_width;
  h.counts.assign(static_cast<std::size_t>(h.rows) * static_cast<std::size_t>(cols), 0);
  kernels::vdisparity_rows(img.values(), img.width(), img.height(), bin_width, cols, h.counts);
  return h;
}

void save_vdisparity_pgm(const std::filesystem::path& path, const VDisparityHistogram& hist) {
  io::RawImage raw{hist.cols, hist.rows, 8, std::vector<std::uint16_t>(hist.counts.size(), 0)};
  const std::uint64_t peak = hist.counts.empty()
                                 ? 0
                                 : *std::max_element(hist.counts.begin(), hist.counts.end());
  if (peak > 0) {
    for (std::size_t i = 0; i < hist.counts.size(); ++i) {
      raw.pixels[i] = static_cast<std::uint16_t>((hist.counts[i] * 255 + peak / 2) / peak);
    }
  }
  io::write_pgm(path, raw);
}

void save_vdisparity_csv(const std::filesystem::path& path, const VDisparityHistogram& hist) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string());
  out << "v,g_bin,count\n";
  for (int v = 0; v < hist.rows; ++v) {
    for (int b = 0; b < hist.cols; ++b) {
      if (const auto c = hist.at(v, b)) out << v << ',' << b << ',' << c << '\n';
    }
  }
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace pothole
