#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "pothole/image.hpp"

namespace pothole::io {

/// Fixed-point disparity scale: 8 fractional bits.
inline constexpr double kDefaultScale = 1.0 / 256.0;

/// Undecoded single-channel raster, 8 or 16 bits per sample.
struct RawImage {
  int width = 0;
  int height = 0;
  int bit_depth = 8;
  std::vector<std::uint16_t> pixels;

  std::uint16_t max_value() const { return bit_depth == 16 ? 65535 : 255; }
};

/// Reads a grayscale PNG (1-16 bit) or binary PGM (P5), detected by magic.
RawImage read_raster(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const RawImage& image);
void write_pgm(const std::filesystem::path& path, const RawImage& image);

/// value = raw * scale; raw 0 is the invalid sentinel.
DisparityImage load_disparity(const std::filesystem::path& path, double scale = kDefaultScale);
/// 16-bit PNG, raw = round(value / scale). Throws IoError when a value does not fit.
void save_disparity(const std::filesystem::path& path, const DisparityImage& image,
                    double scale = kDefaultScale);

// Transformed images are non-negative and may be exactly 0, so the on-disk
// encoding shifts by one raw step: raw = 1 + round(value / scale), raw 0 invalid.
DisparityImage load_transformed(const std::filesystem::path& path, double scale = kDefaultScale);
void save_transformed(const std::filesystem::path& path, const DisparityImage& image,
                      double scale = kDefaultScale);

/// 8-bit mask, any non-zero sample is pothole. Written as {0, 255}.
LabelMask load_mask(const std::filesystem::path& path);
void save_mask(const std::filesystem::path& path, const LabelMask& mask);

/// Raster with samples mapped to [0, 1] by raw / max_value.
Raster load_normalized(const std::filesystem::path& path);
/// 8-bit PNG; values are rounded and clamped to [0, 255].
void save_gray8(const std::filesystem::path& path, const Raster& raster);

/// True for the raster extensions the batch tools pick up (.png, .pgm).
bool is_raster_file(const std::filesystem::path& path);
/// Raster files of a directory, sorted lexicographically; a file path is returned as-is.
std::vector<std::filesystem::path> list_rasters(const std::filesystem::path& path);

}  // namespace pothole::io
