#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace pothole {

/// Dense disparity (inverse depth) image with a validity sentinel.
///
/// Pixel (u, v) is column u, row v; storage is row-major. Invalid pixels
/// hold NaN. A freshly measured disparity is valid only when finite and
/// strictly positive; a transformed image may hold any finite value, so it
/// keeps the validity mask of its source instead.
class DisparityImage {
 public:
  static constexpr double kInvalid = std::numeric_limits<double>::quiet_NaN();

  DisparityImage() = default;

  /// Measured disparities: anything non-finite or <= 0 becomes invalid.
  /// Throws InvalidArgument unless width, height >= 2 and sizes agree.
  DisparityImage(int width, int height, std::vector<double> values);

  /// Transformed values: every finite value is valid, NaN is invalid.
  static DisparityImage transformed(int width, int height, std::vector<double> values);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return values_.size(); }

  double at(int u, int v) const { return values_[index(u, v)]; }
  bool valid(int u, int v) const { return is_valid(values_[index(u, v)]); }
  static bool is_valid(double value) { return !std::isnan(value); }

  std::span<const double> values() const { return values_; }
  std::size_t valid_count() const;

  /// Smallest and largest valid value; NaN pair when nothing is valid.
  std::pair<double, double> valid_range() const;

  std::size_t index(int u, int v) const {
    return static_cast<std::size_t>(v) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(u);
  }

 private:
  struct Unchecked {};
  DisparityImage(Unchecked, int width, int height, std::vector<double> values);

  int width_ = 0;
  int height_ = 0;
  std::vector<double> values_;
};

/// Binary pothole/background raster (true = pothole).
class LabelMask {
 public:
  LabelMask() = default;
  LabelMask(int width, int height);
  LabelMask(int width, int height, std::vector<std::uint8_t> labels);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return labels_.size(); }

  bool at(int u, int v) const { return labels_[index(u, v)] != 0; }
  void set(int u, int v, bool on) { labels_[index(u, v)] = on ? 1 : 0; }
  bool operator[](std::size_t i) const { return labels_[i] != 0; }

  std::span<const std::uint8_t> labels() const { return labels_; }
  std::size_t count() const;

  std::size_t index(int u, int v) const {
    return static_cast<std::size_t>(v) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(u);
  }

  bool operator==(const LabelMask&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> labels_;
};

/// Plain real-valued single-channel raster.
struct Raster {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  bool same_shape(const Raster& other) const {
    return width == other.width && height == other.height;
  }
};

}  // namespace pothole
