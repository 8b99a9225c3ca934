#include "pothole/image.hpp"

#include <algorithm>
#include <string>

#include "pothole/error.hpp"

namespace pothole {
namespace {

void check_shape(int width, int height, std::size_t n) {
  if (width < 2 || height < 2) {
    throw InvalidArgument("disparity image must be at least 2x2, got " + std::to_string(width) +
                          "x" + std::to_string(height));
  }
  if (n != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw InvalidArgument("disparity value count does not match width*height");
  }
}

}  // namespace

DisparityImage::DisparityImage(int width, int height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
  check_shape(width_, height_, values_.size());
  for (double& x : values_) {
    if (!std::isfinite(x) || x <= 0.0) x = kInvalid;
  }
}

DisparityImage::DisparityImage(Unchecked, int width, int height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
  check_shape(width_, height_, values_.size());
  for (double& x : values_) {
    if (!std::isfinite(x)) x = kInvalid;
  }
}

DisparityImage DisparityImage::transformed(int width, int height, std::vector<double> values) {
  return DisparityImage(Unchecked{}, width, height, std::move(values));
}

std::size_t DisparityImage::valid_count() const {
  return static_cast<std::size_t>(
      std::count_if(values_.begin(), values_.end(), [](double x) { return is_valid(x); }));
}

std::pair<double, double> DisparityImage::valid_range() const {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double x : values_) {
    if (!is_valid(x)) continue;
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  if (lo > hi) return {kInvalid, kInvalid};
  return {lo, hi};
}

LabelMask::LabelMask(int width, int height)
    : width_(width),
      height_(height),
      labels_(static_cast<std::size_t>(std::max(width, 0)) * static_cast<std::size_t>(std::max(height, 0)),
              0) {
  if (width <= 0 || height <= 0) throw InvalidArgument("mask dimensions must be positive");
}

LabelMask::LabelMask(int width, int height, std::vector<std::uint8_t> labels)
    : width_(width), height_(height), labels_(std::move(labels)) {
  if (width <= 0 || height <= 0) throw InvalidArgument("mask dimensions must be positive");
  if (labels_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw InvalidArgument("mask label count does not match width*height");
  }
  for (auto& l : labels_) l = l ? 1 : 0;
}

std::size_t LabelMask::count() const {
  return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), std::uint8_t{1}));
}

}  // namespace pothole
