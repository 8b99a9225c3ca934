#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "pothole/rng.hpp"

namespace pothole {

/// Dense N×C×H×W tensor of doubles, row-major (w fastest).
class Tensor4 {
 public:
  Tensor4() = default;
  /// Zero-filled. Throws InvalidArgument on non-positive dimensions.
  Tensor4(int n, int c, int h, int w);
  /// Throws InvalidArgument when data size mismatches or an entry is not finite.
  Tensor4(int n, int c, int h, int w, std::vector<double> data);

  /// Entries drawn from N(0, 1).
  static Tensor4 random_normal(int n, int c, int h, int w, Rng& rng);

  int batch() const { return dims_[0]; }
  int channels() const { return dims_[1]; }
  int height() const { return dims_[2]; }
  int width() const { return dims_[3]; }
  const std::array<int, 4>& dims() const { return dims_; }
  std::size_t size() const { return data_.size(); }
  /// Elements per (n, c) plane.
  std::size_t plane() const { return static_cast<std::size_t>(dims_[2]) * dims_[3]; }

  double& operator()(int n, int c, int h, int w) { return data_[offset(n, c, h, w)]; }
  double operator()(int n, int c, int h, int w) const { return data_[offset(n, c, h, w)]; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  bool same_shape(const Tensor4& other) const { return dims_ == other.dims_; }
  /// Exact (bitwise for non-NaN) equality of shape and data.
  bool operator==(const Tensor4& other) const = default;

  std::size_t offset(int n, int c, int h, int w) const {
    return ((static_cast<std::size_t>(n) * dims_[1] + c) * dims_[2] + h) * dims_[3] + w;
  }

 private:
  std::array<int, 4> dims_{0, 0, 0, 0};
  std::vector<double> data_;
};

/// Text header `N C H W\n` followed by little-endian float32 data.
void save_tensor(const std::filesystem::path& path, const Tensor4& t);
Tensor4 load_tensor(const std::filesystem::path& path);

}  // namespace pothole
