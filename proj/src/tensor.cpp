#include "pothole/tensor.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "pothole/error.hpp"

namespace pothole {
namespace {

void check_dims(int n, int c, int h, int w) {
  if (n <= 0 || c <= 0 || h <= 0 || w <= 0) throw InvalidArgument("tensor dimensions must be positive");
}

std::size_t volume(int n, int c, int h, int w) {
  return static_cast<std::size_t>(n) * c * h * w;
}

std::uint32_t to_le(std::uint32_t x) {
  if constexpr (std::endian::native == std::endian::big) {
    return ((x & 0xffu) << 24) | ((x & 0xff00u) << 8) | ((x >> 8) & 0xff00u) | (x >> 24);
  }
  return x;
}

}  // namespace

Tensor4::Tensor4(int n, int c, int h, int w) : dims_{n, c, h, w} {
  check_dims(n, c, h, w);
  data_.assign(volume(n, c, h, w), 0.0);
}

Tensor4::Tensor4(int n, int c, int h, int w, std::vector<double> data)
    : dims_{n, c, h, w}, data_(std::move(data)) {
  check_dims(n, c, h, w);
  if (data_.size() != volume(n, c, h, w)) throw InvalidArgument("tensor data size mismatch");
  for (double x : data_) {
    if (!std::isfinite(x)) throw InvalidArgument("tensor entries must be finite");
  }
}

Tensor4 Tensor4::random_normal(int n, int c, int h, int w, Rng& rng) {
  Tensor4 t(n, c, h, w);
  for (double& x : t.data_) x = rng.normal();
  return t;
}

void save_tensor(const std::filesystem::path& path, const Tensor4& t) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string());
  out << t.batch() << ' ' << t.channels() << ' ' << t.height() << ' ' << t.width() << '\n';
  for (double x : t.data()) {
    const std::uint32_t bits = to_le(std::bit_cast<std::uint32_t>(static_cast<float>(x)));
    out.write(reinterpret_cast<const char*>(&bits), 4);
  }
  if (!out) throw IoError("write failed: " + path.string());
}

Tensor4 load_tensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string header;
  std::getline(in, header);
  std::istringstream hs(header);
  int n = 0, c = 0, h = 0, w = 0;
  if (!(hs >> n >> c >> h >> w) || n <= 0 || c <= 0 || h <= 0 || w <= 0) {
    throw IoError(path.string() + ": malformed tensor header");
  }
  std::vector<double> data(volume(n, c, h, w));
  for (double& x : data) {
    std::uint32_t bits = 0;
    if (!in.read(reinterpret_cast<char*>(&bits), 4)) throw IoError(path.string() + ": truncated tensor data");
    x = std::bit_cast<float>(to_le(bits));
  }
  try {
    return Tensor4(n, c, h, w, std::move(data));
  } catch (const InvalidArgument& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

}  // namespace pothole
