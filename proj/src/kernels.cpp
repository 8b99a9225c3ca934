#include "pothole/kernels.hpp"

#include <algorithm>
#include <array>
#include <vector>

#include "pothole/error.hpp"

namespace pothole::kernels {
namespace {

std::size_t chunk_count(std::size_t n) { return (n + kChunk - 1) / kChunk; }

// Runs body(begin, end, partial) over fixed chunks in parallel and returns
// the partials summed in chunk order.
template <std::size_t K, typename Body>
std::array<double, K> chunked_sum(std::size_t n, Body body) {
  const std::size_t chunks = chunk_count(n);
  std::vector<std::array<double, K>> partial(chunks);
  const auto nc = static_cast<std::int64_t>(chunks);
#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < nc; ++c) {
    const std::size_t begin = static_cast<std::size_t>(c) * kChunk;
    const std::size_t end = std::min(n, begin + kChunk);
    std::array<double, K> acc{};
    body(begin, end, acc);
    partial[static_cast<std::size_t>(c)] = acc;
  }
  std::array<double, K> total{};
  for (const auto& p : partial) {
    for (std::size_t k = 0; k < K; ++k) total[k] += p[k];
  }
  return total;
}

void check_lengths(std::span<const double> g, std::span<const double> u, std::span<const double> v) {
  if (g.size() != u.size() || g.size() != v.size()) {
    throw InvalidArgument("g, u and v must have equal length");
  }
  if (g.empty()) throw InvalidArgument("no samples");
}

}  // namespace

PlaneMoments plane_moments(std::span<const double> g, std::span<const double> u,
                           std::span<const double> v, Exec exec) {
  check_lengths(g, u, v);
  const std::size_t n = g.size();
  PlaneMoments m;
  m.count = n;
  const double inv_n = 1.0 / static_cast<double>(n);

  if (exec == Exec::serial) {
    double sg = 0, su = 0, sv = 0;
    for (std::size_t i = 0; i < n; ++i) {
      sg += g[i];
      su += u[i];
      sv += v[i];
    }
    m.mean_g = sg * inv_n;
    m.mean_u = su * inv_n;
    m.mean_v = sv * inv_n;
    for (std::size_t i = 0; i < n; ++i) {
      const double gc = g[i] - m.mean_g, uc = u[i] - m.mean_u, vc = v[i] - m.mean_v;
      m.suu += uc * uc;
      m.svv += vc * vc;
      m.suv += uc * vc;
      m.sgu += gc * uc;
      m.sgv += gc * vc;
      m.sgg += gc * gc;
    }
    return m;
  }

  const auto sums = chunked_sum<3>(n, [&](std::size_t b, std::size_t e, std::array<double, 3>& acc) {
    for (std::size_t i = b; i < e; ++i) {
      acc[0] += g[i];
      acc[1] += u[i];
      acc[2] += v[i];
    }
  });
  m.mean_g = sums[0] * inv_n;
  m.mean_u = sums[1] * inv_n;
  m.mean_v = sums[2] * inv_n;
  const auto second = chunked_sum<6>(n, [&](std::size_t b, std::size_t e, std::array<double, 6>& acc) {
    for (std::size_t i = b; i < e; ++i) {
      const double gc = g[i] - m.mean_g, uc = u[i] - m.mean_u, vc = v[i] - m.mean_v;
      acc[0] += uc * uc;
      acc[1] += vc * vc;
      acc[2] += uc * vc;
      acc[3] += gc * uc;
      acc[4] += gc * vc;
      acc[5] += gc * gc;
    }
  });
  m.suu = second[0];
  m.svv = second[1];
  m.suv = second[2];
  m.sgu = second[3];
  m.sgv = second[4];
  m.sgg = second[5];
  return m;
}

double residual_energy(std::span<const double> g, std::span<const double> u,
                       std::span<const double> v, const PlaneMoments& m, double phi, Exec exec) {
  check_lengths(g, u, v);
  const double c = std::cos(phi), s = std::sin(phi);
  if (m.degenerate(c, s)) throw RankDeficiency("T(phi)^T T(phi) is singular: all t values equal");
  const double slope = m.cross(c, s) / m.spread(c, s);
  const double t_mean = c * m.mean_v - s * m.mean_u;
  const std::size_t n = g.size();

  // r_i = (g_i − ḡ) − slope·(t_i − t̄)
  if (exec == Exec::serial) {
    double e = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = (g[i] - m.mean_g) - slope * ((c * v[i] - s * u[i]) - t_mean);
      e += r * r;
    }
    return e;
  }
  return chunked_sum<1>(n, [&](std::size_t b, std::size_t e, std::array<double, 1>& acc) {
    for (std::size_t i = b; i < e; ++i) {
      const double r = (g[i] - m.mean_g) - slope * ((c * v[i] - s * u[i]) - t_mean);
      acc[0] += r * r;
    }
  })[0];
}

void plane_residual(std::span<const double> in, int width, int height, double c, double s,
                    double scale, double intercept, std::span<double> out, Exec exec) {
  const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (in.size() != n || out.size() != n) throw InvalidArgument("plane_residual: size mismatch");
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (int v = 0; v < height; ++v) {
    const std::size_t row = static_cast<std::size_t>(v) * static_cast<std::size_t>(width);
    for (int u = 0; u < width; ++u) {
      out[row + u] = in[row + u] - scale * (c * v - s * u) - intercept;
    }
  }
}

void vdisparity_rows(std::span<const double> values, int width, int height, double bin_width,
                     int cols, std::span<std::uint64_t> counts, Exec exec) {
  const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (values.size() != n) throw InvalidArgument("vdisparity_rows: size mismatch");
  if (counts.size() != static_cast<std::size_t>(height) * static_cast<std::size_t>(cols)) {
    throw InvalidArgument("vdisparity_rows: counts size mismatch");
  }
  std::fill(counts.begin(), counts.end(), 0);
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (int v = 0; v < height; ++v) {
    const std::size_t row = static_cast<std::size_t>(v) * static_cast<std::size_t>(width);
    std::uint64_t* hist = counts.data() + static_cast<std::size_t>(v) * static_cast<std::size_t>(cols);
    for (int u = 0; u < width; ++u) {
      const double x = values[row + u];
      if (std::isnan(x) || x < 0) continue;
      const double bin = std::floor(x / bin_width);
      if (bin >= cols) continue;
      ++hist[static_cast<std::size_t>(bin)];
    }
  }
}

}  // namespace pothole::kernels
