#pragma once
// Independent reference implementations. Deliberately naive: plain loops,
// raw (uncentred) normal equations, long double where it is cheap.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "pothole/image.hpp"

namespace oracle {

// Residual sum of squares of g ≈ x0 + x1 t, t = cos(phi) v − sin(phi) u,
// via the 2×2 normal equations solved by Cramer's rule.
inline double ols_residual(const std::vector<double>& g, const std::vector<double>& u,
                           const std::vector<double>& v, double phi, double* x0_out = nullptr,
                           double* x1_out = nullptr) {
  const long double c = std::cos(phi), s = std::sin(phi);
  long double n = 0, st = 0, stt = 0, sg = 0, stg = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const long double t = c * v[i] - s * u[i];
    n += 1;
    st += t;
    stt += t * t;
    sg += g[i];
    stg += t * g[i];
  }
  const long double det = n * stt - st * st;
  const long double x0 = (stt * sg - st * stg) / det;
  const long double x1 = (n * stg - st * sg) / det;
  if (x0_out) *x0_out = static_cast<double>(x0);
  if (x1_out) *x1_out = static_cast<double>(x1);
  long double rss = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const long double t = c * v[i] - s * u[i];
    const long double r = g[i] - x0 - x1 * t;
    rss += r * r;
  }
  return static_cast<double>(rss);
}

// Argmin of the angle energy over `samples` uniform points of (−π/2, π/2),
// energy from long-double raw sums (O(1) per sample).
inline double dense_grid_argmin(const std::vector<double>& g, const std::vector<double>& u,
                                const std::vector<double>& v, int samples) {
  long double n = 0, su = 0, sv = 0, sg = 0, suu = 0, svv = 0, suv = 0, sgu = 0, sgv = 0, sgg = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    n += 1;
    su += u[i];
    sv += v[i];
    sg += g[i];
    suu += (long double)u[i] * u[i];
    svv += (long double)v[i] * v[i];
    suv += (long double)u[i] * v[i];
    sgu += (long double)g[i] * u[i];
    sgv += (long double)g[i] * v[i];
    sgg += (long double)g[i] * g[i];
  }
  double best = 0;
  long double best_e = std::numeric_limits<long double>::infinity();
  for (int k = 0; k < samples; ++k) {
    const double phi = -std::numbers::pi / 2 + (k + 0.5) * std::numbers::pi / samples;
    const long double c = std::cos(phi), s = std::sin(phi);
    const long double st = c * sv - s * su;
    const long double stt = c * c * svv - 2 * c * s * suv + s * s * suu;
    const long double stg = c * sgv - s * sgu;
    const long double ctt = stt - st * st / n;
    const long double ctg = stg - st * sg / n;
    const long double e = (sgg - sg * sg / n) - ctg * ctg / ctt;
    if (e < best_e) {
      best_e = e;
      best = phi;
    }
  }
  return best;
}

// Between-class variance of the split {x < threshold} / {x >= threshold}.
inline double between_class_variance(const std::vector<double>& xs, double threshold) {
  double n0 = 0, n1 = 0, s0 = 0, s1 = 0;
  for (double x : xs) {
    if (x < threshold) {
      n0 += 1;
      s0 += x;
    } else {
      n1 += 1;
      s1 += x;
    }
  }
  if (n0 == 0 || n1 == 0) return 0;
  const double n = n0 + n1;
  const double d = s0 / n0 - s1 / n1;
  return (n0 / n) * (n1 / n) * d * d;
}

// Exhaustive search over the interior bin edges lo + k·(hi − lo)/bins.
inline double otsu_bruteforce(const std::vector<double>& xs, int bins) {
  const double lo = *std::min_element(xs.begin(), xs.end());
  const double hi = *std::max_element(xs.begin(), xs.end());
  const double w = (hi - lo) / bins;
  double best_t = 0, best_v = -1;
  for (int k = 1; k < bins; ++k) {
    const double t = lo + k * w;
    const double v = between_class_variance(xs, t);
    if (v > best_v * (1 + 1e-12)) {
      best_v = v;
      best_t = t;
    }
  }
  return best_t;
}

// 8-connected component areas by iterative flood fill, in scan order of
// each component's first pixel.
inline std::vector<std::size_t> flood_fill_areas(const pothole::LabelMask& m) {
  const int w = m.width(), h = m.height();
  std::vector<int> seen(static_cast<std::size_t>(w) * h, 0);
  std::vector<std::size_t> areas;
  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      if (!m.at(u, v) || seen[v * w + u]) continue;
      std::size_t area = 0;
      std::vector<std::pair<int, int>> stack{{u, v}};
      seen[v * w + u] = 1;
      while (!stack.empty()) {
        auto [a, b] = stack.back();
        stack.pop_back();
        ++area;
        for (int dv = -1; dv <= 1; ++dv) {
          for (int du = -1; du <= 1; ++du) {
            const int x = a + du, y = b + dv;
            if (x < 0 || y < 0 || x >= w || y >= h) continue;
            if (!m.at(x, y) || seen[y * w + x]) continue;
            seen[y * w + x] = 1;
            stack.push_back({x, y});
          }
        }
      }
      areas.push_back(area);
    }
  }
  return areas;
}

// Pixel count of a rotated ellipse, strict interior test at pixel centres.
inline std::size_t ellipse_pixel_count(double cu, double cv, double a, double b, double theta, int w, int h) {
  std::size_t n = 0;
  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      const double du = u - cu, dv = v - cv;
      const double x = du * std::cos(theta) + dv * std::sin(theta);
      const double y = -du * std::sin(theta) + dv * std::cos(theta);
      if ((x / a) * (x / a) + (y / b) * (y / b) < 1) ++n;
    }
  }
  return n;
}

inline std::filesystem::path temp_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("pothole_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace oracle
