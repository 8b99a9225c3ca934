#include "pothole/detect.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "pothole/error.hpp"

namespace pothole {

double otsu_threshold(std::span<const double> values, int bins) {
  if (bins < 2) throw InvalidArgument("otsu needs at least 2 bins");
  if (values.empty()) throw InvalidArgument("otsu on empty input");
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it, hi = *hi_it;
  if (!(hi > lo)) throw InvalidArgument("otsu needs at least two distinct values");

  const double width = (hi - lo) / bins;
  // Bin i covers [edge[i-1], edge[i]); the top bin is closed.
  std::vector<double> edges(static_cast<std::size_t>(bins - 1));
  for (int i = 0; i < bins - 1; ++i) edges[i] = lo + (i + 1) * width;

  std::vector<double> count(static_cast<std::size_t>(bins), 0.0);
  std::vector<double> sum(static_cast<std::size_t>(bins), 0.0);
  for (double x : values) {
    const auto b = static_cast<std::size_t>(std::upper_bound(edges.begin(), edges.end(), x) - edges.begin());
    count[b] += 1;
    sum[b] += x;
  }

  const double n = static_cast<double>(values.size());
  double total = 0;
  for (double s : sum) total += s;

  double best = -1;
  double threshold = edges.front();
  double n0 = 0, s0 = 0;
  for (int i = 0; i < bins - 1; ++i) {
    n0 += count[i];
    s0 += sum[i];
    const double n1 = n - n0;
    if (n0 == 0 || n1 == 0) continue;
    const double mu0 = s0 / n0;
    const double mu1 = (total - s0) / n1;
    const double w0 = n0 / n, w1 = n1 / n;
    const double sigma_b = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
    if (sigma_b > best) {
      best = sigma_b;
      threshold = edges[i];
    }
  }
  return threshold;
}

std::vector<Component> connected_components(const LabelMask& mask) {
  const int w = mask.width(), h = mask.height();
  std::vector<int> label(mask.size(), -1);
  std::vector<Component> comps;
  std::vector<Pixel> stack;
  for (int v0 = 0; v0 < h; ++v0) {
    for (int u0 = 0; u0 < w; ++u0) {
      const std::size_t i0 = mask.index(u0, v0);
      if (!mask[i0] || label[i0] >= 0) continue;
      Component c;
      c.id = static_cast<int>(comps.size());
      c.bbox = {u0, v0, u0, v0};
      label[i0] = c.id;
      stack.push_back({u0, v0});
      while (!stack.empty()) {
        const Pixel p = stack.back();
        stack.pop_back();
        c.pixels.push_back(p);
        c.bbox.min_u = std::min(c.bbox.min_u, p.u);
        c.bbox.max_u = std::max(c.bbox.max_u, p.u);
        c.bbox.min_v = std::min(c.bbox.min_v, p.v);
        c.bbox.max_v = std::max(c.bbox.max_v, p.v);
        for (int dv = -1; dv <= 1; ++dv) {
          for (int du = -1; du <= 1; ++du) {
            const int u = p.u + du, v = p.v + dv;
            if (u < 0 || v < 0 || u >= w || v >= h) continue;
            const std::size_t j = mask.index(u, v);
            if (!mask[j] || label[j] >= 0) continue;
            label[j] = c.id;
            stack.push_back({u, v});
          }
        }
      }
      std::sort(c.pixels.begin(), c.pixels.end(),
                [](Pixel a, Pixel b) { return std::tie(a.v, a.u) < std::tie(b.v, b.u); });
      c.area = c.pixels.size();
      comps.push_back(std::move(c));
    }
  }
  // Discovery order already sorts by min_v; stable sort settles min_u.
  std::stable_sort(comps.begin(), comps.end(), [](const Component& a, const Component& b) {
    return std::tie(a.bbox.min_v, a.bbox.min_u) < std::tie(b.bbox.min_v, b.bbox.min_u);
  });
  for (std::size_t k = 0; k < comps.size(); ++k) comps[k].id = static_cast<int>(k);
  return comps;
}

LabelMask segment(const DisparityImage& tdisp, const SegmentOptions& options) {
  if (options.min_area < 1) throw InvalidArgument("min_area must be >= 1");
  LabelMask mask(tdisp.width(), tdisp.height());
  std::vector<double> valid;
  valid.reserve(tdisp.size());
  for (double x : tdisp.values()) {
    if (DisparityImage::is_valid(x)) valid.push_back(x);
  }
  if (valid.empty()) return mask;
  const auto [lo, hi] = std::minmax_element(valid.begin(), valid.end());
  if (!(*hi > *lo)) return mask;

  const double threshold = otsu_threshold(valid, options.bins);
  for (int v = 0; v < tdisp.height(); ++v) {
    for (int u = 0; u < tdisp.width(); ++u) {
      const double x = tdisp.at(u, v);
      if (DisparityImage::is_valid(x) && x < threshold) mask.set(u, v, true);
    }
  }
  for (const auto& c : connected_components(mask)) {
    if (c.area >= options.min_area) continue;
    for (const Pixel& p : c.pixels) mask.set(p.u, p.v, false);
  }
  return mask;
}

}  // namespace pothole
