#include "pothole/adaptation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pothole/error.hpp"
#include "pothole/rng.hpp"

namespace pothole::adaptation {
namespace {

double mean_log(std::span<const double> xs, bool complement) {
  double acc = 0;
  for (double x : xs) {
    const double p = std::clamp(x, kEpsilon, 1.0 - kEpsilon);
    acc += std::log(complement ? 1.0 - p : p);
  }
  return acc / static_cast<double>(xs.size());
}

}  // namespace

double gan_loss(std::span<const double> d_real, std::span<const double> d_fake) {
  if (d_real.empty() || d_fake.empty()) throw InvalidArgument("gan_loss: empty batch");
  return mean_log(d_real, false) + mean_log(d_fake, true);
}

double cycle_loss(const std::vector<Raster>& original, const std::vector<Raster>& reconstructed) {
  if (original.empty()) throw InvalidArgument("cycle_loss: empty batch");
  if (original.size() != reconstructed.size()) throw InvalidArgument("cycle_loss: batch sizes differ");
  double batch = 0;
  for (std::size_t k = 0; k < original.size(); ++k) {
    const Raster& a = original[k];
    const Raster& b = reconstructed[k];
    if (!a.same_shape(original.front()) || !a.same_shape(b) || a.values.size() != b.values.size() ||
        a.values.empty()) {
      throw InvalidArgument("cycle_loss: raster shapes differ");
    }
    double acc = 0;
    for (std::size_t i = 0; i < a.values.size(); ++i) acc += std::abs(b.values[i] - a.values[i]);
    batch += acc / static_cast<double>(a.values.size());
  }
  return batch / static_cast<double>(original.size());
}

double full_objective(std::span<const double, 6> terms) {
  // Neumaier summation keeps the result independent of term order.
  double sum = 0, comp = 0;
  for (double t : terms) {
    if (!std::isfinite(t)) throw InvalidArgument("full_objective: non-finite term");
    const double s = sum + t;
    comp += std::abs(sum) >= std::abs(t) ? (sum - s) + t : (t - s) + sum;
    sum = s;
  }
  return sum + comp;
}

double full_objective(const ObjectiveTerms& terms) {
  const auto a = terms.as_array();
  return full_objective(std::span<const double, 6>(a));
}

std::vector<Ellipse> random_gt_ellipses(int width, int height, std::uint64_t seed,
                                        const MaskGenParams& params) {
  if (width <= 0 || height <= 0) throw InvalidArgument("mask dimensions must be positive");
  if (params.min_potholes < 0 || params.max_potholes < params.min_potholes) {
    throw InvalidArgument("pothole count range is empty");
  }
  if (!(params.min_axis > 0) || params.max_axis < params.min_axis) {
    throw InvalidArgument("axis range is empty");
  }
  if (2 * params.max_axis >= width || 2 * params.max_axis >= height) {
    throw InvalidArgument("axis range exceeds the frame");
  }
  Rng rng(seed);
  const auto n = rng.uniform_int(params.min_potholes, params.max_potholes);
  std::vector<Ellipse> out;
  out.reserve(static_cast<std::size_t>(n));
  const double m = params.max_axis;
  for (std::int64_t k = 0; k < n; ++k) {
    Ellipse e;
    e.cu = rng.uniform(m, width - 1 - m);
    e.cv = rng.uniform(m, height - 1 - m);
    e.semi_a = rng.uniform(params.min_axis, params.max_axis);
    e.semi_b = rng.uniform(params.min_axis, params.max_axis);
    e.theta = rng.uniform(0.0, std::numbers::pi);
    out.push_back(e);
  }
  return out;
}

LabelMask random_gt_mask(int width, int height, std::uint64_t seed, const MaskGenParams& params) {
  return rasterize(random_gt_ellipses(width, height, seed, params), width, height);
}

}  // namespace pothole::adaptation
