#include "pothole/metrics.hpp"

#include <cmath>

#include "pothole/error.hpp"
#include "pothole/format.hpp"

namespace pothole::metrics {
namespace {

struct Neumaier {
  double sum = 0, comp = 0;
  void add(double x) {
    const double t = sum + x;
    comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

}  // namespace

ConfusionCounts confusion(const LabelMask& pred, const LabelMask& gt) {
  if (pred.width() != gt.width() || pred.height() != gt.height()) {
    throw InvalidArgument("confusion: mask shapes differ");
  }
  ConfusionCounts c;
  const auto p = pred.labels();
  const auto g = gt.labels();
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i]) {
      g[i] ? ++c.tp : ++c.fp;
    } else {
      g[i] ? ++c.fn : ++c.tn;
    }
  }
  return c;
}

SegMetrics fsc_iou(const ConfusionCounts& c) {
  const auto tp = static_cast<double>(c.tp);
  const auto errors = static_cast<double>(c.fp) + static_cast<double>(c.fn);
  if (tp + errors == 0) return {1.0, 1.0};
  return {2 * tp / (2 * tp + errors), tp / (tp + errors)};
}

MeanMetrics mean_metrics(std::span<const SegMetrics> per_image) {
  if (per_image.empty()) throw InvalidArgument("mean_metrics: no images");
  Neumaier f, j;
  for (const auto& m : per_image) {
    f.add(m.fsc);
    j.add(m.iou);
  }
  const auto n = static_cast<double>(per_image.size());
  return {f.value() / n, j.value() / n, per_image.size()};
}

double delta_ratio(std::uint64_t aug_iterations, std::uint64_t baseline_iterations) {
  if (baseline_iterations == 0) throw InvalidArgument("delta_ratio: baseline iterations must be > 0");
  return static_cast<double>(aug_iterations) / static_cast<double>(baseline_iterations);
}

ExperimentLog make_experiment_log(double lambda, std::uint64_t iterations,
                                  std::uint64_t baseline_iterations) {
  if (!(lambda >= 0)) throw InvalidArgument("lambda must be >= 0");
  return {lambda, iterations, delta_ratio(iterations, baseline_iterations)};
}

std::string per_image_row(const std::string& image, const ConfusionCounts& c, const SegMetrics& m) {
  return image + ',' + std::to_string(c.tp) + ',' + std::to_string(c.fp) + ',' + std::to_string(c.fn) +
         ',' + std::to_string(c.tn) + ',' + fmt17(m.fsc) + ',' + fmt17(m.iou);
}

}  // namespace pothole::metrics
