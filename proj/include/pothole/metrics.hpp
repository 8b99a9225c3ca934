#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "pothole/image.hpp"

namespace pothole::metrics {

struct ConfusionCounts {
  std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;

  std::uint64_t total() const { return tp + fp + fn + tn; }
  bool operator==(const ConfusionCounts&) const = default;
};

struct SegMetrics {
  double fsc = 0;
  double iou = 0;
};

/// Pothole is the positive class. Throws InvalidArgument on shape mismatch.
ConfusionCounts confusion(const LabelMask& pred, const LabelMask& gt);

/// IoU = tp/(tp+fp+fn), F-score = 2tp/(2tp+fp+fn). Two empty masks count
/// as perfect agreement (1, 1).
SegMetrics fsc_iou(const ConfusionCounts& c);

struct MeanMetrics {
  double mfsc = 0;
  double miou = 0;
  std::size_t count = 0;
};

/// Unweighted per-image means, compensated summation. Throws on empty input.
MeanMetrics mean_metrics(std::span<const SegMetrics> per_image);

/// Training bookkeeping for augmented-set runs.
struct ExperimentLog {
  double lambda = 0;                       ///< augmented-to-original sample multiplier
  std::uint64_t iterations_to_converge = 0;
  double delta = 0;                        ///< iterations relative to the baseline run
};

/// aug / baseline; < 1 means the setup converged faster. Throws on zero baseline.
double delta_ratio(std::uint64_t aug_iterations, std::uint64_t baseline_iterations);

ExperimentLog make_experiment_log(double lambda, std::uint64_t iterations,
                                  std::uint64_t baseline_iterations);

/// `image,tp,fp,fn,tn,fsc,iou` row (no newline).
std::string per_image_row(const std::string& image, const ConfusionCounts& c, const SegMetrics& m);

}  // namespace pothole::metrics
