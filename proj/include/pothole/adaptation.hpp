#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "pothole/ellipse.hpp"
#include "pothole/image.hpp"

namespace pothole::adaptation {

/// Clamp applied to discriminator outputs before taking logs.
inline constexpr double kEpsilon = 1e-12;

/// Adversarial loss E[log D(real)] + E[log(1 − D(fake))], expectations as
/// batch means. Outputs are clamped to [ε, 1 − ε]. Throws on empty batches.
double gan_loss(std::span<const double> d_real, std::span<const double> d_fake);

/// One direction of the cycle-consistency penalty: batch mean of the
/// per-image mean absolute difference. Throws on shape or size mismatch.
double cycle_loss(const std::vector<Raster>& original, const std::vector<Raster>& reconstructed);

/// The six terms of the full objective, in the order they are summed.
struct ObjectiveTerms {
  double gan_g1 = 0;  ///< L_GAN(G1, D_S1, T, S1)
  double gan_f1 = 0;  ///< L_GAN(F1, D_T, S1, T)
  double gan_g2 = 0;  ///< L_GAN(G2, D_S2, T, S2)
  double gan_f2 = 0;  ///< L_GAN(F2, D_T, S2, T)
  double cyc_1 = 0;   ///< L_cyc(G1, F1)
  double cyc_2 = 0;   ///< L_cyc(G2, F2)

  std::array<double, 6> as_array() const { return {gan_g1, gan_f1, gan_g2, gan_f2, cyc_1, cyc_2}; }
};

/// Unweighted sum (compensated). Throws InvalidArgument on non-finite terms.
double full_objective(std::span<const double, 6> terms);
double full_objective(const ObjectiveTerms& terms);

struct MaskGenParams {
  int min_potholes = 1;
  int max_potholes = 3;
  double min_axis = 10;
  double max_axis = 40;
};

/// The ellipses behind random_gt_mask, in draw order.
std::vector<Ellipse> random_gt_ellipses(int width, int height, std::uint64_t seed,
                                        const MaskGenParams& params);

/// Random pothole ground truth: union of filled rotated ellipses.
/// Centres keep max_axis of margin from every border.
LabelMask random_gt_mask(int width, int height, std::uint64_t seed, const MaskGenParams& params);

}  // namespace pothole::adaptation
