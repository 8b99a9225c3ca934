#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>

namespace pothole::kernels {

/// Execution policy for the data-parallel loops.
///
/// `serial` is the plain reference loop kept for testing. `parallel` runs
/// under OpenMP; its reductions sum fixed-size chunks and combine the partial
/// sums in chunk order, so the result is bitwise identical for any thread
/// count (but may differ from `serial` in the last bits).
enum class Exec { serial, parallel };

inline constexpr std::size_t kChunk = std::size_t{1} << 14;

/// Centered first and second moments of (g, u, v) samples.
struct PlaneMoments {
  std::size_t count = 0;
  double mean_g = 0, mean_u = 0, mean_v = 0;
  double suu = 0, svv = 0, suv = 0;
  double sgu = 0, sgv = 0, sgg = 0;

  /// Σ t_c g_c for t = cosΦ·v − sinΦ·u.
  double cross(double c, double s) const { return c * sgv - s * sgu; }
  /// Σ t_c² for t = cosΦ·v − sinΦ·u.
  double spread(double c, double s) const { return c * c * svv - 2 * c * s * suv + s * s * suu; }
  /// True when the t values are (numerically) all equal.
  bool degenerate(double c, double s) const { return !(spread(c, s) > 1e-12 * (suu + svv)); }
};

PlaneMoments plane_moments(std::span<const double> g, std::span<const double> u,
                           std::span<const double> v, Exec exec = Exec::parallel);

/// Residual sum of squares of the best affine fit g ≈ x0 + x1·t at angle phi.
/// Throws RankDeficiency when t is constant.
double residual_energy(std::span<const double> g, std::span<const double> u,
                       std::span<const double> v, const PlaneMoments& m, double phi,
                       Exec exec = Exec::parallel);

/// out(u, v) = in(u, v) − scale·(c·v − s·u) − intercept; NaN stays NaN.
void plane_residual(std::span<const double> in, int width, int height, double c, double s,
                    double scale, double intercept, std::span<double> out,
                    Exec exec = Exec::parallel);

/// Per-row disparity histogram; counts is height × cols, row-major.
/// Values at or beyond cols·bin_width are dropped.
void vdisparity_rows(std::span<const double> values, int width, int height, double bin_width,
                     int cols, std::span<std::uint64_t> counts, Exec exec = Exec::parallel);

}  // namespace pothole::kernels
