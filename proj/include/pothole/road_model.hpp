#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "pothole/image.hpp"
#include "pothole/kernels.hpp"

namespace pothole {

/// Road model of the v-disparity projection g = ϰ·(cosΦ·v − sinΦ·u + κ),
/// plus the offset Λ that keeps transformed disparities non-negative.
struct RoadModel {
  double phi = 0;       ///< rotation angle Φ, radians, in (−π/2, π/2)
  double varkappa = 1;  ///< scale ϰ > 0
  double kappa = 0;     ///< offset κ
  double lambda = 0;    ///< Λ ≥ 0

  /// Throws InvalidArgument when a field is out of its domain.
  void validate() const;
  /// Fitted road disparity ϰ·(cosΦ·v − sinΦ·u) + ϰκ at pixel (u, v).
  double plane(double u, double v) const;
};

/// Observed samples (g, u, v) entering the fit.
struct FitInput {
  std::vector<double> g;
  std::vector<double> u;
  std::vector<double> v;

  std::size_t size() const { return g.size(); }
  /// Throws InvalidArgument on unequal lengths, k < 3 or non-positive g.
  void validate() const;
};

enum class PhiMethod { grid_refine, closed_form };
std::string to_string(PhiMethod method);

struct PhiCandidate {
  double phi = 0;
  double cost = 0;
};

struct PhiSolution {
  double phi_star = 0;
  double cost = 0;  ///< residual sum of squares at phi_star
  PhiMethod method = PhiMethod::grid_refine;
  std::optional<std::array<PhiCandidate, 2>> candidates;  ///< q = −1, +1 (closed form only)
  std::optional<double> delta;                            ///< discriminant (closed form only)
};

/// Stationarity coefficients of the angle energy, see phi_closed_form.
struct ClosedFormCoefficients {
  std::array<double, 6> omega{};
  double delta = 0;
  double numerator_base = 0;  ///< ω4ω0 − ω3ω1
  double denominator = 0;     ///< ω3ω2 + ω5ω1 − ω5ω0 − ω4ω2
};

struct SolverConfig {
  int grid_size = 1024;
  double tol = 1e-13;
  bool closed_form = false;   ///< try the closed form first, numerical fallback
  bool robust_refit = false;  ///< refit once without pixels > 3 MAD below the plane
};

/// Valid pixels in row-major order.
/// Throws InvalidArgument for fewer than 3 valid pixels, RankDeficiency when
/// they all share one row.
FitInput fit_input_from_image(const DisparityImage& img);

/// gᵀg − gᵀT(TᵀT)⁻¹Tᵀg with T(Φ) = [1, cosΦ·v − sinΦ·u]: the residual sum of
/// squares of the best affine fit. Throws RankDeficiency when T is singular.
double energy(const FitInput& fit, double phi);

/// Grid scan of (−π/2, π/2) followed by golden-section refinement.
PhiSolution estimate_phi(const FitInput& fit, int grid_size = 1024, double tol = 1e-13);

/// Double-angle coefficients and discriminant computed from centered moments.
ClosedFormCoefficients closed_form_coefficients(const kernels::PlaneMoments& m);

/// Closed-form angle: both roots q ∈ {−1, 1}, lower-energy root returned.
/// Throws NoRealRoot when the discriminant is negative.
PhiSolution phi_closed_form(const FitInput& fit);

struct ScaleOffset {
  double varkappa = 0;
  double kappa = 0;
  /// Set when the slope x1 ≤ 0: no physical road model has this shape.
  bool degenerate = false;
};

/// x = (TᵀT)⁻¹Tᵀg; varkappa = x1, kappa = x0 / x1.
ScaleOffset solve_scale_offset(const FitInput& fit, double phi);

/// G'(p) = G(p) − ϰ(cosΦ·v − sinΦ·u) − ϰκ + Λ; invalid pixels stay invalid.
DisparityImage transform(const DisparityImage& img, const RoadModel& model);

struct TransformResult {
  RoadModel model;
  PhiSolution solution;
  DisparityImage transformed;
  bool fell_back = false;        ///< closed form failed, numerical solver used
  std::size_t refit_excluded = 0;  ///< pixels dropped by the robust refit
};

/// Full pipeline: angle, scale/offset, Λ = max(0, −min residual), transform.
TransformResult fit_and_transform(const DisparityImage& img, const SolverConfig& cfg = {});

/// One-line-per-field `key=value` text used for the per-image sidecar.
std::string model_sidecar(const RoadModel& model, const PhiSolution& solution);

}  // namespace pothole
