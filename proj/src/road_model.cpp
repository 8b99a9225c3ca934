#include "pothole/road_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "pothole/error.hpp"
#include "pothole/format.hpp"
#include "pothole/optimize.hpp"

namespace pothole {
namespace {

constexpr double kHalfPi = std::numbers::pi / 2;
constexpr double kInf = std::numeric_limits<double>::infinity();

kernels::PlaneMoments moments_of(const FitInput& fit) {
  return kernels::plane_moments(fit.g, fit.u, fit.v);
}

// Energy from moments alone: Σg_c² − (Σt_c g_c)² / Σt_c². O(1) per angle but
// loses ~half the digits near the minimum; used only for the coarse scan.
double moment_energy(const kernels::PlaneMoments& m, double phi) {
  const double c = std::cos(phi), s = std::sin(phi);
  if (m.degenerate(c, s)) return kInf;
  const double x = m.cross(c, s);
  return m.sgg - x * x / m.spread(c, s);
}

double residual_energy_or_inf(const FitInput& fit, const kernels::PlaneMoments& m, double phi) {
  const double c = std::cos(phi), s = std::sin(phi);
  if (m.degenerate(c, s)) return kInf;
  return kernels::residual_energy(fit.g, fit.u, fit.v, m, phi);
}

// The energy has period π in phi; fold into (−π/2, π/2].
double wrap_half_turn(double phi) {
  while (phi > kHalfPi) phi -= std::numbers::pi;
  while (phi <= -kHalfPi) phi += std::numbers::pi;
  return phi;
}

double median_of(std::vector<double> xs) {
  const auto mid = xs.begin() + static_cast<std::ptrdiff_t>(xs.size() / 2);
  std::nth_element(xs.begin(), mid, xs.end());
  double m = *mid;
  if (xs.size() % 2 == 0) m = 0.5 * (m + *std::max_element(xs.begin(), mid));
  return m;
}

PhiSolution solve_phi(const FitInput& fit, const SolverConfig& cfg, bool& fell_back) {
  fell_back = false;
  if (cfg.closed_form) {
    try {
      return phi_closed_form(fit);
    } catch (const NoRealRoot&) {
      fell_back = true;
    }
  }
  return estimate_phi(fit, cfg.grid_size, cfg.tol);
}

}  // namespace

void RoadModel::validate() const {
  if (!(phi > -kHalfPi && phi < kHalfPi)) throw InvalidArgument("phi must lie in (-pi/2, pi/2)");
  if (!(varkappa > 0) || !std::isfinite(varkappa)) throw InvalidArgument("varkappa must be > 0");
  if (!std::isfinite(kappa)) throw InvalidArgument("kappa must be finite");
  if (!(lambda >= 0) || !std::isfinite(lambda)) throw InvalidArgument("lambda must be >= 0");
}

double RoadModel::plane(double u, double v) const {
  return varkappa * (std::cos(phi) * v - std::sin(phi) * u) + varkappa * kappa;
}

void FitInput::validate() const {
  if (g.size() != u.size() || g.size() != v.size()) {
    throw InvalidArgument("fit input sequences differ in length");
  }
  if (g.size() < 3) throw InvalidArgument("fit needs at least 3 samples");
  for (double x : g) {
    if (!std::isfinite(x) || x <= 0) throw InvalidArgument("fit disparities must be finite and > 0");
  }
}

std::string to_string(PhiMethod method) {
  return method == PhiMethod::closed_form ? "closed_form" : "grid_refine";
}

FitInput fit_input_from_image(const DisparityImage& img) {
  FitInput fit;
  const std::size_t valid = img.valid_count();
  fit.g.reserve(valid);
  fit.u.reserve(valid);
  fit.v.reserve(valid);
  for (int v = 0; v < img.height(); ++v) {
    for (int u = 0; u < img.width(); ++u) {
      const double x = img.at(u, v);
      if (!DisparityImage::is_valid(x)) continue;
      fit.g.push_back(x);
      fit.u.push_back(u);
      fit.v.push_back(v);
    }
  }
  if (fit.size() < 3) throw InvalidArgument("fewer than 3 valid pixels");
  if (std::all_of(fit.v.begin(), fit.v.end(), [&](double v) { return v == fit.v.front(); })) {
    throw RankDeficiency("all valid pixels lie in one row");
  }
  return fit;
}

double energy(const FitInput& fit, double phi) {
  fit.validate();
  return kernels::residual_energy(fit.g, fit.u, fit.v, moments_of(fit), phi);
}

PhiSolution estimate_phi(const FitInput& fit, int grid_size, double tol) {
  fit.validate();
  if (grid_size < 16) throw InvalidArgument("grid_size must be >= 16");
  if (!(tol > 0)) throw InvalidArgument("tol must be > 0");
  const auto m = moments_of(fit);

  const double step = std::numbers::pi / grid_size;
  int best = -1;
  double best_e = kInf;
  for (int i = 0; i < grid_size; ++i) {
    const double e = moment_energy(m, -kHalfPi + (i + 0.5) * step);
    if (e < best_e) {
      best_e = e;
      best = i;
    }
  }
  if (best < 0) throw RankDeficiency("energy is singular at every grid sample");

  // The minimum lies within one step of the best sample; the bracket may
  // cross ±π/2, which is harmless because the energy has period π.
  const double centre = -kHalfPi + (best + 0.5) * step;
  const auto line = golden_section_minimize(
      [&](double phi) { return residual_energy_or_inf(fit, m, phi); }, centre - step, centre + step,
      tol);
  if (!std::isfinite(line.fx)) throw RankDeficiency("energy is singular around the minimum");

  PhiSolution sol;
  sol.phi_star = wrap_half_turn(line.x);
  sol.cost = line.fx;
  sol.method = PhiMethod::grid_refine;
  return sol;
}

// Stationarity of the angle energy. With a = Σg_c v_c and b = Σg_c u_c the
// energy is Σg_c² − N(Φ)²/D(Φ), N = a·cosΦ − b·sinΦ and
// D = Svv·cos²Φ − 2Suv·cosΦ·sinΦ + Suu·sin²Φ. dE/dΦ = 0 reduces to
// N·(P·cosΦ + Q·sinΦ) = 0 with P = a·Suv − b·Svv, Q = b·Suv − a·Suu,
// i.e. A·sin2Φ + B·cos2Φ + C = 0 where
//   A = b²Svv − a²Suu,  B = (a² + b²)Suv − ab(Suu + Svv),
//   C = (a² − b²)Suv + ab(Suu − Svv).
// Writing (−C, B, A) = ½ (ω0, ω1, ω2) × (ω3, ω4, ω5) with
//   ω0 = a² + b², ω1 = a² − b², ω2 = −2ab,
//   ω3 = Suu + Svv, ω4 = Svv − Suu, ω5 = −2Suv
// gives 2A = ω4ω0 − ω3ω1, 2B = ω3ω2 − ω5ω0, 2C = ω4ω2 − ω5ω1, and the
// tan-half-angle substitution yields
//   tanΦ = (ω4ω0 − ω3ω1 + q√Δ) / (ω3ω2 + ω5ω1 − ω5ω0 − ω4ω2),
//   Δ = (ω4ω0 − ω3ω1)² + (ω3ω2 − ω5ω0)² − (ω4ω2 − ω5ω1)².
// One root is the energy minimum (P·cosΦ + Q·sinΦ = 0), the other its
// maximum (N = 0). Δ ≥ 0 in exact arithmetic since both factors are real.
ClosedFormCoefficients closed_form_coefficients(const kernels::PlaneMoments& m) {
  const double a = m.sgv, b = m.sgu;
  ClosedFormCoefficients k;
  auto& w = k.omega;
  w[0] = a * a + b * b;
  w[1] = a * a - b * b;
  w[2] = -2 * a * b;
  w[3] = m.suu + m.svv;
  w[4] = m.svv - m.suu;
  w[5] = -2 * m.suv;
  const double two_a = w[4] * w[0] - w[3] * w[1];
  const double two_b = w[3] * w[2] - w[5] * w[0];
  const double two_c = w[4] * w[2] - w[5] * w[1];
  k.numerator_base = two_a;
  k.denominator = two_b - two_c;
  k.delta = two_a * two_a + two_b * two_b - two_c * two_c;
  return k;
}

PhiSolution phi_closed_form(const FitInput& fit) {
  fit.validate();
  const auto m = moments_of(fit);
  const auto k = closed_form_coefficients(m);
  if (k.delta < 0) throw NoRealRoot("closed form has no real root (delta < 0)");
  const double root = std::sqrt(k.delta);

  // Roots of (C − B)t² + 2A t + (B + C) = 0 in t = tanΦ, evaluated in the
  // cancellation-free order: t_big = (A + sgn(A)√Δ)/(B − C), t_small from the
  // product of roots (B + C)/(C − B).
  const double sign = k.numerator_base >= 0 ? 1.0 : -1.0;
  const double big = k.numerator_base + sign * root;
  const double w = k.omega[4] * k.omega[2] - k.omega[5] * k.omega[1];  // 2C
  const double two_b = k.denominator + w;
  const double t_big = big / k.denominator;
  const double t_small = -(two_b + w) / big;

  std::array<PhiCandidate, 2> cand{};
  // q = sgn(A) gives t_big, q = −sgn(A) gives t_small.
  const double t_for_q[2] = {sign > 0 ? t_small : t_big, sign > 0 ? t_big : t_small};
  for (int i = 0; i < 2; ++i) {
    cand[i].phi = std::atan(t_for_q[i]);
    cand[i].cost = std::isnan(cand[i].phi) ? kInf : residual_energy_or_inf(fit, m, cand[i].phi);
  }
  if (!std::isfinite(cand[0].cost) && !std::isfinite(cand[1].cost)) {
    throw RankDeficiency("energy is singular at both closed-form roots");
  }
  const int pick = cand[1].cost < cand[0].cost ? 1 : 0;

  PhiSolution sol;
  sol.phi_star = cand[pick].phi;
  sol.cost = cand[pick].cost;
  sol.method = PhiMethod::closed_form;
  sol.candidates = cand;
  sol.delta = k.delta;
  return sol;
}

ScaleOffset solve_scale_offset(const FitInput& fit, double phi) {
  fit.validate();
  const auto m = moments_of(fit);
  const double c = std::cos(phi), s = std::sin(phi);
  if (m.degenerate(c, s)) throw RankDeficiency("T(phi)^T T(phi) is singular");
  const double x1 = m.cross(c, s) / m.spread(c, s);
  const double x0 = m.mean_g - x1 * (c * m.mean_v - s * m.mean_u);
  ScaleOffset out;
  out.varkappa = x1;
  out.kappa = x0 / x1;
  out.degenerate = !(x1 > 0);
  return out;
}

DisparityImage transform(const DisparityImage& img, const RoadModel& model) {
  model.validate();
  std::vector<double> out(img.size());
  kernels::plane_residual(img.values(), img.width(), img.height(), std::cos(model.phi),
                          std::sin(model.phi), model.varkappa, model.varkappa * model.kappa, out);
  if (model.lambda != 0) {
    for (double& x : out) x += model.lambda;
  }
  return DisparityImage::transformed(img.width(), img.height(), std::move(out));
}

TransformResult fit_and_transform(const DisparityImage& img, const SolverConfig& cfg) {
  TransformResult res;
  FitInput fit = fit_input_from_image(img);
  res.solution = solve_phi(fit, cfg, res.fell_back);
  auto so = solve_scale_offset(fit, res.solution.phi_star);

  if (cfg.robust_refit && !so.degenerate) {
    RoadModel first{res.solution.phi_star, so.varkappa, so.kappa, 0};
    std::vector<double> r(fit.size());
    for (std::size_t i = 0; i < fit.size(); ++i) r[i] = fit.g[i] - first.plane(fit.u[i], fit.v[i]);
    const double med = median_of(r);
    std::vector<double> dev(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) dev[i] = std::abs(r[i] - med);
    const double cut = med - 3 * median_of(dev);
    FitInput kept;
    for (std::size_t i = 0; i < fit.size(); ++i) {
      if (r[i] < cut) continue;
      kept.g.push_back(fit.g[i]);
      kept.u.push_back(fit.u[i]);
      kept.v.push_back(fit.v[i]);
    }
    const std::size_t excluded = fit.size() - kept.size();
    if (excluded > 0 && kept.size() >= 3) {
      bool fb = false;
      auto sol = solve_phi(kept, cfg, fb);
      const auto so2 = solve_scale_offset(kept, sol.phi_star);
      if (!so2.degenerate) {
        res.solution = sol;
        res.fell_back = res.fell_back || fb;
        so = so2;
        res.refit_excluded = excluded;
      }
    }
  }
  if (so.degenerate) {
    throw DegenerateGeometry("fitted scale varkappa = " + fmt17(so.varkappa) + " is not positive");
  }

  res.model = RoadModel{res.solution.phi_star, so.varkappa, so.kappa, 0};
  const DisparityImage residual = transform(img, res.model);
  double lo = std::numeric_limits<double>::infinity();
  for (double x : residual.values()) {
    if (DisparityImage::is_valid(x)) lo = std::min(lo, x);
  }
  res.model.lambda = std::max(0.0, -lo);
  std::vector<double> out(residual.values().begin(), residual.values().end());
  if (res.model.lambda != 0) {
    for (double& x : out) x += res.model.lambda;
  }
  res.transformed = DisparityImage::transformed(img.width(), img.height(), std::move(out));
  return res;
}

std::string model_sidecar(const RoadModel& model, const PhiSolution& solution) {
  std::ostringstream os;
  os << "phi=" << fmt17(model.phi) << '\n'
     << "varkappa=" << fmt17(model.varkappa) << '\n'
     << "kappa=" << fmt17(model.kappa) << '\n'
     << "lambda=" << fmt17(model.lambda) << '\n'
     << "cost=" << fmt17(solution.cost) << '\n'
     << "method=" << to_string(solution.method) << '\n';
  if (solution.delta) os << "delta=" << fmt17(*solution.delta) << '\n';
  if (solution.candidates) {
    for (int i = 0; i < 2; ++i) {
      const char* q = i == 0 ? "q-1" : "q+1";
      os << "candidate_" << q << "_phi=" << fmt17((*solution.candidates)[i].phi) << '\n'
         << "candidate_" << q << "_cost=" << fmt17((*solution.candidates)[i].cost) << '\n';
    }
  }
  return os.str();
}

}  // namespace pothole
