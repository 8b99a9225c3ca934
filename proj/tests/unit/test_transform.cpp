#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "oracles.hpp"
#include "pothole/error.hpp"
#include "pothole/road_model.hpp"
#include "pothole/rng.hpp"
#include "pothole/synth.hpp"

using namespace pothole;

namespace {

FitInput plane_fit(int w, int h, double phi, double vk, double kappa, double sigma = 0, std::uint64_t seed = 1) {
  const RoadModel m{phi, vk, kappa, 0};
  Rng rng(seed);
  FitInput f;
  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      f.g.push_back(m.plane(u, v) + sigma * rng.normal());
      f.u.push_back(u);
      f.v.push_back(v);
    }
  }
  return f;
}

DisparityImage plane_image(int w, int h, double phi, double vk, double kappa) {
  const auto f = plane_fit(w, h, phi, vk, kappa);
  return DisparityImage(w, h, f.g);
}

FitInput random_fit(std::size_t k, std::uint64_t seed) {
  Rng rng(seed);
  FitInput f;
  for (std::size_t i = 0; i < k; ++i) {
    f.u.push_back(rng.uniform(0, 50));
    f.v.push_back(rng.uniform(0, 40));
    f.g.push_back(rng.uniform(1, 30));
  }
  return f;
}

}  // namespace

TEST(FitInput, EnumerationOrder) {
  DisparityImage img(2, 2, {1, 2, 3, 4});
  const auto f = fit_input_from_image(img);
  EXPECT_EQ(f.u, (std::vector<double>{0, 1, 0, 1}));
  EXPECT_EQ(f.v, (std::vector<double>{0, 0, 1, 1}));
  EXPECT_EQ(f.g, (std::vector<double>{1, 2, 3, 4}));
}

TEST(FitInput, SkipsInvalid) {
  DisparityImage img(2, 2, {1, 0, 3, 4});
  const auto f = fit_input_from_image(img);
  EXPECT_EQ(f.size(), 3u);
  EXPECT_EQ(f.g, (std::vector<double>{1, 3, 4}));
}

TEST(FitInput, Errors) {
  EXPECT_THROW(fit_input_from_image(DisparityImage(2, 2, {0, 0, 0, 0})), InvalidArgument);
  EXPECT_THROW(fit_input_from_image(DisparityImage(3, 2, {1, 2, 3, 0, 0, 0})), RankDeficiency);
}

TEST(Energy, ExactModelIsZero) {
  const auto f = plane_fit(8, 6, 0, 2, 3);  // g = 2v + 6
  EXPECT_LE(energy(f, 0), 1e-20);
  EXPECT_GT(energy(f, 0.3), 0);
}

TEST(Energy, MatchesOlsOracle) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto f = random_fit(10, seed);
    Rng rng(seed + 100);
    for (int k = 0; k < 5; ++k) {
      const double phi = rng.uniform(-1.5, 1.5);
      EXPECT_NEAR(energy(f, phi), oracle::ols_residual(f.g, f.u, f.v, phi), 1e-10);
    }
  }
}

TEST(Energy, SingularThrows) {
  FitInput f{{1, 2, 3}, {0, 1, 2}, {5, 5, 5}};
  EXPECT_THROW(energy(f, 0), RankDeficiency);
}

TEST(EstimatePhi, ExactRecoveryAtZero) {
  const auto f = plane_fit(16, 12, 0, 2, 3);
  const auto s = estimate_phi(f, 1024, 1e-10);
  EXPECT_NEAR(s.phi_star, 0, 1e-10);
  EXPECT_LE(s.cost, 1e-12);
  EXPECT_EQ(s.method, PhiMethod::grid_refine);
}

TEST(EstimatePhi, SyntheticSceneMatchesDenseGrid) {
  synth::SceneSpec spec;
  spec.width = 64;
  spec.height = 48;
  spec.phi = 0.05;
  spec.varkappa = 1.5;
  spec.kappa = 40;
  const auto f = fit_input_from_image(synth::generate(spec).disparity);
  const auto s = estimate_phi(f);
  EXPECT_NEAR(s.phi_star, 0.05, 1e-6);
  const double dense = oracle::dense_grid_argmin(f.g, f.u, f.v, 1000000);
  EXPECT_NEAR(s.phi_star, dense, std::numbers::pi / 1000000);
}

TEST(EstimatePhi, GridDensityIrrelevantOnNoisyData) {
  const auto f = plane_fit(64, 48, -0.1, 1.2, 50, 0.5, 9);
  // Noisy energy is flat to rounding within ~4e-10 rad of its minimum, so
  // compare at a tolerance the minimiser can actually resolve.
  const double tol = 1e-8;
  const auto a = estimate_phi(f, 16, tol);
  const auto b = estimate_phi(f, 4096, tol);
  EXPECT_NEAR(a.phi_star, b.phi_star, tol);
}

TEST(EstimatePhi, OptimalAgainstRandomAngles) {
  const auto f = plane_fit(40, 30, 0.12, 0.8, 70, 0.3, 4);
  const auto s = estimate_phi(f);
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) {
    const double phi = rng.uniform(-1.5, 1.5);
    EXPECT_LE(s.cost, energy(f, phi) + 1e-9);
  }
}

TEST(EstimatePhi, BadArguments) {
  const auto f = plane_fit(8, 6, 0, 2, 3);
  EXPECT_THROW(estimate_phi(f, 8, 1e-10), InvalidArgument);
  EXPECT_THROW(estimate_phi(f, 64, 0), InvalidArgument);
}

TEST(ClosedForm, ExactRecovery) {
  const auto f = plane_fit(16, 12, 0, 2, 3);
  const auto s = phi_closed_form(f);
  ASSERT_TRUE(s.candidates && s.delta);
  EXPECT_EQ(s.method, PhiMethod::closed_form);
  EXPECT_GE(*s.delta, 0);
  EXPECT_LE(s.cost, 1e-12);
  const auto& c = *s.candidates;
  EXPECT_LE(std::min(c[0].cost, c[1].cost), 1e-12);
  EXPECT_EQ(s.cost, std::min(c[0].cost, c[1].cost));
}

TEST(ClosedForm, AgreesWithNumerical) {
  Rng rng(77);
  for (int i = 0; i < 100; ++i) {
    const auto f = plane_fit(48, 36, rng.uniform(-0.3, 0.3), rng.uniform(0.5, 3), rng.uniform(20, 100),
                             rng.uniform(0, 1), rng.next_u64());
    const auto cf = phi_closed_form(f);
    const auto nm = estimate_phi(f);
    EXPECT_NEAR(cf.phi_star, nm.phi_star, 1e-8) << "trial " << i;
    const auto& c = *cf.candidates;
    EXPECT_LT(std::min(c[0].cost, c[1].cost), std::max(c[0].cost, c[1].cost));
  }
}

TEST(ClosedForm, OmegaCoefficients) {
  // Hand-computed for g = v on the 2×2 grid: centred Suu = Svv = 1, Suv = 0,
  // Sgu = 0, Sgv = 1.
  const auto f = FitInput{{1, 1, 2, 2}, {0, 1, 0, 1}, {0, 0, 1, 1}};
  const auto m = kernels::plane_moments(f.g, f.u, f.v);
  const auto k = closed_form_coefficients(m);
  EXPECT_DOUBLE_EQ(k.omega[0], 1);
  EXPECT_DOUBLE_EQ(k.omega[1], 1);
  EXPECT_DOUBLE_EQ(k.omega[2], 0);
  EXPECT_DOUBLE_EQ(k.omega[3], 2);
  EXPECT_DOUBLE_EQ(k.omega[4], 0);
  EXPECT_DOUBLE_EQ(k.omega[5], 0);
  EXPECT_GE(k.delta, 0);
}

TEST(ClosedForm, UsedWhenRequested) {
  SolverConfig cfg;
  cfg.closed_form = true;
  const auto r = fit_and_transform(plane_image(32, 24, 0.02, 1, 30), cfg);
  EXPECT_EQ(r.solution.method, PhiMethod::closed_form);
  EXPECT_FALSE(r.fell_back);
  EXPECT_NEAR(r.model.phi, 0.02, 1e-9);
}

// Three collinear pixels: Δ is zero in exact arithmetic and rounds negative.
TEST(ClosedForm, NegativeDiscriminantFallsBack) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> vals(16, nan);
  vals[3] = 10;
  vals[1 * 4 + 2] = 10.000000000001874;
  vals[3 * 4 + 0] = 10;
  const DisparityImage img(4, 4, vals);
  EXPECT_THROW(phi_closed_form(fit_input_from_image(img)), NoRealRoot);
  SolverConfig cfg;
  cfg.closed_form = true;
  TransformResult r;
  ASSERT_NO_THROW(r = fit_and_transform(img, cfg));
  EXPECT_TRUE(r.fell_back);
  EXPECT_EQ(r.solution.method, PhiMethod::grid_refine);
}

TEST(ScaleOffset, SimplePlane) {
  const auto f = plane_fit(8, 6, 0, 2, 3);
  const auto so = solve_scale_offset(f, 0);
  EXPECT_NEAR(so.varkappa, 2, 1e-12);
  EXPECT_NEAR(so.kappa, 3, 1e-12);
  EXPECT_FALSE(so.degenerate);
}

TEST(ScaleOffset, SyntheticTruth) {
  synth::SceneSpec spec;
  spec.width = 64;
  spec.height = 48;
  spec.phi = 0.05;
  spec.varkappa = 1.5;
  spec.kappa = 40;
  const auto f = fit_input_from_image(synth::generate(spec).disparity);
  const auto so = solve_scale_offset(f, 0.05);
  EXPECT_NEAR(so.varkappa, 1.5, 1e-9);
  EXPECT_NEAR(so.kappa, 40, 1e-9);
}

TEST(ScaleOffset, MatchesOlsOracle) {
  const auto f = random_fit(30, 8);
  double x0 = 0, x1 = 0;
  oracle::ols_residual(f.g, f.u, f.v, 0.4, &x0, &x1);
  const auto so = solve_scale_offset(f, 0.4);
  EXPECT_NEAR(so.varkappa, x1, 1e-10);
  EXPECT_NEAR(so.varkappa * so.kappa, x0, 1e-9);
}

TEST(ScaleOffset, NegativeSlopeIsDegenerate) {
  FitInput f{{10, 9, 8, 7}, {0, 0, 0, 0}, {0, 1, 2, 3}};
  const auto so = solve_scale_offset(f, 0);
  EXPECT_TRUE(so.degenerate);
  EXPECT_THROW(fit_and_transform(DisparityImage(2, 2, {10, 10, 9, 9})), DegenerateGeometry);
}

TEST(ScaleOffset, NoiseDoesNotBias) {
  // Mean error over many noisy fits shrinks like 1/sqrt(trials).
  double sum_vk = 0, sum_k = 0;
  const int trials = 200;
  for (int i = 0; i < trials; ++i) {
    const auto f = plane_fit(32, 24, 0.0, 1.5, 40, 0.5, 1000 + i);
    const auto so = solve_scale_offset(f, 0.0);
    sum_vk += so.varkappa - 1.5;
    sum_k += so.kappa - 40;
  }
  EXPECT_LT(std::abs(sum_vk / trials), 5e-4);
  EXPECT_LT(std::abs(sum_k / trials), 5e-2);
}

TEST(Transform, ExactModelIsZero) {
  const auto img = plane_image(20, 15, 0.1, 1.2, 50);
  const auto out = transform(img, RoadModel{0.1, 1.2, 50, 0});
  for (double x : out.values()) EXPECT_NEAR(x, 0, 1e-9);
}

TEST(Transform, InjectedDepression) {
  const RoadModel m{0.03, 1.1, 60, 0};
  auto f = plane_fit(10, 8, m.phi, m.varkappa, m.kappa);
  f.g[17] -= 7;
  const auto out = transform(DisparityImage(10, 8, f.g), RoadModel{m.phi, m.varkappa, m.kappa, 10});
  for (std::size_t i = 0; i < out.size(); ++i) {
    EXPECT_NEAR(out.values()[i], i == 17 ? 3.0 : 10.0, 1e-12);
  }
}

TEST(Transform, IdentityModel) {
  std::vector<double> g;
  for (int v = 0; v < 4; ++v) {
    for (int u = 0; u < 3; ++u) g.push_back(v + 1);
  }
  // g = v + 1, model (0, 1, 1) leaves 0.
  const auto out = transform(DisparityImage(3, 4, g), RoadModel{0, 1, 1, 0});
  for (double x : out.values()) EXPECT_EQ(x, 0.0);
}

TEST(Transform, InvalidStaysInvalid) {
  auto f = plane_fit(5, 4, 0, 1, 10);
  f.g[3] = 0;
  const auto out = transform(DisparityImage(5, 4, f.g), RoadModel{0, 1, 10, 2});
  EXPECT_FALSE(out.valid(3, 0));
  EXPECT_EQ(out.valid_count(), 19u);
}

TEST(FitAndTransform, ExactImageIsConstant) {
  const auto r = fit_and_transform(plane_image(64, 48, -0.07, 2.2, 35));
  auto [lo, hi] = r.transformed.valid_range();
  EXPECT_EQ(lo, 0.0);
  EXPECT_LE(hi - lo, 1e-9);
  EXPECT_NEAR(r.model.phi, -0.07, 1e-9);
  EXPECT_NEAR(r.model.varkappa, 2.2, 1e-9);
  EXPECT_NEAR(r.model.kappa, 35, 1e-8);
}

TEST(FitAndTransform, PotholesSitBelowRoad) {
  synth::SceneSpec spec;
  spec.width = 120;
  spec.height = 90;
  spec.phi = 0.02;
  spec.varkappa = 1;
  spec.kappa = 60;
  spec.potholes.push_back({Ellipse{50, 40, 12, 8, 0.3}, 6, synth::DepthProfile::flat});
  const auto sc = synth::generate(spec);
  const auto r = fit_and_transform(sc.disparity);
  // Road level is the most common value; pothole pixels are all lower.
  double road_min = 1e300, pit_max = -1e300;
  for (std::size_t i = 0; i < sc.mask.size(); ++i) {
    const double x = r.transformed.values()[i];
    if (sc.mask[i]) {
      pit_max = std::max(pit_max, x);
    } else {
      road_min = std::min(road_min, x);
    }
  }
  EXPECT_LT(pit_max, road_min);
  EXPECT_EQ(r.transformed.valid_range().first, 0.0);
}

TEST(FitAndTransform, RobustRefitExcludesPotholes) {
  synth::SceneSpec spec;
  spec.width = 120;
  spec.height = 90;
  spec.phi = 0.02;
  spec.varkappa = 1;
  spec.kappa = 60;
  spec.noise_sigma = 0.05;
  spec.seed = 3;
  spec.potholes.push_back({Ellipse{50, 40, 20, 15, 0.3}, 8, synth::DepthProfile::flat});
  const auto sc = synth::generate(spec);
  SolverConfig cfg;
  const auto plain = fit_and_transform(sc.disparity, cfg);
  cfg.robust_refit = true;
  const auto robust = fit_and_transform(sc.disparity, cfg);
  EXPECT_GT(robust.refit_excluded, 0u);
  EXPECT_LT(std::abs(robust.model.phi - 0.02), std::abs(plain.model.phi - 0.02));
}

TEST(Properties, TranslationCovariance) {
  const auto f = plane_fit(30, 20, 0.05, 1.3, 20, 0.2, 6);
  auto shifted = f;
  const double c = 5.5;
  for (double& g : shifted.g) g += c;
  const auto a = estimate_phi(f), b = estimate_phi(shifted);
  EXPECT_NEAR(a.phi_star, b.phi_star, 1e-9);
  const auto sa = solve_scale_offset(f, a.phi_star), sb = solve_scale_offset(shifted, a.phi_star);
  EXPECT_NEAR(sb.varkappa * sb.kappa - sa.varkappa * sa.kappa, c, 1e-9);
  EXPECT_NEAR(sa.varkappa, sb.varkappa, 1e-12);
}

TEST(Properties, PerturbationTransparency) {
  const RoadModel m{-0.04, 0.9, 80, 12};
  auto f = plane_fit(16, 12, m.phi, m.varkappa, m.kappa);
  Rng rng(1);
  std::vector<double> d(f.size(), 0);
  for (int k = 0; k < 10; ++k) d[rng.uniform_int(0, f.size() - 1)] = rng.uniform(0.5, 9);
  for (std::size_t i = 0; i < f.size(); ++i) f.g[i] -= d[i];
  const auto out = transform(DisparityImage(16, 12, f.g), m);
  for (std::size_t i = 0; i < f.size(); ++i) EXPECT_NEAR(out.values()[i], m.lambda - d[i], 1e-12);
}

TEST(Sidecar, Fields) {
  const auto r = fit_and_transform(plane_image(16, 12, 0, 1, 10));
  const auto text = model_sidecar(r.model, r.solution);
  EXPECT_NE(text.find("phi="), std::string::npos);
  EXPECT_NE(text.find("method=grid_refine"), std::string::npos);
}
