#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "pothole/detect.hpp"
#include "pothole/error.hpp"
#include "pothole/road_model.hpp"
#include "pothole/rng.hpp"
#include "pothole/synth.hpp"

using namespace pothole;

TEST(Otsu, TwoClusters) {
  const std::vector<double> xs{1, 1, 9, 9};
  const double t = otsu_threshold(xs, 8);
  // Every edge in (1, 9] separates the clusters equally; the smallest is lo + w.
  EXPECT_DOUBLE_EQ(t, 2.0);
}

TEST(Otsu, SingleOutlier) {
  const std::vector<double> xs{0, 0, 0, 10};
  const double t = otsu_threshold(xs, 256);
  EXPECT_GT(t, 0);
  EXPECT_LT(t, 10);
}

TEST(Otsu, MatchesExhaustiveSearch) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    std::vector<double> xs;
    for (int i = 0; i < 64; ++i) xs.push_back(rng.uniform() < 0.3 ? rng.normal() : 5 + 2 * rng.normal());
    for (int bins : {16, 256}) {
      EXPECT_DOUBLE_EQ(otsu_threshold(xs, bins), oracle::otsu_bruteforce(xs, bins)) << "seed " << seed;
    }
  }
}

TEST(Otsu, AffineInvariantSplit) {
  Rng rng(3);
  std::vector<double> xs, ys;
  for (int i = 0; i < 200; ++i) {
    xs.push_back(rng.uniform() < 0.4 ? rng.uniform(0, 3) : rng.uniform(5, 9));
    ys.push_back(2.5 * xs.back() - 7);
  }
  const double tx = otsu_threshold(xs), ty = otsu_threshold(ys);
  for (std::size_t i = 0; i < xs.size(); ++i) EXPECT_EQ(xs[i] < tx, ys[i] < ty);
}

TEST(Otsu, Errors) {
  const std::vector<double> flat{2, 2, 2};
  EXPECT_THROW(otsu_threshold(flat), InvalidArgument);
  const std::vector<double> two{1, 2};
  EXPECT_THROW(otsu_threshold(two, 1), InvalidArgument);
}

TEST(Components, EmptyMask) {
  EXPECT_TRUE(connected_components(LabelMask(5, 5)).empty());
}

TEST(Components, DiagonalTouchIsOne) {
  LabelMask m(4, 4);
  m.set(1, 1, true);
  m.set(2, 2, true);
  const auto c = connected_components(m);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].area, 2u);
  EXPECT_EQ(c[0].bbox.min_u, 1);
  EXPECT_EQ(c[0].bbox.max_v, 2);
}

TEST(Components, MatchesFloodFill) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rng rng(seed);
    LabelMask m(16, 16);
    for (int v = 0; v < 16; ++v) {
      for (int u = 0; u < 16; ++u) m.set(u, v, rng.uniform() < 0.3);
    }
    const auto comps = connected_components(m);
    const auto areas = oracle::flood_fill_areas(m);
    ASSERT_EQ(comps.size(), areas.size());
    std::size_t total = 0;
    for (std::size_t i = 0; i < comps.size(); ++i) {
      EXPECT_EQ(comps[i].area, comps[i].pixels.size());
      total += comps[i].area;
    }
    EXPECT_EQ(total, m.count());
    // Ordering by (min_v, min_u).
    for (std::size_t i = 1; i < comps.size(); ++i) {
      const auto& a = comps[i - 1].bbox;
      const auto& b = comps[i].bbox;
      EXPECT_TRUE(a.min_v < b.min_v || (a.min_v == b.min_v && a.min_u <= b.min_u));
    }
  }
}

TEST(Segment, ConstantImageIsEmpty) {
  const auto img = DisparityImage::transformed(8, 8, std::vector<double>(64, 4.0));
  EXPECT_EQ(segment(img).count(), 0u);
}

TEST(Segment, RecoversFlatPothole) {
  synth::SceneSpec spec;
  spec.width = 160;
  spec.height = 120;
  spec.phi = 0.01;
  spec.varkappa = 1;
  spec.kappa = 40;
  spec.potholes.push_back({Ellipse{70, 60, 15, 10, 0.4}, 7, synth::DepthProfile::flat});
  const auto sc = synth::generate(spec);
  auto model = sc.truth;
  model.lambda = 10;
  const auto t = transform(sc.disparity, model);
  EXPECT_EQ(segment(t), sc.mask);
}

TEST(Segment, AreaFilter) {
  std::vector<double> v(100, 10.0);
  v[55] = 1.0;
  const auto img = DisparityImage::transformed(10, 10, v);
  EXPECT_EQ(segment(img, {1, 256}).count(), 1u);
  EXPECT_EQ(segment(img, {5, 256}).count(), 0u);
}

TEST(Segment, NeverMarksInvalidAndMonotoneInArea) {
  Rng rng(12);
  std::vector<double> v(40 * 30);
  for (double& x : v) x = rng.uniform() < 0.1 ? std::nan("") : (rng.uniform() < 0.2 ? 1 : 8) + rng.normal();
  const auto img = DisparityImage::transformed(40, 30, v);
  std::size_t prev = SIZE_MAX;
  for (std::size_t area : {1, 2, 4, 8, 16, 64}) {
    const auto m = segment(img, {area, 256});
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (std::isnan(v[i])) {
        EXPECT_FALSE(m[i]);
      }
    }
    EXPECT_LE(m.count(), prev);
    prev = m.count();
  }
}
