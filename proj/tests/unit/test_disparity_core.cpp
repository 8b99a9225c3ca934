#include <gtest/gtest.h>

#include <cmath>
#include <fstream>

#include "oracles.hpp"
#include "pothole/error.hpp"
#include "pothole/io.hpp"
#include "pothole/rng.hpp"
#include "pothole/vdisparity.hpp"

using namespace pothole;
namespace fs = std::filesystem;

namespace {
const double kNaN = std::nan("");
}

TEST(DisparityImage, ValidityFollowsSign) {
  DisparityImage img(2, 2, {1.0, 0.0, -3.0, kNaN});
  EXPECT_TRUE(img.valid(0, 0));
  EXPECT_FALSE(img.valid(1, 0));
  EXPECT_FALSE(img.valid(0, 1));
  EXPECT_FALSE(img.valid(1, 1));
  EXPECT_EQ(img.valid_count(), 1u);
}

TEST(DisparityImage, RejectsBadShape) {
  EXPECT_THROW(DisparityImage(1, 4, {1, 1, 1, 1}), InvalidArgument);
  EXPECT_THROW(DisparityImage(2, 2, {1, 1, 1}), InvalidArgument);
}

TEST(DisparityImage, TransformedKeepsZeroAndNegative) {
  auto img = DisparityImage::transformed(2, 2, {0.0, -1.0, 2.0, kNaN});
  EXPECT_TRUE(img.valid(0, 0));
  EXPECT_TRUE(img.valid(1, 0));
  EXPECT_FALSE(img.valid(1, 1));
  auto [lo, hi] = img.valid_range();
  EXPECT_EQ(lo, -1.0);
  EXPECT_EQ(hi, 2.0);
}

TEST(LoadDisparity, SixteenBitScaling) {
  const auto dir = oracle::temp_dir("load16");
  io::RawImage raw{2, 2, 16, {256, 512, 0, 1024}};
  io::write_png(dir / "a.png", raw);
  const auto img = io::load_disparity(dir / "a.png", 1.0 / 256);
  EXPECT_EQ(img.at(0, 0), 1.0);
  EXPECT_EQ(img.at(1, 0), 2.0);
  EXPECT_FALSE(img.valid(0, 1));
  EXPECT_EQ(img.at(1, 1), 4.0);
}

TEST(LoadDisparity, AllRaw256IsOne) {
  const auto dir = oracle::temp_dir("load256");
  io::RawImage raw{4, 3, 16, std::vector<std::uint16_t>(12, 256)};
  io::write_png(dir / "a.png", raw);
  const auto img = io::load_disparity(dir / "a.png");
  EXPECT_EQ(img.valid_count(), 12u);
  for (double x : img.values()) EXPECT_EQ(x, 1.0);
}

TEST(LoadDisparity, EightBitPgm) {
  const auto dir = oracle::temp_dir("pgm8");
  io::RawImage raw{3, 2, 8, {0, 1, 2, 3, 4, 255}};
  io::write_pgm(dir / "a.pgm", raw);
  const auto img = io::load_disparity(dir / "a.pgm", 0.5);
  EXPECT_FALSE(img.valid(0, 0));
  EXPECT_EQ(img.at(2, 1), 127.5);
}

TEST(LoadDisparity, SixteenBitPgm) {
  const auto dir = oracle::temp_dir("pgm16");
  io::RawImage raw{2, 2, 16, {0, 300, 65535, 7}};
  io::write_pgm(dir / "a.pgm", raw);
  const auto back = io::read_raster(dir / "a.pgm");
  EXPECT_EQ(back.bit_depth, 16);
  EXPECT_EQ(back.pixels, raw.pixels);
}

TEST(LoadDisparity, Errors) {
  const auto dir = oracle::temp_dir("loaderr");
  EXPECT_THROW(io::load_disparity(dir / "missing.png"), IoError);
  std::ofstream(dir / "junk.png") << "not an image";
  EXPECT_THROW(io::load_disparity(dir / "junk.png"), IoError);
}

TEST(LoadDisparity, RoundTripWithinHalfStep) {
  const auto dir = oracle::temp_dir("roundtrip");
  Rng rng(11);
  std::vector<double> v(40 * 30);
  for (double& x : v) x = rng.uniform(0.5, 200);
  v[5] = kNaN;
  DisparityImage img(40, 30, v);
  io::save_disparity(dir / "d.png", img);
  const auto back = io::load_disparity(dir / "d.png");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i == 5) {
      EXPECT_FALSE(DisparityImage::is_valid(back.values()[i]));
    } else {
      EXPECT_LE(std::abs(back.values()[i] - v[i]), io::kDefaultScale / 2 + 1e-15);
    }
  }
}

TEST(LoadTransformed, ZeroSurvives) {
  const auto dir = oracle::temp_dir("tdisp");
  auto img = DisparityImage::transformed(2, 2, {0.0, 1.5, kNaN, 10.0});
  io::save_transformed(dir / "t.png", img);
  const auto back = io::load_transformed(dir / "t.png");
  EXPECT_EQ(back.at(0, 0), 0.0);
  EXPECT_TRUE(back.valid(0, 0));
  EXPECT_EQ(back.at(1, 0), 1.5);
  EXPECT_FALSE(back.valid(0, 1));
  EXPECT_EQ(back.at(1, 1), 10.0);
}

TEST(Mask, RoundTrip) {
  const auto dir = oracle::temp_dir("mask");
  LabelMask m(3, 2);
  m.set(1, 0, true);
  m.set(2, 1, true);
  io::save_mask(dir / "m.png", m);
  EXPECT_EQ(io::read_raster(dir / "m.png").pixels[1], 255);
  EXPECT_EQ(io::load_mask(dir / "m.png"), m);
}

TEST(VDisparity, AllInvalidIsEmpty) {
  DisparityImage img(3, 2, std::vector<double>(6, 0.0));
  const auto h = v_disparity(img, 1.0, 8);
  EXPECT_EQ(h.total(), 0u);
}

TEST(VDisparity, FloorBinning) {
  DisparityImage img(3, 2, {3.2, 3.7, 4.1, kNaN, kNaN, kNaN});
  const auto h = v_disparity(img, 1.0);
  EXPECT_EQ(h.rows, 2);
  EXPECT_EQ(h.at(0, 3), 2u);
  EXPECT_EQ(h.at(0, 4), 1u);
  EXPECT_EQ(h.total(), 3u);
}

TEST(VDisparity, DropsOutOfRange) {
  DisparityImage img(2, 2, {1.0, 9.5, 2.0, 10.0});
  const auto h = v_disparity(img, 2.0, 5);  // covers [0, 10)
  EXPECT_EQ(h.total(), 3u);
  EXPECT_EQ(h.at(1, 1), 1u);
  EXPECT_EQ(h.at(0, 4), 1u);
}

TEST(VDisparity, RejectsBadBinWidth) {
  DisparityImage img(2, 2, {1, 1, 1, 1});
  EXPECT_THROW(v_disparity(img, 0.0), InvalidArgument);
  EXPECT_THROW(v_disparity(img, -1.0, 4), InvalidArgument);
}

TEST(VDisparity, MassConservation) {
  Rng rng(5);
  std::vector<double> v(64 * 48);
  for (double& x : v) x = rng.uniform() < 0.1 ? 0.0 : rng.uniform(0.1, 60);
  DisparityImage img(64, 48, v);
  const int cols = 20;
  const double bw = 2.5;
  std::uint64_t expect = 0;
  for (double x : img.values()) {
    if (DisparityImage::is_valid(x) && x < cols * bw) ++expect;
  }
  EXPECT_EQ(v_disparity(img, bw, cols).total(), expect);
  EXPECT_EQ(v_disparity(img, bw).total(), img.valid_count());
}

TEST(VDisparity, ExportFormats) {
  const auto dir = oracle::temp_dir("vdexport");
  DisparityImage img(3, 2, {3.2, 3.7, 4.1, 1.0, kNaN, kNaN});
  const auto h = v_disparity(img, 1.0);
  save_vdisparity_csv(dir / "h.csv", h);
  save_vdisparity_pgm(dir / "h.pgm", h);
  std::ifstream in(dir / "h.csv");
  std::string all((std::istreambuf_iterator<char>(in)), {});
  EXPECT_EQ(all, "v,g_bin,count\n0,3,2\n0,4,1\n1,1,1\n");
  const auto raw = io::read_raster(dir / "h.pgm");
  EXPECT_EQ(raw.width, h.cols);
  EXPECT_EQ(raw.height, h.rows);
  EXPECT_EQ(raw.pixels[3], 255);
}
