#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "pothole/adaptation.hpp"
#include "pothole/ellipse.hpp"
#include "pothole/image.hpp"
#include "pothole/road_model.hpp"

namespace pothole::synth {

enum class DepthProfile { flat, paraboloid };

struct PotholeSpec {
  Ellipse region;
  double depth = 1;  ///< peak depression d > 0, disparity units
  DepthProfile profile = DepthProfile::paraboloid;
};

/// One synthetic road scene: plane ϰ·(cosΦ·v − sinΦ·u + κ) with potholes
/// carved out of it, Gaussian noise, and random dropout.
struct SceneSpec {
  int width = 640;
  int height = 480;
  double phi = 0;
  double varkappa = 1;
  double kappa = 100;
  std::vector<PotholeSpec> potholes;
  double noise_sigma = 0;
  double invalid_fraction = 0;
  std::uint64_t seed = 0;

  /// Throws InvalidArgument if the plane is not positive over the frame or a
  /// field is out of range. Pothole depths are checked per pixel by generate().
  void validate() const;
  RoadModel truth() const { return {phi, varkappa, kappa, 0}; }
  /// Depression at pixel (u, v): the largest over the potholes containing it.
  double depression(int u, int v) const;
};

struct Scene {
  DisparityImage disparity;
  LabelMask mask;
  RoadModel truth;  ///< lambda = 0
};

/// Deterministic in spec (including seed). Noise comes before dropout.
Scene generate(const SceneSpec& spec);

/// Gray texture with pothole pixels darkened; values in [0, 255].
Raster generate_rgb_standin(const DisparityImage& disp, const LabelMask& mask, std::uint64_t seed);

/// Ranges for drawing random scenes.
struct RandomSceneParams {
  int width = 640;
  int height = 480;
  double phi_min = -0.05, phi_max = 0.05;
  double varkappa_min = 0.1, varkappa_max = 0.2;
  double kappa_min = 200, kappa_max = 400;
  /// Upper bound on plane disparity (0 = none); 255 keeps 16-bit files at 1/256 scale.
  double max_disparity = 255;
  adaptation::MaskGenParams potholes{1, 3, 15, 50};
  double depth_min = 5, depth_max = 10;
  DepthProfile profile = DepthProfile::flat;
  double noise_sigma = 0;
  double invalid_fraction = 0;
};

/// Plane parameters are redrawn until the plane (minus the deepest pothole)
/// stays positive and below max_disparity. Throws after 10 000 rejections.
SceneSpec random_scene(const RandomSceneParams& params, std::uint64_t seed);

std::string to_string(DepthProfile profile);
DepthProfile parse_profile(const std::string& text);

/// `key=value` tokens separated by spaces; `pothole=cu,cv,a,b,theta,depth,profile` repeats.
std::string format_scene_line(const SceneSpec& spec);
/// Inverse of format_scene_line. `seed` is mandatory; unspecified fields keep defaults.
SceneSpec parse_scene_line(const std::string& line);
/// One scene per non-empty line; `#` starts a comment.
std::vector<SceneSpec> read_scene_file(const std::filesystem::path& path);

}  // namespace pothole::synth
