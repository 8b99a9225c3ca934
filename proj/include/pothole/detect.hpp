#pragma once

#include <span>
#include <vector>

#include "pothole/image.hpp"

namespace pothole {

struct BoundingBox {
  int min_u = 0, min_v = 0, max_u = 0, max_v = 0;
};

struct Pixel {
  int u = 0, v = 0;
};

struct Component {
  int id = 0;
  std::size_t area = 0;
  BoundingBox bbox;
  std::vector<Pixel> pixels;
};

/// Otsu threshold over `bins` equal-width bins spanning [min, max].
///
/// Returns the upper edge of the bin that ends the lower class, chosen to
/// maximise the between-class variance; ties resolve to the smallest edge.
/// Values strictly below the returned threshold form the lower class.
/// Throws InvalidArgument for constant input or bins < 2.
double otsu_threshold(std::span<const double> values, int bins = 256);

/// 8-connected components ordered by (bbox.min_v, bbox.min_u).
std::vector<Component> connected_components(const LabelMask& mask);

struct SegmentOptions {
  std::size_t min_area = 50;
  int bins = 256;
};

/// Pothole mask of a transformed disparity image: valid pixels below the
/// Otsu threshold of the valid values, minus components smaller than min_area.
/// A constant image yields an empty mask.
LabelMask segment(const DisparityImage& tdisp, const SegmentOptions& options = {});

}  // namespace pothole
