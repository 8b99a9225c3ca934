#pragma once

#include <vector>

#include "pothole/image.hpp"

namespace pothole {

/// Rotated ellipse in pixel coordinates.
struct Ellipse {
  double cu = 0, cv = 0;      ///< centre (column, row)
  double semi_a = 1, semi_b = 1;
  double theta = 0;           ///< rotation of the a-axis from +u, radians

  /// Squared normalised radius ρ² of pixel (u, v); < 1 strictly inside.
  double rho2(double u, double v) const;
  bool contains(double u, double v) const { return rho2(u, v) < 1.0; }
};

/// Union of ellipses rasterised at integer pixel centres, clipped to the frame.
LabelMask rasterize(const std::vector<Ellipse>& ellipses, int width, int height);

}  // namespace pothole
