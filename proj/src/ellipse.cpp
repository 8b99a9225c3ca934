#include "pothole/ellipse.hpp"

#include <algorithm>
#include <cmath>

namespace pothole {

double Ellipse::rho2(double u, double v) const {
  const double du = u - cu, dv = v - cv;
  const double c = std::cos(theta), s = std::sin(theta);
  const double x = (du * c + dv * s) / semi_a;
  const double y = (-du * s + dv * c) / semi_b;
  return x * x + y * y;
}

LabelMask rasterize(const std::vector<Ellipse>& ellipses, int width, int height) {
  LabelMask mask(width, height);
  for (const auto& e : ellipses) {
    const double r = std::max(e.semi_a, e.semi_b);
    const int u0 = std::max(0, static_cast<int>(std::floor(e.cu - r)));
    const int u1 = std::min(width - 1, static_cast<int>(std::ceil(e.cu + r)));
    const int v0 = std::max(0, static_cast<int>(std::floor(e.cv - r)));
    const int v1 = std::min(height - 1, static_cast<int>(std::ceil(e.cv + r)));
    for (int v = v0; v <= v1; ++v) {
      for (int u = u0; u <= u1; ++u) {
        if (e.contains(u, v)) mask.set(u, v, true);
      }
    }
  }
  return mask;
}

}  // namespace pothole
