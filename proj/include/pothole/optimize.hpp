#pragma once

#include <cmath>
#include <utility>

namespace pothole {

struct LineMinimum {
  double x = 0;
  double fx = 0;
  int evaluations = 0;
};

/// Golden-section search for a minimum of a unimodal f on [a, b].
///
/// Shrinks the bracket until b − a < tol and returns the better of the two
/// interior probes. One new evaluation per iteration.
template <typename F>
LineMinimum golden_section_minimize(F&& f, double a, double b, double tol) {
  constexpr double inv_phi = 0.6180339887498948482;  // 1/φ
  if (a > b) std::swap(a, b);
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  int evals = 2;
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
    ++evals;
    // Probes collapse onto each other once the bracket reaches the spacing
    // of doubles; nothing further can be resolved.
    if (!(c < d)) break;
  }
  return fc <= fd ? LineMinimum{c, fc, evals} : LineMinimum{d, fd, evals};
}

}  // namespace pothole
