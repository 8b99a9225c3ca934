#pragma once
// Dense-loop DAM reference, written straight from the definition.

#include <cmath>
#include <vector>

#include "pothole/attention.hpp"

namespace oracle {

inline pothole::Tensor4 dam_naive(const pothole::Tensor4& x, const pothole::attention::DamParams& p) {
  const int N = x.batch(), C = x.channels(), H = x.height(), W = x.width(), L = H * W, R = C / 8;
  pothole::Tensor4 out = x;
  auto X = [&](int n, int c, int l) { return x(n, c, l / W, l % W); };
  for (int n = 0; n < N; ++n) {
    // position branch
    for (int i = 0; i < L; ++i) {
      std::vector<double> s(L);
      for (int j = 0; j < L; ++j) {
        double acc = 0;
        for (int k = 0; k < R; ++k) {
          double q = 0, kk = 0;
          for (int c = 0; c < C; ++c) {
            q += X(n, c, i) * p.query[c * R + k];
            kk += X(n, c, j) * p.key[c * R + k];
          }
          acc += q * kk;
        }
        s[j] = acc;
      }
      double mx = s[0], z = 0;
      for (double e : s) mx = std::max(mx, e);
      for (double& e : s) z += (e = std::exp(e - mx));
      for (double& e : s) e /= z;
      for (int co = 0; co < C; ++co) {
        double acc = 0;
        for (int j = 0; j < L; ++j) {
          double vj = 0;
          for (int c = 0; c < C; ++c) vj += p.value[c * C + co] * X(n, c, j);
          acc += vj * s[j];
        }
        out(n, co, i / W, i % W) += p.gamma_p * acc;
      }
    }
    // channel branch
    for (int a = 0; a < C; ++a) {
      std::vector<double> s(C);
      for (int b = 0; b < C; ++b) {
        double acc = 0;
        for (int l = 0; l < L; ++l) acc += X(n, a, l) * X(n, b, l);
        s[b] = acc;
      }
      double mx = s[0], z = 0;
      for (double e : s) mx = std::max(mx, e);
      for (double& e : s) z += (e = std::exp(e - mx));
      for (double& e : s) e /= z;
      for (int l = 0; l < L; ++l) {
        double acc = 0;
        for (int b = 0; b < C; ++b) acc += s[b] * X(n, b, l);
        out(n, a, l / W, l % W) += p.gamma_c * acc;
      }
    }
  }
  return out;
}

inline double max_abs_diff(const pothole::Tensor4& a, const pothole::Tensor4& b) {
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a.data()[i] - b.data()[i]));
  return d;
}

}  // namespace oracle
