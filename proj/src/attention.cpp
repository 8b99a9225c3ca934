#include "pothole/attention.hpp"

#include <algorithm>
#include <cmath>
#include <cctype>
#include <cstdint>
#include <span>
#include <sstream>

#include "pothole/error.hpp"

namespace pothole::attention {
namespace {

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// In-place row softmax with max subtraction.
void softmax(std::span<double> row) {
  const double peak = *std::max_element(row.begin(), row.end());
  double sum = 0;
  for (double& x : row) {
    x = std::exp(x - peak);
    sum += x;
  }
  for (double& x : row) x /= sum;
}

std::vector<double> normal_vector(std::size_t n, double scale, Rng& rng) {
  std::vector<double> out(n);
  for (double& x : out) x = scale * rng.normal();
  return out;
}

void require(bool ok, const char* what) {
  if (!ok) throw InvalidArgument(what);
}

// Shared DAM evaluation; fills `aff` when non-null.
Tensor4 dam_eval(const Tensor4& x, const DamParams& p, Exec exec, DamAffinities* aff) {
  p.validate();
  require(x.channels() == p.channels, "dam: channel count does not match parameters");
  const int nb = x.batch(), C = x.channels(), r = p.reduced();
  const int L = static_cast<int>(x.plane());
  Tensor4 out = x;
  if (aff) {
    aff->batch = nb;
    aff->positions = L;
    aff->channels = C;
    aff->position.assign(static_cast<std::size_t>(nb) * L * L, 0.0);
    aff->channel.assign(static_cast<std::size_t>(nb) * C * C, 0.0);
  }
  const bool par = exec == Exec::parallel;
  std::vector<double> qp(static_cast<std::size_t>(L) * r), kp(qp.size());
  std::vector<double> vp(static_cast<std::size_t>(L) * C);

  for (int n = 0; n < nb; ++n) {
    const double* X = x.data().data() + x.offset(n, 0, 0, 0);  // C × L
    double* Y = out.data().data() + out.offset(n, 0, 0, 0);

#pragma omp parallel for schedule(static) if (par)
    for (int l = 0; l < L; ++l) {
      for (int k = 0; k < r; ++k) {
        double q = 0, kk = 0;
        for (int c = 0; c < C; ++c) {
          q += X[c * L + l] * p.query[c * r + k];
          kk += X[c * L + l] * p.key[c * r + k];
        }
        qp[l * r + k] = q;
        kp[l * r + k] = kk;
      }
      for (int co = 0; co < C; ++co) {
        double acc = 0;
        for (int c = 0; c < C; ++c) acc += X[c * L + l] * p.value[c * C + co];
        vp[l * C + co] = acc;
      }
    }

    // Position branch: row i of A_p weights every position j.
#pragma omp parallel if (par)
    {
      std::vector<double> row(static_cast<std::size_t>(L));
#pragma omp for schedule(static)
      for (int i = 0; i < L; ++i) {
        for (int j = 0; j < L; ++j) {
          double s = 0;
          for (int k = 0; k < r; ++k) s += qp[i * r + k] * kp[j * r + k];
          row[j] = s;
        }
        softmax(row);
        if (aff) {
          std::copy(row.begin(), row.end(),
                    aff->position.begin() + (static_cast<std::ptrdiff_t>(n) * L + i) * L);
        }
        for (int co = 0; co < C; ++co) {
          double acc = 0;
          for (int j = 0; j < L; ++j) acc += vp[j * C + co] * row[j];
          Y[co * L + i] += p.gamma_p * acc;
        }
      }
    }

    // Channel branch: row a of A_c from the Gram matrix X·Xᵀ.
#pragma omp parallel if (par)
    {
      std::vector<double> row(static_cast<std::size_t>(C));
#pragma omp for schedule(static)
      for (int a = 0; a < C; ++a) {
        for (int b = 0; b < C; ++b) {
          double s = 0;
          for (int l = 0; l < L; ++l) s += X[a * L + l] * X[b * L + l];
          row[b] = s;
        }
        softmax(row);
        if (aff) {
          std::copy(row.begin(), row.end(),
                    aff->channel.begin() + (static_cast<std::ptrdiff_t>(n) * C + a) * C);
        }
        for (int l = 0; l < L; ++l) {
          double acc = 0;
          for (int b = 0; b < C; ++b) acc += row[b] * X[b * L + l];
          Y[a * L + l] += p.gamma_c * acc;
        }
      }
    }
  }
  return out;
}

}  // namespace

int default_cam_reduction(int channels) {
  for (int r = std::min(16, channels); r > 1; --r) {
    if (channels % r == 0) return r;
  }
  return 1;
}

void CamParams::validate() const {
  require(channels > 0, "cam: channels must be positive");
  require(reduction >= 1 && channels % reduction == 0, "cam: reduction must divide channels");
  const auto c = static_cast<std::size_t>(channels), h = static_cast<std::size_t>(hidden());
  require(w1.size() == h * c && b1.size() == h && w2.size() == c * h && b2.size() == c,
          "cam: parameter sizes do not match channels/reduction");
}

CamParams CamParams::zeros(int channels, int reduction) {
  require(channels > 0 && reduction >= 1 && channels % reduction == 0,
          "cam: reduction must divide channels");
  CamParams p;
  p.channels = channels;
  p.reduction = reduction;
  const auto c = static_cast<std::size_t>(channels), h = static_cast<std::size_t>(p.hidden());
  p.w1.assign(h * c, 0.0);
  p.b1.assign(h, 0.0);
  p.w2.assign(c * h, 0.0);
  p.b2.assign(c, 0.0);
  return p;
}

CamParams CamParams::random(int channels, Rng& rng) {
  CamParams p = zeros(channels, default_cam_reduction(channels));
  const auto h = p.hidden();
  p.w1 = normal_vector(p.w1.size(), 1.0 / std::sqrt(channels), rng);
  p.b1 = normal_vector(p.b1.size(), 0.1, rng);
  p.w2 = normal_vector(p.w2.size(), 1.0 / std::sqrt(h), rng);
  p.b2 = normal_vector(p.b2.size(), 0.1, rng);
  return p;
}

void PamParams::validate() const {
  require(k >= 1 && k % 2 == 1, "pam: kernel size must be odd");
  require(kernel.size() == static_cast<std::size_t>(2 * k * k), "pam: kernel must hold 2*k*k weights");
  require(std::isfinite(bias), "pam: bias must be finite");
}

PamParams PamParams::zeros(int k) {
  require(k >= 1 && k % 2 == 1, "pam: kernel size must be odd");
  return PamParams{k, std::vector<double>(static_cast<std::size_t>(2 * k * k), 0.0), 0.0};
}

PamParams PamParams::random(Rng& rng, int k) {
  PamParams p = zeros(k);
  p.kernel = normal_vector(p.kernel.size(), 1.0 / std::sqrt(2.0 * k * k), rng);
  p.bias = 0.1 * rng.normal();
  return p;
}

void DamParams::validate() const {
  require(channels >= 8, "dam: needs at least 8 channels");
  const auto c = static_cast<std::size_t>(channels), r = static_cast<std::size_t>(reduced());
  require(query.size() == c * r && key.size() == c * r && value.size() == c * c,
          "dam: projection sizes do not match channels");
  require(std::isfinite(gamma_p) && std::isfinite(gamma_c), "dam: gammas must be finite");
}

DamParams DamParams::random(int channels, Rng& rng, double gamma_p, double gamma_c) {
  require(channels >= 8, "dam: needs at least 8 channels");
  DamParams p;
  p.channels = channels;
  const auto c = static_cast<std::size_t>(channels), r = static_cast<std::size_t>(p.reduced());
  const double scale = 1.0 / std::sqrt(channels);
  p.query = normal_vector(c * r, scale, rng);
  p.key = normal_vector(c * r, scale, rng);
  p.value = normal_vector(c * c, scale, rng);
  p.gamma_p = gamma_p;
  p.gamma_c = gamma_c;
  return p;
}

std::vector<double> cam_gates(const Tensor4& x, const CamParams& p) {
  p.validate();
  require(x.channels() == p.channels, "cam: channel count does not match parameters");
  const int nb = x.batch(), C = x.channels(), h = p.hidden();
  const auto plane = x.plane();
  std::vector<double> z(static_cast<std::size_t>(nb) * C);
  std::vector<double> s(C), hid(h);
  for (int n = 0; n < nb; ++n) {
    for (int c = 0; c < C; ++c) {
      const double* xp = x.data().data() + x.offset(n, c, 0, 0);
      double acc = 0;
      for (std::size_t i = 0; i < plane; ++i) acc += xp[i];
      s[c] = acc / static_cast<double>(plane);
    }
    for (int j = 0; j < h; ++j) {
      double acc = p.b1[j];
      for (int c = 0; c < C; ++c) acc += p.w1[j * C + c] * s[c];
      hid[j] = std::max(0.0, acc);
    }
    for (int c = 0; c < C; ++c) {
      double acc = p.b2[c];
      for (int j = 0; j < h; ++j) acc += p.w2[c * h + j] * hid[j];
      z[static_cast<std::size_t>(n) * C + c] = sigmoid(acc);
    }
  }
  return z;
}

Tensor4 cam_forward(const Tensor4& x, const CamParams& p) {
  const auto z = cam_gates(x, p);
  Tensor4 out = x;
  const auto plane = x.plane();
  for (int n = 0; n < x.batch(); ++n) {
    for (int c = 0; c < x.channels(); ++c) {
      const double g = z[static_cast<std::size_t>(n) * x.channels() + c];
      double* op = out.data().data() + out.offset(n, c, 0, 0);
      for (std::size_t i = 0; i < plane; ++i) op[i] *= g;
    }
  }
  return out;
}

std::vector<double> pam_gates(const Tensor4& x, const PamParams& p) {
  p.validate();
  const int nb = x.batch(), C = x.channels(), H = x.height(), W = x.width();
  const int k = p.k, pad = (k - 1) / 2;
  const auto plane = x.plane();
  std::vector<double> gates(static_cast<std::size_t>(nb) * plane);
  std::vector<double> pooled(2 * plane);
  for (int n = 0; n < nb; ++n) {
    for (std::size_t i = 0; i < plane; ++i) {
      double sum = 0, peak = x.data()[x.offset(n, 0, 0, 0) + i];
      for (int c = 0; c < C; ++c) {
        const double v = x.data()[x.offset(n, c, 0, 0) + i];
        sum += v;
        peak = std::max(peak, v);
      }
      pooled[i] = sum / C;
      pooled[plane + i] = peak;
    }
    for (int h = 0; h < H; ++h) {
      for (int w = 0; w < W; ++w) {
        double acc = p.bias;
        for (int m = 0; m < 2; ++m) {
          for (int i = 0; i < k; ++i) {
            const int hh = h + i - pad;
            if (hh < 0 || hh >= H) continue;
            for (int j = 0; j < k; ++j) {
              const int ww = w + j - pad;
              if (ww < 0 || ww >= W) continue;
              acc += p.kernel[(m * k + i) * k + j] * pooled[m * plane + hh * W + ww];
            }
          }
        }
        gates[n * plane + h * W + w] = sigmoid(acc);
      }
    }
  }
  return gates;
}

Tensor4 pam_forward(const Tensor4& x, const PamParams& p) {
  const auto m = pam_gates(x, p);
  Tensor4 out = x;
  const auto plane = x.plane();
  for (int n = 0; n < x.batch(); ++n) {
    for (int c = 0; c < x.channels(); ++c) {
      double* op = out.data().data() + out.offset(n, c, 0, 0);
      const double* gp = m.data() + n * plane;
      for (std::size_t i = 0; i < plane; ++i) op[i] *= gp[i];
    }
  }
  return out;
}

DamAffinities dam_affinities(const Tensor4& x, const DamParams& p, Exec exec) {
  DamAffinities aff;
  dam_eval(x, p, exec, &aff);
  return aff;
}

Tensor4 dam_forward(const Tensor4& x, const DamParams& p, Exec exec) {
  return dam_eval(x, p, exec, nullptr);
}

std::string to_string(AttentionKind kind) {
  switch (kind) {
    case AttentionKind::cam: return "CAM";
    case AttentionKind::pam: return "PAM";
    case AttentionKind::dam: return "DAM";
    case AttentionKind::none: break;
  }
  return "-";
}

void AttentionScheme::validate() const {
  if (static_cast<int>(levels.size()) != kLevels) {
    throw InvalidArgument("attention scheme needs " + std::to_string(kLevels) + " levels, got " +
                          std::to_string(levels.size()));
  }
  for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
    if (levels[i] == AttentionKind::dam) {
      throw InvalidArgument("DAM is only allowed at the highest level (found at level " +
                            std::to_string(i + 1) + ")");
    }
  }
}

AttentionScheme AttentionScheme::parse(const std::string& text) {
  AttentionScheme s;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok.erase(0, tok.find_first_not_of(" \t"));
    tok.erase(tok.find_last_not_of(" \t") + 1);
    std::string up;
    for (char ch : tok) up.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(ch))));
    if (up == "CAM") {
      s.levels.push_back(AttentionKind::cam);
    } else if (up == "PAM") {
      s.levels.push_back(AttentionKind::pam);
    } else if (up == "DAM") {
      s.levels.push_back(AttentionKind::dam);
    } else if (up == "-" || up == "NONE" || up == "--") {
      s.levels.push_back(AttentionKind::none);
    } else {
      throw InvalidArgument("unknown attention module '" + tok + "'");
    }
  }
  s.validate();
  return s;
}

std::string AttentionScheme::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (i) out.push_back(',');
    out += attention::to_string(levels[i]);
  }
  return out;
}

std::vector<Tensor4> apply_scheme(const std::vector<Tensor4>& features, const AttentionScheme& scheme,
                                  const std::vector<LevelParams>& params) {
  scheme.validate();
  require(features.size() == scheme.levels.size(), "apply_scheme: one feature map per level required");
  require(params.size() == scheme.levels.size(), "apply_scheme: one parameter set per level required");
  std::vector<Tensor4> out;
  out.reserve(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) {
    const auto& f = features[i];
    switch (scheme.levels[i]) {
      case AttentionKind::none:
        out.push_back(f);
        break;
      case AttentionKind::cam:
        require(std::holds_alternative<CamParams>(params[i]), "apply_scheme: CAM level needs CamParams");
        out.push_back(cam_forward(f, std::get<CamParams>(params[i])));
        break;
      case AttentionKind::pam:
        require(std::holds_alternative<PamParams>(params[i]), "apply_scheme: PAM level needs PamParams");
        out.push_back(pam_forward(f, std::get<PamParams>(params[i])));
        break;
      case AttentionKind::dam:
        require(std::holds_alternative<DamParams>(params[i]), "apply_scheme: DAM level needs DamParams");
        out.push_back(dam_forward(f, std::get<DamParams>(params[i])));
        break;
    }
  }
  return out;
}

std::vector<LevelParams> random_scheme_params(const std::vector<Tensor4>& features,
                                              const AttentionScheme& scheme, Rng& rng,
                                              double dam_gamma) {
  require(features.size() == scheme.levels.size(), "random_scheme_params: one feature map per level required");
  std::vector<LevelParams> params;
  for (std::size_t i = 0; i < features.size(); ++i) {
    const int c = features[i].channels();
    switch (scheme.levels[i]) {
      case AttentionKind::none: params.emplace_back(std::monostate{}); break;
      case AttentionKind::cam: params.emplace_back(CamParams::random(c, rng)); break;
      case AttentionKind::pam: params.emplace_back(PamParams::random(rng)); break;
      case AttentionKind::dam: params.emplace_back(DamParams::random(c, rng, dam_gamma, dam_gamma)); break;
    }
  }
  return params;
}

std::vector<SchemeVariant> aa_unet_variants() {
  const char* rows[][2] = {
      {"A", "-,-,-,-,-"},         {"B", "-,-,-,-,DAM"},       {"C", "-,-,-,-,CAM"},
      {"D", "-,-,-,-,PAM"},       {"E", "-,-,-,CAM,-"},       {"F", "-,-,-,PAM,-"},
      {"G", "-,-,CAM,-,-"},       {"H", "-,-,PAM,-,-"},       {"I", "-,CAM,-,-,-"},
      {"J", "-,PAM,-,-,-"},       {"K", "CAM,-,-,-,-"},       {"L", "PAM,-,-,-,-"},
      {"M", "-,-,-,CAM,DAM"},     {"N", "-,-,-,PAM,DAM"},     {"O", "-,-,CAM,CAM,DAM"},
      {"P", "-,-,PAM,CAM,DAM"},   {"Q", "-,CAM,CAM,CAM,DAM"}, {"R", "-,PAM,CAM,CAM,DAM"},
      {"S", "CAM,CAM,CAM,CAM,DAM"}, {"T", "PAM,CAM,CAM,CAM,DAM"},
  };
  std::vector<SchemeVariant> out;
  for (const auto& r : rows) out.push_back({r[0], AttentionScheme::parse(r[1])});
  return out;
}

std::vector<SchemeVariant> aa_rtfnet_variants() {
  const char* rows[][2] = {
      {"A", "-,-,-,-,-"},           {"B", "-,-,-,-,DAM"},         {"C", "-,-,-,CAM,DAM"},
      {"D", "-,-,-,PAM,DAM"},       {"E", "-,-,CAM,CAM,DAM"},     {"F", "-,-,PAM,CAM,DAM"},
      {"G", "-,CAM,CAM,CAM,DAM"},   {"H", "-,PAM,CAM,CAM,DAM"},   {"I", "CAM,CAM,CAM,CAM,DAM"},
      {"J", "PAM,CAM,CAM,CAM,DAM"},
  };
  std::vector<SchemeVariant> out;
  for (const auto& r : rows) out.push_back({r[0], AttentionScheme::parse(r[1])});
  return out;
}

AttentionScheme best_scheme() { return AttentionScheme::parse("PAM,CAM,CAM,CAM,DAM"); }

}  // namespace pothole::attention
