#pragma once

#include <string>
#include <variant>
#include <vector>

#include "pothole/kernels.hpp"
#include "pothole/rng.hpp"
#include "pothole/tensor.hpp"

namespace pothole::attention {

using kernels::Exec;

/// Channel attention: squeeze by global average pooling, two FC layers,
/// sigmoid gate per channel.
struct CamParams {
  int channels = 0;
  int reduction = 1;
  std::vector<double> w1;  ///< hidden × channels
  std::vector<double> b1;  ///< hidden
  std::vector<double> w2;  ///< channels × hidden
  std::vector<double> b2;  ///< channels

  int hidden() const { return channels / reduction; }
  void validate() const;

  static CamParams zeros(int channels, int reduction);
  static CamParams random(int channels, Rng& rng);
};

/// 16, or the largest divisor of `channels` below it (so 8 channels → 8).
int default_cam_reduction(int channels);

/// Spatial attention: channel-mean and channel-max maps, k×k convolution
/// (zero padding), sigmoid gate per position.
struct PamParams {
  int k = 7;
  std::vector<double> kernel;  ///< 2 × k × k; map 0 is the mean, map 1 the max
  double bias = 0;

  void validate() const;

  static PamParams zeros(int k = 7);
  static PamParams random(Rng& rng, int k = 7);
};

/// Dual attention: position self-attention plus channel self-attention,
/// each with a residual scale.
struct DamParams {
  int channels = 0;
  std::vector<double> query;  ///< channels × channels/8
  std::vector<double> key;    ///< channels × channels/8
  std::vector<double> value;  ///< channels × channels
  double gamma_p = 0;
  double gamma_c = 0;

  int reduced() const { return channels / 8; }
  void validate() const;

  static DamParams random(int channels, Rng& rng, double gamma_p, double gamma_c);
};

/// Gates z(n, c) ∈ (0, 1), N × C row-major.
std::vector<double> cam_gates(const Tensor4& x, const CamParams& p);
Tensor4 cam_forward(const Tensor4& x, const CamParams& p);

/// Gates m(n, h, w) ∈ (0, 1), N × H × W row-major.
std::vector<double> pam_gates(const Tensor4& x, const PamParams& p);
Tensor4 pam_forward(const Tensor4& x, const PamParams& p);

/// Row-softmax affinity matrices of one DAM evaluation.
struct DamAffinities {
  int batch = 0;
  int positions = 0;  ///< L = H·W
  int channels = 0;
  std::vector<double> position;  ///< N × L × L
  std::vector<double> channel;   ///< N × C × C
};

DamAffinities dam_affinities(const Tensor4& x, const DamParams& p, Exec exec = Exec::parallel);
/// X + γp·(VᵀX)A_pᵀ + γc·A_c X, the sum of both residual branches.
Tensor4 dam_forward(const Tensor4& x, const DamParams& p, Exec exec = Exec::parallel);

enum class AttentionKind { none, cam, pam, dam };

std::string to_string(AttentionKind kind);

/// Attention module per network level; level n (the last) is the highest.
struct AttentionScheme {
  static constexpr int kLevels = 5;
  std::vector<AttentionKind> levels;

  /// Throws InvalidArgument unless there are kLevels levels and DAM, if
  /// present, sits only at the highest one.
  void validate() const;
  /// Comma-separated `PAM,CAM,CAM,CAM,DAM`; `-` or `none` for no module.
  static AttentionScheme parse(const std::string& text);
  std::string to_string() const;
};

using LevelParams = std::variant<std::monostate, CamParams, PamParams, DamParams>;

/// Applies each level's module (identity for none). `params[i]` must hold the
/// parameter type matching `scheme.levels[i]`.
std::vector<Tensor4> apply_scheme(const std::vector<Tensor4>& features, const AttentionScheme& scheme,
                                  const std::vector<LevelParams>& params);

/// Seeded parameters for every level of a scheme, sized from the features.
std::vector<LevelParams> random_scheme_params(const std::vector<Tensor4>& features,
                                              const AttentionScheme& scheme, Rng& rng,
                                              double dam_gamma = 0.5);

struct SchemeVariant {
  std::string label;
  AttentionScheme scheme;
};

/// The 20 AA-UNet scheme variants, labelled A to T.
std::vector<SchemeVariant> aa_unet_variants();
/// The 10 AA-RTFNet scheme variants, labelled A to J.
std::vector<SchemeVariant> aa_rtfnet_variants();
/// PAM lowest, CAM in the middle, DAM highest.
AttentionScheme best_scheme();

}  // namespace pothole::attention
