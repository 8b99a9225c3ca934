#include "pothole/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>

#include "pothole/error.hpp"
#include "pothole/format.hpp"
#include "pothole/rng.hpp"

namespace pothole::synth {
namespace {

double plane_min(const SceneSpec& s) {
  const RoadModel m = s.truth();
  const double w = s.width - 1, h = s.height - 1;
  return std::min({m.plane(0, 0), m.plane(w, 0), m.plane(0, h), m.plane(w, h)});
}

double plane_max(const SceneSpec& s) {
  const RoadModel m = s.truth();
  const double w = s.width - 1, h = s.height - 1;
  return std::max({m.plane(0, 0), m.plane(w, 0), m.plane(0, h), m.plane(w, h)});
}

double parse_double(const std::string& key, const std::string& text) {
  std::size_t pos = 0;
  double x = 0;
  try {
    x = std::stod(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != text.size() || text.empty()) throw InvalidArgument("bad number for " + key + ": '" + text + "'");
  return x;
}

}  // namespace

void SceneSpec::validate() const {
  if (width < 2 || height < 2) throw InvalidArgument("scene must be at least 2x2");
  if (!(phi > -std::numbers::pi / 2 && phi < std::numbers::pi / 2)) {
    throw InvalidArgument("scene phi must lie in (-pi/2, pi/2)");
  }
  if (!(varkappa > 0) || !std::isfinite(varkappa)) throw InvalidArgument("scene varkappa must be > 0");
  if (!std::isfinite(kappa)) throw InvalidArgument("scene kappa must be finite");
  if (!(plane_min(*this) > 0)) throw InvalidArgument("road plane is not positive over the frame");
  if (!(noise_sigma >= 0) || !std::isfinite(noise_sigma)) throw InvalidArgument("noise_sigma must be >= 0");
  if (!(invalid_fraction >= 0 && invalid_fraction < 1)) {
    throw InvalidArgument("invalid_fraction must lie in [0, 1)");
  }
  for (const auto& p : potholes) {
    if (!(p.depth > 0) || !std::isfinite(p.depth)) throw InvalidArgument("pothole depth must be > 0");
    if (!(p.region.semi_a > 0 && p.region.semi_b > 0)) throw InvalidArgument("pothole axes must be > 0");
  }
}

double SceneSpec::depression(int u, int v) const {
  double d = 0;
  for (const auto& p : potholes) {
    const double r2 = p.region.rho2(u, v);
    if (!(r2 < 1.0)) continue;
    d = std::max(d, p.profile == DepthProfile::flat ? p.depth : p.depth * (1.0 - r2));
  }
  return d;
}

Scene generate(const SceneSpec& spec) {
  spec.validate();
  const RoadModel truth = spec.truth();
  const std::size_t n = static_cast<std::size_t>(spec.width) * static_cast<std::size_t>(spec.height);
  std::vector<double> values(n);
  LabelMask mask(spec.width, spec.height);

  for (int v = 0; v < spec.height; ++v) {
    for (int u = 0; u < spec.width; ++u) {
      const std::size_t i = mask.index(u, v);
      const double plane = truth.plane(u, v);
      const double d = spec.potholes.empty() ? 0.0 : spec.depression(u, v);
      if (d > 0) {
        if (!(plane - d > 0)) throw InvalidArgument("pothole deeper than the road plane");
        mask.set(u, v, true);
      }
      values[i] = plane - d;
    }
  }

  if (spec.noise_sigma > 0) {
    Rng noise(derive_seed(spec.seed, 0));
    for (double& x : values) x += spec.noise_sigma * noise.normal();
  }

  const auto drop = static_cast<std::size_t>(std::llround(spec.invalid_fraction * static_cast<double>(n)));
  if (drop > 0) {
    Rng pick(derive_seed(spec.seed, 1));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t k = 0; k < drop; ++k) {
      const auto j = static_cast<std::size_t>(pick.uniform_int(static_cast<std::int64_t>(k),
                                                               static_cast<std::int64_t>(n - 1)));
      std::swap(order[k], order[j]);
      values[order[k]] = DisparityImage::kInvalid;
    }
  }

  return Scene{DisparityImage(spec.width, spec.height, std::move(values)), std::move(mask), truth};
}

Raster generate_rgb_standin(const DisparityImage& disp, const LabelMask& mask, std::uint64_t seed) {
  if (disp.width() != mask.width() || disp.height() != mask.height()) {
    throw InvalidArgument("rgb stand-in: disparity and mask shapes differ");
  }
  constexpr double kBase = 110, kGrain = 40, kPotholeGain = 0.5;
  Raster out{disp.width(), disp.height(), std::vector<double>(disp.size())};
  Rng rng(seed);
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    const double x = kBase + kGrain * rng.uniform();
    out.values[i] = mask[i] ? kPotholeGain * x : x;
  }
  return out;
}

SceneSpec random_scene(const RandomSceneParams& p, std::uint64_t seed) {
  if (p.phi_max < p.phi_min || p.varkappa_max < p.varkappa_min || p.kappa_max < p.kappa_min ||
      p.depth_max < p.depth_min || !(p.varkappa_min > 0) || !(p.depth_min > 0)) {
    throw InvalidArgument("random scene: empty or invalid parameter range");
  }
  Rng rng(seed);
  SceneSpec s;
  s.width = p.width;
  s.height = p.height;
  s.noise_sigma = p.noise_sigma;
  s.invalid_fraction = p.invalid_fraction;
  s.seed = derive_seed(seed, 2);

  const auto ellipses = adaptation::random_gt_ellipses(p.width, p.height, rng.next_u64(), p.potholes);
  double deepest = 0;
  for (const auto& e : ellipses) {
    PotholeSpec ph{e, rng.uniform(p.depth_min, p.depth_max), p.profile};
    deepest = std::max(deepest, ph.depth);
    s.potholes.push_back(ph);
  }

  for (int attempt = 0; attempt < 10000; ++attempt) {
    s.phi = rng.uniform(p.phi_min, p.phi_max);
    s.varkappa = rng.uniform(p.varkappa_min, p.varkappa_max);
    s.kappa = rng.uniform(p.kappa_min, p.kappa_max);
    if (!(plane_min(s) > deepest + 6 * p.noise_sigma)) continue;
    if (p.max_disparity > 0 && !(plane_max(s) + 6 * p.noise_sigma < p.max_disparity)) continue;
    return s;
  }
  throw InvalidArgument("random scene: no admissible road plane in the given ranges");
}

std::string to_string(DepthProfile profile) {
  return profile == DepthProfile::flat ? "flat" : "paraboloid";
}

DepthProfile parse_profile(const std::string& text) {
  if (text == "flat") return DepthProfile::flat;
  if (text == "paraboloid") return DepthProfile::paraboloid;
  throw InvalidArgument("unknown depth profile '" + text + "'");
}

std::string format_scene_line(const SceneSpec& s) {
  std::ostringstream os;
  os << "width=" << s.width << " height=" << s.height << " phi=" << fmt17(s.phi)
     << " varkappa=" << fmt17(s.varkappa) << " kappa=" << fmt17(s.kappa)
     << " noise=" << fmt17(s.noise_sigma) << " invalid=" << fmt17(s.invalid_fraction)
     << " seed=" << s.seed;
  for (const auto& p : s.potholes) {
    os << " pothole=" << fmt17(p.region.cu) << ',' << fmt17(p.region.cv) << ','
       << fmt17(p.region.semi_a) << ',' << fmt17(p.region.semi_b) << ',' << fmt17(p.region.theta)
       << ',' << fmt17(p.depth) << ',' << to_string(p.profile);
  }
  return os.str();
}

SceneSpec parse_scene_line(const std::string& line) {
  SceneSpec s;
  bool have_seed = false;
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw InvalidArgument("expected key=value, got '" + tok + "'");
    const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
    if (key == "width") {
      s.width = static_cast<int>(parse_double(key, val));
    } else if (key == "height") {
      s.height = static_cast<int>(parse_double(key, val));
    } else if (key == "phi") {
      s.phi = parse_double(key, val);
    } else if (key == "varkappa") {
      s.varkappa = parse_double(key, val);
    } else if (key == "kappa") {
      s.kappa = parse_double(key, val);
    } else if (key == "noise") {
      s.noise_sigma = parse_double(key, val);
    } else if (key == "invalid") {
      s.invalid_fraction = parse_double(key, val);
    } else if (key == "seed") {
      try {
        std::size_t pos = 0;
        s.seed = std::stoull(val, &pos);
        if (pos != val.size()) throw InvalidArgument("");
      } catch (const std::exception&) {
        throw InvalidArgument("bad seed '" + val + "'");
      }
      have_seed = true;
    } else if (key == "pothole") {
      std::vector<std::string> parts;
      std::stringstream ps(val);
      std::string part;
      while (std::getline(ps, part, ',')) parts.push_back(part);
      if (parts.size() != 7) throw InvalidArgument("pothole needs cu,cv,a,b,theta,depth,profile");
      PotholeSpec p;
      p.region.cu = parse_double(key, parts[0]);
      p.region.cv = parse_double(key, parts[1]);
      p.region.semi_a = parse_double(key, parts[2]);
      p.region.semi_b = parse_double(key, parts[3]);
      p.region.theta = parse_double(key, parts[4]);
      p.depth = parse_double(key, parts[5]);
      p.profile = parse_profile(parts[6]);
      s.potholes.push_back(p);
    } else {
      throw InvalidArgument("unknown scene key '" + key + "'");
    }
  }
  if (!have_seed) throw InvalidArgument("scene line lacks the mandatory seed");
  return s;
}

std::vector<SceneSpec> read_scene_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<SceneSpec> scenes;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      scenes.push_back(parse_scene_line(line));
    } catch (const InvalidArgument& e) {
      throw InvalidArgument(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return scenes;
}

}  // namespace pothole::synth
