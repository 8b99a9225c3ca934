// dtseg: batch front end for disparity transformation, pothole detection,
// evaluation, synthetic data, attention demos and loss evaluation.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pothole/adaptation.hpp"
#include "pothole/attention.hpp"
#include "pothole/dataset.hpp"
#include "pothole/detect.hpp"
#include "pothole/error.hpp"
#include "pothole/format.hpp"
#include "pothole/io.hpp"
#include "pothole/metrics.hpp"
#include "pothole/road_model.hpp"
#include "pothole/synth.hpp"
#include "pothole/tensor.hpp"
#include "pothole/vdisparity.hpp"

namespace fs = std::filesystem;
using namespace pothole;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitItemFailed = 1;
constexpr int kExitUsage = 2;

struct ItemResult {
  bool ok = true;
  std::string row;      // CSV row(s) contributed by this item, without trailing newline
  std::string message;  // diagnostic, printed to stderr in input order
};

// Runs fn over [0, n) on `jobs` threads; results come back in index order.
std::vector<ItemResult> run_items(std::size_t n, int jobs, const std::function<ItemResult(std::size_t)>& fn) {
  std::vector<ItemResult> results(n);
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
  for (std::size_t i = 0; i < n; ++i) {
    try {
      results[i] = fn(i);
    } catch (const std::exception& e) {
      results[i].ok = false;
      results[i].message = e.what();
    }
  }
  return results;
}

// Prints diagnostics in order; returns the number of failed items.
int report(const std::vector<ItemResult>& results, const std::vector<std::string>& names) {
  int failed = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (!results[i].ok) {
      ++failed;
      std::cerr << "error: " << names[i] << ": " << results[i].message << '\n';
    } else if (!results[i].message.empty()) {
      std::cerr << names[i] << ": " << results[i].message << '\n';
    }
  }
  return failed;
}

void write_csv(const fs::path& path, const std::string& header, const std::vector<ItemResult>& results) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string());
  out << header << '\n';
  for (const auto& r : results) {
    if (r.ok && !r.row.empty()) out << r.row << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string());
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<std::string> stems(const std::vector<fs::path>& files) {
  std::vector<std::string> out;
  for (const auto& f : files) out.push_back(f.stem().string());
  return out;
}

std::vector<fs::path> inputs_or_throw(const fs::path& path) {
  auto files = io::list_rasters(path);
  if (files.empty()) throw IoError("no .png/.pgm rasters in " + path.string());
  return files;
}

// ---------------------------------------------------------------- transform

struct TransformOpts {
  std::string input, output;
  double scale = io::kDefaultScale;
  SolverConfig solver;
};

int cmd_transform(const TransformOpts& o, int jobs) {
  const auto files = inputs_or_throw(o.input);
  fs::create_directories(o.output);
  const auto results = run_items(files.size(), jobs, [&](std::size_t i) {
    const auto stem = files[i].stem().string();
    const auto img = io::load_disparity(files[i], o.scale);
    const auto res = fit_and_transform(img, o.solver);
    io::save_transformed(fs::path(o.output) / (stem + ".png"), res.transformed, o.scale);
    write_text(fs::path(o.output) / (stem + ".model.txt"), model_sidecar(res.model, res.solution));
    const auto& m = res.model;
    ItemResult r;
    r.row = stem + ',' + fmt17(m.phi) + ',' + fmt17(m.varkappa) + ',' + fmt17(m.kappa) + ',' +
            fmt17(m.lambda) + ',' + fmt17(res.solution.cost) + ',' + to_string(res.solution.method);
    if (res.fell_back) r.message = "closed form had no real root, used numerical solver";
    return r;
  });
  write_csv(fs::path(o.output) / "models.csv", "image,phi,varkappa,kappa,lambda,cost,method", results);
  return report(results, stems(files)) ? kExitItemFailed : kExitOk;
}

// -------------------------------------------------------------------- vdisp

struct VdispOpts {
  std::string input, output;
  double scale = io::kDefaultScale;
  double bin_width = 1.0;
  int cols = 0;
};

int cmd_vdisp(const VdispOpts& o, int jobs) {
  if (!(o.bin_width > 0)) throw InvalidArgument("--bin-width must be > 0");
  const auto files = inputs_or_throw(o.input);
  fs::create_directories(o.output);
  const auto results = run_items(files.size(), jobs, [&](std::size_t i) {
    const auto stem = files[i].stem().string();
    const auto img = io::load_disparity(files[i], o.scale);
    const auto hist = o.cols > 0 ? v_disparity(img, o.bin_width, o.cols) : v_disparity(img, o.bin_width);
    save_vdisparity_pgm(fs::path(o.output) / (stem + ".vdisp.pgm"), hist);
    save_vdisparity_csv(fs::path(o.output) / (stem + ".vdisp.csv"), hist);
    return ItemResult{true, stem + ',' + std::to_string(hist.rows) + ',' + std::to_string(hist.cols) + ',' +
                                std::to_string(hist.total()),
                      {}};
  });
  write_csv(fs::path(o.output) / "vdisp.csv", "image,rows,cols,total", results);
  return report(results, stems(files)) ? kExitItemFailed : kExitOk;
}

// ------------------------------------------------------------------- detect

struct DetectOpts {
  std::string input, output;
  double scale = io::kDefaultScale;
  std::size_t min_area = 50;
  int bins = 256;
};

int cmd_detect(const DetectOpts& o, int jobs) {
  if (o.min_area < 1) throw InvalidArgument("--min-area must be >= 1");
  const auto files = inputs_or_throw(o.input);
  fs::create_directories(o.output);
  const SegmentOptions seg{o.min_area, o.bins};
  const auto results = run_items(files.size(), jobs, [&](std::size_t i) {
    const auto stem = files[i].stem().string();
    const auto tdisp = io::load_transformed(files[i], o.scale);
    const auto mask = segment(tdisp, seg);
    io::save_mask(fs::path(o.output) / (stem + ".png"), mask);
    const auto comps = connected_components(mask);
    return ItemResult{true, stem + ',' + std::to_string(mask.count()) + ',' + std::to_string(comps.size()), {}};
  });
  write_csv(fs::path(o.output) / "detections.csv", "image,pothole_pixels,components", results);
  return report(results, stems(files)) ? kExitItemFailed : kExitOk;
}

// --------------------------------------------------------------------- eval

struct EvalOpts {
  std::string pred, gt, output, summary;
};

int cmd_eval(const EvalOpts& o, int jobs) {
  const auto gt_files = inputs_or_throw(o.gt);
  std::map<std::string, fs::path> preds;
  for (const auto& p : io::list_rasters(o.pred)) preds.emplace(p.stem().string(), p);

  std::vector<metrics::SegMetrics> per(gt_files.size());
  const auto results = run_items(gt_files.size(), jobs, [&](std::size_t i) {
    const auto stem = gt_files[i].stem().string();
    const auto it = preds.find(stem);
    if (it == preds.end()) throw IoError("no prediction for " + gt_files[i].string());
    const auto c = metrics::confusion(io::load_mask(it->second), io::load_mask(gt_files[i]));
    per[i] = metrics::fsc_iou(c);
    return ItemResult{true, metrics::per_image_row(stem, c, per[i]), {}};
  });
  const fs::path out(o.output);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  write_csv(out, "image,tp,fp,fn,tn,fsc,iou", results);

  std::vector<metrics::SegMetrics> ok;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (results[i].ok) ok.push_back(per[i]);
  }
  const int failed = report(results, stems(gt_files));
  if (!ok.empty()) {
    const auto mean = metrics::mean_metrics(ok);
    fs::path summary = o.summary.empty() ? out.parent_path() / (out.stem().string() + ".summary.csv")
                                         : fs::path(o.summary);
    write_text(summary, "mFsc,mIoU,n_images\n" + fmt17(mean.mfsc) + ',' + fmt17(mean.miou) + ',' +
                            std::to_string(mean.count) + '\n');
    std::cout << "mFsc=" << fmt17(mean.mfsc) << " mIoU=" << fmt17(mean.miou) << " n_images=" << mean.count
              << '\n';
  }
  return failed ? kExitItemFailed : kExitOk;
}

// -------------------------------------------------------------------- synth

struct SynthOpts {
  std::string output, spec_file, split = "testing";
  int count = 10;
  double scale = io::kDefaultScale;
  std::string profile = "flat";
  synth::RandomSceneParams params;
};

int cmd_synth(SynthOpts o, std::uint64_t seed, int jobs) {
  o.params.profile = synth::parse_profile(o.profile);
  std::vector<synth::SceneSpec> specs;
  if (!o.spec_file.empty()) {
    specs = synth::read_scene_file(o.spec_file);
  } else {
    if (o.count < 0) throw InvalidArgument("--count must be >= 0");
    for (int i = 0; i < o.count; ++i) {
      specs.push_back(synth::random_scene(o.params, derive_seed(seed, static_cast<std::uint64_t>(i))));
    }
  }
  const dataset::DatasetLayout layout(o.output);
  layout.create();
  const auto dir = layout.split_dir(o.split);
  for (const char* sub : {"rgb", "disp", "label"}) fs::create_directories(dir / sub);

  std::vector<std::string> names;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "scene_%04zu", i);
    names.emplace_back(buf);
  }
  const auto results = run_items(specs.size(), jobs, [&](std::size_t i) {
    const auto& s = specs[i];
    const auto scene = synth::generate(s);
    const auto png = names[i] + ".png";
    io::save_disparity(dir / "disp" / png, scene.disparity, o.scale);
    io::save_mask(dir / "label" / png, scene.mask);
    io::save_gray8(dir / "rgb" / png, synth::generate_rgb_standin(scene.disparity, scene.mask, derive_seed(s.seed, 3)));
    return ItemResult{true, names[i] + ',' + fmt17(s.phi) + ',' + fmt17(s.varkappa) + ',' + fmt17(s.kappa) + ',' +
                                std::to_string(s.seed) + ',' + std::to_string(scene.mask.count()),
                      {}};
  });
  std::string lines;
  for (const auto& s : specs) lines += synth::format_scene_line(s) + '\n';
  write_text(dir / "scenes.txt", lines);
  write_csv(dir / "truth.csv", "image,phi,varkappa,kappa,seed,pothole_pixels", results);
  return report(results, names) ? kExitItemFailed : kExitOk;
}

// ---------------------------------------------------------------- attn-demo

struct AttnOpts {
  std::string scheme = "PAM,CAM,CAM,CAM,DAM";
  int batch = 1, channels = 8, size = 16;
  double dam_gamma = 0.5;
  bool no_timing = false;
  std::string report_csv, save_dir, input_dir;
};

int cmd_attn_demo(const AttnOpts& o, std::uint64_t seed) {
  const auto scheme = attention::AttentionScheme::parse(o.scheme);
  if (o.batch < 1 || o.channels < 8 || o.size < 1) {
    throw InvalidArgument("--batch >= 1, --channels >= 8 and --size >= 1 required");
  }
  Rng rng(seed);
  std::vector<Tensor4> features;
  for (int l = 0; l < attention::AttentionScheme::kLevels; ++l) {
    if (!o.input_dir.empty()) {
      features.push_back(load_tensor(fs::path(o.input_dir) / ("level" + std::to_string(l + 1) + ".tensor")));
    } else {
      const int hw = std::max(1, o.size >> l);
      features.push_back(Tensor4::random_normal(o.batch, o.channels << l, hw, hw, rng));
    }
  }
  const auto params = attention::random_scheme_params(features, scheme, rng, o.dam_gamma);

  std::ostringstream csv;
  csv << "level,module,n,c,h,w,shape_ok,bounded,max_rowsum_err,out_sum\n";
  bool all_ok = true;
  for (int l = 0; l < attention::AttentionScheme::kLevels; ++l) {
    const auto& x = features[l];
    const auto kind = scheme.levels[l];
    const auto t0 = std::chrono::steady_clock::now();
    Tensor4 out;
    switch (kind) {
      case attention::AttentionKind::none: out = x; break;
      case attention::AttentionKind::cam: out = attention::cam_forward(x, std::get<attention::CamParams>(params[l])); break;
      case attention::AttentionKind::pam: out = attention::pam_forward(x, std::get<attention::PamParams>(params[l])); break;
      case attention::AttentionKind::dam: out = attention::dam_forward(x, std::get<attention::DamParams>(params[l])); break;
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    const bool shape_ok = out.same_shape(x);
    bool bounded = true;
    if (kind == attention::AttentionKind::cam || kind == attention::AttentionKind::pam) {
      for (std::size_t i = 0; i < x.size(); ++i) bounded = bounded && std::abs(out.data()[i]) <= std::abs(x.data()[i]);
    }
    double rowsum_err = 0;
    if (kind == attention::AttentionKind::dam) {
      const auto aff = attention::dam_affinities(x, std::get<attention::DamParams>(params[l]));
      auto rows = [&](const std::vector<double>& a, int width) {
        for (std::size_t r = 0; r < a.size() / width; ++r) {
          double s = 0;
          for (int j = 0; j < width; ++j) s += a[r * width + j];
          rowsum_err = std::max(rowsum_err, std::abs(s - 1));
        }
      };
      rows(aff.position, aff.positions);
      rows(aff.channel, aff.channels);
    }
    double sum = 0;
    for (double v : out.data()) sum += v;
    all_ok = all_ok && shape_ok && bounded && rowsum_err <= 1e-6;
    csv << (l + 1) << ',' << attention::to_string(kind) << ',' << x.batch() << ',' << x.channels() << ','
        << x.height() << ',' << x.width() << ',' << shape_ok << ',' << bounded << ',' << fmt17(rowsum_err) << ','
        << fmt17(sum) << '\n';
    std::cout << "level " << (l + 1) << ' ' << attention::to_string(kind) << " [" << x.batch() << 'x'
              << x.channels() << 'x' << x.height() << 'x' << x.width() << "] shape "
              << (shape_ok ? "ok" : "MISMATCH") << ", gate bound " << (bounded ? "ok" : "VIOLATED")
              << ", rowsum err " << fmt17(rowsum_err);
    if (!o.no_timing) std::printf(", %.3f ms", ms);
    std::cout << '\n';
    if (!o.save_dir.empty()) {
      fs::create_directories(o.save_dir);
      save_tensor(fs::path(o.save_dir) / ("level" + std::to_string(l + 1) + ".tensor"), x);
      save_tensor(fs::path(o.save_dir) / ("level" + std::to_string(l + 1) + ".out.tensor"), out);
    }
  }
  std::cout << "scheme " << scheme.to_string() << (all_ok ? " passed" : " FAILED") << " invariant checks\n";
  if (!o.report_csv.empty()) write_text(o.report_csv, csv.str());
  return all_ok ? kExitOk : kExitItemFailed;
}

// ------------------------------------------------------------------- losses

std::vector<double> read_probabilities(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<double> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::stringstream ls(line);
    std::string tok;
    while (std::getline(ls, tok, ',')) {
      tok.erase(0, tok.find_first_not_of(" \t\r"));
      tok.erase(tok.find_last_not_of(" \t\r") + 1);
      if (tok.empty()) continue;
      std::size_t pos = 0;
      double x = 0;
      try {
        x = std::stod(tok, &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos != tok.size()) {
        if (lineno == 1 && out.empty()) break;  // header line
        throw IoError(path.string() + ":" + std::to_string(lineno) + ": not a number: '" + tok + "'");
      }
      if (!(x >= 0 && x <= 1)) {
        throw IoError(path.string() + ":" + std::to_string(lineno) + ": probability outside [0, 1]");
      }
      out.push_back(x);
    }
  }
  if (out.empty()) throw IoError(path.string() + ": no probabilities");
  return out;
}

std::vector<Raster> read_raster_batch(const fs::path& dir) {
  std::vector<Raster> out;
  for (const auto& f : inputs_or_throw(dir)) out.push_back(io::load_normalized(f));
  return out;
}

std::pair<std::string, std::string> split_pair(const std::string& text, const char* flag) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw InvalidArgument(std::string(flag) + " expects A,B: '" + text + "'");
  return {text.substr(0, comma), text.substr(comma + 1)};
}

struct LossOpts {
  std::vector<std::string> gan, cyc;
  std::string output;
};

int cmd_losses(const LossOpts& o) {
  if (o.gan.empty() && o.cyc.empty()) throw InvalidArgument("give at least one --gan or --cyc");
  if (o.gan.size() > 4 || o.cyc.size() > 2) throw InvalidArgument("at most 4 --gan and 2 --cyc terms");
  std::ostringstream csv;
  csv << "term,value\n";
  std::vector<double> gan, cyc;
  for (std::size_t i = 0; i < o.gan.size(); ++i) {
    const auto [real, fake] = split_pair(o.gan[i], "--gan");
    gan.push_back(adaptation::gan_loss(read_probabilities(real), read_probabilities(fake)));
    csv << "gan" << (i + 1) << ',' << fmt17(gan.back()) << '\n';
    std::cout << "L_GAN[" << (i + 1) << "] = " << fmt17(gan.back()) << '\n';
  }
  for (std::size_t i = 0; i < o.cyc.size(); ++i) {
    const auto [orig, recon] = split_pair(o.cyc[i], "--cyc");
    cyc.push_back(adaptation::cycle_loss(read_raster_batch(orig), read_raster_batch(recon)));
    csv << "cyc" << (i + 1) << ',' << fmt17(cyc.back()) << '\n';
    std::cout << "L_cyc[" << (i + 1) << "] = " << fmt17(cyc.back()) << '\n';
  }
  if (gan.size() == 4 && cyc.size() == 2) {
    const adaptation::ObjectiveTerms t{gan[0], gan[1], gan[2], gan[3], cyc[0], cyc[1]};
    const double total = adaptation::full_objective(t);
    csv << "full," << fmt17(total) << '\n';
    std::cout << "L_full = " << fmt17(total) << '\n';
  }
  if (!o.output.empty()) write_text(o.output, csv.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dtseg: disparity transformation and pothole segmentation tools"};
  app.require_subcommand(1);
  int jobs = 1;
  std::uint64_t seed = 0;
  app.add_option("--jobs,-j", jobs, "worker threads for per-image loops")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "random seed");

  auto add_scale = [](CLI::App* sub, double& scale) {
    sub->add_option("--scale", scale, "disparity per raw intensity step")->check(CLI::PositiveNumber);
  };

  TransformOpts tr;
  auto* t = app.add_subcommand("transform", "fit the road model and write transformed disparity");
  t->add_option("input", tr.input, "disparity image or directory")->required();
  t->add_option("-o,--output", tr.output, "output directory")->required();
  add_scale(t, tr.scale);
  t->add_option("--grid-size", tr.solver.grid_size, "coarse angle samples")->check(CLI::Range(16, 1 << 24));
  t->add_option("--tol", tr.solver.tol, "golden-section bracket tolerance (rad)")->check(CLI::PositiveNumber);
  t->add_flag("--closed-form", tr.solver.closed_form, "closed-form angle, numerical fallback");
  t->add_flag("--robust-refit", tr.solver.robust_refit, "refit once without pixels 3 MAD below the plane");

  VdispOpts vd;
  auto* v = app.add_subcommand("vdisp", "write v-disparity histograms (PGM + CSV)");
  v->add_option("input", vd.input, "disparity image or directory")->required();
  v->add_option("-o,--output", vd.output, "output directory")->required();
  add_scale(v, vd.scale);
  v->add_option("--bin-width", vd.bin_width, "disparity bin width");
  v->add_option("--cols", vd.cols, "fixed number of disparity bins (default: fit the data)");

  DetectOpts dt;
  auto* d = app.add_subcommand("detect", "Otsu + connected-component pothole masks");
  d->add_option("input", dt.input, "transformed disparity image or directory")->required();
  d->add_option("-o,--output", dt.output, "output directory")->required();
  add_scale(d, dt.scale);
  d->add_option("--min-area", dt.min_area, "smallest component kept (pixels)");
  d->add_option("--bins", dt.bins, "Otsu histogram bins")->check(CLI::Range(2, 1 << 20));

  EvalOpts ev;
  auto* e = app.add_subcommand("eval", "per-image and mean F-score / IoU");
  e->add_option("pred", ev.pred, "predicted masks")->required();
  e->add_option("gt", ev.gt, "ground-truth masks")->required();
  e->add_option("-o,--output", ev.output, "per-image CSV")->required();
  e->add_option("--summary", ev.summary, "summary CSV (default: <output stem>.summary.csv)");

  SynthOpts sy;
  auto* s = app.add_subcommand("synth", "generate a synthetic dataset split");
  s->add_option("-o,--output", sy.output, "dataset root")->required();
  s->add_option("--spec", sy.spec_file, "scene file, one key=value scene per line");
  s->add_option("--count", sy.count, "number of random scenes");
  s->add_option("--split", sy.split, "split to write")->check(CLI::IsMember({"training", "validation", "testing"}));
  add_scale(s, sy.scale);
  s->add_option("--width", sy.params.width);
  s->add_option("--height", sy.params.height);
  s->add_option("--sigma", sy.params.noise_sigma, "Gaussian noise sigma");
  s->add_option("--invalid-fraction", sy.params.invalid_fraction, "fraction of pixels dropped");
  s->add_option("--depth-min", sy.params.depth_min);
  s->add_option("--depth-max", sy.params.depth_max);
  s->add_option("--profile", sy.profile, "flat or paraboloid");
  s->add_option("--min-potholes", sy.params.potholes.min_potholes);
  s->add_option("--max-potholes", sy.params.potholes.max_potholes);
  s->add_option("--min-axis", sy.params.potholes.min_axis);
  s->add_option("--max-axis", sy.params.potholes.max_axis);

  AttnOpts at;
  auto* a = app.add_subcommand("attn-demo", "run an attention scheme on seeded tensors");
  a->add_option("--scheme", at.scheme, "five comma-separated modules, e.g. PAM,CAM,CAM,CAM,DAM");
  a->add_option("--batch", at.batch);
  a->add_option("--channels", at.channels, "channels at level 1, doubled per level");
  a->add_option("--size", at.size, "height and width at level 1, halved per level");
  a->add_option("--dam-gamma", at.dam_gamma, "residual scale of both DAM branches");
  a->add_flag("--no-timing", at.no_timing, "omit wall times from the report");
  a->add_option("--report", at.report_csv, "CSV report path");
  a->add_option("--save-dir", at.save_dir, "write input and output tensors here");
  a->add_option("--input-dir", at.input_dir, "read level<k>.tensor inputs instead of seeded ones");

  LossOpts lo;
  auto* l = app.add_subcommand("losses", "evaluate adversarial and cycle-consistency losses");
  l->add_option("--gan", lo.gan, "real.csv,fake.csv discriminator outputs (up to 4)");
  l->add_option("--cyc", lo.cyc, "original_dir,reconstructed_dir (up to 2)");
  l->add_option("-o,--output", lo.output, "CSV of term values");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::ParseError& ex) {
    app.exit(ex);
    return kExitUsage;
  }

  try {
    if (*t) return cmd_transform(tr, jobs);
    if (*v) return cmd_vdisp(vd, jobs);
    if (*d) return cmd_detect(dt, jobs);
    if (*e) return cmd_eval(ev, jobs);
    if (*s) return cmd_synth(sy, seed, jobs);
    if (*a) return cmd_attn_demo(at, seed);
    if (*l) return cmd_losses(lo);
  } catch (const InvalidArgument& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return kExitItemFailed;
  }
  return kExitUsage;
}
