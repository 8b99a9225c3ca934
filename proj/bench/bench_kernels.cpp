// Serial reference loops vs OpenMP kernels on a 640×480 frame.
#include <benchmark/benchmark.h>

#include "pothole/attention.hpp"
#include "pothole/kernels.hpp"
#include "pothole/rng.hpp"

using namespace pothole;
using kernels::Exec;

namespace {

constexpr int kW = 640, kH = 480;

struct Frame {
  std::vector<double> g, u, v;
  Frame() {
    Rng rng(1);
    for (int y = 0; y < kH; ++y) {
      for (int x = 0; x < kW; ++x) {
        u.push_back(x);
        v.push_back(y);
        g.push_back(40 + 0.3 * y - 0.01 * x + 0.5 * rng.normal());
      }
    }
  }
};

const Frame& frame() {
  static const Frame f;
  return f;
}

Exec exec_of(const benchmark::State& s) { return s.range(0) ? Exec::parallel : Exec::serial; }

void BM_PlaneMoments(benchmark::State& state) {
  const auto& f = frame();
  for (auto _ : state) benchmark::DoNotOptimize(kernels::plane_moments(f.g, f.u, f.v, exec_of(state)));
}

void BM_ResidualEnergy(benchmark::State& state) {
  const auto& f = frame();
  const auto m = kernels::plane_moments(f.g, f.u, f.v);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::residual_energy(f.g, f.u, f.v, m, 0.03, exec_of(state)));
}

void BM_PlaneResidual(benchmark::State& state) {
  const auto& f = frame();
  std::vector<double> out(f.g.size());
  for (auto _ : state) {
    kernels::plane_residual(f.g, kW, kH, 0.999, 0.03, 0.3, 40, out, exec_of(state));
    benchmark::ClobberMemory();
  }
}

void BM_VDisparity(benchmark::State& state) {
  const auto& f = frame();
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(kH) * 256);
  for (auto _ : state) {
    kernels::vdisparity_rows(f.g, kW, kH, 1.0, 256, counts, exec_of(state));
    benchmark::ClobberMemory();
  }
}

void BM_DamForward(benchmark::State& state) {
  Rng rng(2);
  const auto x = Tensor4::random_normal(1, 64, 16, 16, rng);
  const auto p = attention::DamParams::random(64, rng, 0.5, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(attention::dam_forward(x, p, exec_of(state)));
}

}  // namespace

BENCHMARK(BM_PlaneMoments)->ArgName("parallel")->Arg(0)->Arg(1);
BENCHMARK(BM_ResidualEnergy)->ArgName("parallel")->Arg(0)->Arg(1);
BENCHMARK(BM_PlaneResidual)->ArgName("parallel")->Arg(0)->Arg(1);
BENCHMARK(BM_VDisparity)->ArgName("parallel")->Arg(0)->Arg(1);
BENCHMARK(BM_DamForward)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
