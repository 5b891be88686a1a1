// Benchmarks for the per-frame pipeline stages and the psychometric fit.
// Build with optimizations and pin the CPU governor for stable numbers.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "dlamps/dlamps.hpp"

using namespace dlamps;

namespace {

Raster random_raster(int n, std::uint64_t seed) {
  CounterRng rng(seed);
  Raster r(n, n);
  for (std::size_t i = 0; i < r.data.size(); ++i) r.data[i] = rng.uniform(i);
  return r;
}

ColorRaster random_color(int n, std::uint64_t seed) {
  CounterRng rng(seed);
  ColorRaster c(n, n);
  std::uint64_t idx = 0;
  for (int p = 0; p < 3; ++p) {
    for (std::size_t i = 0; i < c.plane[p].data.size(); ++i) {
      c.plane[p].data[i] = rng.uniform(idx++);
    }
  }
  return c;
}

DisplacementField demo_field(int n, double t) {
  SinusoidParams p;
  p.amplitude_cm = 0.4;
  p.spatial_freq = 2.0;
  p.spatial_phase = 0.8;
  return sinusoidal_field(p, t, n, n);
}

}  // namespace

static void BM_WarpBilinear(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Raster src = random_raster(n, 1);
  const DisplacementField field = demo_field(n, 0.0);
  const ViewingGeometry geom(110.0, 13.2 / n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(warp_image(src, field, geom, {}));
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_WarpBilinear)->Arg(64)->Arg(256)->Arg(512);

static void BM_WarpBicubic(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Raster src = random_raster(n, 2);
  const DisplacementField field = demo_field(n, 0.0);
  const ViewingGeometry geom(110.0, 13.2 / n);
  const WarpOptions opts{Boundary::clamp, Interpolation::bicubic};
  for (auto _ : state) {
    benchmark::DoNotOptimize(warp_image(src, field, geom, opts));
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_WarpBicubic)->Arg(64)->Arg(256);

static void BM_ProjectionSignal(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  CounterRng rng(3);
  SignedRaster residual(n, n);
  for (std::size_t i = 0; i < residual.data.size(); ++i) {
    residual.data[i] = 0.5 * (2.0 * rng.uniform(i) - 1.0);
  }
  const ProjectionParams params;
  for (auto _ : state) {
    benchmark::DoNotOptimize(projection_signal(residual, params));
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_ProjectionSignal)->Arg(256)->Arg(512);

static void BM_GaussianBlur(benchmark::State& state) {
  const Raster src = random_raster(256, 4);
  const double sigma = state.range(0) / 10.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gaussian_blur(src, sigma, Boundary::clamp));
  }
}
BENCHMARK(BM_GaussianBlur)->Arg(10)->Arg(25)->Arg(50);

static void BM_FrameChain(benchmark::State& state) {
  // warp -> residual -> signal -> composite for one frame.
  const int n = static_cast<int>(state.range(0));
  const ColorRaster scene_target = random_color(n, 5);
  const Raster target_lum = to_luminance(scene_target);
  const DisplacementField field = demo_field(n, 0.1);
  const ViewingGeometry geom(110.0, 13.2 / n);
  const ProjectionParams params;
  const SceneSetup scene = SceneSetup::with_uniform_ambient(scene_target, 0.1);
  for (auto _ : state) {
    const Raster warped = warp_image(target_lum, field, geom, {});
    const SignedRaster residual = luminance_residual(warped, target_lum);
    const Raster p = projection_signal(residual, params).first;
    benchmark::DoNotOptimize(lambertian_composite(scene, p));
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_FrameChain)->Arg(64)->Arg(256);

static void BM_NoiseFieldSequence(benchmark::State& state) {
  NoiseFieldParams params;
  params.rms_amplitude_cm = 0.2;
  params.spatial_band = {1.0, 8.0};
  params.temporal_band = {0.5, 4.0};
  params.seed = 6;
  const SequenceSpec spec(30, 30.0);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(noise_field_sequence(params, spec, n, n));
  }
}
BENCHMARK(BM_NoiseFieldSequence)->Arg(64)->Arg(128);

static void BM_FitCumulativeGaussian(benchmark::State& state) {
  CounterRng rng(7);
  PsychometricDataset data;
  std::uint64_t idx = 0;
  for (const double level : kExp1AmplitudesCm) {
    const double p = 0.5 * std::erfc(-(level - 0.4) / (0.15 * 1.41421356237));
    for (int t = 0; t < 200; ++t, ++idx) {
      data.push_back({level, rng.uniform(idx) < p ? 1 : 0});
    }
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_cumulative_gaussian(data));
  }
}
BENCHMARK(BM_FitCumulativeGaussian);

BENCHMARK_MAIN();
