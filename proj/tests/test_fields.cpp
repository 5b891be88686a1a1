#include <doctest.h>

#include <cmath>
#include <complex>

#include "dlamps/dlamps.hpp"
#include "test_util.hpp"

using namespace dlamps;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace

TEST_SUITE("fields") {

TEST_CASE("sinusoid zero cases") {
  SinusoidParams p;
  p.amplitude_cm = 0.0;
  const DisplacementField zero_amp = sinusoidal_field(p, 0.3, 8, 8);
  for (float v : zero_amp.dx) CHECK(v == 0.0f);
  for (float v : zero_amp.dy) CHECK(v == 0.0f);

  p.amplitude_cm = 0.4;
  p.temporal_freq = 1.0;
  p.temporal_phase = 0.0;
  const DisplacementField crossing = sinusoidal_field(p, 0.25, 8, 8);  // cos(pi/2)
  for (float v : crossing.dx) CHECK(std::abs(v) <= 1e-9f);
}

TEST_CASE("sinusoid evaluates the closed form") {
  SinusoidParams p;
  p.amplitude_cm = 0.4;
  p.spatial_freq = 1.0;
  const DisplacementField f = sinusoidal_field(p, 0.0, 4, 64);
  // y/height = 0.25 puts the sine at its peak.
  CHECK(f.dx_at(0, 16) == doctest::Approx(0.4).epsilon(1e-6));
  CHECK(f.dx_at(3, 16) == f.dx_at(0, 16));  // constant along x
  for (float v : f.dy) CHECK(v == 0.0f);
}

TEST_CASE("sinusoid is antisymmetric across half a spatial period") {
  SinusoidParams p;
  p.amplitude_cm = 3.3;
  p.spatial_freq = 2.0;
  p.spatial_phase = 0.7;
  const int height = 64;
  const DisplacementField f = sinusoidal_field(p, 0.0, 2, height);
  const int half_period = height / 4;  // 1/(2 f_s) of the image height
  for (int y = 0; y + half_period < height; ++y) {
    CHECK(std::abs(static_cast<double>(f.dx_at(0, y)) + f.dx_at(0, y + half_period)) <= 1e-9);
  }
}

TEST_CASE("sinusoid integrates to zero over a temporal period") {
  SinusoidParams p;
  p.amplitude_cm = 0.4;
  p.spatial_freq = 1.0;
  p.spatial_phase = 0.3;
  p.temporal_freq = 1.0;
  p.temporal_phase = 0.9;
  const int samples = 128;
  double integral = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double t = (k + 0.5) / samples;  // midpoint rule over one period
    integral += sinusoidal_field(p, t, 2, 16).dx_at(1, 5);
  }
  CHECK(std::abs(integral / samples) <= 1e-6);
}

TEST_CASE("sinusoid rejects invalid parameters") {
  SinusoidParams p;
  p.amplitude_cm = -0.1;
  CHECK_THROWS_AS(sinusoidal_field(p, 0.0, 4, 4), ConfigError);
}

TEST_CASE("noise fields are deterministic under the seed") {
  NoiseFieldParams p;
  p.rms_amplitude_cm = 0.25;
  p.spatial_band = {1.0, 4.0};
  p.temporal_band = {0.5, 2.0};
  p.seed = 99;
  const SequenceSpec spec(8, 8.0);
  const auto a = noise_field_sequence(p, spec, 16, 16);
  const auto b = noise_field_sequence(p, spec, 16, 16);
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].dx == b[k].dx);
    CHECK(a[k].dy == b[k].dy);
  }

  p.seed = 100;
  const auto c = noise_field_sequence(p, spec, 16, 16);
  CHECK(c[0].dx != a[0].dx);
}

TEST_CASE("zero-rms noise is the all-zero sequence") {
  NoiseFieldParams p;
  p.rms_amplitude_cm = 0.0;
  p.spatial_band = {1.0, 4.0};
  p.temporal_band = {0.5, 2.0};
  const auto seq = noise_field_sequence(p, SequenceSpec(4, 8.0), 8, 8);
  for (const auto& f : seq) {
    for (float v : f.dx) CHECK(v == 0.0f);
    for (float v : f.dy) CHECK(v == 0.0f);
  }
}

TEST_CASE("noise respects the band and the RMS target") {
  NoiseFieldParams p;
  p.rms_amplitude_cm = 0.25;
  p.spatial_band = {1.0, 4.0};
  p.temporal_band = {0.5, 2.0};
  p.seed = 99;
  const int W = 16, H = 16, T = 8;
  const double fps = 8.0;
  const auto seq = noise_field_sequence(p, SequenceSpec(T, fps), W, H);

  std::vector<double> volume(static_cast<std::size_t>(W) * H * T);
  double sum_sq = 0.0;
  for (int t = 0; t < T; ++t) {
    for (int y = 0; y < H; ++y) {
      for (int x = 0; x < W; ++x) {
        const double v = seq[t].dx_at(x, y);
        volume[(static_cast<std::size_t>(t) * H + y) * W + x] = v;
        sum_sq += v * v;
      }
    }
  }
  const double rms = std::sqrt(sum_sq / volume.size());
  CHECK(std::abs(rms - p.rms_amplitude_cm) <= 0.02 * p.rms_amplitude_cm);

  // Independent discrete Fourier transform of the output volume.
  double in_band = 0.0, total = 0.0;
  for (int kt = 0; kt < T; ++kt) {
    for (int ky = 0; ky < H; ++ky) {
      for (int kx = 0; kx < W; ++kx) {
        std::complex<double> acc(0.0, 0.0);
        for (int t = 0; t < T; ++t) {
          for (int y = 0; y < H; ++y) {
            for (int x = 0; x < W; ++x) {
              const double phase = -kTwoPi * (static_cast<double>(kt) * t / T +
                                              static_cast<double>(ky) * y / H +
                                              static_cast<double>(kx) * x / W);
              acc += volume[(static_cast<std::size_t>(t) * H + y) * W + x] *
                     std::complex<double>(std::cos(phase), std::sin(phase));
            }
          }
        }
        const double power = std::norm(acc);
        const double fx = kx <= W / 2 ? kx : kx - W;
        const double fy = ky <= H / 2 ? ky : ky - H;
        const double ft = (kt <= T / 2 ? kt : kt - T) * (fps / T);
        const double radius = std::hypot(fx, fy);
        total += power;
        if (radius >= 1.0 - 1e-9 && radius <= 4.0 + 1e-9 && std::abs(ft) >= 0.5 - 1e-9 &&
            std::abs(ft) <= 2.0 + 1e-9) {
          in_band += power;
        }
      }
    }
  }
  CHECK(in_band / total >= 0.95);
}

TEST_CASE("noise band validation names the offending axis") {
  NoiseFieldParams p;
  p.rms_amplitude_cm = 0.1;
  p.spatial_band = {1.0, 9.0};  // above 16/2
  p.temporal_band = {0.5, 2.0};
  const SequenceSpec spec(8, 8.0);
  CHECK_THROWS_WITH_AS(noise_field_sequence(p, spec, 16, 16),
                       doctest::Contains("spatial"), NyquistError);

  p.spatial_band = {1.0, 4.0};
  p.temporal_band = {0.5, 5.0};  // above 8/2
  CHECK_THROWS_WITH_AS(noise_field_sequence(p, spec, 16, 16),
                       doctest::Contains("temporal"), NyquistError);

  p.temporal_band = {2.0, 1.0};  // inverted
  CHECK_THROWS_AS(noise_field_sequence(p, spec, 16, 16), ConfigError);
}

}  // TEST_SUITE("fields")
