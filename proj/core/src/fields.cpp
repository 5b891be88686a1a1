#include "dlamps/fields.hpp"

#include <fftw3.h>

#include <cmath>
#include <string>

#include "dlamps/rng.hpp"

namespace dlamps {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

void validate_sinusoid(const SinusoidParams& p) {
  if (!(p.amplitude_cm >= 0.0) || !std::isfinite(p.amplitude_cm)) {
    throw ConfigError("sinusoid amplitude must be >= 0");
  }
  if (!(p.spatial_freq >= 0.0) || !(p.temporal_freq >= 0.0)) {
    throw ConfigError("sinusoid frequencies must be >= 0");
  }
}

// RAII wrapper for fftw_malloc'd storage. A consistent allocator keeps the
// planner's kernel choice, and therefore the output bits, reproducible.
struct FftwBuffer {
  explicit FftwBuffer(std::size_t doubles)
      : ptr(static_cast<double*>(fftw_malloc(doubles * sizeof(double)))) {}
  ~FftwBuffer() { fftw_free(ptr); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  double* ptr;
};

struct FftwComplexBuffer {
  explicit FftwComplexBuffer(std::size_t cells)
      : ptr(static_cast<fftw_complex*>(fftw_malloc(cells * sizeof(fftw_complex)))) {}
  ~FftwComplexBuffer() { fftw_free(ptr); }
  FftwComplexBuffer(const FftwComplexBuffer&) = delete;
  FftwComplexBuffer& operator=(const FftwComplexBuffer&) = delete;
  fftw_complex* ptr;
};

double signed_frequency(int index, int n) {
  return index <= n / 2 ? index : index - n;
}

}  // namespace

DisplacementField sinusoidal_field(const SinusoidParams& params, double t_seconds,
                                   int width, int height) {
  validate_sinusoid(params);
  DisplacementField field(width, height);
  const double temporal =
      std::cos(kTwoPi * params.temporal_freq * t_seconds + params.temporal_phase);
  for (int y = 0; y < height; ++y) {
    const double y_norm = static_cast<double>(y) / height;
    const double value = params.amplitude_cm *
                         std::sin(kTwoPi * params.spatial_freq * y_norm + params.spatial_phase) *
                         temporal;
    const float dx = static_cast<float>(value);
    for (int x = 0; x < width; ++x) {
      field.dx_at(x, y) = dx;
    }
  }
  return field;
}

std::vector<DisplacementField> noise_field_sequence(const NoiseFieldParams& params,
                                                    const SequenceSpec& spec,
                                                    int width, int height) {
  if (width < 1 || height < 1) {
    throw DimensionError("noise field dimensions must be at least 1x1");
  }
  if (!(params.rms_amplitude_cm >= 0.0) || !std::isfinite(params.rms_amplitude_cm)) {
    throw ConfigError("noise rms_amplitude must be >= 0");
  }
  const auto [s_lo, s_hi] = params.spatial_band;
  const auto [t_lo, t_hi] = params.temporal_band;
  if (!(s_lo >= 0.0) || !(s_lo < s_hi)) {
    throw ConfigError("spatial band must satisfy 0 <= low < high");
  }
  if (!(t_lo >= 0.0) || !(t_lo < t_hi)) {
    throw ConfigError("temporal band must satisfy 0 <= low < high");
  }
  const double spatial_nyquist = std::min(width, height) / 2.0;
  if (s_hi > spatial_nyquist) {
    throw NyquistError("spatial band upper edge " + std::to_string(s_hi) +
                       " cycles/image exceeds the Nyquist limit " +
                       std::to_string(spatial_nyquist) + " for " + std::to_string(width) +
                       "x" + std::to_string(height) + " frames");
  }
  const double temporal_nyquist = spec.fps / 2.0;
  if (t_hi > temporal_nyquist) {
    throw NyquistError("temporal band upper edge " + std::to_string(t_hi) +
                       " Hz exceeds the Nyquist limit " + std::to_string(temporal_nyquist) +
                       " at " + std::to_string(spec.fps) + " fps");
  }

  const int frames = spec.frame_count;
  std::vector<DisplacementField> sequence(static_cast<std::size_t>(frames),
                                          DisplacementField(width, height));
  if (params.rms_amplitude_cm == 0.0) {
    return sequence;
  }

  const std::size_t volume = static_cast<std::size_t>(frames) * height * width;
  const std::size_t spectrum = static_cast<std::size_t>(frames) * height * (width / 2 + 1);

  FftwBuffer real(volume);
  FftwComplexBuffer freq(spectrum);
  fftw_plan forward = fftw_plan_dft_r2c_3d(frames, height, width, real.ptr, freq.ptr,
                                           FFTW_ESTIMATE);
  fftw_plan backward = fftw_plan_dft_c2r_3d(frames, height, width, freq.ptr, real.ptr,
                                            FFTW_ESTIMATE);

  CounterRng rng(params.seed);
  const double freq_step_hz = spec.fps / frames;

  for (int plane = 0; plane < 2; ++plane) {
    const std::uint64_t plane_offset = static_cast<std::uint64_t>(plane) * volume;
    for (std::size_t i = 0; i < volume; ++i) {
      real.ptr[i] = rng.gaussian(plane_offset + i);
    }
    fftw_execute(forward);

    // Hard annulus: keep |spatial radius| and |temporal frequency| inside the
    // requested bands, zero everything else. The mask depends only on
    // frequency magnitudes, so conjugate symmetry and real output survive.
    std::size_t cell = 0;
    for (int kt = 0; kt < frames; ++kt) {
      const double f_t = std::abs(signed_frequency(kt, frames)) * freq_step_hz;
      const bool t_ok = f_t >= t_lo - 1e-9 && f_t <= t_hi + 1e-9;
      for (int ky = 0; ky < height; ++ky) {
        const double f_y = signed_frequency(ky, height);
        for (int kx = 0; kx <= width / 2; ++kx, ++cell) {
          const double radius = std::hypot(static_cast<double>(kx), f_y);
          const bool s_ok = radius >= s_lo - 1e-9 && radius <= s_hi + 1e-9;
          if (!(t_ok && s_ok)) {
            freq.ptr[cell][0] = 0.0;
            freq.ptr[cell][1] = 0.0;
          }
        }
      }
    }
    fftw_execute(backward);

    const double scale = 1.0 / static_cast<double>(volume);
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < volume; ++i) {
      real.ptr[i] *= scale;
      sum_sq += real.ptr[i] * real.ptr[i];
    }
    const double rms = std::sqrt(sum_sq / static_cast<double>(volume));
    if (!(rms > 1e-30)) {
      fftw_destroy_plan(forward);
      fftw_destroy_plan(backward);
      throw ConfigError("requested band contains no representable frequencies at " +
                        std::to_string(width) + "x" + std::to_string(height) + "x" +
                        std::to_string(frames));
    }
    const double gain = params.rms_amplitude_cm / rms;

    for (int t = 0; t < frames; ++t) {
      std::vector<float>& dest = plane == 0 ? sequence[t].dx : sequence[t].dy;
      const double* src = real.ptr + static_cast<std::size_t>(t) * height * width;
      for (std::size_t i = 0; i < static_cast<std::size_t>(height) * width; ++i) {
        dest[i] = static_cast<float>(src[i] * gain);
      }
    }
  }

  fftw_destroy_plan(forward);
  fftw_destroy_plan(backward);
  return sequence;
}

}  // namespace dlamps
