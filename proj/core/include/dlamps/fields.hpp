#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "dlamps/geometry.hpp"
#include "dlamps/raster.hpp"

namespace dlamps {

/// Horizontal sine-wave deformation,
///   dx(x,y,t) = A * sin(2*pi*f_s * y/height + phi_s) * cos(2*pi*f_t * t + phi_t),
///   dy = 0,
/// with the spatial frequency in cycles per image height and amplitudes in cm.
struct SinusoidParams {
  double amplitude_cm = 0.0;   // A
  double spatial_freq = 1.0;   // f_s, cycles per image height
  double spatial_phase = 0.0;  // phi_s, radians
  double temporal_freq = 1.0;  // f_t, Hz
  double temporal_phase = 0.0; // phi_t, radians
};

DisplacementField sinusoidal_field(const SinusoidParams& params, double t_seconds,
                                   int width, int height);

/// Band-limited Gaussian noise deformation. dx and dy are independent noise
/// volumes band-pass filtered (hard annulus in frequency space) and rescaled
/// to the requested RMS amplitude. Deterministic given the seed.
struct NoiseFieldParams {
  double rms_amplitude_cm = 0.0;
  std::pair<double, double> spatial_band{0.0, 0.0};   // cycles per image, radial
  std::pair<double, double> temporal_band{0.0, 0.0};  // Hz
  std::uint64_t seed = 0;
};

std::vector<DisplacementField> noise_field_sequence(const NoiseFieldParams& params,
                                                    const SequenceSpec& spec,
                                                    int width, int height);

}  // namespace dlamps
