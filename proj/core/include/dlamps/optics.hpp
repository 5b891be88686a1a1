#pragma once

#include <vector>

#include "dlamps/raster.hpp"
#include "dlamps/warp.hpp"

namespace dlamps {

/// Projection target and environment for the observer-side composite.
struct SceneSetup {
  ColorRaster reflectance;    // K, per-channel albedo in [0,1]
  ColorRaster ambient;        // Env, normalized ambient illuminance
  double blur_sigma_px = 0.0; // projector optics blur applied to P only

  static SceneSetup with_uniform_ambient(ColorRaster reflectance, double ambient_level,
                                         double blur_sigma_px = 0.0);
};

/// Separable Gaussian blur with a normalized sampled kernel (unit DC gain).
/// sigma_px = 0 returns the input unchanged.
Raster gaussian_blur(const Raster& src, double sigma_px,
                     Boundary boundary = Boundary::clamp);

/// out_c = K_c * (Env_c + blur(P)), clamped to [0,1]. The projected light is
/// achromatic, so P enters each channel identically.
ColorRaster lambertian_composite(const SceneSetup& scene, const Raster& projection);

/// Frame-wise lambertian_composite over a projection sequence.
std::vector<ColorRaster> simulate_perceived_sequence(const SceneSetup& scene,
                                                     const std::vector<Raster>& projection_frames);

/// Multiplicative transmission through a panel: out_c = object_c * transmittance.
ColorRaster lcd_composite(const ColorRaster& object_image, const Raster& transmittance);

}  // namespace dlamps
