#include "dlamps/optics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace dlamps {

namespace {

int resolve_index(int i, int n, Boundary boundary) {
  switch (boundary) {
    case Boundary::clamp:
      return std::clamp(i, 0, n - 1);
    case Boundary::periodic: {
      int m = i % n;
      return m < 0 ? m + n : m;
    }
    case Boundary::mirror: {
      const int period = 2 * n;
      int m = i % period;
      if (m < 0) m += period;
      return m < n ? m : period - 1 - m;
    }
  }
  return 0;
}

std::vector<double> sampled_gaussian_kernel(double sigma) {
  const int radius = std::max(1, static_cast<int>(std::ceil(4.0 * sigma)));
  std::vector<double> kernel(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double w = std::exp(-0.5 * (i / sigma) * (i / sigma));
    kernel[i + radius] = w;
    sum += w;
  }
  for (double& w : kernel) w /= sum;
  return kernel;
}

}  // namespace

SceneSetup SceneSetup::with_uniform_ambient(ColorRaster reflectance, double ambient_level,
                                            double blur_sigma_px) {
  if (!(ambient_level >= 0.0 && ambient_level <= 1.0)) {
    throw ConfigError("ambient level must lie in [0,1] (normalized units)");
  }
  SceneSetup scene;
  scene.ambient = ColorRaster(reflectance.width(), reflectance.height(), ambient_level);
  scene.reflectance = std::move(reflectance);
  scene.blur_sigma_px = blur_sigma_px;
  return scene;
}

Raster gaussian_blur(const Raster& src, double sigma_px, Boundary boundary) {
  if (!(sigma_px >= 0.0) || !std::isfinite(sigma_px)) {
    throw ConfigError("blur sigma must be >= 0");
  }
  if (sigma_px == 0.0) {
    return src;
  }
  const std::vector<double> kernel = sampled_gaussian_kernel(sigma_px);
  const int radius = static_cast<int>(kernel.size() / 2);

  Raster horizontal(src.width, src.height);
  for (int y = 0; y < src.height; ++y) {
    for (int x = 0; x < src.width; ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        acc += kernel[k + radius] * src.at(resolve_index(x + k, src.width, boundary), y);
      }
      horizontal.at(x, y) = acc;
    }
  }
  Raster out(src.width, src.height);
  for (int y = 0; y < src.height; ++y) {
    for (int x = 0; x < src.width; ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        acc += kernel[k + radius] * horizontal.at(x, resolve_index(y + k, src.height, boundary));
      }
      out.at(x, y) = std::clamp(acc, 0.0, 1.0);
    }
  }
  return out;
}

ColorRaster lambertian_composite(const SceneSetup& scene, const Raster& projection) {
  if (scene.reflectance.width() != projection.width ||
      scene.reflectance.height() != projection.height) {
    throw DimensionError("composite: reflectance and projection dimensions differ");
  }
  if (!scene.ambient.same_size(scene.reflectance)) {
    throw DimensionError("composite: ambient and reflectance dimensions differ");
  }
  const Raster blurred = gaussian_blur(projection, scene.blur_sigma_px);
  ColorRaster out(projection.width, projection.height);
  const std::size_t n = projection.pixel_count();
  for (int c = 0; c < 3; ++c) {
    const std::vector<double>& k = scene.reflectance.plane[c].data;
    const std::vector<double>& env = scene.ambient.plane[c].data;
    std::vector<double>& dst = out.plane[c].data;
    for (std::size_t i = 0; i < n; ++i) {
      dst[i] = std::clamp(k[i] * (env[i] + blurred.data[i]), 0.0, 1.0);
    }
  }
  return out;
}

std::vector<ColorRaster> simulate_perceived_sequence(const SceneSetup& scene,
                                                     const std::vector<Raster>& projection_frames) {
  std::vector<ColorRaster> out;
  out.reserve(projection_frames.size());
  for (const Raster& p : projection_frames) {
    out.push_back(lambertian_composite(scene, p));
  }
  return out;
}

ColorRaster lcd_composite(const ColorRaster& object_image, const Raster& transmittance) {
  if (object_image.width() != transmittance.width ||
      object_image.height() != transmittance.height) {
    throw DimensionError("lcd composite: object and transmittance dimensions differ");
  }
  ColorRaster out(transmittance.width, transmittance.height);
  const std::size_t n = transmittance.pixel_count();
  for (int c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      out.plane[c].data[i] =
          std::clamp(object_image.plane[c].data[i] * transmittance.data[i], 0.0, 1.0);
    }
  }
  return out;
}

}  // namespace dlamps
