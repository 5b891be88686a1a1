#include "dlamps/raster.hpp"

#include <algorithm>
#include <cmath>

namespace dlamps {

namespace {

void check_dims(int width, int height) {
  if (width < 1 || height < 1) {
    throw DimensionError("raster dimensions must be at least 1x1");
  }
}

}  // namespace

Raster::Raster(int width_, int height_, double fill) : width(width_), height(height_) {
  check_dims(width_, height_);
  if (!std::isfinite(fill) || fill < 0.0 || fill > 1.0) {
    throw Error("raster fill value must lie in [0,1]");
  }
  data.assign(static_cast<std::size_t>(width_) * height_, fill);
}

SignedRaster::SignedRaster(int width_, int height_, double fill)
    : width(width_), height(height_) {
  check_dims(width_, height_);
  if (!std::isfinite(fill) || fill < -1.0 || fill > 1.0) {
    throw Error("signed raster fill value must lie in [-1,1]");
  }
  data.assign(static_cast<std::size_t>(width_) * height_, fill);
}

ColorRaster::ColorRaster(int width_, int height_, double fill)
    : plane{Raster(width_, height_, fill), Raster(width_, height_, fill),
            Raster(width_, height_, fill)} {}

SignedColorRaster::SignedColorRaster(int width_, int height_, double fill)
    : plane{SignedRaster(width_, height_, fill), SignedRaster(width_, height_, fill),
            SignedRaster(width_, height_, fill)} {}

DisplacementField::DisplacementField(int width_, int height_)
    : width(width_), height(height_) {
  check_dims(width_, height_);
  dx.assign(static_cast<std::size_t>(width_) * height_, 0.0f);
  dy.assign(static_cast<std::size_t>(width_) * height_, 0.0f);
}

Raster to_luminance(const ColorRaster& image) {
  Raster out(image.width(), image.height());
  const std::size_t n = out.pixel_count();
  for (std::size_t i = 0; i < n; ++i) {
    const double v = kLumaWeightR * image.plane[0].data[i] +
                     kLumaWeightG * image.plane[1].data[i] +
                     kLumaWeightB * image.plane[2].data[i];
    out.data[i] = std::clamp(v, 0.0, 1.0);
  }
  return out;
}

}  // namespace dlamps
