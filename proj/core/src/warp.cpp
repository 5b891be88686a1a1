#include "dlamps/warp.hpp"

#include <algorithm>
#include <cmath>

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

double sample_bilinear(const Raster& src, double sx, double sy, Boundary boundary) {
  const int x0 = static_cast<int>(std::floor(sx));
  const int y0 = static_cast<int>(std::floor(sy));
  const double fx = sx - x0;
  const double fy = sy - y0;
  const int xa = resolve_index(x0, src.width, boundary);
  const int xb = resolve_index(x0 + 1, src.width, boundary);
  const int ya = resolve_index(y0, src.height, boundary);
  const int yb = resolve_index(y0 + 1, src.height, boundary);
  const double top = (1.0 - fx) * src.at(xa, ya) + fx * src.at(xb, ya);
  const double bottom = (1.0 - fx) * src.at(xa, yb) + fx * src.at(xb, yb);
  return (1.0 - fy) * top + fy * bottom;
}

// Keys cubic kernel, a = -0.5.
double cubic_weight(double t) {
  t = std::abs(t);
  if (t <= 1.0) {
    return ((1.5 * t - 2.5) * t) * t + 1.0;
  }
  if (t < 2.0) {
    return (((-0.5 * t + 2.5) * t) - 4.0) * t + 2.0;
  }
  return 0.0;
}

double sample_bicubic(const Raster& src, double sx, double sy, Boundary boundary) {
  const int x0 = static_cast<int>(std::floor(sx));
  const int y0 = static_cast<int>(std::floor(sy));
  const double fx = sx - x0;
  const double fy = sy - y0;
  double wx[4], wy[4];
  int xi[4], yi[4];
  for (int k = 0; k < 4; ++k) {
    wx[k] = cubic_weight(fx - (k - 1));
    wy[k] = cubic_weight(fy - (k - 1));
    xi[k] = resolve_index(x0 + k - 1, src.width, boundary);
    yi[k] = resolve_index(y0 + k - 1, src.height, boundary);
  }
  double value = 0.0;
  for (int j = 0; j < 4; ++j) {
    double row = 0.0;
    for (int k = 0; k < 4; ++k) {
      row += wx[k] * src.at(xi[k], yi[j]);
    }
    value += wy[j] * row;
  }
  return value;
}

}  // namespace

Raster warp_image(const Raster& src, const DisplacementField& field,
                  const ViewingGeometry& geom, const WarpOptions& opts) {
  if (src.width != field.width || src.height != field.height) {
    throw DimensionError("warp: image and displacement field dimensions differ");
  }
  Raster out(src.width, src.height);
  const double inv_pitch = 1.0 / geom.pixel_pitch_cm;
  for (int y = 0; y < src.height; ++y) {
    for (int x = 0; x < src.width; ++x) {
      const double sx = x - field.dx_at(x, y) * inv_pitch;
      const double sy = y - field.dy_at(x, y) * inv_pitch;
      const double v = opts.interpolation == Interpolation::bilinear
                           ? sample_bilinear(src, sx, sy, opts.boundary)
                           : sample_bicubic(src, sx, sy, opts.boundary);
      out.at(x, y) = std::clamp(v, 0.0, 1.0);
    }
  }
  return out;
}

ColorRaster warp_color(const ColorRaster& src, const DisplacementField& field,
                       const ViewingGeometry& geom, const WarpOptions& opts) {
  ColorRaster out;
  for (int c = 0; c < 3; ++c) {
    out.plane[c] = warp_image(src.plane[c], field, geom, opts);
  }
  return out;
}

}  // namespace dlamps
