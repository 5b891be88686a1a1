#pragma once

#include "dlamps/geometry.hpp"
#include "dlamps/raster.hpp"

namespace dlamps {

enum class Boundary { clamp, periodic, mirror };
enum class Interpolation { bilinear, bicubic };

struct WarpOptions {
  Boundary boundary = Boundary::clamp;
  Interpolation interpolation = Interpolation::bilinear;
};

/// Inverse-mapped resampling: out(x,y) = src(x - dx_px(x,y), y - dy_px(x,y)),
/// where the stored cm displacements are converted to pixels with
/// geom.pixel_pitch_cm. Out-of-range samples are resolved per boundary mode
/// and the output is clamped to [0,1] (bicubic can overshoot).
Raster warp_image(const Raster& src, const DisplacementField& field,
                  const ViewingGeometry& geom, const WarpOptions& opts = {});

/// Plane-wise application of warp_image.
ColorRaster warp_color(const ColorRaster& src, const DisplacementField& field,
                       const ViewingGeometry& geom, const WarpOptions& opts = {});

}  // namespace dlamps
