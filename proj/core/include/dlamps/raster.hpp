#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "dlamps/errors.hpp"

namespace dlamps {

/// Single-plane image, row-major, intensities in [0,1].
struct Raster {
  int width = 0;
  int height = 0;
  std::vector<double> data;

  Raster() = default;
  Raster(int width, int height, double fill = 0.0);

  double& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
  double at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
  std::size_t pixel_count() const { return data.size(); }
  bool same_size(const Raster& other) const {
    return width == other.width && height == other.height;
  }
};

/// Signed difference plane, values in [-1,1]. A distinct value class from
/// Raster so a residual cannot be passed where displayable intensities are
/// expected.
struct SignedRaster {
  int width = 0;
  int height = 0;
  std::vector<double> data;

  SignedRaster() = default;
  SignedRaster(int width, int height, double fill = 0.0);

  double& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
  double at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
  std::size_t pixel_count() const { return data.size(); }
  bool same_size(const SignedRaster& other) const {
    return width == other.width && height == other.height;
  }
};

/// Three-plane RGB image; planes share dimensions, values in [0,1].
struct ColorRaster {
  std::array<Raster, 3> plane;  // R, G, B

  ColorRaster() = default;
  ColorRaster(int width, int height, double fill = 0.0);

  int width() const { return plane[0].width; }
  int height() const { return plane[0].height; }
  bool same_size(const ColorRaster& other) const {
    return width() == other.width() && height() == other.height();
  }
};

/// Signed three-plane difference frame, values in [-1,1].
struct SignedColorRaster {
  std::array<SignedRaster, 3> plane;

  SignedColorRaster() = default;
  SignedColorRaster(int width, int height, double fill = 0.0);

  int width() const { return plane[0].width; }
  int height() const { return plane[0].height; }
};

/// Per-pixel displacement in centimeters. Planes are kept in single
/// precision so a file round-trip through the interchange format is exact.
struct DisplacementField {
  int width = 0;
  int height = 0;
  std::vector<float> dx;  // cm
  std::vector<float> dy;  // cm

  DisplacementField() = default;
  DisplacementField(int width, int height);

  float& dx_at(int x, int y) { return dx[static_cast<std::size_t>(y) * width + x]; }
  float dx_at(int x, int y) const { return dx[static_cast<std::size_t>(y) * width + x]; }
  float& dy_at(int x, int y) { return dy[static_cast<std::size_t>(y) * width + x]; }
  float dy_at(int x, int y) const { return dy[static_cast<std::size_t>(y) * width + x]; }
  bool same_size(const DisplacementField& other) const {
    return width == other.width && height == other.height;
  }
};

// BT.709 luma weights; they sum to one.
inline constexpr double kLumaWeightR = 0.2126;
inline constexpr double kLumaWeightG = 0.7152;
inline constexpr double kLumaWeightB = 0.0722;

/// Weighted RGB -> luminance reduction. Linear in the image.
Raster to_luminance(const ColorRaster& image);

}  // namespace dlamps
