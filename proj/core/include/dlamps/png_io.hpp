#pragma once

#include <string>

#include "dlamps/raster.hpp"

namespace dlamps {

struct PngMeta {
  int bit_depth = 0;      // 8 or 16 after decoding transforms
  bool grayscale = false;
};

Raster load_png_gray(const std::string& path, PngMeta* meta = nullptr);
ColorRaster load_png_color(const std::string& path, PngMeta* meta = nullptr);

// bit_depth is 8 or 16. Intensities are quantized round-half-up.
void save_png_gray(const Raster& image, const std::string& path, int bit_depth = 16);
void save_png_color(const ColorRaster& image, const std::string& path, int bit_depth = 16);

}  // namespace dlamps
