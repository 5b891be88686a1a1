#include "dlamps/png_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <cstring>
#include <memory>
#include <vector>

namespace dlamps {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

// Decoded pixels, interleaved, already scaled to [0,1].
struct DecodedPng {
  int width = 0;
  int height = 0;
  int channels = 0;  // 1 or 3
  int bit_depth = 0;
  std::vector<double> data;
};

DecodedPng decode_png(const std::string& path) {
  FilePtr file(std::fopen(path.c_str(), "rb"));
  if (!file) {
    throw FormatError("cannot open PNG file: " + path);
  }

  png_byte signature[8] = {};
  if (std::fread(signature, 1, 8, file.get()) != 8 || png_sig_cmp(signature, 0, 8) != 0) {
    throw FormatError("not a PNG file: " + path);
  }

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw Error("png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw Error("png_create_info_struct failed");
  }

  DecodedPng out;
  std::vector<png_byte> raster_bytes;
  std::vector<png_bytep> row_pointers;

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError("corrupt PNG file: " + path);
  }

  png_init_io(png, file.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  png_set_palette_to_rgb(png);
  png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  png_set_strip_alpha(png);
#if __BYTE_ORDER__ == __ORDER_LITTLE_ENDIAN__
  png_set_swap(png);
#endif
  png_set_interlace_handling(png);
  png_read_update_info(png, info);

  out.width = static_cast<int>(png_get_image_width(png, info));
  out.height = static_cast<int>(png_get_image_height(png, info));
  out.bit_depth = png_get_bit_depth(png, info);
  const png_byte color_type = png_get_color_type(png, info);
  if (color_type == PNG_COLOR_TYPE_GRAY) {
    out.channels = 1;
  } else if (color_type == PNG_COLOR_TYPE_RGB) {
    out.channels = 3;
  } else {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError("unsupported PNG color type in: " + path);
  }

  const std::size_t row_bytes = png_get_rowbytes(png, info);
  raster_bytes.resize(row_bytes * out.height);
  row_pointers.resize(out.height);
  for (int y = 0; y < out.height; ++y) {
    row_pointers[y] = raster_bytes.data() + row_bytes * y;
  }
  png_read_image(png, row_pointers.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  const std::size_t count = static_cast<std::size_t>(out.width) * out.height * out.channels;
  out.data.resize(count);
  if (out.bit_depth == 16) {
    for (std::size_t i = 0; i < count; ++i) {
      std::uint16_t v;
      std::memcpy(&v, raster_bytes.data() + 2 * i, 2);
      out.data[i] = v / 65535.0;
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      out.data[i] = raster_bytes[i] / 255.0;
    }
  }
  return out;
}

std::uint32_t quantize(double v, std::uint32_t maxval) {
  const double clamped = std::clamp(v, 0.0, 1.0);
  const double scaled = std::floor(clamped * maxval + 0.5);  // round half up
  return static_cast<std::uint32_t>(std::min<double>(scaled, maxval));
}

void encode_png(const std::string& path, int width, int height, int channels,
                int bit_depth, const std::vector<double>& data) {
  if (bit_depth != 8 && bit_depth != 16) {
    throw ConfigError("PNG bit depth must be 8 or 16");
  }
  FilePtr file(std::fopen(path.c_str(), "wb"));
  if (!file) {
    throw Error("cannot write PNG file: " + path);
  }

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw Error("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw Error("png_create_info_struct failed");
  }

  const std::uint32_t maxval = bit_depth == 16 ? 65535u : 255u;
  const std::size_t count = static_cast<std::size_t>(width) * height * channels;
  const std::size_t bytes_per_sample = bit_depth == 16 ? 2 : 1;
  std::vector<png_byte> raster_bytes(count * bytes_per_sample);
  if (bit_depth == 16) {
    for (std::size_t i = 0; i < count; ++i) {
      const std::uint16_t v = static_cast<std::uint16_t>(quantize(data[i], maxval));
      std::memcpy(raster_bytes.data() + 2 * i, &v, 2);
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      raster_bytes[i] = static_cast<png_byte>(quantize(data[i], maxval));
    }
  }
  std::vector<png_bytep> row_pointers(height);
  const std::size_t row_bytes = static_cast<std::size_t>(width) * channels * bytes_per_sample;
  for (int y = 0; y < height; ++y) {
    row_pointers[y] = raster_bytes.data() + row_bytes * y;
  }

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error("PNG write failed: " + path);
  }

  png_init_io(png, file.get());
  // Fixed settings keep identical pixel content byte-identical on disk.
  png_set_compression_level(png, 6);
  png_set_IHDR(png, info, width, height, bit_depth,
               channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
#if __BYTE_ORDER__ == __ORDER_LITTLE_ENDIAN__
  if (bit_depth == 16) png_set_swap(png);
#endif
  png_write_image(png, row_pointers.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace

Raster load_png_gray(const std::string& path, PngMeta* meta) {
  DecodedPng decoded = decode_png(path);
  if (decoded.channels != 1) {
    throw FormatError("expected a grayscale PNG: " + path);
  }
  if (meta) *meta = PngMeta{decoded.bit_depth, true};
  Raster out(decoded.width, decoded.height);
  out.data = std::move(decoded.data);
  return out;
}

ColorRaster load_png_color(const std::string& path, PngMeta* meta) {
  DecodedPng decoded = decode_png(path);
  if (meta) *meta = PngMeta{decoded.bit_depth, decoded.channels == 1};
  ColorRaster out(decoded.width, decoded.height);
  const std::size_t n = static_cast<std::size_t>(decoded.width) * decoded.height;
  if (decoded.channels == 1) {
    for (int c = 0; c < 3; ++c) out.plane[c].data = decoded.data;
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      out.plane[0].data[i] = decoded.data[3 * i + 0];
      out.plane[1].data[i] = decoded.data[3 * i + 1];
      out.plane[2].data[i] = decoded.data[3 * i + 2];
    }
  }
  return out;
}

void save_png_gray(const Raster& image, const std::string& path, int bit_depth) {
  encode_png(path, image.width, image.height, 1, bit_depth, image.data);
}

void save_png_color(const ColorRaster& image, const std::string& path, int bit_depth) {
  const std::size_t n = image.plane[0].pixel_count();
  std::vector<double> interleaved(n * 3);
  for (std::size_t i = 0; i < n; ++i) {
    interleaved[3 * i + 0] = image.plane[0].data[i];
    interleaved[3 * i + 1] = image.plane[1].data[i];
    interleaved[3 * i + 2] = image.plane[2].data[i];
  }
  encode_png(path, image.width(), image.height(), 3, bit_depth, interleaved);
}

}  // namespace dlamps
