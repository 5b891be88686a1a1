#include <doctest.h>

#include <cmath>

#include "dlamps/dlamps.hpp"
#include "test_util.hpp"

using namespace dlamps;

namespace {

// cm == px throughout these tests unless stated otherwise
const ViewingGeometry kUnitGeom(110.0, 1.0);

DisplacementField constant_field(int w, int h, float dx, float dy) {
  DisplacementField f(w, h);
  for (auto& v : f.dx) v = dx;
  for (auto& v : f.dy) v = dy;
  return f;
}

}  // namespace

TEST_SUITE("warp") {

TEST_CASE("zero field is the identity, bit for bit") {
  const Raster src = testutil::random_raster(9, 7, 21);
  const DisplacementField zero(9, 7);
  for (const Boundary b : {Boundary::clamp, Boundary::periodic, Boundary::mirror}) {
    for (const Interpolation i : {Interpolation::bilinear, Interpolation::bicubic}) {
      const Raster out = warp_image(src, zero, kUnitGeom, {b, i});
      CHECK(out.data == src.data);
    }
  }
}

TEST_CASE("integer shift under periodic boundary is an exact circular shift") {
  const Raster src = testutil::random_raster(8, 5, 22);
  const Raster out = warp_image(src, constant_field(8, 5, 3.0f, 0.0f), kUnitGeom,
                                {Boundary::periodic, Interpolation::bilinear});
  for (int y = 0; y < 5; ++y) {
    for (int x = 0; x < 8; ++x) {
      CHECK(out.at(x, y) == src.at(((x - 3) % 8 + 8) % 8, y));
    }
  }
}

TEST_CASE("half-pixel shift interpolates the two-pixel pattern") {
  Raster src(2, 1);
  src.at(0, 0) = 0.0;
  src.at(1, 0) = 1.0;
  const Raster out = warp_image(src, constant_field(2, 1, 0.5f, 0.0f), kUnitGeom,
                                {Boundary::clamp, Interpolation::bilinear});
  CHECK(out.at(1, 0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(out.at(0, 0) == doctest::Approx(0.0).epsilon(1e-12));  // clamped off-edge sample
}

TEST_CASE("warp_color is the plane-wise warp") {
  const ColorRaster src = testutil::random_color(10, 8, 23);
  DisplacementField field(10, 8);
  CounterRng rng(24);
  for (std::size_t i = 0; i < field.dx.size(); ++i) {
    field.dx[i] = static_cast<float>(2.0 * rng.gaussian(i));
    field.dy[i] = static_cast<float>(2.0 * rng.gaussian(1000 + i));
  }

  SUBCASE("zero field identity") {
    const ColorRaster out = warp_color(src, DisplacementField(10, 8), kUnitGeom, {});
    for (int c = 0; c < 3; ++c) CHECK(out.plane[c].data == src.plane[c].data);
  }

  SUBCASE("gray-valued color equals the single-plane warp replicated") {
    ColorRaster gray(10, 8);
    for (int c = 0; c < 3; ++c) gray.plane[c] = src.plane[0];
    const ColorRaster out = warp_color(gray, field, kUnitGeom, {});
    const Raster single = warp_image(src.plane[0], field, kUnitGeom, {});
    for (int c = 0; c < 3; ++c) CHECK(out.plane[c].data == single.data);
  }

  SUBCASE("luminance commutes with warping") {
    const Raster lum_then_warp = warp_image(to_luminance(src), field, kUnitGeom, {});
    const Raster warp_then_lum = to_luminance(warp_color(src, field, kUnitGeom, {}));
    for (std::size_t i = 0; i < lum_then_warp.data.size(); ++i) {
      CHECK(lum_then_warp.data[i] == doctest::Approx(warp_then_lum.data[i]).epsilon(1e-6));
    }
  }
}

TEST_CASE("row-shear fields preserve row sums and the mean under periodic boundary") {
  const int n = 32;
  const Raster src = testutil::random_raster(n, n, 25);
  const ViewingGeometry geom(110.0, 13.2 / n);
  double src_mean = 0.0;
  for (double v : src.data) src_mean += v;
  src_mean /= src.data.size();

  for (const double amplitude : kExp1AmplitudesCm) {
    for (const double freq : {1.0, 2.0, 4.0}) {
      SinusoidParams p;
      p.amplitude_cm = amplitude;
      p.spatial_freq = freq;
      p.spatial_phase = 0.37;
      const DisplacementField field = sinusoidal_field(p, 0.0, n, n);
      const Raster out =
          warp_image(src, field, geom, {Boundary::periodic, Interpolation::bilinear});
      double out_mean = 0.0;
      for (double v : out.data) out_mean += v;
      out_mean /= out.data.size();
      CHECK(std::abs(out_mean - src_mean) <= 1e-6 * std::abs(src_mean));

      for (int y = 0; y < n; ++y) {
        double row_src = 0.0, row_out = 0.0;
        for (int x = 0; x < n; ++x) {
          row_src += src.at(x, y);
          row_out += out.at(x, y);
        }
        CHECK(std::abs(row_out - row_src) <= 1e-6 * std::max(1.0, std::abs(row_src)));
      }
    }
  }
}

TEST_CASE("warping by F then -F approximately recovers smooth images") {
  const int n = 64;
  const Raster smooth =
      gaussian_blur(testutil::random_raster(n, n, 26), 2.0, Boundary::periodic);
  SinusoidParams p;
  p.amplitude_cm = 2.0;  // |F| <= 2 px at unit pitch
  p.spatial_freq = 2.0;
  p.spatial_phase = 1.1;
  DisplacementField forward = sinusoidal_field(p, 0.0, n, n);
  DisplacementField backward = forward;
  for (auto& v : backward.dx) v = -v;

  const WarpOptions opts{Boundary::periodic, Interpolation::bilinear};
  const Raster there = warp_image(smooth, forward, kUnitGeom, opts);
  const Raster back = warp_image(there, backward, kUnitGeom, opts);
  double sq = 0.0;
  for (std::size_t i = 0; i < back.data.size(); ++i) {
    const double d = back.data[i] - smooth.data[i];
    sq += d * d;
  }
  CHECK(std::sqrt(sq / back.data.size()) <= 0.01);
}

TEST_CASE("integer fields match the exhaustive remapping oracle") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const Raster src = testutil::random_raster(8, 8, 30 + seed);
    DisplacementField field(8, 8);
    CounterRng rng(40 + seed);
    for (std::size_t i = 0; i < field.dx.size(); ++i) {
      field.dx[i] = static_cast<float>(static_cast<int>(rng.raw(2 * i) % 7) - 3);
      field.dy[i] = static_cast<float>(static_cast<int>(rng.raw(2 * i + 1) % 7) - 3);
    }
    for (const Boundary boundary : {Boundary::periodic, Boundary::clamp}) {
      const Raster out = warp_image(src, field, kUnitGeom, {boundary, Interpolation::bilinear});
      for (int y = 0; y < 8; ++y) {
        for (int x = 0; x < 8; ++x) {
          int sx = x - static_cast<int>(field.dx_at(x, y));
          int sy = y - static_cast<int>(field.dy_at(x, y));
          if (boundary == Boundary::periodic) {
            sx = ((sx % 8) + 8) % 8;
            sy = ((sy % 8) + 8) % 8;
          } else {
            sx = sx < 0 ? 0 : (sx > 7 ? 7 : sx);
            sy = sy < 0 ? 0 : (sy > 7 ? 7 : sy);
          }
          CHECK(out.at(x, y) == src.at(sx, sy));
        }
      }
    }
  }
}

TEST_CASE("mirror boundary reflects off-image samples") {
  Raster src(3, 1);
  src.at(0, 0) = 0.9;
  src.at(1, 0) = 0.1;
  src.at(2, 0) = 0.5;
  // Sampling at x = -1 must reflect to x = 0 content.
  const Raster out = warp_image(src, constant_field(3, 1, 1.0f, 0.0f), kUnitGeom,
                                {Boundary::mirror, Interpolation::bilinear});
  CHECK(out.at(0, 0) == doctest::Approx(0.9).epsilon(1e-12));
}

TEST_CASE("bicubic stays in range and keeps constants constant") {
  const Raster flat(6, 6, 0.77);
  DisplacementField field(6, 6);
  CounterRng rng(50);
  for (std::size_t i = 0; i < field.dx.size(); ++i) {
    field.dx[i] = static_cast<float>(1.5 * rng.gaussian(i));
    field.dy[i] = static_cast<float>(1.5 * rng.gaussian(777 + i));
  }
  const Raster out = warp_image(flat, field, kUnitGeom, {Boundary::mirror, Interpolation::bicubic});
  for (double v : out.data) CHECK(v == doctest::Approx(0.77).epsilon(1e-12));

  const Raster noisy = testutil::random_raster(16, 16, 51);
  DisplacementField f2(16, 16);
  for (std::size_t i = 0; i < f2.dx.size(); ++i) {
    f2.dx[i] = static_cast<float>(2.0 * rng.gaussian(2000 + i));
    f2.dy[i] = static_cast<float>(2.0 * rng.gaussian(4000 + i));
  }
  const Raster warped = warp_image(noisy, f2, kUnitGeom, {Boundary::clamp, Interpolation::bicubic});
  for (double v : warped.data) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("dimension mismatches are rejected") {
  const Raster src = testutil::random_raster(8, 8, 60);
  CHECK_THROWS_AS(warp_image(src, DisplacementField(7, 8), kUnitGeom, {}), DimensionError);
}

}  // TEST_SUITE("warp")
