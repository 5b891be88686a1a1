#include "dlamps/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace dlamps {

namespace {

void validate(const ProjectionParams& p) {
  if (!(p.weight >= 0.0) || !std::isfinite(p.weight)) {
    throw ConfigError("projection weight must be >= 0");
  }
  if (!(p.background >= 0.0 && p.background <= 1.0)) {
    throw ConfigError("projection background must lie in [0,1]");
  }
  if (p.clip_policy == ClipPolicy::error_if_over &&
      !(p.clip_threshold >= 0.0 && p.clip_threshold <= 1.0)) {
    throw ConfigError("clip threshold must lie in [0,1]");
  }
  if (p.compensation == Compensation::reflectance && !(p.k_min > 0.0 && p.k_min <= 1.0)) {
    throw ConfigError("compensation k_min must lie in (0,1]");
  }
}

}  // namespace

MovieDecomposition decompose_movie(const std::vector<ColorRaster>& movie) {
  if (movie.empty()) {
    throw DataError("cannot decompose an empty movie");
  }
  for (std::size_t k = 1; k < movie.size(); ++k) {
    if (!movie[k].same_size(movie[0])) {
      throw DimensionError("movie frame " + std::to_string(k) + " dimensions differ");
    }
  }

  const int w = movie[0].width();
  const int h = movie[0].height();
  const std::size_t n = static_cast<std::size_t>(w) * h;
  const double inv_frames = 1.0 / static_cast<double>(movie.size());

  MovieDecomposition result;
  result.static_image = ColorRaster(w, h);
  for (int c = 0; c < 3; ++c) {
    std::vector<double>& mean = result.static_image.plane[c].data;
    for (const ColorRaster& frame : movie) {
      const std::vector<double>& src = frame.plane[c].data;
      for (std::size_t i = 0; i < n; ++i) mean[i] += src[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
      mean[i] = std::clamp(mean[i] * inv_frames, 0.0, 1.0);
    }
  }

  result.dynamic.reserve(movie.size());
  for (const ColorRaster& frame : movie) {
    SignedColorRaster diff(w, h);
    for (int c = 0; c < 3; ++c) {
      const std::vector<double>& src = frame.plane[c].data;
      const std::vector<double>& mean = result.static_image.plane[c].data;
      std::vector<double>& dst = diff.plane[c].data;
      for (std::size_t i = 0; i < n; ++i) dst[i] = src[i] - mean[i];
    }
    result.dynamic.push_back(std::move(diff));
  }
  return result;
}

SignedRaster luminance_residual(const Raster& lum_frame, const Raster& lum_static) {
  if (!lum_frame.same_size(lum_static)) {
    throw DimensionError("luminance residual: frame and static image dimensions differ");
  }
  SignedRaster out(lum_frame.width, lum_frame.height);
  const std::size_t n = out.pixel_count();
  for (std::size_t i = 0; i < n; ++i) {
    out.data[i] = lum_frame.data[i] - lum_static.data[i];
  }
  return out;
}

std::pair<Raster, SynthesisReport> projection_signal(const SignedRaster& residual,
                                                     const ProjectionParams& params,
                                                     const Raster* reflectance_lum) {
  validate(params);
  if (params.compensation == Compensation::reflectance) {
    if (reflectance_lum == nullptr) {
      throw ConfigError("reflectance compensation requires a luminance reflectance map");
    }
    if (reflectance_lum->width != residual.width ||
        reflectance_lum->height != residual.height) {
      throw DimensionError("projection signal: reflectance map dimensions differ");
    }
  }

  Raster out(residual.width, residual.height);
  SynthesisReport report;
  report.pre_clip_min = std::numeric_limits<double>::infinity();
  report.pre_clip_max = -std::numeric_limits<double>::infinity();
  std::size_t clipped = 0;
  const std::size_t n = residual.pixel_count();
  for (std::size_t i = 0; i < n; ++i) {
    double w_eff = params.weight;
    if (params.compensation == Compensation::reflectance) {
      w_eff = params.weight / std::max(reflectance_lum->data[i], params.k_min);
    }
    const double value = w_eff * residual.data[i] + params.background;
    report.pre_clip_min = std::min(report.pre_clip_min, value);
    report.pre_clip_max = std::max(report.pre_clip_max, value);
    if (value < 0.0 || value > 1.0) ++clipped;
    out.data[i] = std::clamp(value, 0.0, 1.0);
  }
  report.clipped_fraction = static_cast<double>(clipped) / static_cast<double>(n);

  if (params.clip_policy == ClipPolicy::error_if_over &&
      report.clipped_fraction > params.clip_threshold) {
    throw DataError("projection signal clipped " + std::to_string(report.clipped_fraction) +
                    " of pixels, above the allowed " + std::to_string(params.clip_threshold));
  }
  return {std::move(out), report};
}

std::size_t select_keyframe(const std::vector<ColorRaster>& movie) {
  if (movie.empty()) {
    throw DataError("cannot select a keyframe of an empty movie");
  }
  const MovieDecomposition decomp = decompose_movie(movie);
  std::size_t best = 0;
  double best_sq = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < decomp.dynamic.size(); ++k) {
    double sq = 0.0;
    for (int c = 0; c < 3; ++c) {
      for (double v : decomp.dynamic[k].plane[c].data) sq += v * v;
    }
    if (sq < best_sq) {
      best_sq = sq;
      best = k;
    }
  }
  return best;
}

ProjectionSequence build_projection_sequence(const Raster& target_lum,
                                             const std::vector<DisplacementField>& fields,
                                             const ViewingGeometry& geom,
                                             const WarpOptions& opts,
                                             const ProjectionParams& params,
                                             const Raster* reflectance_lum) {
  ProjectionSequence seq;
  seq.frames.reserve(fields.size());
  seq.reports.reserve(fields.size());
  for (std::size_t k = 0; k < fields.size(); ++k) {
    try {
      const Raster warped = warp_image(target_lum, fields[k], geom, opts);
      const SignedRaster residual = luminance_residual(warped, target_lum);
      auto [frame, report] = projection_signal(residual, params, reflectance_lum);
      seq.frames.push_back(std::move(frame));
      seq.reports.push_back(report);
    } catch (const ConfigError&) {
      throw;  // parameter problems are not frame-specific
    } catch (const DimensionError& e) {
      throw DimensionError("frame " + std::to_string(k) + ": " + e.what());
    } catch (const DataError& e) {
      throw DataError("frame " + std::to_string(k) + ": " + e.what());
    }
  }
  return seq;
}

}  // namespace dlamps
