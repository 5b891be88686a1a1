#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "dlamps/raster.hpp"
#include "dlamps/warp.hpp"

namespace dlamps {

enum class ClipPolicy { clamp_and_report, error_if_over };
enum class Compensation { off, reflectance };

/// Parameters of the projected signal P = w_eff * residual + B.
/// With compensation off, w_eff is the scalar weight; with reflectance
/// compensation, w_eff = weight / max(K, k_min) per pixel.
struct ProjectionParams {
  double weight = 0.4;      // w
  double background = 0.5;  // B, gray level keeping the signal non-negative
  ClipPolicy clip_policy = ClipPolicy::clamp_and_report;
  double clip_threshold = 0.0;  // max clipped fraction tolerated by error_if_over
  Compensation compensation = Compensation::off;
  double k_min = 0.1;  // reflectance floor bounding 1/K weighting
};

struct SynthesisReport {
  double clipped_fraction = 0.0;
  double pre_clip_min = 0.0;
  double pre_clip_max = 0.0;
};

struct MovieDecomposition {
  ColorRaster static_image;                // per-pixel temporal mean
  std::vector<SignedColorRaster> dynamic;  // frame - mean; re-adding is exact
};

MovieDecomposition decompose_movie(const std::vector<ColorRaster>& movie);

SignedRaster luminance_residual(const Raster& lum_frame, const Raster& lum_static);

std::pair<Raster, SynthesisReport> projection_signal(const SignedRaster& residual,
                                                     const ProjectionParams& params,
                                                     const Raster* reflectance_lum = nullptr);

/// Index of the frame closest (RMS) to the temporal mean; ties go to the
/// lowest index.
std::size_t select_keyframe(const std::vector<ColorRaster>& movie);

struct ProjectionSequence {
  std::vector<Raster> frames;
  std::vector<SynthesisReport> reports;
};

/// Per frame: warp the target luminance by the field, subtract the target,
/// and form the projection signal.
ProjectionSequence build_projection_sequence(const Raster& target_lum,
                                             const std::vector<DisplacementField>& fields,
                                             const ViewingGeometry& geom,
                                             const WarpOptions& opts,
                                             const ProjectionParams& params,
                                             const Raster* reflectance_lum = nullptr);

}  // namespace dlamps
