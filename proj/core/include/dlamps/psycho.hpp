#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "dlamps/geometry.hpp"
#include "dlamps/optics.hpp"
#include "dlamps/raster.hpp"
#include "dlamps/synth.hpp"
#include "dlamps/warp.hpp"

namespace dlamps {

// Stimulus grids of the two threshold experiments.
inline constexpr std::array<double, 6> kExp1AmplitudesCm{0.1, 0.2, 0.4, 0.8, 1.7, 3.3};
inline constexpr std::array<double, 3> kExp1SpatialFreqs{1.0, 2.0, 4.0};
inline constexpr std::array<double, 2> kExp1DistancesCm{110.0, 220.0};
inline constexpr std::array<double, 8> kExp2LevelsCm{0.05, 0.1, 0.15, 0.21,
                                                     0.26, 0.31, 0.36, 0.40};
inline constexpr double kExp2ReferenceAmplitudeCm = 0.21;

struct Exp1Condition {
  double amplitude_cm = 0.4;
  double spatial_freq = 1.0;   // cycles per image
  double distance_cm = 110.0;
  double temporal_freq = 1.0;  // Hz, fixed by the protocol

  /// Values must come from the enumerated grids.
  void validate() const;
};

/// One trial stimulus: a 1 s deformation-driven projection segment followed
/// by a 1 s uniform background segment, 2*fps frames in total. The spatial
/// phase of the sinusoid is drawn from the seed.
std::vector<Raster> exp1_stimulus(const Raster& target_lum, const Exp1Condition& cond,
                                  const ViewingGeometry& geom, const SequenceSpec& spec,
                                  const ProjectionParams& params, std::uint64_t seed);

enum class Exp2Mode { pixel_warp, deformation_lamps };

/// Shared assets of a matching-experiment stimulus pair. Both sides use the
/// same sinusoid shape (phase drawn from the seed); only amplitude and
/// rendering mode differ.
struct Exp2Assets {
  ColorRaster target;
  ViewingGeometry geom{110.0, 13.2 / 512.0};
  SequenceSpec seq{30, 30.0};
  double spatial_freq = 1.0;
  double temporal_freq = 1.0;
  WarpOptions warp_opts{};
  ProjectionParams projection{};
  double ambient_level = 0.0;
  double blur_sigma_px = 0.0;
  std::uint64_t seed = 0;
};

struct Exp2StimulusPair {
  std::vector<ColorRaster> left;
  std::vector<ColorRaster> right;
};

/// Left: full-color pixel-warp movie at left_amplitude_cm (one of the eight
/// comparison levels). Right: the 0.21 cm reference, rendered either as a
/// pixel warp or as the simulated luminance-projection composite.
Exp2StimulusPair exp2_stimulus_pair(double left_amplitude_cm, Exp2Mode mode,
                                    const Exp2Assets& assets);

struct Trial {
  double level_cm = 0.0;
  int response = 0;  // 0 or 1
};
using PsychometricDataset = std::vector<Trial>;

struct PsychometricFit {
  double mu = 0.0;     // 50% point, cm
  double sigma = 0.0;  // slope, cm
  double log_likelihood = 0.0;
};

/// Maximum-likelihood fit of p(level) = Phi((level - mu)/sigma), grid-seeded
/// then refined with a Nelder-Mead simplex. Deterministic and invariant to
/// trial order. Decreasing datasets should be fitted on flipped responses;
/// the 50% crossing is unchanged.
PsychometricFit fit_cumulative_gaussian(const PsychometricDataset& data);

/// Same fit but refined from a caller-supplied start instead of the grid.
PsychometricFit fit_cumulative_gaussian(const PsychometricDataset& data,
                                        double start_mu, double start_sigma);

double critical_amplitude(const PsychometricFit& fit);
double pse(const PsychometricFit& fit);

/// One row of the trial CSV (header:
/// observer_id,image_id,distance_cm,spatial_freq_cpi,amplitude_cm,response).
struct TrialRecord {
  std::string observer_id;
  std::string image_id;
  double distance_cm = 0.0;
  double spatial_freq = 0.0;
  double amplitude_cm = 0.0;
  int response = 0;
};

std::vector<TrialRecord> load_trial_csv(const std::string& path);

}  // namespace dlamps
