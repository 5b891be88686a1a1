#include "dlamps/psycho.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "dlamps/fields.hpp"
#include "dlamps/rng.hpp"

namespace dlamps {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

bool in_grid(double value, const double* grid, std::size_t n, double tol = 1e-9) {
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(value - grid[i]) <= tol) return true;
  }
  return false;
}

double cumulative_normal(double z) {
  return 0.5 * std::erfc(-z / 1.4142135623730950488);
}

struct LevelGroup {
  double level;
  int total;
  int positive;
};

std::vector<LevelGroup> group_by_level(const PsychometricDataset& data) {
  std::map<double, std::pair<int, int>> groups;
  for (const Trial& t : data) {
    auto& g = groups[t.level_cm];
    g.first += 1;
    g.second += t.response != 0 ? 1 : 0;
  }
  std::vector<LevelGroup> out;
  out.reserve(groups.size());
  for (const auto& [level, counts] : groups) {
    out.push_back({level, counts.first, counts.second});
  }
  return out;
}

double negative_log_likelihood(const std::vector<LevelGroup>& groups, double mu,
                               double log_sigma) {
  const double sigma = std::exp(log_sigma);
  double nll = 0.0;
  for (const LevelGroup& g : groups) {
    double p = cumulative_normal((g.level - mu) / sigma);
    p = std::clamp(p, 1e-12, 1.0 - 1e-12);
    nll -= g.positive * std::log(p) + (g.total - g.positive) * std::log1p(-p);
  }
  return nll;
}

// Nelder-Mead on (mu, log sigma). Deterministic: fixed coefficients, fixed
// iteration budget, strict tie-breaking by vertex order.
std::pair<std::array<double, 2>, double> nelder_mead(
    const std::vector<LevelGroup>& groups, std::array<double, 2> start,
    std::array<double, 2> step) {
  using Vertex = std::pair<std::array<double, 2>, double>;
  auto eval = [&groups](const std::array<double, 2>& p) {
    return negative_log_likelihood(groups, p[0], p[1]);
  };

  std::array<Vertex, 3> simplex;
  simplex[0] = {start, eval(start)};
  for (int k = 0; k < 2; ++k) {
    std::array<double, 2> v = start;
    v[k] += step[k];
    simplex[k + 1] = {v, eval(v)};
  }

  for (int iter = 0; iter < 500; ++iter) {
    std::stable_sort(simplex.begin(), simplex.end(),
                     [](const Vertex& a, const Vertex& b) { return a.second < b.second; });
    const double spread = simplex[2].second - simplex[0].second;
    const double size = std::abs(simplex[2].first[0] - simplex[0].first[0]) +
                        std::abs(simplex[2].first[1] - simplex[0].first[1]) +
                        std::abs(simplex[1].first[0] - simplex[0].first[0]) +
                        std::abs(simplex[1].first[1] - simplex[0].first[1]);
    if (spread < 1e-12 && size < 1e-10) break;

    const std::array<double, 2> centroid{(simplex[0].first[0] + simplex[1].first[0]) / 2.0,
                                         (simplex[0].first[1] + simplex[1].first[1]) / 2.0};
    auto blend = [&centroid, &simplex](double coeff) {
      return std::array<double, 2>{centroid[0] + coeff * (simplex[2].first[0] - centroid[0]),
                                   centroid[1] + coeff * (simplex[2].first[1] - centroid[1])};
    };

    const std::array<double, 2> reflected = blend(-1.0);
    const double f_reflected = eval(reflected);
    if (f_reflected < simplex[0].second) {
      const std::array<double, 2> expanded = blend(-2.0);
      const double f_expanded = eval(expanded);
      simplex[2] = f_expanded < f_reflected ? Vertex{expanded, f_expanded}
                                            : Vertex{reflected, f_reflected};
      continue;
    }
    if (f_reflected < simplex[1].second) {
      simplex[2] = {reflected, f_reflected};
      continue;
    }
    const std::array<double, 2> contracted = blend(0.5);
    const double f_contracted = eval(contracted);
    if (f_contracted < simplex[2].second) {
      simplex[2] = {contracted, f_contracted};
      continue;
    }
    for (int k = 1; k < 3; ++k) {  // shrink toward the best vertex
      for (int d = 0; d < 2; ++d) {
        simplex[k].first[d] = simplex[0].first[d] + 0.5 * (simplex[k].first[d] - simplex[0].first[d]);
      }
      simplex[k].second = eval(simplex[k].first);
    }
  }

  std::stable_sort(simplex.begin(), simplex.end(),
                   [](const Vertex& a, const Vertex& b) { return a.second < b.second; });
  return {simplex[0].first, simplex[0].second};
}

std::vector<LevelGroup> validated_groups(const PsychometricDataset& data) {
  if (data.empty()) {
    throw DataError("psychometric dataset is empty");
  }
  for (const Trial& t : data) {
    if (t.response != 0 && t.response != 1) {
      throw DataError("psychometric responses must be 0 or 1");
    }
  }
  const std::vector<LevelGroup> groups = group_by_level(data);
  int positives = 0;
  int total = 0;
  for (const LevelGroup& g : groups) {
    positives += g.positive;
    total += g.total;
  }
  if (positives == 0 || positives == total) {
    throw DegenerateDataError("all responses identical; no psychometric fit possible");
  }
  if (groups.size() < 2) {
    throw DataError("psychometric fit needs at least 2 distinct stimulus levels");
  }
  return groups;
}

PsychometricFit finish_fit(const std::vector<LevelGroup>& groups,
                           std::array<double, 2> start, std::array<double, 2> step) {
  const auto [best, nll] = nelder_mead(groups, start, step);
  PsychometricFit fit;
  fit.mu = best[0];
  fit.sigma = std::exp(best[1]);
  fit.log_likelihood = -nll;
  return fit;
}

}  // namespace

void Exp1Condition::validate() const {
  // Zero is allowed as a catch-trial amplitude on top of the standard grid.
  if (amplitude_cm != 0.0 &&
      !in_grid(amplitude_cm, kExp1AmplitudesCm.data(), kExp1AmplitudesCm.size())) {
    throw ConfigError("amplitude " + std::to_string(amplitude_cm) +
                      " cm is not one of the supported levels");
  }
  if (!in_grid(spatial_freq, kExp1SpatialFreqs.data(), kExp1SpatialFreqs.size())) {
    throw ConfigError("spatial frequency " + std::to_string(spatial_freq) +
                      " is not one of 1, 2, 4 cycles/image");
  }
  if (!in_grid(distance_cm, kExp1DistancesCm.data(), kExp1DistancesCm.size())) {
    throw ConfigError("distance " + std::to_string(distance_cm) + " cm is not 110 or 220");
  }
  if (std::abs(temporal_freq - 1.0) > 1e-9) {
    throw ConfigError("temporal frequency is fixed at 1 Hz");
  }
}

std::vector<Raster> exp1_stimulus(const Raster& target_lum, const Exp1Condition& cond,
                                  const ViewingGeometry& geom, const SequenceSpec& spec,
                                  const ProjectionParams& params, std::uint64_t seed) {
  cond.validate();
  const double rounded = std::round(spec.fps);
  if (std::abs(spec.fps - rounded) > 1e-9 || rounded < 1.0) {
    throw ConfigError("fps must be a positive integer so 1 s segments hold whole frames");
  }
  const int fps = static_cast<int>(rounded);

  CounterRng rng(seed);
  SinusoidParams sine;
  sine.amplitude_cm = cond.amplitude_cm;
  sine.spatial_freq = cond.spatial_freq;
  sine.spatial_phase = kTwoPi * rng.uniform(0);
  sine.temporal_freq = cond.temporal_freq;
  sine.temporal_phase = 0.0;

  std::vector<DisplacementField> fields;
  fields.reserve(fps);
  for (int k = 0; k < fps; ++k) {
    fields.push_back(
        sinusoidal_field(sine, k / static_cast<double>(fps), target_lum.width, target_lum.height));
  }
  ProjectionSequence motion =
      build_projection_sequence(target_lum, fields, geom, WarpOptions{}, params);

  std::vector<Raster> frames = std::move(motion.frames);
  frames.reserve(2 * fps);
  for (int k = 0; k < fps; ++k) {
    frames.emplace_back(target_lum.width, target_lum.height, params.background);
  }
  return frames;
}

Exp2StimulusPair exp2_stimulus_pair(double left_amplitude_cm, Exp2Mode mode,
                                    const Exp2Assets& assets) {
  if (!in_grid(left_amplitude_cm, kExp2LevelsCm.data(), kExp2LevelsCm.size())) {
    throw ConfigError("invalid comparison level " + std::to_string(left_amplitude_cm) +
                      " cm; must be one of the eight supported levels");
  }

  CounterRng rng(assets.seed);
  SinusoidParams sine;
  sine.spatial_freq = assets.spatial_freq;
  sine.spatial_phase = kTwoPi * rng.uniform(0);
  sine.temporal_freq = assets.temporal_freq;
  sine.temporal_phase = 0.0;

  auto fields_at = [&](double amplitude) {
    SinusoidParams p = sine;
    p.amplitude_cm = amplitude;
    std::vector<DisplacementField> fields;
    fields.reserve(assets.seq.frame_count);
    for (int k = 0; k < assets.seq.frame_count; ++k) {
      fields.push_back(sinusoidal_field(p, k / assets.seq.fps, assets.target.width(),
                                        assets.target.height()));
    }
    return fields;
  };

  Exp2StimulusPair pair;
  for (const DisplacementField& f : fields_at(left_amplitude_cm)) {
    pair.left.push_back(warp_color(assets.target, f, assets.geom, assets.warp_opts));
  }

  const std::vector<DisplacementField> right_fields = fields_at(kExp2ReferenceAmplitudeCm);
  if (mode == Exp2Mode::pixel_warp) {
    for (const DisplacementField& f : right_fields) {
      pair.right.push_back(warp_color(assets.target, f, assets.geom, assets.warp_opts));
    }
  } else {
    const Raster target_lum = to_luminance(assets.target);
    ProjectionSequence projection = build_projection_sequence(
        target_lum, right_fields, assets.geom, assets.warp_opts, assets.projection);
    const SceneSetup scene = SceneSetup::with_uniform_ambient(
        assets.target, assets.ambient_level, assets.blur_sigma_px);
    pair.right = simulate_perceived_sequence(scene, projection.frames);
  }
  return pair;
}

PsychometricFit fit_cumulative_gaussian(const PsychometricDataset& data) {
  const std::vector<LevelGroup> groups = validated_groups(data);

  const double lo = groups.front().level;
  const double hi = groups.back().level;
  const double range = hi - lo;

  double best_mu = (lo + hi) / 2.0;
  double best_ls = std::log(range / 4.0);
  double best_nll = std::numeric_limits<double>::infinity();
  constexpr int kMuPoints = 61;
  constexpr int kSigmaPoints = 41;
  for (int i = 0; i < kMuPoints; ++i) {
    const double mu = lo - 0.5 * range + (2.0 * range) * i / (kMuPoints - 1);
    for (int j = 0; j < kSigmaPoints; ++j) {
      const double ls = std::log(range / 200.0) +
                        (std::log(range * 2.0) - std::log(range / 200.0)) * j / (kSigmaPoints - 1);
      const double nll = negative_log_likelihood(groups, mu, ls);
      if (nll < best_nll) {
        best_nll = nll;
        best_mu = mu;
        best_ls = ls;
      }
    }
  }
  return finish_fit(groups, {best_mu, best_ls}, {std::max(range * 0.05, 1e-6), 0.25});
}

PsychometricFit fit_cumulative_gaussian(const PsychometricDataset& data,
                                        double start_mu, double start_sigma) {
  if (!(start_sigma > 0.0)) {
    throw ConfigError("starting sigma must be > 0");
  }
  const std::vector<LevelGroup> groups = validated_groups(data);
  const double range = groups.back().level - groups.front().level;
  return finish_fit(groups, {start_mu, std::log(start_sigma)},
                    {std::max(range * 0.05, 1e-6), 0.25});
}

double critical_amplitude(const PsychometricFit& fit) {
  if (!(fit.sigma > 0.0)) {
    throw DataError("invalid psychometric fit (sigma must be > 0)");
  }
  return fit.mu;
}

double pse(const PsychometricFit& fit) {
  if (!(fit.sigma > 0.0)) {
    throw DataError("invalid psychometric fit (sigma must be > 0)");
  }
  return fit.mu;
}

std::vector<TrialRecord> load_trial_csv(const std::string& path) {
  std::ifstream file(path);
  if (!file) {
    throw FormatError("cannot open trial CSV: " + path);
  }

  auto split = [](const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
      const auto begin = field.find_first_not_of(" \t\r");
      const auto end = field.find_last_not_of(" \t\r");
      fields.push_back(begin == std::string::npos ? "" : field.substr(begin, end - begin + 1));
    }
    return fields;
  };

  std::string line;
  if (!std::getline(file, line)) {
    throw FormatError("trial CSV is empty: " + path);
  }
  const std::vector<std::string> header = split(line);
  const std::vector<std::string> expected{"observer_id", "image_id", "distance_cm",
                                          "spatial_freq_cpi", "amplitude_cm", "response"};
  if (header != expected) {
    throw FormatError("trial CSV header must be: observer_id,image_id,distance_cm,"
                      "spatial_freq_cpi,amplitude_cm,response");
  }

  std::vector<TrialRecord> records;
  std::size_t line_no = 1;
  while (std::getline(file, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> fields = split(line);
    if (fields.size() != 6) {
      throw FormatError("trial CSV line " + std::to_string(line_no) +
                        ": expected 6 fields, got " + std::to_string(fields.size()));
    }
    TrialRecord rec;
    rec.observer_id = fields[0];
    rec.image_id = fields[1];
    try {
      rec.distance_cm = std::stod(fields[2]);
      rec.spatial_freq = std::stod(fields[3]);
      rec.amplitude_cm = std::stod(fields[4]);
      rec.response = std::stoi(fields[5]);
    } catch (const std::exception&) {
      throw FormatError("trial CSV line " + std::to_string(line_no) + ": invalid number");
    }
    if (rec.response != 0 && rec.response != 1) {
      throw FormatError("trial CSV line " + std::to_string(line_no) +
                        ": response must be 0 or 1");
    }
    if (!(rec.amplitude_cm > 0.0)) {
      throw FormatError("trial CSV line " + std::to_string(line_no) +
                        ": amplitude_cm must be > 0");
    }
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace dlamps
