#include "dlamps/runner.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <tuple>
#include <vector>

#include "dlamps/errors.hpp"
#include "dlamps/field_io.hpp"
#include "dlamps/fields.hpp"
#include "dlamps/geometry.hpp"
#include "dlamps/optics.hpp"
#include "dlamps/png_io.hpp"
#include "dlamps/psycho.hpp"
#include "dlamps/raster.hpp"
#include "dlamps/rng.hpp"
#include "dlamps/synth.hpp"
#include "dlamps/version.hpp"
#include "dlamps/warp.hpp"

namespace fs = std::filesystem;

namespace dlamps {

// ---------------------------------------------------------------------------
// RunConfig

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream file(path);
  if (!file) {
    throw ConfigError("cannot open config file: " + path);
  }
  RunConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(file, line)) {
    ++line_no;
    const auto hash_pos = line.find('#');
    if (hash_pos != std::string::npos) line.erase(hash_pos);
    const auto begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos) continue;
    const auto end = line.find_last_not_of(" \t\r");
    line = line.substr(begin, end - begin + 1);

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected 'key = value', got '" + line + "'");
    }
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    const auto trim = [](std::string& s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      s = b == std::string::npos ? "" : s.substr(b, e - b + 1);
    };
    trim(key);
    trim(value);
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    }
    cfg.values_[key] = value;
  }
  return cfg;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  values_[key] = value;
}

void RunConfig::apply_override(const std::string& key_equals_value) {
  const auto eq = key_equals_value.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override must be 'key=value', got '" + key_equals_value + "'");
  }
  values_[key_equals_value.substr(0, eq)] = key_equals_value.substr(eq + 1);
}

bool RunConfig::has(const std::string& key) const { return values_.count(key) > 0; }

std::string RunConfig::get_string(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    throw ConfigError("missing config key '" + key + "'");
  }
  return it->second;
}

std::string RunConfig::get_string_or(const std::string& key,
                                     const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double RunConfig::get_double(const std::string& key) const {
  const std::string text = get_string(key);
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': expected a number, got '" + text + "'");
  }
}

double RunConfig::get_double_or(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

int RunConfig::get_int(const std::string& key) const {
  const std::string text = get_string(key);
  try {
    std::size_t used = 0;
    const int v = std::stoi(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': expected an integer, got '" + text + "'");
  }
}

int RunConfig::get_int_or(const std::string& key, int fallback) const {
  return has(key) ? get_int(key) : fallback;
}

std::uint64_t RunConfig::get_seed_or(const std::string& key, std::uint64_t fallback) const {
  if (!has(key)) return fallback;
  const std::string text = get_string(key);
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return static_cast<std::uint64_t>(v);
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': expected an unsigned integer, got '" +
                      text + "'");
  }
}

std::string RunConfig::canonical() const {
  std::string out;
  for (const auto& [key, value] : values_) {
    out += key;
    out += '=';
    out += value;
    out += '\n';
  }
  return out;
}

std::uint64_t RunConfig::hash() const {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a 64
  for (const char c : canonical()) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

// ---------------------------------------------------------------------------
// Shared command helpers

namespace {

std::string format_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string frame_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "frame_%06zu.png", index);
  return buf;
}

std::string hex64(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

/// Records output files as they are produced and writes manifest.txt last,
/// with a crc32 and byte size per file.
class ManifestWriter {
 public:
  explicit ManifestWriter(fs::path root) : root_(std::move(root)) {}

  void record(const fs::path& file) {
    rel_paths_.push_back(fs::relative(file, root_).generic_string());
  }

  void write(const std::string& subcommand, std::uint64_t config_hash) {
    std::sort(rel_paths_.begin(), rel_paths_.end());
    std::ostringstream body;
    body << "tool " << kToolName << "\n";
    body << "version " << kToolVersion << "\n";
    body << "subcommand " << subcommand << "\n";
    body << "config_hash " << hex64(config_hash) << "\n";
    for (const std::string& rel : rel_paths_) {
      const fs::path full = root_ / rel;
      std::ifstream file(full, std::ios::binary);
      if (!file) throw Error("cannot re-open output file for checksum: " + full.string());
      std::vector<char> bytes((std::istreambuf_iterator<char>(file)),
                              std::istreambuf_iterator<char>());
      unsigned long crc = crc32(0L, Z_NULL, 0);
      crc = crc32(crc, reinterpret_cast<const Bytef*>(bytes.data()),
                  static_cast<uInt>(bytes.size()));
      char crc_hex[16];
      std::snprintf(crc_hex, sizeof(crc_hex), "%08lx", crc);
      body << "file " << rel << " crc32 " << crc_hex << " size " << bytes.size() << "\n";
    }
    std::ofstream out(root_ / "manifest.txt", std::ios::trunc);
    if (!out) throw Error("cannot write manifest in " + root_.string());
    out << body.str();
  }

 private:
  fs::path root_;
  std::vector<std::string> rel_paths_;
};

fs::path output_dir(const RunConfig& cfg) {
  const fs::path dir = cfg.get_string("output");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw ConfigError("config key 'output': cannot create directory " + dir.string());
  }
  return dir;
}

std::string require_file(const RunConfig& cfg, const std::string& key) {
  const std::string path = cfg.get_string(key);
  if (!fs::is_regular_file(path)) {
    throw ConfigError("config key '" + key + "': file not found: " + path);
  }
  return path;
}

std::string require_dir(const RunConfig& cfg, const std::string& key) {
  const std::string path = cfg.get_string(key);
  if (!fs::is_directory(path)) {
    throw ConfigError("config key '" + key + "': directory not found: " + path);
  }
  return path;
}

bool get_bool_or(const RunConfig& cfg, const std::string& key, bool fallback) {
  if (!cfg.has(key)) return fallback;
  const std::string v = cfg.get_string(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config key '" + key + "': expected a boolean, got '" + v + "'");
}

ViewingGeometry geometry_from(const RunConfig& cfg) {
  return ViewingGeometry(cfg.get_double_or("distance_cm", 110.0),
                         cfg.get_double("pixel_pitch_cm"));
}

WarpOptions warp_options_from(const RunConfig& cfg) {
  WarpOptions opts;
  const std::string boundary = cfg.get_string_or("boundary", "clamp");
  if (boundary == "clamp") {
    opts.boundary = Boundary::clamp;
  } else if (boundary == "periodic") {
    opts.boundary = Boundary::periodic;
  } else if (boundary == "mirror") {
    opts.boundary = Boundary::mirror;
  } else {
    throw ConfigError("config key 'boundary': expected clamp|periodic|mirror, got '" +
                      boundary + "'");
  }
  const std::string interp = cfg.get_string_or("interpolation", "bilinear");
  if (interp == "bilinear") {
    opts.interpolation = Interpolation::bilinear;
  } else if (interp == "bicubic") {
    opts.interpolation = Interpolation::bicubic;
  } else {
    throw ConfigError("config key 'interpolation': expected bilinear|bicubic, got '" +
                      interp + "'");
  }
  return opts;
}

ProjectionParams projection_from(const RunConfig& cfg) {
  ProjectionParams params;
  params.weight = cfg.get_double_or("weight", 0.4);
  params.background = cfg.get_double_or("background", 0.5);
  const std::string clip = cfg.get_string_or("clip_policy", "clamp");
  if (clip == "clamp") {
    params.clip_policy = ClipPolicy::clamp_and_report;
  } else if (clip == "error") {
    params.clip_policy = ClipPolicy::error_if_over;
    params.clip_threshold = cfg.get_double_or("clip_threshold", 0.0);
  } else {
    throw ConfigError("config key 'clip_policy': expected clamp|error, got '" + clip + "'");
  }
  const std::string comp = cfg.get_string_or("compensation", "off");
  if (comp == "off") {
    params.compensation = Compensation::off;
  } else if (comp == "reflectance") {
    params.compensation = Compensation::reflectance;
    params.k_min = cfg.get_double_or("k_min", 0.1);
  } else {
    throw ConfigError("config key 'compensation': expected off|reflectance, got '" + comp +
                      "'");
  }
  return params;
}

int bit_depth_from(const RunConfig& cfg) {
  const int depth = cfg.get_int_or("bit_depth", 16);
  if (depth != 8 && depth != 16) {
    throw ConfigError("config key 'bit_depth': expected 8 or 16");
  }
  return depth;
}

int integer_fps_from(const RunConfig& cfg) {
  const double fps = cfg.get_double("fps");
  const double rounded = std::round(fps);
  if (std::abs(fps - rounded) > 1e-9 || rounded < 1.0) {
    throw ConfigError("config key 'fps': expected a positive integer frame rate");
  }
  return static_cast<int>(rounded);
}

std::vector<fs::path> list_png_frames(const fs::path& dir) {
  std::vector<fs::path> frames;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".png") {
      frames.push_back(entry.path());
    }
  }
  std::sort(frames.begin(), frames.end());
  if (frames.empty()) {
    throw DataError("no .png frames found in " + dir.string());
  }
  return frames;
}

// ---------------------------------------------------------------------------
// Subcommands

void cmd_gen_map(const RunConfig& cfg, std::ostream& out) {
  const int width = cfg.get_int("width");
  const int height = cfg.get_int("height");
  const double fps = cfg.get_double("fps");
  int frames = 0;
  if (cfg.has("frames")) {
    frames = cfg.get_int("frames");
  } else if (cfg.has("seconds")) {
    frames = static_cast<int>(std::lround(cfg.get_double("seconds") * fps));
  } else {
    throw ConfigError("missing config key 'frames' (or 'seconds')");
  }
  const SequenceSpec spec(frames, fps);
  const fs::path dir = output_dir(cfg);

  const std::string type = cfg.get_string("type");
  std::vector<DisplacementField> fields;
  if (type == "sinusoid") {
    SinusoidParams params;
    params.amplitude_cm = cfg.get_double("amplitude_cm");
    params.spatial_freq = cfg.get_double_or("spatial_freq_cpi", 1.0);
    params.temporal_freq = cfg.get_double_or("temporal_freq_hz", 1.0);
    params.temporal_phase = cfg.get_double_or("temporal_phase_rad", 0.0);
    if (get_bool_or(cfg, "randomize_spatial_phase", false)) {
      params.spatial_phase =
          6.283185307179586 * CounterRng(cfg.get_seed_or("seed", 0)).uniform(0);
    } else {
      params.spatial_phase = cfg.get_double_or("spatial_phase_rad", 0.0);
    }
    fields.reserve(frames);
    for (int k = 0; k < frames; ++k) {
      fields.push_back(sinusoidal_field(params, k / fps, width, height));
    }
  } else if (type == "noise") {
    NoiseFieldParams params;
    params.rms_amplitude_cm = cfg.get_double("rms_amplitude_cm");
    params.spatial_band = {cfg.get_double("spatial_band_lo_cpi"),
                           cfg.get_double("spatial_band_hi_cpi")};
    params.temporal_band = {cfg.get_double("temporal_band_lo_hz"),
                            cfg.get_double("temporal_band_hi_hz")};
    params.seed = cfg.get_seed_or("seed", 0);
    fields = noise_field_sequence(params, spec, width, height);
  } else {
    throw ConfigError("config key 'type': expected sinusoid or noise, got '" + type + "'");
  }

  ManifestWriter manifest(dir);
  const fs::path field_path = dir / "field.dlf";
  save_field_sequence(fields, field_path.string());
  manifest.record(field_path);
  manifest.write("gen-map", cfg.hash());
  out << "wrote " << fields.size() << " field frames to " << field_path.string() << "\n";
}

void cmd_warp(const RunConfig& cfg, std::ostream& out) {
  const std::string input = require_file(cfg, "input");
  const std::string field_path = require_file(cfg, "field");
  const ViewingGeometry geom = geometry_from(cfg);
  const WarpOptions opts = warp_options_from(cfg);
  const int depth = bit_depth_from(cfg);
  const fs::path dir = output_dir(cfg);

  const std::vector<DisplacementField> fields = load_field_sequence(field_path);
  PngMeta meta;
  const ColorRaster source = load_png_color(input, &meta);

  ManifestWriter manifest(dir);
  for (std::size_t k = 0; k < fields.size(); ++k) {
    const fs::path frame_path = dir / frame_name(k);
    try {
      if (meta.grayscale) {
        save_png_gray(warp_image(source.plane[0], fields[k], geom, opts),
                      frame_path.string(), depth);
      } else {
        save_png_color(warp_color(source, fields[k], geom, opts), frame_path.string(), depth);
      }
    } catch (const DimensionError& e) {
      throw DimensionError("frame " + std::to_string(k) + ": " + e.what());
    }
    manifest.record(frame_path);
  }
  manifest.write("warp", cfg.hash());
  out << "wrote " << fields.size() << " warped frames to " << dir.string() << "\n";
}

void cmd_synth(const RunConfig& cfg, std::ostream& out) {
  const std::string target_path = require_file(cfg, "target");
  const std::string field_path = require_file(cfg, "field");
  const ViewingGeometry geom = geometry_from(cfg);
  const WarpOptions opts = warp_options_from(cfg);
  const ProjectionParams params = projection_from(cfg);
  const int depth = bit_depth_from(cfg);
  const fs::path dir = output_dir(cfg);

  const Raster target_lum = to_luminance(load_png_color(target_path));
  const std::vector<DisplacementField> fields = load_field_sequence(field_path);

  Raster reflectance_lum;
  const Raster* reflectance = nullptr;
  if (params.compensation == Compensation::reflectance) {
    reflectance_lum = to_luminance(load_png_color(require_file(cfg, "reflectance")));
    reflectance = &reflectance_lum;
  }

  const ProjectionSequence seq =
      build_projection_sequence(target_lum, fields, geom, opts, params, reflectance);

  ManifestWriter manifest(dir);
  for (std::size_t k = 0; k < seq.frames.size(); ++k) {
    const fs::path frame_path = dir / frame_name(k);
    save_png_gray(seq.frames[k], frame_path.string(), depth);
    manifest.record(frame_path);
  }
  std::ostringstream report;
  report << "frame,clipped_fraction,min,max\n";
  for (std::size_t k = 0; k < seq.reports.size(); ++k) {
    report << k << ',' << format_g(seq.reports[k].clipped_fraction) << ','
           << format_g(seq.reports[k].pre_clip_min) << ','
           << format_g(seq.reports[k].pre_clip_max) << "\n";
  }
  const fs::path report_path = dir / "report.csv";
  std::ofstream report_file(report_path, std::ios::trunc);
  report_file << report.str();
  report_file.close();
  manifest.record(report_path);
  manifest.write("synth", cfg.hash());
  out << "wrote " << seq.frames.size() << " projection frames to " << dir.string() << "\n";
}

void cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  const std::string frames_dir = require_dir(cfg, "frames");
  const std::string reflectance_path = require_file(cfg, "reflectance");
  const double blur_sigma = cfg.get_double_or("blur_sigma_px", 0.0);
  const int depth = bit_depth_from(cfg);
  const fs::path dir = output_dir(cfg);

  ColorRaster reflectance = load_png_color(reflectance_path);
  SceneSetup scene;
  if (cfg.has("ambient_image")) {
    scene.reflectance = std::move(reflectance);
    scene.ambient = load_png_color(require_file(cfg, "ambient_image"));
    scene.blur_sigma_px = blur_sigma;
  } else {
    scene = SceneSetup::with_uniform_ambient(std::move(reflectance),
                                             cfg.get_double_or("ambient_level", 0.0),
                                             blur_sigma);
  }

  ManifestWriter manifest(dir);
  std::size_t count = 0;
  for (const fs::path& frame_path : list_png_frames(frames_dir)) {
    try {
      const Raster projection = load_png_gray(frame_path.string());
      const ColorRaster perceived = lambertian_composite(scene, projection);
      const fs::path out_path = dir / frame_path.filename();
      save_png_color(perceived, out_path.string(), depth);
      manifest.record(out_path);
    } catch (const DimensionError& e) {
      throw DimensionError("frame " + frame_path.filename().string() + ": " + e.what());
    } catch (const FormatError& e) {
      throw FormatError("frame " + frame_path.filename().string() + ": " + e.what());
    }
    ++count;
  }
  manifest.write("simulate", cfg.hash());
  out << "wrote " << count << " perceived frames to " << dir.string() << "\n";
}

void cmd_keyframe(const RunConfig& cfg, std::ostream& out) {
  const std::string frames_dir = require_dir(cfg, "frames");
  const fs::path dir = output_dir(cfg);

  std::vector<ColorRaster> movie;
  for (const fs::path& frame_path : list_png_frames(frames_dir)) {
    try {
      movie.push_back(load_png_color(frame_path.string()));
    } catch (const FormatError& e) {
      throw FormatError("frame " + frame_path.filename().string() + ": " + e.what());
    }
  }
  const std::size_t index = select_keyframe(movie);

  ManifestWriter manifest(dir);
  const fs::path result_path = dir / "keyframe.txt";
  std::ofstream result(result_path, std::ios::trunc);
  result << index << "\n";
  result.close();
  manifest.record(result_path);
  manifest.write("keyframe", cfg.hash());
  out << index << "\n";
}

void cmd_exp1_stim(const RunConfig& cfg, std::ostream& out) {
  const std::string target_path = require_file(cfg, "target");
  const ViewingGeometry geom = geometry_from(cfg);
  const int fps = integer_fps_from(cfg);
  const double distance = cfg.get_double_or("distance_cm", 110.0);
  const ProjectionParams params = projection_from(cfg);
  const std::uint64_t seed = cfg.get_seed_or("seed", 0);
  const int depth = bit_depth_from(cfg);
  const fs::path dir = output_dir(cfg);

  const Raster target_lum = to_luminance(load_png_color(target_path));
  const SequenceSpec spec(2 * fps, fps);
  const CounterRng base(seed);

  ManifestWriter manifest(dir);
  std::ostringstream conditions;
  conditions << "dir,amplitude_cm,spatial_freq_cpi,distance_cm,temporal_freq_hz,"
                "spatial_phase_rad\n";

  for (std::size_t fi = 0; fi < kExp1SpatialFreqs.size(); ++fi) {
    for (std::size_t ai = 0; ai < kExp1AmplitudesCm.size(); ++ai) {
      Exp1Condition cond;
      cond.amplitude_cm = kExp1AmplitudesCm[ai];
      cond.spatial_freq = kExp1SpatialFreqs[fi];
      cond.distance_cm = distance;
      const std::uint64_t cond_seed = base.raw(fi * kExp1AmplitudesCm.size() + ai);

      char name[64];
      std::snprintf(name, sizeof(name), "fs%d_A%.1f", static_cast<int>(cond.spatial_freq),
                    cond.amplitude_cm);
      const fs::path cond_dir = dir / name;
      std::error_code ec;
      fs::create_directories(cond_dir, ec);
      if (ec) throw Error("cannot create condition directory " + cond_dir.string());

      const std::vector<Raster> frames =
          exp1_stimulus(target_lum, cond, geom, spec, params, cond_seed);
      for (std::size_t k = 0; k < frames.size(); ++k) {
        const fs::path frame_path = cond_dir / frame_name(k);
        save_png_gray(frames[k], frame_path.string(), depth);
        manifest.record(frame_path);
      }
      conditions << name << ',' << format_g(cond.amplitude_cm) << ','
                 << format_g(cond.spatial_freq) << ',' << format_g(cond.distance_cm) << ','
                 << format_g(cond.temporal_freq) << ','
                 << format_g(6.283185307179586 * CounterRng(cond_seed).uniform(0)) << "\n";
    }
  }

  const fs::path cond_path = dir / "conditions.csv";
  std::ofstream cond_file(cond_path, std::ios::trunc);
  cond_file << conditions.str();
  cond_file.close();
  manifest.record(cond_path);
  manifest.write("exp1-stim", cfg.hash());
  out << "wrote " << kExp1SpatialFreqs.size() * kExp1AmplitudesCm.size()
      << " condition directories to " << dir.string() << "\n";
}

void cmd_exp2_stim(const RunConfig& cfg, std::ostream& out) {
  const std::string target_path = require_file(cfg, "target");
  const std::string mode_text = cfg.get_string("mode");
  Exp2Mode mode;
  if (mode_text == "pixel_warp") {
    mode = Exp2Mode::pixel_warp;
  } else if (mode_text == "deformation_lamps") {
    mode = Exp2Mode::deformation_lamps;
  } else {
    throw ConfigError("config key 'mode': expected pixel_warp|deformation_lamps, got '" +
                      mode_text + "'");
  }
  const int fps = integer_fps_from(cfg);
  const int frames = cfg.get_int_or("frames", fps);
  const int depth = bit_depth_from(cfg);
  const fs::path dir = output_dir(cfg);

  Exp2Assets assets;
  assets.target = load_png_color(target_path);
  assets.geom = geometry_from(cfg);
  assets.seq = SequenceSpec(frames, fps);
  assets.spatial_freq = cfg.get_double_or("spatial_freq_cpi", 1.0);
  assets.warp_opts = warp_options_from(cfg);
  assets.projection = projection_from(cfg);
  assets.ambient_level = cfg.get_double_or("ambient_level", 0.0);
  assets.blur_sigma_px = cfg.get_double_or("blur_sigma_px", 0.0);
  assets.seed = cfg.get_seed_or("seed", 0);

  ManifestWriter manifest(dir);
  std::ostringstream conditions;
  conditions << "dir,left_amplitude_cm,right_amplitude_cm,mode\n";

  for (const double level : kExp2LevelsCm) {
    const Exp2StimulusPair pair = exp2_stimulus_pair(level, mode, assets);
    char name[64];
    std::snprintf(name, sizeof(name), "level_%.2f", level);
    for (const char* side : {"left", "right"}) {
      const fs::path side_dir = dir / name / side;
      std::error_code ec;
      fs::create_directories(side_dir, ec);
      if (ec) throw Error("cannot create stimulus directory " + side_dir.string());
      const std::vector<ColorRaster>& seq =
          side == std::string("left") ? pair.left : pair.right;
      for (std::size_t k = 0; k < seq.size(); ++k) {
        const fs::path frame_path = side_dir / frame_name(k);
        save_png_color(seq[k], frame_path.string(), depth);
        manifest.record(frame_path);
      }
    }
    conditions << name << ',' << format_g(level) << ','
               << format_g(kExp2ReferenceAmplitudeCm) << ',' << mode_text << "\n";
  }

  const fs::path cond_path = dir / "conditions.csv";
  std::ofstream cond_file(cond_path, std::ios::trunc);
  cond_file << conditions.str();
  cond_file.close();
  manifest.record(cond_path);
  manifest.write("exp2-stim", cfg.hash());
  out << "wrote " << kExp2LevelsCm.size() << " stimulus pairs to " << dir.string() << "\n";
}

void cmd_analyze(const RunConfig& cfg, std::ostream& out) {
  const std::string input = require_file(cfg, "input");
  const std::string orientation = cfg.get_string_or("orientation", "increasing");
  if (orientation != "increasing" && orientation != "decreasing") {
    throw ConfigError("config key 'orientation': expected increasing|decreasing, got '" +
                      orientation + "'");
  }
  const bool flip = orientation == "decreasing";
  const fs::path dir = output_dir(cfg);

  const std::vector<TrialRecord> records = load_trial_csv(input);
  if (records.empty()) {
    throw DataError("trial CSV has no data rows: " + input);
  }

  // Fits are per observer x distance x deformation frequency, pooled over
  // images; the 50% crossing is unchanged by the response flip.
  std::map<std::tuple<std::string, double, double>, PsychometricDataset> groups;
  for (const TrialRecord& rec : records) {
    groups[{rec.observer_id, rec.distance_cm, rec.spatial_freq}].push_back(
        Trial{rec.amplitude_cm, flip ? 1 - rec.response : rec.response});
  }

  std::ostringstream fits;
  fits << "observer_id,distance_cm,spatial_freq_cpi,mu_cm,sigma_cm,n_trials,flag\n";
  for (const auto& [key, data] : groups) {
    const auto& [observer, dist, freq] = key;
    fits << observer << ',' << format_g(dist) << ',' << format_g(freq) << ',';
    try {
      const PsychometricFit fit = fit_cumulative_gaussian(data);
      fits << format_g(fit.mu) << ',' << format_g(fit.sigma) << ',' << data.size() << ",ok\n";
    } catch (const DegenerateDataError&) {
      fits << ",," << data.size() << ",degenerate\n";
    } catch (const DataError&) {
      fits << ",," << data.size() << ",unfittable\n";
    }
  }

  ManifestWriter manifest(dir);
  const fs::path fits_path = dir / "fits.csv";
  std::ofstream fits_file(fits_path, std::ios::trunc);
  fits_file << fits.str();
  fits_file.close();
  manifest.record(fits_path);
  manifest.write("analyze", cfg.hash());
  out << "wrote fits for " << groups.size() << " conditions to " << fits_path.string()
      << "\n";
}

}  // namespace

int run(const std::string& subcommand, const RunConfig& config, std::ostream& out,
        std::ostream& err) {
  try {
    if (subcommand == "gen-map") {
      cmd_gen_map(config, out);
    } else if (subcommand == "warp") {
      cmd_warp(config, out);
    } else if (subcommand == "synth") {
      cmd_synth(config, out);
    } else if (subcommand == "simulate") {
      cmd_simulate(config, out);
    } else if (subcommand == "keyframe") {
      cmd_keyframe(config, out);
    } else if (subcommand == "exp1-stim") {
      cmd_exp1_stim(config, out);
    } else if (subcommand == "exp2-stim") {
      cmd_exp2_stim(config, out);
    } else if (subcommand == "analyze") {
      cmd_analyze(config, out);
    } else {
      throw ConfigError("unknown subcommand: " + subcommand);
    }
    return 0;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
}

int run(const std::string& subcommand, const RunConfig& config) {
  return run(subcommand, config, std::cout, std::cerr);
}

}  // namespace dlamps
