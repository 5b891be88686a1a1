#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>

namespace dlamps {

/// Flat key=value run configuration, read from a text file ('#' comments,
/// one "key = value" per line) with optional per-key overrides on top.
class RunConfig {
 public:
  RunConfig() = default;

  static RunConfig load(const std::string& path);

  void set(const std::string& key, const std::string& value);
  /// Accepts "key=value"; later overrides win.
  void apply_override(const std::string& key_equals_value);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key) const;
  std::string get_string_or(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double_or(const std::string& key, double fallback) const;
  int get_int(const std::string& key) const;
  int get_int_or(const std::string& key, int fallback) const;
  std::uint64_t get_seed_or(const std::string& key, std::uint64_t fallback) const;

  /// Sorted "key=value" lines; the basis of the manifest config hash.
  std::string canonical() const;
  std::uint64_t hash() const;

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

/// Executes one subcommand (gen-map, warp, synth, simulate, keyframe,
/// exp1-stim, exp2-stim, analyze). Artifacts plus a manifest land in the
/// configured output directory. Returns 0 on success, 2 on configuration
/// errors, 3 on data errors.
int run(const std::string& subcommand, const RunConfig& config,
        std::ostream& out, std::ostream& err);
int run(const std::string& subcommand, const RunConfig& config);

}  // namespace dlamps
