// Command-line front end. Every subcommand reads a flat key=value config
// file, optionally patched by repeatable --set key=value overrides, and
// writes its artifacts plus a manifest into the configured output directory.

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dlamps/errors.hpp"
#include "dlamps/runner.hpp"
#include "dlamps/version.hpp"

namespace {

struct SubcommandArgs {
  std::string config_path;
  std::vector<std::string> overrides;
};

int execute(const std::string& name, const SubcommandArgs& args) {
  try {
    dlamps::RunConfig cfg;
    if (!args.config_path.empty()) {
      cfg = dlamps::RunConfig::load(args.config_path);
    }
    for (const std::string& keyval : args.overrides) {
      cfg.apply_override(keyval);
    }
    return dlamps::run(name, cfg);
  } catch (const dlamps::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dynamic-luminance projection mapping toolkit"};
  app.set_version_flag("--version", std::string(dlamps::kToolName) + " " + dlamps::kToolVersion);
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, std::string>> subcommands{
      {"gen-map", "Generate a displacement-field sequence (DLF1 file)"},
      {"warp", "Warp an image through a field sequence into PNG frames"},
      {"synth", "Build the projection-signal frames for a target image"},
      {"simulate", "Composite projection frames onto a reflectance scene"},
      {"keyframe", "Pick the movie frame closest to the temporal mean"},
      {"exp1-stim", "Emit the detection-experiment stimulus grid"},
      {"exp2-stim", "Emit the matching-experiment stimulus pairs"},
      {"analyze", "Fit cumulative Gaussians to a trial CSV"},
  };

  std::map<std::string, SubcommandArgs> args;
  for (const auto& [name, description] : subcommands) {
    CLI::App* sub = app.add_subcommand(name, description);
    SubcommandArgs& store = args[name];
    sub->add_option("-c,--config", store.config_path, "Run configuration file");
    sub->add_option("-s,--set", store.overrides, "Override a config key (key=value)")
        ->take_all();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  for (const auto& [name, store] : args) {
    if (app.get_subcommand(name)->parsed()) {
      return execute(name, store);
    }
  }
  return 2;
}
