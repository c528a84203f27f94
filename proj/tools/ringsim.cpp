#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ringing/cli.hpp"

using namespace ringing;
using namespace ringing::cli;

namespace {

RunConfig load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path);
  try {
    return parse_config(json::parse(in));
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
}

// key=value overrides; values are parsed as JSON, falling back to strings.
void apply_overrides(RunConfig& config, const std::vector<std::string>& sets) {
  if (sets.empty()) return;
  json doc = to_json(config);
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
    const std::string value = s.substr(eq + 1);
    json v;
    try {
      v = json::parse(value);
    } catch (const json::parse_error&) {
      v = value;
    }
    set_path(doc, s.substr(0, eq), v);
  }
  config = parse_config(doc);
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("sweep: '" + item + "' is not a number");
    }
  }
  return out;
}

int report(const RunManifest& m, const std::string& out) {
  if (m.exit_code == 0) {
    std::printf("%zu files written to %s (%.2f s)\n", m.files.size(), out.c_str(), m.wall_time_s);
  } else {
    std::fprintf(stderr, "error: %s\n", m.error.c_str());
  }
  for (const auto& w : m.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  return m.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optical ringing and pump-probe transmission in dense resonant media"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  bool plot = false;
  unsigned threads = default_threads();
  std::vector<std::string> sets;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory")->capture_default_str();
    sub->add_flag("--plot", plot, "also write SVG plots");
    sub->add_option("--threads", threads, "parallel runs (default: RINGSIM_THREADS or 1)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--set", sets, "override a config value, e.g. --set probe.delay=0.5");
  };

  std::vector<std::pair<Mode, CLI::App*>> mode_cmds;
  for (Mode mode : {Mode::dispersion, Mode::ring, Mode::propagate, Mode::pumpprobe, Mode::interfere}) {
    auto* sub = app.add_subcommand(to_string(mode), "run the " + to_string(mode) + " pipeline");
    common(sub);
    mode_cmds.emplace_back(mode, sub);
  }

  std::string preset_name;
  bool print_only = false;
  auto* preset_cmd = app.add_subcommand("preset", "run a figure preset (fig1 ... fig8)");
  preset_cmd->add_option("name", preset_name, "preset name")->required();
  preset_cmd->add_flag("--print", print_only, "print the preset configuration and exit");
  common(preset_cmd);

  std::vector<std::string> params;
  auto* sweep_cmd = app.add_subcommand("sweep", "cartesian product over listed parameters");
  sweep_cmd->add_option("--param", params, "path=v1,v2,... (repeatable)")->required();
  common(sweep_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    RunConfig config;
    if (preset_cmd->parsed()) {
      config = preset(preset_name);
      if (!config_path.empty()) throw ConfigError("preset does not take --config");
    } else if (!config_path.empty()) {
      config = load(config_path);
    }
    for (const auto& [mode, sub] : mode_cmds) {
      if (!sub->parsed()) continue;
      if (config_path.empty()) {
        config.mode = mode;
        if (mode == Mode::interfere) config.medium.gamma1 = config.medium.gamma2 = 0.0;
      } else if (config.mode != mode) {
        throw ConfigError("config mode '" + to_string(config.mode) + "' does not match subcommand");
      }
    }
    // without a config file, pump-probe runs get a probe matching the pump shape
    if (config_path.empty() && config.mode == Mode::pumpprobe && !config.probe) {
      PulseSpec probe = config.pump;
      probe.area = 1.0;
      config.probe = probe;
    }
    apply_overrides(config, sets);
    if (plot) config.outputs.plot = true;
    if (sweep_cmd->parsed()) {
      std::vector<std::pair<std::string, std::vector<double>>> grid;
      for (const auto& p : params) {
        const auto eq = p.find('=');
        if (eq == std::string::npos) throw ConfigError("--param expects path=v1,v2,...");
        grid.emplace_back(p.substr(0, eq), parse_list(p.substr(eq + 1)));
      }
      config.variants = sweep_variants(grid);
    }
    if (print_only) {
      std::cout << to_json(config).dump(2) << "\n";
      return 0;
    }
    return report(run(config, out_dir, threads), out_dir);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const IoError& e) {
    std::fprintf(stderr, "I/O error: %s\n", e.what());
    return 3;
  }
}
