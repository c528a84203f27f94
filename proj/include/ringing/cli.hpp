#pragma once

// Configuration-driven runner: JSON run configurations, figure presets and
// the pipeline that writes CSV series, optional SVG plots and a manifest.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "ringing/core.hpp"
#include "ringing/mbsolver.hpp"

namespace ringing::cli {

using nlohmann::json;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Mode { dispersion, ring, propagate, pumpprobe, interfere };

std::string to_string(Mode mode);
Mode mode_from_string(const std::string& name);

struct OutputSpec {
  std::vector<double> z_cuts;  // empty means {solver.z_max}
  std::set<std::string> emit = {"fields", "spectra", "transmission", "nodes", "features",
                                "diagnostics"};
  bool plot = false;
  bool log_y = false;         // logarithmic ordinate for spectra plots
  double plot_window = 10.0;  // |omega| range shown in spectral plots
};

struct Variant {
  std::string label;
  json patch;  // merge patch applied to the base configuration
};

struct RunConfig {
  std::string name = "run";
  Mode mode = Mode::pumpprobe;
  MediumParams medium;
  PulseSpec pump;
  std::optional<PulseSpec> probe;
  BeamGeometry geometry;
  SolverConfig solver;
  TimeGrid grid;
  OutputSpec outputs;
  // dispersion mode: detuning range
  double omega_min = -3.0;
  double omega_max = 3.0;
  std::size_t omega_points = 601;
  // interfere mode: delay of the vacuum copy
  double tau1 = 10.0;
  std::vector<Variant> variants;  // empty means a single run labelled "main"

  // Throws ConfigError.
  void validate() const;
  std::vector<double> z_cuts() const;
};

// Parses a configuration document; missing keys keep their defaults and
// unknown keys are rejected. Throws ConfigError.
RunConfig parse_config(const json& doc);
json to_json(const RunConfig& config);

std::vector<std::string> preset_names();
// Throws ConfigError for an unknown name.
RunConfig preset(const std::string& name);

// Base configuration with one variant's patch applied (variants cleared).
RunConfig resolve_variant(const RunConfig& base, const Variant& variant);

// Sets a dotted key path (e.g. "probe.delay") in a configuration document.
void set_path(json& doc, const std::string& path, const json& value);

// Cartesian product of parameter lists as variants, in row-major order of
// the given parameters.
std::vector<Variant> sweep_variants(
    const std::vector<std::pair<std::string, std::vector<double>>>& params);

struct FileRecord {
  std::string path;  // relative to the output directory
  std::string sha256;
  std::uintmax_t bytes = 0;
};

struct RunManifest {
  json config;
  std::string version;
  double wall_time_s = 0.0;
  std::vector<FileRecord> files;
  json results = json::object();  // per variant label
  std::vector<std::string> warnings;
  std::string status = "ok";
  std::string error;
  int exit_code = 0;  // 0 ok, 1 config, 2 numerical, 3 I/O

  json to_json() const;
};

// Executes every variant (in parallel on up to `threads` workers), writes the
// data files and manifest.json into out_dir. Errors are caught and reflected
// in status / exit_code; the manifest is written whenever the directory is
// writable.
RunManifest run(const RunConfig& config, const std::filesystem::path& out_dir,
                unsigned threads = 1);

// Hex SHA-256 of a file's contents. Throws IoError.
std::string sha256_file(const std::filesystem::path& path);

std::string version_string();

// Default worker count from the RINGSIM_THREADS environment variable, else 1.
unsigned default_threads();

}  // namespace ringing::cli
