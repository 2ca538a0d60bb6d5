#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mmt/evolution.hpp"
#include "mmt/params.hpp"
#include "mmt/resonance.hpp"
#include "mmt/spectrum.hpp"

namespace mmt {

/// Bad or missing configuration; `field` names the offending key (or section).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message);
  std::string field;
};

using ConfigMap = std::map<std::string, std::string>;

/// Parses `key = value` lines; `#` starts a comment. Unknown keys are rejected.
ConfigMap parse_config_text(const std::string& text);
ConfigMap load_config_file(const std::string& path);

struct InitialSpec {
  std::string kind = "bump";  // bump, rj, kz_mass, kz_energy, power, lemma2, csv
  std::string form = "n";     // analytic values are n(omega) or N(omega) directly
  double center = 1.0, width = 0.5, amplitude = 1.0, baseline = 0.0;
  double c1 = 1.0, c2 = 0.0;
  double exponent = 0.0;
  double eps = 0.1, p = 2.0;
  std::string path;
};

struct RunConfig {
  std::string experiment;
  ModelParams params;
  bool has_grid = false;
  double omega_min = 0.0, omega_max = 0.0;
  std::size_t nodes = 0;
  Extrapolation extrapolation = Extrapolation::constant;
  InitialSpec initial;
  StepController controller;
  double horizon = 0.5;
  std::vector<double> snapshot_times;
  QuadSpec quad;
  std::string out_dir = "out";
  std::uint64_t seed = 42;

  std::string verify_suite = "all";

  double oracle_omega = 1.0;
  double oracle_delta = 1e-3;
  std::uint64_t oracle_samples = 1000000;
  std::optional<std::pair<double, double>> oracle_window;

  double lemma2_p = 2.0;
  std::vector<double> lemma2_eps = {0.1, 0.05, 0.025};
  int lemma2_nodes_per_width = 16;

  std::string sweep_experiment;
  std::vector<std::pair<std::string, std::vector<std::string>>> sweep_vary;

  ConfigMap raw;
};

inline const std::vector<std::string> kExperiments = {"evolve", "verify", "oracle", "lemma2", "sweep"};

/// Typed view of a parsed map; throws ConfigError naming the field on bad values.
RunConfig build_config(const ConfigMap& raw);

/// Git-style content hash (SHA-1 of "blob <len>\0" + canonical text) of the configuration.
std::string config_hash(const ConfigMap& raw);
std::string canonical_text(const ConfigMap& raw);

std::vector<std::string> split_list(const std::string& s);

}  // namespace mmt
