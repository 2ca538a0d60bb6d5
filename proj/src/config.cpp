#include "mmt/config.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fmt/format.h>
#include <fstream>
#include <openssl/evp.h>
#include <set>
#include <sstream>

namespace mmt {

ConfigError::ConfigError(std::string field_, const std::string& message)
    : std::runtime_error("config: " + field_ + ": " + message), field(std::move(field_)) {}

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "experiment",
      "seed",
      "model.beta",
      "model.p0",
      "model.epsilon",
      "grid.omega_min",
      "grid.omega_max",
      "grid.nodes",
      "grid.extrapolation",
      "initial.kind",
      "initial.form",
      "initial.center",
      "initial.width",
      "initial.amplitude",
      "initial.baseline",
      "initial.c1",
      "initial.c2",
      "initial.exponent",
      "initial.eps",
      "initial.p",
      "initial.path",
      "controller.dt_init",
      "controller.safety",
      "controller.dt_min",
      "controller.dt_max",
      "controller.positivity_floor",
      "controller.tol_rk",
      "evolve.horizon",
      "evolve.snapshots",
      "quad.panels_per_decade",
      "quad.order",
      "quad.u_floor",
      "output.dir",
      "verify.suite",
      "oracle.omega",
      "oracle.delta",
      "oracle.samples",
      "oracle.window",
      "lemma2.p",
      "lemma2.eps",
      "lemma2.nodes_per_width",
      "sweep.experiment",
  };
  return keys;
}

bool is_known(const std::string& key) {
  return known_keys().count(key) > 0 || (key.rfind("sweep.vary.", 0) == 0 && key.size() > 11);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  const auto* end = v.data() + v.size();
  const auto [p, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || p != end) throw ConfigError(key, "expected a number, got '" + v + "'");
  return x;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::uint64_t x = 0;
  const auto* end = v.data() + v.size();
  const auto [p, ec] = std::from_chars(v.data(), end, x);
  if (ec == std::errc() && p == end) return x;
  // allow 1e6-style integers
  const double d = to_double(key, v);
  if (!(d >= 0.0) || d != std::floor(d) || d > 1.8e19) throw ConfigError(key, "expected a non-negative integer");
  return static_cast<std::uint64_t>(d);
}

}  // namespace

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

ConfigMap parse_config_text(const std::string& text) {
  ConfigMap m;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(fmt::format("line {}", lineno), "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!is_known(key)) throw ConfigError(key, "unknown key");
    if (m.count(key)) throw ConfigError(key, "given twice");
    m[key] = value;
  }
  return m;
}

ConfigMap load_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config", "cannot read '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

RunConfig build_config(const ConfigMap& raw) {
  for (const auto& [k, v] : raw)
    if (!is_known(k)) throw ConfigError(k, "unknown key");
  RunConfig c;
  c.raw = raw;
  auto get = [&](const char* key) -> const std::string* {
    const auto it = raw.find(key);
    return it == raw.end() ? nullptr : &it->second;
  };
  auto num = [&](const char* key, double& out) {
    if (const auto* v = get(key)) out = to_double(key, *v);
  };
  auto str = [&](const char* key, std::string& out) {
    if (const auto* v = get(key)) out = *v;
  };

  str("experiment", c.experiment);
  if (const auto* v = get("seed")) c.seed = to_u64("seed", *v);

  double beta = 0.0, eps = 0.0;
  num("model.beta", beta);
  num("model.epsilon", eps);
  try {
    c.params = ModelParams::make(beta, eps);
  } catch (const std::exception& e) {
    throw ConfigError("model.beta", e.what());
  }
  if (const auto* v = get("model.p0")) c.params.p0 = static_cast<int>(to_u64("model.p0", *v));
  try {
    c.params.validate();
  } catch (const std::exception& e) {
    throw ConfigError("model", e.what());
  }

  const bool any_grid = get("grid.omega_min") || get("grid.omega_max") || get("grid.nodes");
  if (any_grid) {
    if (!get("grid.omega_min") || !get("grid.omega_max") || !get("grid.nodes"))
      throw ConfigError("grid", "grid needs omega_min, omega_max and nodes");
    num("grid.omega_min", c.omega_min);
    num("grid.omega_max", c.omega_max);
    c.nodes = static_cast<std::size_t>(to_u64("grid.nodes", *get("grid.nodes")));
    try {
      FrequencyGrid(c.omega_min, c.omega_max, c.nodes);
    } catch (const std::exception& e) {
      throw ConfigError("grid", e.what());
    }
    c.has_grid = true;
  }
  if (const auto* v = get("grid.extrapolation")) {
    try {
      c.extrapolation = parse_extrapolation(*v);
    } catch (const std::exception& e) {
      throw ConfigError("grid.extrapolation", e.what());
    }
  }

  InitialSpec& in = c.initial;
  str("initial.kind", in.kind);
  str("initial.form", in.form);
  num("initial.center", in.center);
  num("initial.width", in.width);
  num("initial.amplitude", in.amplitude);
  num("initial.baseline", in.baseline);
  num("initial.c1", in.c1);
  num("initial.c2", in.c2);
  num("initial.exponent", in.exponent);
  num("initial.eps", in.eps);
  num("initial.p", in.p);
  str("initial.path", in.path);
  static const std::set<std::string> kinds = {"bump", "rj", "kz_mass", "kz_energy", "power", "lemma2", "csv"};
  if (!kinds.count(in.kind)) throw ConfigError("initial.kind", "unknown kind '" + in.kind + "'");
  if (in.form != "n" && in.form != "N") throw ConfigError("initial.form", "must be 'n' or 'N'");
  if (in.kind == "csv") {
    if (in.path.empty()) throw ConfigError("initial.path", "csv initial data needs a path");
    if (!std::filesystem::exists(in.path)) throw ConfigError("initial.path", "no such file '" + in.path + "'");
  }

  StepController& ctl = c.controller;
  num("controller.dt_init", ctl.dt_init);
  num("controller.safety", ctl.safety);
  num("controller.dt_min", ctl.dt_min);
  num("controller.dt_max", ctl.dt_max);
  num("controller.positivity_floor", ctl.positivity_floor);
  num("controller.tol_rk", ctl.tol_rk);
  try {
    ctl.validate();
  } catch (const std::exception& e) {
    throw ConfigError("controller", e.what());
  }
  num("evolve.horizon", c.horizon);
  if (!(c.horizon > 0.0)) throw ConfigError("evolve.horizon", "must be positive");
  if (const auto* v = get("evolve.snapshots"))
    for (const auto& s : split_list(*v)) c.snapshot_times.push_back(to_double("evolve.snapshots", s));

  if (const auto* v = get("quad.panels_per_decade"))
    c.quad.panels_per_decade = static_cast<int>(to_u64("quad.panels_per_decade", *v));
  if (const auto* v = get("quad.order")) c.quad.order = static_cast<int>(to_u64("quad.order", *v));
  num("quad.u_floor", c.quad.u_floor);
  if (c.quad.order < 4 || c.quad.order > 32) throw ConfigError("quad.order", "must lie in [4, 32]");
  if (c.quad.panels_per_decade < 2) throw ConfigError("quad.panels_per_decade", "must be >= 2");
  if (!(c.quad.u_floor > 0.0 && c.quad.u_floor < 1.0)) throw ConfigError("quad.u_floor", "must lie in (0, 1)");

  str("output.dir", c.out_dir);
  str("verify.suite", c.verify_suite);

  num("oracle.omega", c.oracle_omega);
  num("oracle.delta", c.oracle_delta);
  if (const auto* v = get("oracle.samples")) c.oracle_samples = to_u64("oracle.samples", *v);
  if (const auto* v = get("oracle.window")) {
    const auto parts = split_list(*v);
    if (parts.size() != 2) throw ConfigError("oracle.window", "expected 'lo, hi'");
    c.oracle_window = std::make_pair(to_double("oracle.window", parts[0]), to_double("oracle.window", parts[1]));
  }

  num("lemma2.p", c.lemma2_p);
  if (const auto* v = get("lemma2.eps")) {
    c.lemma2_eps.clear();
    for (const auto& s : split_list(*v)) c.lemma2_eps.push_back(to_double("lemma2.eps", s));
    if (c.lemma2_eps.empty()) throw ConfigError("lemma2.eps", "empty list");
  }
  if (const auto* v = get("lemma2.nodes_per_width"))
    c.lemma2_nodes_per_width = static_cast<int>(to_u64("lemma2.nodes_per_width", *v));

  str("sweep.experiment", c.sweep_experiment);
  for (const auto& [k, v] : raw) {
    if (k.rfind("sweep.vary.", 0) != 0) continue;
    const std::string target = k.substr(11);
    if (!is_known(target) || target.rfind("sweep.", 0) == 0) throw ConfigError(k, "cannot vary '" + target + "'");
    c.sweep_vary.emplace_back(target, split_list(v));
  }
  return c;
}

std::string canonical_text(const ConfigMap& raw) {
  std::string s;
  for (const auto& [k, v] : raw) s += k + " = " + v + "\n";
  return s;
}

std::string config_hash(const ConfigMap& raw) {
  const std::string body = canonical_text(raw);
  std::string blob = "blob " + std::to_string(body.size());
  blob.push_back('\0');
  blob += body;
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(blob.data(), blob.size(), md, &len, EVP_sha1(), nullptr) != 1)
    throw std::runtime_error("SHA-1 digest failed");
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", md[i]);
  return hex;
}

}  // namespace mmt
