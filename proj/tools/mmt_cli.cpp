// mmt <experiment> --config <path> [--out <dir>] [--seed <u64>]
#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fmt/format.h>
#include <fstream>
#include <json.hpp>

#include "mmt/analytic.hpp"
#include "mmt/checks.hpp"
#include "mmt/config.hpp"
#include "mmt/io.hpp"
#include "mmt/oracle.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace mmt;

namespace {

constexpr int kOk = 0, kRuntime = 1, kBlowUp = 2, kConfig = 64;

struct Outcome {
  int code = kOk;
  std::string headline;
};

AnalyticSpectrum analytic_initial(const RunConfig& c) {
  const InitialSpec& in = c.initial;
  try {
    if (in.kind == "bump") return AnalyticSpectrum(GaussianBumpInLogOmega{in.center, in.width, in.amplitude, in.baseline});
    if (in.kind == "rj") return AnalyticSpectrum(RayleighJeans{in.c1, in.c2});
    if (in.kind == "kz_mass") return AnalyticSpectrum(KZMass{c.params.beta});
    if (in.kind == "kz_energy") return AnalyticSpectrum(KZEnergy{c.params.beta});
    if (in.kind == "power") return AnalyticSpectrum(PowerLaw{in.exponent});
    if (in.kind == "lemma2") return AnalyticSpectrum(LemmaTwoData{in.eps, in.p});
  } catch (const std::exception& e) {
    throw ConfigError("initial", e.what());
  }
  throw ConfigError("initial.kind", "'" + in.kind + "' is not an analytic spectrum");
}

SpectrumField initial_field(const RunConfig& c, const FrequencyGrid& grid) {
  if (c.initial.kind == "csv") {
    LoadedSpectrum s = read_spectrum_csv(c.initial.path, c.extrapolation);
    if (!(s.field.grid() == grid)) throw ConfigError("grid", "does not match the grid of " + c.initial.path);
    if (s.beta != c.params.beta) throw ConfigError("initial.path", "file was written for a different beta");
    return convert_form(s.field, c.params, Form::N_form);
  }
  const AnalyticSpectrum n = analytic_initial(c);
  if (c.initial.form == "N") return tabulate_values([&](double w) { return n(w); }, grid, Form::N_form, c.extrapolation);
  return tabulate(n, grid, c.params, Form::N_form, c.extrapolation);
}

json params_json(const RunConfig& c) {
  return {{"beta", c.params.beta},
          {"p0", c.params.p0},
          {"epsilon", c.params.epsilon},
          {"gamma_scale", c.params.gamma_scale()},
          {"collision_degree", c.params.collision_degree()}};
}

json quad_json(const QuadSpec& q) {
  return {{"panels_per_decade", q.panels_per_decade}, {"order", q.order}, {"u_floor", q.u_floor}};
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << j.dump(2) << "\n";
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

void write_run_json(const RunConfig& c, const fs::path& dir, const json& results, const std::string& started,
                    double seconds) {
  json j;
  j["experiment"] = c.experiment;
  j["config_hash"] = config_hash(c.raw);
  j["config"] = c.raw;
  j["params"] = params_json(c);
  j["quad"] = quad_json(c.quad);
  j["seed"] = c.seed;
  j["results"] = results;
  j["wall_clock"] = {{"started", started}, {"seconds", seconds}};
  write_json(dir / "run.json", j);
}

Outcome cmd_evolve(const RunConfig& c, const fs::path& dir, json& results) {
  if (!c.has_grid) throw ConfigError("grid", "evolve needs grid.omega_min, grid.omega_max and grid.nodes");
  const FrequencyGrid grid(c.omega_min, c.omega_max, c.nodes);
  const SpectrumField N0 = initial_field(c, grid);
  const ResonanceQuad quad = build_quadrature(c.params, c.quad);

  write_collision((dir / "collision_t0.csv").string(), collide_grid(N0, quad, Evaluator::split), c.params);
  write_spectrum_csv((dir / snapshot_name(0.0)).string(), N0, c.params.beta);

  IntegrateOptions opt;
  opt.snapshot_times = c.snapshot_times;
  const Trajectory tr = integrate(N0, c.horizon, c.controller, quad, opt);
  for (std::size_t i = 0; i < tr.snapshots.size(); ++i)
    write_spectrum_csv((dir / snapshot_name(tr.times[i])).string(), tr.snapshots[i], c.params.beta);
  write_diagnostics_csv((dir / "diagnostics.csv").string(), tr.diagnostics);

  const DiagnosticsRecord& d0 = tr.diagnostics.front();
  const DiagnosticsRecord& d1 = tr.diagnostics.back();
  const double mass_drift = std::abs(d1.mass - d0.mass) / std::abs(d0.mass);
  const double energy_drift = std::abs(d1.energy - d0.energy) / std::abs(d0.energy);
  results = {{"status", std::string(to_string(tr.status))},
             {"t_end", tr.t_end},
             {"accepted", tr.accepted},
             {"rejected", tr.rejected},
             {"rejected_positivity", tr.rejected_positivity},
             {"mass_drift", mass_drift},
             {"energy_drift", energy_drift},
             {"worst_entropy_drop", tr.worst_entropy_drop},
             {"smoothing_budget", tr.smoothing_budget}};
  Outcome o;
  o.code = tr.status == RunStatus::horizon_reached ? kOk : kBlowUp;
  o.headline = fmt::format("status={} t_end={:.6g} mass_drift={:.3e} energy_drift={:.3e} budget={:.6g}",
                           to_string(tr.status), tr.t_end, mass_drift, energy_drift, tr.smoothing_budget);
  return o;
}

Outcome cmd_verify(const RunConfig& c, const fs::path& dir, json& results) {
  const auto suites = split_list(c.verify_suite);
  if (suites.empty()) throw ConfigError("verify.suite", "no suite named");
  const auto& known = verify_suites();
  for (const auto& s : suites)
    if (std::find(known.begin(), known.end(), s) == known.end())
      throw ConfigError("verify.suite", "unknown check suite '" + s + "'");
  json report = json::object();
  int passed = 0, total = 0;
  for (const auto& s : suites) {
    for (const CheckResult& r : run_verify_suite(s, c.seed)) {
      json e = {{"value", r.value}, {"tolerance", r.tolerance}, {"pass", r.pass}, {"detail", r.detail}};
      for (const auto& [k, v] : r.extra) e[k] = v;
      report[r.name] = e;
      ++total;
      passed += r.pass ? 1 : 0;
      std::printf("%s %-14s value=%.6g tol=%.3g\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.value, r.tolerance);
    }
  }
  write_json(dir / "report.json", report);
  results = {{"passed", passed}, {"total", total}};
  return {passed == total ? kOk : kRuntime, fmt::format("passed={}/{}", passed, total)};
}

Outcome cmd_oracle(const RunConfig& c, const fs::path& dir, json& results) {
  if (c.initial.kind == "csv") throw ConfigError("initial.kind", "the oracle needs an analytic spectrum");
  if (c.initial.form != "n") throw ConfigError("initial.form", "the oracle samples n(omega); use form = n");
  const AnalyticSpectrum n = analytic_initial(c);
  OracleOptions opt;
  opt.window = c.oracle_window;
  OracleEstimate e, e2;
  try {
    e = mc_collision(n, c.oracle_omega, c.params, c.oracle_delta, c.oracle_samples, c.seed, opt);
    e2 = mc_collision(n, c.oracle_omega, c.params, 2.0 * c.oracle_delta, c.oracle_samples, c.seed, opt);
  } catch (const std::domain_error& err) {
    throw ConfigError("oracle", err.what());
  }
  const ResonanceQuad quad = build_quadrature(c.params, c.quad);
  const double ref = collide_sum_form(analytic_sampler(n, c.params, Form::n_form), c.oracle_omega, quad);
  json report = {{"omega", c.oracle_omega},   {"beta", c.params.beta},  {"delta", c.oracle_delta},
                 {"samples", e.samples},      {"mean", e.mean},         {"std_error", e.std_error},
                 {"seed", c.seed},            {"delta_bias", std::abs(e.mean - e2.mean)},
                 {"quadrature_value", ref}};
  write_json(dir / "oracle.json", report);
  results = report;
  return {kOk, fmt::format("mean={:.8g} std_error={:.3g} quadrature={:.8g}", e.mean, e.std_error, ref)};
}

Outcome cmd_lemma2(const RunConfig& c, const fs::path& dir, json& results) {
  LemmaTwoOptions opt;
  opt.nodes_per_width = c.lemma2_nodes_per_width;
  std::vector<LemmaTwoPoint> pts;
  try {
    pts = lemma2_harness(c.lemma2_p, c.lemma2_eps, c.params, opt);
  } catch (const std::domain_error& err) {
    throw ConfigError("lemma2", err.what());
  }
  std::ofstream f(dir / "lemma2.csv", std::ios::binary);
  f << "eps,collision_lp,data_lp,omega_nodes\n";
  std::vector<double> eps, val;
  json points = json::array();
  for (const auto& x : pts) {
    f << fmt::format("{:.17g},{:.17g},{:.17g},{}\n", x.eps, x.collision_lp, x.data_lp, x.omega_nodes);
    eps.push_back(x.eps);
    val.push_back(x.collision_lp);
    points.push_back({{"eps", x.eps}, {"collision_lp", x.collision_lp}, {"data_lp", x.data_lp}});
  }
  results = {{"p", c.lemma2_p}, {"beta", c.params.beta}, {"expected_slope", 1.0 - 3.0 / c.lemma2_p}, {"points", points}};
  std::string head = "points=" + std::to_string(pts.size());
  if (pts.size() >= 2) {
    const double slope = loglog_slope(eps, val);
    results["slope"] = slope;
    head = fmt::format("slope={:.4f} expected={:.4f}", slope, 1.0 - 3.0 / c.lemma2_p);
  }
  write_json(dir / "lemma2.json", results);
  return {kOk, head};
}

Outcome run_experiment(const RunConfig& c);

std::string csv_quote(const std::string& s) {
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

Outcome cmd_sweep(const RunConfig& c, const fs::path& dir, json& results) {
  if (c.sweep_vary.empty()) throw ConfigError("sweep", "empty sweep list (add sweep.vary.<key> = v1, v2, ...)");
  for (const auto& [key, vals] : c.sweep_vary)
    if (vals.empty()) throw ConfigError("sweep.vary." + key, "empty sweep list");
  if (c.sweep_experiment.empty() || c.sweep_experiment == "sweep" ||
      std::find(kExperiments.begin(), kExperiments.end(), c.sweep_experiment) == kExperiments.end())
    throw ConfigError("sweep.experiment", "must name evolve, verify, oracle or lemma2");

  ConfigMap base;
  for (const auto& [k, v] : c.raw)
    if (k.rfind("sweep.", 0) != 0) base[k] = v;
  base["experiment"] = c.sweep_experiment;

  std::size_t count = 1;
  for (const auto& kv : c.sweep_vary) count *= kv.second.size();
  std::ofstream index(dir / "index.csv", std::ios::binary);
  index << "run_id,overrides,exit_code,headline\n";
  int failed = 0;
  json runs = json::array();
  for (std::size_t r = 0; r < count; ++r) {
    ConfigMap child = base;
    std::string overrides;
    std::size_t rest = r;
    for (auto it = c.sweep_vary.rbegin(); it != c.sweep_vary.rend(); ++it) {
      const std::string& v = it->second[rest % it->second.size()];
      rest /= it->second.size();
      child[it->first] = v;
      overrides = it->first + "=" + v + (overrides.empty() ? "" : ";" + overrides);
    }
    const std::string id = fmt::format("run_{:03d}", r);
    child["output.dir"] = (dir / id).string();
    Outcome o;
    try {
      o = run_experiment(build_config(child));
    } catch (const ConfigError& e) {
      o = {kConfig, e.what()};
    } catch (const std::exception& e) {
      o = {kRuntime, e.what()};
    }
    if (o.code != kOk) ++failed;
    index << id << "," << csv_quote(overrides) << "," << o.code << "," << csv_quote(o.headline) << "\n";
    runs.push_back({{"run_id", id}, {"overrides", overrides}, {"exit_code", o.code}});
    std::printf("%s %s exit=%d %s\n", id.c_str(), overrides.c_str(), o.code, o.headline.c_str());
  }
  results = {{"runs", runs}, {"failed", failed}};
  return {failed == 0 ? kOk : kRuntime, fmt::format("runs={} failed={}", count, failed)};
}

Outcome run_experiment(const RunConfig& c) {
  if (c.experiment.empty()) throw ConfigError("experiment", "no experiment given");
  if (std::find(kExperiments.begin(), kExperiments.end(), c.experiment) == kExperiments.end())
    throw ConfigError("experiment", "unknown experiment '" + c.experiment + "'");
  const fs::path dir(c.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("output.dir", "cannot create '" + c.out_dir + "': " + ec.message());

  const std::string started = utc_now();
  const auto t0 = std::chrono::steady_clock::now();
  json results;
  Outcome o;
  if (c.experiment == "evolve") o = cmd_evolve(c, dir, results);
  else if (c.experiment == "verify") o = cmd_verify(c, dir, results);
  else if (c.experiment == "oracle") o = cmd_oracle(c, dir, results);
  else if (c.experiment == "lemma2") o = cmd_lemma2(c, dir, results);
  else o = cmd_sweep(c, dir, results);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_run_json(c, dir, results, started, secs);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kinetic wave equation (MMT, alpha = 1/2): evolution, checks and oracles"};
  std::string experiment, config_path, out_dir;
  std::uint64_t seed = 0;
  app.add_option("experiment", experiment, "evolve | verify | oracle | lemma2 | sweep")->required();
  app.add_option("--config", config_path, "key = value configuration file")->required();
  auto* out_opt = app.add_option("--out", out_dir, "output directory (overrides output.dir)");
  auto* seed_opt = app.add_option("--seed", seed, "random seed (overrides seed)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  try {
    ConfigMap raw = load_config_file(config_path);
    raw["experiment"] = experiment;
    if (*out_opt) raw["output.dir"] = out_dir;
    if (*seed_opt) raw["seed"] = std::to_string(seed);
    const RunConfig cfg = build_config(raw);
    const Outcome o = run_experiment(cfg);
    std::printf("%s\n", o.headline.c_str());
    return o.code;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kRuntime;
  }
}
