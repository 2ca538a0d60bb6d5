#include "mmt/checks.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <random>
#include <stdexcept>

#include "mmt/analytic.hpp"
#include "mmt/collision.hpp"
#include "mmt/diagnostics.hpp"
#include "mmt/oracle.hpp"

namespace mmt {

namespace {

constexpr double kBetas[3] = {-0.5, 0.0, 0.5};

CheckResult upper(std::string name, double value, double tol, std::string detail) {
  return {std::move(name), value, tol, std::isfinite(value) && value <= tol, std::move(detail), {}};
}

AnalyticSpectrum test_bump() { return AnalyticSpectrum(GaussianBumpInLogOmega{1.0, 0.3, 1.0, 0.0}); }

}  // namespace

CheckResult check_resonance_identities(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < count; ++i) {
    const ResonanceNodes v = v_values(U(rng));
    worst = std::max(worst, std::abs(v.v1 + v.v3 - v.v2 - v.v4));
    worst = std::max(worst, std::abs(v.v1 * v.v1 + v.v3 * v.v3 + v.v4 * v.v4 - v.v2 * v.v2));
  }
  return upper("resonance", worst, 1e-14, "max identity residual over random u");
}

CheckResult check_rj_stationarity(const QuadSpec& spec) {
  const double omegas[3] = {0.1, 1.0, 10.0};
  const std::pair<double, double> cs[3] = {{1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};
  double worst = 0.0;
  for (double beta : kBetas) {
    const ModelParams p = ModelParams::make(beta);
    const ResonanceQuad q = build_quadrature(p, spec);
    for (const auto& [c1, c2] : cs) {
      const auto r = stationarity_residual(AnalyticSpectrum(RayleighJeans{c1, c2}), p, q, omegas);
      for (double x : r) worst = std::max(worst, x);
    }
  }
  return upper("stationarity", worst, 1e-8, "max normalized residual, Rayleigh-Jeans family");
}

CheckResult check_cross_form(const QuadSpec& spec) {
  const double omegas[3] = {0.5, 1.0, 2.0};
  const AnalyticSpectrum n = test_bump();
  double worst = 0.0;
  for (double beta : kBetas) {
    const ModelParams p = ModelParams::make(beta);
    const ResonanceQuad q = build_quadrature(p, spec);
    const auto sn = analytic_sampler(n, p, Form::n_form);
    const auto sN = analytic_sampler(n, p, Form::N_form);
    for (double w : omegas) {
      const double a = std::pow(w, p.gamma_scale()) * collide_sum_form(sn, w, q);
      const double b = collide_symmetric(sN, w, q);
      const double c = collide_split(sN, w, q);
      const double scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
      const double spread = std::max({std::abs(a - b), std::abs(a - c), std::abs(b - c)});
      worst = std::max(worst, spread / scale);
    }
  }
  return upper("crossform", worst, 1e-6, "max relative spread of the three evaluators");
}

CheckResult check_scaling(const QuadSpec& spec) {
  const AnalyticSpectrum n = test_bump();
  double worst = 0.0;
  for (double beta : kBetas) {
    const ModelParams p = ModelParams::make(beta);
    const ResonanceQuad q = build_quadrature(p, spec);
    for (double lambda : {0.5, 2.0}) worst = std::max(worst, scaling_covariance_residual(n, lambda, 1.0, p, q));
  }
  return upper("scaling", worst, 1e-8, "max scaling-covariance residual");
}

CheckResult check_oracle_agreement(std::uint64_t seed, std::uint64_t samples, double delta, double beta,
                                   const QuadSpec& spec) {
  const ModelParams p = ModelParams::make(beta);
  const ResonanceQuad q = build_quadrature(p, spec);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  CheckResult r{"oracle", 0.0, 3.0, true, "", {}};
  for (int k = 0; k < 5; ++k) {
    const double c = 0.7 * std::pow(2.0, U(rng));
    const double w = 0.2 + 0.3 * U(rng);
    const double a = 0.5 + 1.5 * U(rng);
    const AnalyticSpectrum n(GaussianBumpInLogOmega{c, w, a, 0.0});
    const double ref = collide_sum_form(analytic_sampler(n, p, Form::n_form), 1.0, q);
    const std::uint64_t s = seed + 1000 * static_cast<std::uint64_t>(k + 1);
    const OracleEstimate e = mc_collision(n, 1.0, p, delta, samples, s);
    const OracleEstimate e2 = mc_collision(n, 1.0, p, 2.0 * delta, samples, s);
    const double bias = std::abs(e.mean - e2.mean);
    const double z = std::abs(e.mean - ref) / (e.std_error + bias);
    r.value = std::max(r.value, z);
    r.extra.emplace_back(fmt::format("bump{}_reference", k), ref);
    r.extra.emplace_back(fmt::format("bump{}_mean", k), e.mean);
    r.extra.emplace_back(fmt::format("bump{}_std_error", k), e.std_error);
    r.extra.emplace_back(fmt::format("bump{}_delta_bias", k), bias);
  }
  r.pass = std::isfinite(r.value) && r.value <= r.tolerance;
  r.detail = "max |oracle - quadrature| / (std_error + delta bias) over 5 bumps";
  return r;
}

CheckResult check_trivial_probe(std::uint64_t seed, std::uint64_t samples) {
  const std::vector<double> deltas = {1e-1, 1e-2, 1e-3};
  const auto est = trivial_resonance_probe(test_bump(), 1.0, ModelParams::make(0.0), deltas, samples, seed);
  std::vector<double> y;
  CheckResult r{"probe", 0.0, 0.4, false, "fitted slope of |(+,+,-) contribution| vs delta; pass if >= tolerance", {}};
  for (std::size_t i = 0; i < est.size(); ++i) {
    y.push_back(est[i].mean);
    r.extra.emplace_back(fmt::format("delta_{:g}_mean", deltas[i]), est[i].mean);
    r.extra.emplace_back(fmt::format("delta_{:g}_std_error", deltas[i]), est[i].std_error);
  }
  r.value = loglog_slope(deltas, y);
  r.pass = std::isfinite(r.value) && r.value >= r.tolerance;
  return r;
}

CheckResult check_lemma2(double p) {
  const std::vector<double> eps = {0.1, 0.05, 0.025};
  const auto pts = lemma2_harness(p, eps, ModelParams::make(0.0));
  std::vector<double> c;
  double dmin = pts[0].data_lp, dmax = pts[0].data_lp;
  CheckResult r{"lemma2", 0.0, 0.15, false, "", {}};
  for (const auto& x : pts) {
    c.push_back(x.collision_lp);
    dmin = std::min(dmin, x.data_lp);
    dmax = std::max(dmax, x.data_lp);
    r.extra.emplace_back(fmt::format("eps_{:g}_collision_lp", x.eps), x.collision_lp);
    r.extra.emplace_back(fmt::format("eps_{:g}_data_lp", x.eps), x.data_lp);
  }
  const double target = 1.0 - 3.0 / p;
  r.value = loglog_slope(eps, c);
  const bool data_ok = dmin >= 0.5 * pts[0].data_lp && dmax <= 2.0 * pts[0].data_lp;
  r.pass = std::abs(r.value - target) <= r.tolerance && data_ok;
  r.detail = fmt::format("slope vs eps, target {:g} +- tolerance; data norm range [{:.6g}, {:.6g}]", target, dmin, dmax);
  return r;
}

namespace {

// f = g / m with g a smooth random function of log(omega) in [0.5, 1.5].
struct RandomWeightedField {
  WeightedNormSpec spec;
  double a[6], phase[6], norm = 0.0;

  RandomWeightedField(const WeightedNormSpec& s, std::mt19937_64& rng) : spec(s) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int i = 0; i < 6; ++i) {
      a[i] = 2.0 * U(rng) - 1.0;
      phase[i] = 2.0 * M_PI * U(rng);
      norm += std::abs(a[i]);
    }
  }
  double g(double w) const {
    double s = 0.0;
    for (int i = 0; i < 6; ++i) s += a[i] * std::sin((i + 1) * std::log(w) / 3.0 + phase[i]);
    return 1.0 + 0.5 * s / norm;
  }
  double operator()(double w) const { return g(w) / spec.weight(w); }
};

double lemma1_max_ratio(double beta, std::uint64_t seed) {
  const ModelParams p = ModelParams::make(beta);
  const ResonanceQuad q = build_quadrature(p, QuadSpec{});
  const WeightedNormSpec spec{-2.0 * beta - 1.0 + 0.5, 2.0 * beta + 2.0 + 0.5};
  const FrequencyGrid grid(1e-3, 1e3, 61);
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    const RandomWeightedField f(spec, rng);
    const FunctionSampler s{[&f](double w) { return f(w); }};
    std::vector<double> fv(grid.size()), cv(grid.size());
    const long n = static_cast<long>(grid.size());
#pragma omp parallel for schedule(dynamic) num_threads(max_workers())
    for (long j = 0; j < n; ++j) {
      const auto i = static_cast<std::size_t>(j);
      fv[i] = f(grid[i]);
      cv[i] = collide_all_plus(s, grid[i], q);
    }
    const double fn = weighted_sup_norm(grid, fv, spec);
    worst = std::max(worst, weighted_sup_norm(grid, cv, spec) / (fn * fn * fn));
  }
  return worst;
}

}  // namespace

// C+ is monotone in f >= 0, so g = 1 bounds the ratio of every field in the family.
double lemma1_flat_ratio(double beta) {
  const ModelParams p = ModelParams::make(beta);
  const ResonanceQuad q = build_quadrature(p, QuadSpec{});
  const WeightedNormSpec spec{-2.0 * beta - 1.0 + 0.5, 2.0 * beta + 2.0 + 0.5};
  const FrequencyGrid grid(1e-3, 1e3, 61);
  const FunctionSampler s{[&spec](double w) { return 1.0 / spec.weight(w); }};
  std::vector<double> cv(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) cv[j] = collide_all_plus(s, grid[j], q);
  return weighted_sup_norm(grid, cv, spec);
}

CheckResult check_lemma1(std::uint64_t seed_a, std::uint64_t seed_b) {
  CheckResult r{"lemma1", 0.0, 0.2, true, "max relative disagreement of the max ratio between two field seeds", {}};
  for (double beta : {-0.5, -0.25, 0.0}) {
    const double a = lemma1_max_ratio(beta, seed_a);
    const double b = lemma1_max_ratio(beta, seed_b);
    r.extra.emplace_back(fmt::format("beta_{:g}_ratio_flat", beta), lemma1_flat_ratio(beta));
    r.extra.emplace_back(fmt::format("beta_{:g}_ratio_seed_a", beta), a);
    r.extra.emplace_back(fmt::format("beta_{:g}_ratio_seed_b", beta), b);
    if (!std::isfinite(a) || !std::isfinite(b)) r.pass = false;
    r.value = std::max(r.value, std::abs(a - b) / std::max(a, b));
  }
  r.pass = r.pass && r.value <= r.tolerance;
  return r;
}

SpectrumField evolution_initial(const EvolutionSetup& s, std::size_t nodes) {
  const FrequencyGrid grid(s.omega_min, s.omega_max, nodes);
  const AnalyticSpectrum bump(GaussianBumpInLogOmega{s.bump_center, s.bump_width, s.bump_amplitude, 0.0});
  return tabulate_values([&](double w) { return s.floor_value + bump(w); }, grid, Form::N_form);
}

namespace {

Trajectory run_one(double beta, double eps, const EvolutionSetup& s, bool fine) {
  const ModelParams p = ModelParams::make(beta, eps);
  const ResonanceQuad q = build_quadrature(p, fine ? s.fine_quad : s.coarse_quad);
  StepController c;
  c.dt_init = 0.05;
  c.tol_rk = fine ? s.tol_rk / 16.0 : s.tol_rk;
  return integrate(evolution_initial(s, fine ? s.fine_nodes : s.coarse_nodes), s.horizon, c, q);
}

struct Drift {
  double mass = 0.0, energy = 0.0;
};

Drift max_drift(const Trajectory& t) {
  Drift d;
  const DiagnosticsRecord& d0 = t.diagnostics.front();
  for (const auto& x : t.diagnostics) {
    d.mass = std::max(d.mass, std::abs(x.mass - d0.mass) / std::abs(d0.mass));
    d.energy = std::max(d.energy, std::abs(x.energy - d0.energy) / std::abs(d0.energy));
  }
  return d;
}

double min_over_run(const Trajectory& t) {
  double m = t.diagnostics.front().min_N;
  for (const auto& x : t.diagnostics) m = std::min(m, x.min_N);
  return m;
}

}  // namespace

EvolutionPair run_evolution_pair(double beta, const EvolutionSetup& setup) {
  return {beta, run_one(beta, 0.0, setup, false), run_one(beta, 0.0, setup, true)};
}

CheckResult check_evolution_invariants(const EvolutionPair& runs) {
  const Drift dc = max_drift(runs.coarse), df = max_drift(runs.fine);
  const double pos_min = std::min(min_over_run(runs.coarse), min_over_run(runs.fine));
  const std::size_t pos_rej = runs.coarse.rejected_positivity + runs.fine.rejected_positivity;
  const double ent = std::max(runs.coarse.worst_entropy_drop, runs.fine.worst_entropy_drop);
  const double mass_ratio = df.mass / dc.mass, energy_ratio = df.energy / dc.energy;

  CheckResult r{"evolution", std::max(dc.mass, dc.energy), 1e-4, false, "", {}};
  r.extra = {{"mass_drift_coarse", dc.mass},       {"mass_drift_fine", df.mass},
             {"energy_drift_coarse", dc.energy},   {"energy_drift_fine", df.energy},
             {"mass_refinement_ratio", mass_ratio}, {"energy_refinement_ratio", energy_ratio},
             {"min_N", pos_min},                   {"positivity_rejections", static_cast<double>(pos_rej)},
             {"worst_entropy_drop", ent}};
  const bool drift_ok = std::max({dc.mass, dc.energy, df.mass, df.energy}) <= 1e-4;
  const bool halving = mass_ratio <= 0.65 && energy_ratio <= 0.65;
  const bool positive = pos_min > 0.0 && pos_rej == 0;
  const bool entropy_ok = ent <= 1e-8;
  const bool finished = runs.coarse.status == RunStatus::horizon_reached && runs.fine.status == RunStatus::horizon_reached;
  r.pass = drift_ok && halving && positive && entropy_ok && finished;
  r.detail = fmt::format(
      "max relative drift (coarse); drift ratios fine/coarse {:.3g}, {:.3g} (<= 0.65); min N {:.3g}; "
      "entropy drop {:.3g} (<= 1e-8)",
      mass_ratio, energy_ratio, pos_min, ent);
  return r;
}

CheckResult check_smoothing_budget(const std::vector<EvolutionPair>& runs) {
  CheckResult r{"smoothing", 0.0, 0.1, true, "max relative budget change 256 -> 512 nodes over beta", {}};
  for (const auto& x : runs) {
    const double a = x.coarse.smoothing_budget, b = x.fine.smoothing_budget;
    r.extra.emplace_back(fmt::format("beta_{:g}_budget_coarse", x.beta), a);
    r.extra.emplace_back(fmt::format("beta_{:g}_budget_fine", x.beta), b);
    if (!std::isfinite(a) || !std::isfinite(b)) r.pass = false;
    r.value = std::max(r.value, std::abs(a - b) / std::abs(b));
  }
  r.pass = r.pass && r.value <= r.tolerance;
  return r;
}

CheckResult check_epsilon_scheme(const EvolutionSetup& setup) {
  std::vector<SpectrumField> fin;
  for (double eps : {1e-2, 1e-3, 0.0}) fin.push_back(run_one(0.0, eps, setup, false).snapshots.back());
  auto dist = [&](std::size_t a, std::size_t b) {
    double m = 0.0;
    for (std::size_t j = 0; j < fin[a].size(); ++j) m = std::max(m, std::abs(fin[a].value(j) - fin[b].value(j)));
    return m;
  };
  const double d2 = dist(0, 2), d3 = dist(1, 2);
  CheckResult r{"epsilon", d3 / d2, 0.5, false, "sup-distance ratio d(1e-3, 0) / d(1e-2, 0)", {}};
  r.extra = {{"distance_eps_1e-2", d2}, {"distance_eps_1e-3", d3}};
  r.pass = std::isfinite(r.value) && d3 < d2 && r.value <= r.tolerance;
  return r;
}

const std::vector<std::string>& verify_suites() {
  static const std::vector<std::string> names = {"resonance", "stationarity", "crossform", "scaling", "lemma1",
                                                 "oracle",    "probe",        "lemma2",    "evolution", "smoothing",
                                                 "epsilon",   "all"};
  return names;
}

std::vector<CheckResult> run_verify_suite(const std::string& name, std::uint64_t seed) {
  if (name == "resonance") return {check_resonance_identities(seed)};
  if (name == "stationarity") return {check_rj_stationarity()};
  if (name == "crossform") return {check_cross_form()};
  if (name == "scaling") return {check_scaling()};
  if (name == "lemma1") return {check_lemma1(seed, seed + 1)};
  if (name == "oracle") return {check_oracle_agreement(seed)};
  if (name == "probe") return {check_trivial_probe(seed)};
  if (name == "lemma2") return {check_lemma2()};
  if (name == "evolution") return {check_evolution_invariants(run_evolution_pair(0.0))};
  if (name == "smoothing") {
    std::vector<EvolutionPair> runs;
    for (double beta : kBetas) runs.push_back(run_evolution_pair(beta));
    return {check_smoothing_budget(runs)};
  }
  if (name == "epsilon") return {check_epsilon_scheme()};
  if (name == "all")
    return {check_resonance_identities(seed), check_rj_stationarity(), check_cross_form(), check_scaling(),
            check_lemma1(seed, seed + 1)};
  throw std::invalid_argument("unknown check suite '" + name + "'");
}

}  // namespace mmt
