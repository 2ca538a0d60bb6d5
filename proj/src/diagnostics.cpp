#include "mmt/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mmt/collision.hpp"

namespace mmt {

namespace {

void require_n_form(const SpectrumField& f, const char* who) {
  if (f.form() != Form::n_form) throw std::invalid_argument(std::string(who) + " expects an n-form field");
}

// Log-trapezoid of g(omega_j) * omega_j^power.
template <class G>
double log_integral(const FrequencyGrid& grid, double power, G&& g) {
  const auto w = grid.log_trapezoid_weights();
  double s = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) s += w[j] * g(j) * std::pow(grid[j], power);
  return s;
}

}  // namespace

double mass(const SpectrumField& n) {
  require_n_form(n, "mass");
  return log_integral(n.grid(), 2.0, [&](std::size_t j) { return n.value(j); });
}

double energy(const SpectrumField& n) {
  require_n_form(n, "energy");
  return log_integral(n.grid(), 3.0, [&](std::size_t j) { return n.value(j); });
}

double entropy(const SpectrumField& n) {
  require_n_form(n, "entropy");
  for (std::size_t j = 0; j < n.size(); ++j)
    if (!(n.value(j) > 0.0))
      throw std::domain_error("entropy needs a strictly positive field (node " + std::to_string(j) + ")");
  return log_integral(n.grid(), 2.0, [&](std::size_t j) { return std::log(n.value(j)); });
}

double weighted_sup_norm(const FrequencyGrid& grid, std::span<const double> values, const WeightedNormSpec& spec) {
  double m = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) m = std::max(m, spec.weight(grid[j]) * std::abs(values[j]));
  return m;
}

double weighted_sup_norm(const SpectrumField& f, const WeightedNormSpec& spec) {
  return weighted_sup_norm(f.grid(), f.values(), spec);
}

namespace {

struct Band {
  double half_width;  // in log(omega)
  // kernel at (omega, omega') times omega * omega'
  double (*kernel)(double w, double wp, double beta);
  // closed form of the |s| < h/2 strip per unit omega * F_x^2
  double (*strip)(double h, double beta);
};

double band1_kernel(double w, double wp, double beta) {
  return std::pow(std::abs(wp - w), -(beta + 1.0)) * std::pow(w * wp, beta / 2.0) * w * wp;
}
double band2_kernel(double w, double wp, double beta) {
  return std::pow(std::abs(wp - w), 2.0 * beta) * std::pow(w * wp, -(2.0 * beta + 1.0) / 2.0) * w * wp;
}
double band1_strip(double h, double beta) { return 2.0 * std::pow(h / 2.0, 2.0 - beta) / (2.0 - beta); }
double band2_strip(double h, double beta) { return 2.0 * std::pow(h / 2.0, 3.0 + 2.0 * beta) / (3.0 + 2.0 * beta); }

// Contribution of all pairs (i, i + m), m != 0, from row i; trapezoid in x, cells in s.
double row_sum(const GridFunction& F, const Band& b, double beta, std::size_t i) {
  const FrequencyGrid& g = F.grid;
  const double h = g.log_step();
  const long n = static_cast<long>(g.size());
  const long reach = static_cast<long>(std::ceil(b.half_width / h + 0.5));
  double acc = 0.0;
  for (long m = -reach; m <= reach; ++m) {
    if (m == 0) continue;
    const long ip = static_cast<long>(i) + m;
    if (ip < 0 || ip >= n) continue;
    // cell [(|m| - 1/2) h, (|m| + 1/2) h] clipped to the band
    const double lo = (std::abs(static_cast<double>(m)) - 0.5) * h;
    const double hi = std::min((std::abs(static_cast<double>(m)) + 0.5) * h, b.half_width);
    if (hi <= lo) continue;
    // x-trapezoid over the nodes i for which i + m is still in the grid
    const long first = std::max(0L, -m), last = std::min(n - 1, n - 1 - m);
    const long ii = static_cast<long>(i);
    const double wx = (ii == first || ii == last) ? 0.5 * h : h;
    const double d = F.values[static_cast<std::size_t>(ip)] - F.values[i];
    acc += wx * (hi - lo) * d * d * b.kernel(g[i], g[static_cast<std::size_t>(ip)], beta);
  }
  return acc;
}

double strip_sum(const GridFunction& F, const Band& b, double beta) {
  const FrequencyGrid& g = F.grid;
  const double h = g.log_step();
  const std::size_t n = g.size();
  const auto w = g.log_trapezoid_weights();
  const double c = b.strip(h, beta);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double fx;
    if (i == 0)
      fx = (-3.0 * F.values[0] + 4.0 * F.values[1] - F.values[2]) / (2.0 * h);
    else if (i + 1 == n)
      fx = (3.0 * F.values[n - 1] - 4.0 * F.values[n - 2] + F.values[n - 3]) / (2.0 * h);
    else
      fx = (F.values[i + 1] - F.values[i - 1]) / (2.0 * h);
    acc += w[i] * g[i] * fx * fx * c;
  }
  return acc;
}

}  // namespace

double smoothing_seminorm(const GridFunction& F, double beta, Execution exec) {
  if (!(beta > -1.0 && beta < 1.0)) throw std::domain_error("smoothing_seminorm: beta must lie in (-1, 1)");
  if (F.values.size() != F.grid.size() || F.grid.size() < 3)
    throw std::invalid_argument("smoothing_seminorm: values do not match the grid");
  const Band bands[2] = {{std::log(1.5), band1_kernel, band1_strip}, {std::log(2.0), band2_kernel, band2_strip}};
  const std::size_t n = F.grid.size();
  std::vector<double> rows(n);
  auto row = [&](long i) {
    const auto j = static_cast<std::size_t>(i);
    rows[j] = row_sum(F, bands[0], beta, j) + row_sum(F, bands[1], beta, j);
  };
  const long nl = static_cast<long>(n);
  if (exec == Execution::serial) {
    for (long i = 0; i < nl; ++i) row(i);
  } else {
#pragma omp parallel for schedule(static) num_threads(max_workers())
    for (long i = 0; i < nl; ++i) row(i);
  }
  double total = strip_sum(F, bands[0], beta) + strip_sum(F, bands[1], beta);
  for (double r : rows) total += r;
  return std::sqrt(std::max(total, 0.0));
}

double lp_norm(const GridFunction& f, double q) {
  const auto w = f.grid.log_trapezoid_weights();
  double s = 0.0;
  for (std::size_t j = 0; j < f.values.size(); ++j) s += w[j] * std::pow(std::abs(f.values[j]), q) * f.grid[j];
  return std::pow(s, 1.0 / q);
}

double x_norm(const SpectrumField& N, const ModelParams& params) {
  const GridFunction dn = log_derivative(N);
  return N.max_value() + lp_norm(dn, 2.0 * params.p0) + dn.sup_abs();
}

std::vector<double> stationarity_residual(const AnalyticSpectrum& n, const ModelParams& params,
                                          const ResonanceQuad& quad, std::span<const double> omegas) {
  const auto s = analytic_sampler(n, params, Form::n_form);
  std::vector<double> out;
  out.reserve(omegas.size());
  for (double w : omegas) {
    const SumTerms t = collide_sum_terms(s, w, quad);
    if (!std::isfinite(t.abs_sum))
      throw NonFiniteError("gain/loss magnitude is not finite at omega = " + std::to_string(w));
    out.push_back(t.abs_sum > 0.0 ? std::abs(t.value) / t.abs_sum : 0.0);
  }
  return out;
}

double scaling_covariance_residual(const AnalyticSpectrum& n, double lambda, double omega, const ModelParams& params,
                                   const ResonanceQuad& quad) {
  if (!(lambda > 0.0)) throw std::domain_error("scaling: lambda must be positive");
  const auto direct = analytic_sampler(n, params, Form::n_form);
  const auto scaled = FunctionSampler{[&](double w) { return n(lambda * w); }};
  const double lhs = collide_sum_form(scaled, omega, quad);
  const double factor = std::pow(lambda, -params.collision_degree());
  const double base = collide_sum_form(direct, lambda * omega, quad);
  return std::abs(lhs - factor * base) / (std::abs(base) * factor + 1e-300);
}

DiagnosticsRecord compute_diagnostics(const SpectrumField& N, const ModelParams& params, double t, double dt) {
  const SpectrumField n = convert_form(N, params, Form::n_form);
  const GridFunction dn = log_derivative(N);
  DiagnosticsRecord r;
  r.t = t;
  r.dt = dt;
  r.mass = mass(n);
  r.energy = energy(n);
  r.entropy = entropy(n);
  r.min_N = N.min_value();
  r.max_N = N.max_value();
  r.sup_DN = dn.sup_abs();
  r.lp_DN_p0 = lp_norm(dn, 2.0 * params.p0);
  r.seminorm_beta = smoothing_seminorm(dn, params.beta);
  r.x_norm = r.max_N + r.lp_DN_p0 + r.sup_DN;
  return r;
}

}  // namespace mmt
