#pragma once

#include <span>
#include <vector>

#include "mmt/analytic.hpp"
#include "mmt/parallel.hpp"
#include "mmt/params.hpp"
#include "mmt/resonance.hpp"
#include "mmt/spectrum.hpp"

namespace mmt {

/// Two-piece weight m(omega) = omega^(-theta) below 1, omega^(gamma_w) above.
struct WeightedNormSpec {
  double theta = 0.0;
  double gamma_w = 0.0;

  double weight(double omega) const { return omega < 1.0 ? std::pow(omega, -theta) : std::pow(omega, gamma_w); }
};

struct DiagnosticsRecord {
  double t = 0.0;
  double dt = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  double entropy = 0.0;
  double min_N = 0.0;
  double max_N = 0.0;
  double sup_DN = 0.0;
  double lp_DN_p0 = 0.0;
  double seminorm_beta = 0.0;
  double x_norm = 0.0;
  double extrapolated_fraction = 0.0;
};

/// Integral of n omega d(omega) over the grid support; n-form input.
double mass(const SpectrumField& n);
/// Integral of n omega^2 d(omega) over the grid support; n-form input.
double energy(const SpectrumField& n);
/// Integral of log(n) omega d(omega); throws on a nonpositive node.
double entropy(const SpectrumField& n);

double weighted_sup_norm(const FrequencyGrid& grid, std::span<const double> values, const WeightedNormSpec& spec);
double weighted_sup_norm(const SpectrumField& f, const WeightedNormSpec& spec);

/// Band-restricted fractional seminorm [F]_beta (the square root of the double integral).
double smoothing_seminorm(const GridFunction& F, double beta, Execution exec = Execution::parallel);

/// (integral of |DN|^q d(omega))^(1/q) over the grid support.
double lp_norm(const GridFunction& f, double q);

/// ||N||_inf + ||DN||_{2 p0} + ||DN||_inf.
double x_norm(const SpectrumField& N, const ModelParams& params);

/// Cancellation ratio |C(n)| / (sum of |gain| + |loss|) at each omega, analytic sampling.
std::vector<double> stationarity_residual(const AnalyticSpectrum& n, const ModelParams& params,
                                          const ResonanceQuad& quad, std::span<const double> omegas);

/// Relative defect of C(n(lambda .))(omega) = lambda^-(4 beta + 3) C(n)(lambda omega).
double scaling_covariance_residual(const AnalyticSpectrum& n, double lambda, double omega, const ModelParams& params,
                                   const ResonanceQuad& quad);

/// Full record for an N-form state.
DiagnosticsRecord compute_diagnostics(const SpectrumField& N, const ModelParams& params, double t, double dt);

}  // namespace mmt
