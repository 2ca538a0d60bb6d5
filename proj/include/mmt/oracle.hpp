#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "mmt/analytic.hpp"
#include "mmt/parallel.hpp"
#include "mmt/params.hpp"

namespace mmt {

struct OracleEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
  double delta_reg = 0.0;
};

/// Sign pattern (e1, e2, e3) of the quadratic resonance e1 w1^2 + e2 w2^2 + e3 w3^2 = w^2.
using SignFamily = std::array<int, 3>;

/// The four families with nontrivial resonant sets.
inline constexpr std::array<SignFamily, 4> kNontrivialFamilies = {
    SignFamily{+1, +1, +1}, SignFamily{-1, -1, +1}, SignFamily{-1, +1, -1}, SignFamily{+1, -1, -1}};

struct OracleOptions {
  /// Sampling window [lo, hi] for w1, w2; defaults to the spectrum's support.
  std::optional<std::pair<double, double>> window;
  std::vector<SignFamily> families{kNontrivialFamilies.begin(), kNontrivialFamilies.end()};
  Execution exec = Execution::parallel;
};

/// Counter-based uniform in [0, 1): a pure function of (seed, sample, draw).
double counter_uniform(std::uint64_t seed, std::uint64_t sample, std::uint64_t draw);

/// Regularized-delta Monte-Carlo estimate of the collision integral at omega.
///
/// The linear constraint is eliminated exactly (w3 = w1 + w2 - w), the quadratic one is
/// replaced by 1_{|F1| < delta} / (2 delta) with F1 in units of frequency squared.
OracleEstimate mc_collision(const AnalyticSpectrum& n, double omega, const ModelParams& params, double delta_reg,
                            std::uint64_t samples, std::uint64_t seed, const OracleOptions& options = {});

/// Same estimate with the sampling loop run serially (reference for the parallel path).
OracleEstimate mc_collision_serial(const AnalyticSpectrum& n, double omega, const ModelParams& params,
                                   double delta_reg, std::uint64_t samples, std::uint64_t seed,
                                   const OracleOptions& options = {});

/// Regularization bias estimate from common-random-number runs at delta and 2 delta.
double delta_bias(const AnalyticSpectrum& n, double omega, const ModelParams& params, double delta_reg,
                  std::uint64_t samples, std::uint64_t seed, const OracleOptions& options = {});

/// Contribution of the (+, +, -) family at each delta.
std::vector<OracleEstimate> trivial_resonance_probe(const AnalyticSpectrum& n, double omega,
                                                    const ModelParams& params, const std::vector<double>& deltas,
                                                    std::uint64_t samples, std::uint64_t seed,
                                                    SignFamily family = {+1, +1, -1});

/// Least-squares slope of log|y| against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct LemmaTwoPoint {
  double eps = 0.0;
  double collision_lp = 0.0;  // ||C(f^eps)||_{L^p(1/2, 3/2)}
  double data_lp = 0.0;       // ||f^eps||_{L^p}
  std::size_t omega_nodes = 0;
};

struct LemmaTwoOptions {
  int nodes_per_width = 16;        // omega spacing is at most eps^2 / nodes_per_width
  std::size_t max_omega_nodes = 400000;
  int order = 16;                  // Gauss points per u-panel
};

/// L^p norms of the three-bump data and of its collision image, one entry per eps.
std::vector<LemmaTwoPoint> lemma2_harness(double p, const std::vector<double>& eps_list, const ModelParams& params,
                                          const LemmaTwoOptions& options = {});

/// Collision of the three-bump data at omega, integrated panel-by-panel between the
/// u-values where some partner frequency crosses a bump edge.
double lemma2_collision(const LemmaTwoData& data, double omega, const ModelParams& params, int order = 16);

}  // namespace mmt
