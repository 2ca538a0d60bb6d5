#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mmt/evolution.hpp"
#include "mmt/resonance.hpp"

namespace mmt {

struct CheckResult {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;  // what value and tolerance mean, plus anything worth printing
  std::vector<std::pair<std::string, double>> extra;
};

CheckResult check_resonance_identities(std::uint64_t seed, int count = 10000);
CheckResult check_rj_stationarity(const QuadSpec& spec = {});
CheckResult check_cross_form(const QuadSpec& spec = {});
CheckResult check_scaling(const QuadSpec& spec = {});
CheckResult check_oracle_agreement(std::uint64_t seed, std::uint64_t samples = 1000000, double delta = 1e-3,
                                   double beta = 0.0, const QuadSpec& spec = {});
CheckResult check_trivial_probe(std::uint64_t seed, std::uint64_t samples = 1000000);
CheckResult check_lemma2(double p = 2.0);
CheckResult check_lemma1(std::uint64_t seed_a, std::uint64_t seed_b);
/// Ratio for f = 1 / m, an upper bound for the random family.
double lemma1_flat_ratio(double beta);

/// Bump evolution used by the invariant, smoothing and epsilon checks.
struct EvolutionSetup {
  double horizon = 0.5;
  double omega_min = 1e-2, omega_max = 1e2;
  double floor_value = 1e-6;  // N0 = floor_value + bump
  double bump_center = 1.0, bump_width = 0.5, bump_amplitude = 1.0;
  std::size_t coarse_nodes = 256, fine_nodes = 512;
  double tol_rk = 1e-8;  // the fine run uses tol_rk / 16
  QuadSpec coarse_quad{4, 8, 1e-12}, fine_quad{6, 12, 1e-12};
};

struct EvolutionPair {
  double beta = 0.0;
  Trajectory coarse, fine;
};

SpectrumField evolution_initial(const EvolutionSetup& setup, std::size_t nodes);
EvolutionPair run_evolution_pair(double beta, const EvolutionSetup& setup = {});

CheckResult check_evolution_invariants(const EvolutionPair& runs);
CheckResult check_smoothing_budget(const std::vector<EvolutionPair>& runs);
CheckResult check_epsilon_scheme(const EvolutionSetup& setup = {});

/// Suites understood by `verify`; "all" runs the ones that finish in seconds.
const std::vector<std::string>& verify_suites();
/// Throws std::invalid_argument on an unknown suite name.
std::vector<CheckResult> run_verify_suite(const std::string& name, std::uint64_t seed);

}  // namespace mmt
