#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>

#include "mmt/collision.hpp"
#include "mmt/oracle.hpp"

using namespace mmt;
using doctest::Approx;

namespace {

double quadrature_value(const AnalyticSpectrum& n, double omega, const ModelParams& p) {
  return collide_sum_form(analytic_sampler(n, p, Form::n_form), omega, build_quadrature(p, QuadSpec{}));
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("counter-based uniforms") {
  double s = 0.0, s2 = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = counter_uniform(7, static_cast<std::uint64_t>(i), 3);
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    s += u;
    s2 += u * u;
  }
  CHECK(s / n == Approx(0.5).epsilon(0.01));
  CHECK(s2 / n - (s / n) * (s / n) == Approx(1.0 / 12.0).epsilon(0.02));
  CHECK(counter_uniform(1, 2, 3) == counter_uniform(1, 2, 3));
  CHECK(counter_uniform(1, 2, 3) != counter_uniform(1, 2, 4));
  CHECK(counter_uniform(1, 2, 3) != counter_uniform(1, 3, 3));
  CHECK(counter_uniform(1, 2, 3) != counter_uniform(2, 2, 3));
}

TEST_CASE("pointwise stationary data give a zero estimate") {
  const ModelParams p = ModelParams::make(0.0);
  OracleOptions o;
  o.window = std::pair{0.01, 100.0};
  const auto c = mc_collision(AnalyticSpectrum(PowerLaw{0.0}), 1.0, p, 1e-2, 20000, 3, o);
  CHECK(std::abs(c.mean) <= 1e-12);
  const auto rj = mc_collision(AnalyticSpectrum(RayleighJeans{1.0, 0.0}), 1.0, p, 1e-2, 20000, 3, o);
  CHECK(std::abs(rj.mean) <= 1e-10);
  CHECK(rj.std_error <= 1e-10);
}

TEST_CASE("families with no resonant set contribute nothing") {
  OracleOptions o;
  o.families = {SignFamily{-1, -1, -1}};
  const auto e = mc_collision(AnalyticSpectrum(GaussianBumpInLogOmega{1.0, 0.3, 1.0, 0.0}), 1.0, ModelParams::make(0.0),
                              1e-2, 20000, 1, o);
  CHECK(e.mean == 0.0);
  CHECK(e.std_error == 0.0);
}

TEST_CASE("input validation") {
  const ModelParams p = ModelParams::make(0.0);
  const AnalyticSpectrum b(GaussianBumpInLogOmega{1.0, 0.3, 1.0, 0.0});
  CHECK_THROWS(mc_collision(b, 1.0, p, 1e-2, 9999, 1));
  CHECK_THROWS_AS(mc_collision(AnalyticSpectrum(PowerLaw{0.0}), 1.0, p, 1e-2, 20000, 1), std::domain_error);
  CHECK_THROWS(mc_collision(b, 1.0, p, 0.0, 20000, 1));
  CHECK_THROWS(mc_collision(b, -1.0, p, 1e-2, 20000, 1));
}

TEST_CASE("estimates are reproducible bit for bit") {
  const ModelParams p = ModelParams::make(0.0);
  const AnalyticSpectrum b(GaussianBumpInLogOmega{1.0, 0.3, 1.0, 0.0});
  const auto par = mc_collision(b, 1.0, p, 1e-2, 50000, 9);
  const auto ser = mc_collision_serial(b, 1.0, p, 1e-2, 50000, 9);
  CHECK(same_bits(par.mean, ser.mean));
  CHECK(same_bits(par.std_error, ser.std_error));
  const int saved = max_workers();
  set_max_workers(1);
  const auto one = mc_collision(b, 1.0, p, 1e-2, 50000, 9);
  set_max_workers(3);
  const auto three = mc_collision(b, 1.0, p, 1e-2, 50000, 9);
  set_max_workers(saved);
  CHECK(same_bits(one.mean, three.mean));
  CHECK(same_bits(one.mean, par.mean));
  CHECK(mc_collision(b, 1.0, p, 1e-2, 50000, 10).mean != par.mean);
}

TEST_CASE("Monte-Carlo agrees with quadrature on bump data") {
  const AnalyticSpectrum b(GaussianBumpInLogOmega{1.0, 0.3, 1.0, 0.0});
  for (double beta : {-0.5, 0.0, 0.5}) {
    CAPTURE(beta);
    const ModelParams p = ModelParams::make(beta);
    const double q = quadrature_value(b, 1.0, p);
    for (double delta : {1e-2, 1e-3}) {
      CAPTURE(delta);
      const auto e = mc_collision(b, 1.0, p, delta, 200000, 17);
      const double bias = delta_bias(b, 1.0, p, delta, 200000, 17);
      CHECK(std::abs(e.mean - q) <= 3.0 * (e.std_error + bias));
    }
  }
}

TEST_CASE("probe of a degenerate family is small") {
  const ModelParams p = ModelParams::make(0.0);
  const AnalyticSpectrum b(GaussianBumpInLogOmega{1.0, 0.3, 1.0, 0.0});
  const auto probe = trivial_resonance_probe(b, 1.0, p, {1e-1, 1e-2}, 100000, 5);
  REQUIRE(probe.size() == 2);
  CHECK(probe[0].delta_reg == 1e-1);
  // bounded by a constant times sqrt(delta)
  CHECK(std::abs(probe[1].mean) <= std::abs(probe[0].mean) * std::sqrt(0.1) + 3.0 * probe[1].std_error);
}

TEST_CASE("log-log slope") {
  const std::vector<double> x{0.1, 1.0, 10.0, 100.0};
  std::vector<double> y;
  for (double v : x) y.push_back(-3.0 * v * v);
  CHECK(loglog_slope(x, y) == Approx(2.0).epsilon(1e-13));
  CHECK_THROWS(loglog_slope({1.0}, {1.0}));
}

TEST_CASE("three-bump harness") {
  const ModelParams p = ModelParams::make(0.0);
  const auto pts = lemma2_harness(1.0, {0.1, 0.05}, p);
  REQUIRE(pts.size() == 2);
  // at p = 1 the collision image grows like eps^(1 - 3/p) = eps^-2
  const double slope = std::log(pts[1].collision_lp / pts[0].collision_lp) / std::log(0.5);
  CHECK(slope == Approx(-2.0).epsilon(0.15));
  CHECK(pts[1].data_lp == Approx(pts[0].data_lp).epsilon(1e-3));
  CHECK(pts[1].omega_nodes > pts[0].omega_nodes);
  LemmaTwoOptions o;
  o.max_omega_nodes = 1000;
  CHECK_THROWS(lemma2_harness(2.0, {0.05}, p, o));
  CHECK_THROWS(lemma2_harness(3.0, {0.1}, p));
  CHECK_THROWS(lemma2_harness(0.5, {0.1}, p));
}
