#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "mmt/analytic.hpp"
#include "mmt/grid.hpp"
#include "mmt/params.hpp"
#include "mmt/spectrum.hpp"

using namespace mmt;
using doctest::Approx;

TEST_CASE("derived exponents follow beta") {
  const ModelParams p = ModelParams::make(0.25);
  CHECK(p.gamma_scale() == 2.0);
  CHECK(p.collision_degree() == 4.0);
  CHECK(p.outer_exponent() == 0.0);
  CHECK(ModelParams::make(0.0).p0 == 1);
  CHECK(ModelParams::make(0.9).p0 == 3);
  CHECK(ModelParams::make(-0.9).p0 == 3);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(ModelParams::make(1.0), std::domain_error);
  CHECK_THROWS_AS(ModelParams::make(-1.0), std::domain_error);
  CHECK_THROWS_AS(ModelParams::make(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(ModelParams::make(0.0, -0.1), std::domain_error);
  ModelParams p = ModelParams::make(0.9);
  p.p0 = 2;
  CHECK_THROWS_AS(p.validate(), std::domain_error);
}

TEST_CASE("grid nodes are log-uniform") {
  const FrequencyGrid g(0.1, 10.0, 21);
  CHECK(g[0] == Approx(0.1).epsilon(1e-15));
  CHECK(g[20] == Approx(10.0).epsilon(1e-14));
  CHECK(g[10] == Approx(1.0).epsilon(1e-14));
  double s = 0.0;
  for (double w : g.log_trapezoid_weights()) s += w;
  CHECK(s == Approx(std::log(100.0)).epsilon(1e-14));
  CHECK_THROWS_AS(FrequencyGrid(0.1, 10.0, 7), std::domain_error);
  CHECK_THROWS_AS(FrequencyGrid(0.0, 10.0, 16), std::domain_error);
  CHECK_THROWS_AS(FrequencyGrid(1.0, 1.0, 16), std::domain_error);
}

TEST_CASE("form conversion examples") {
  const FrequencyGrid g(0.01, 100.0, 64);
  SUBCASE("beta = 0, n = omega^-3/2 gives N = 1") {
    const auto n = tabulate(AnalyticSpectrum(PowerLaw{-1.5}), g, ModelParams::make(0.0), Form::n_form);
    const auto N = convert_form(n, ModelParams::make(0.0), Form::N_form);
    for (std::size_t j = 0; j < g.size(); ++j) CHECK(N.value(j) == Approx(1.0).epsilon(1e-13));
  }
  SUBCASE("round trip") {
    const ModelParams p = ModelParams::make(-0.3);
    const auto n = tabulate(AnalyticSpectrum(GaussianBumpInLogOmega{1.0, 0.4, 2.0, 0.1}), g, p, Form::n_form);
    const auto back = convert_form(convert_form(n, p, Form::N_form), p, Form::n_form);
    for (std::size_t j = 0; j < g.size(); ++j) CHECK(back.value(j) == Approx(n.value(j)).epsilon(1e-14));
  }
  SUBCASE("omega = 1 is a fixed point of the weight") {
    const FrequencyGrid g1(0.1, 10.0, 11);
    const auto n = tabulate_values([](double) { return 2.0; }, g1, Form::n_form);
    const auto N = convert_form(n, ModelParams::make(0.25), Form::N_form);
    CHECK(N.value(5) == Approx(2.0).epsilon(1e-14));
  }
}

TEST_CASE("sampling and extrapolation") {
  const FrequencyGrid g(0.1, 10.0, 33);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0.5, 2.0);
  std::vector<double> v(g.size());
  for (double& x : v) x = U(rng);
  const SpectrumField f(g, v, Form::N_form);
  for (std::size_t j = 0; j < g.size(); ++j) CHECK(f.sample(g[j]) == v[j]);
  CHECK(f.sample(1e-3) == v.front());
  CHECK(f.sample(1e3) == v.back());
  CHECK_THROWS_AS(f.sample(0.0), std::domain_error);
  CHECK_THROWS_AS(f.sample(-1.0), std::domain_error);

  const SpectrumField c = tabulate_values([](double) { return 3.5; }, g, Form::N_form);
  for (double w : {1e-4, 0.37, 5.0, 1e4}) CHECK(c.sample(w) == 3.5);

  const SpectrumField pw = tabulate_values([](double w) { return std::pow(w, 0.5); }, g, Form::N_form,
                                           Extrapolation::power_law_fit);
  CHECK(pw.sample(1e3) == Approx(std::sqrt(1e3)).epsilon(1e-12));
  CHECK(pw.sample(1e-3) == Approx(std::sqrt(1e-3)).epsilon(1e-12));
}

TEST_CASE("fields reject negative and non-finite values") {
  const FrequencyGrid g(0.1, 10.0, 8);
  CHECK_THROWS(SpectrumField(g, {1, 1, 1, -1e-3, 1, 1, 1, 1}, Form::N_form));
  CHECK_THROWS(SpectrumField(g, {1, 1, 1, NAN, 1, 1, 1, 1}, Form::N_form));
  CHECK_THROWS(SpectrumField(g, {1, 1, 1}, Form::N_form));
}

TEST_CASE("interpolation converges at fourth order in the interior") {
  auto err = [](std::size_t nodes) {
    const FrequencyGrid g(0.1, 10.0, nodes);
    const auto f = tabulate_values([](double w) { return 1.0 + std::sin(std::log(w)); }, g, Form::N_form);
    double e = 0.0;
    for (double x = -1.0; x <= 1.0; x += 0.013) e = std::max(e, std::abs(f.sample_log(x) - 1.0 - std::sin(x)));
    return e;
  };
  const double rate = std::log2(err(65) / err(129));
  CHECK(rate > 3.5);
}

TEST_CASE("diff_log agrees with a plain difference and stays accurate for tiny steps") {
  const FrequencyGrid g(0.1, 10.0, 40);
  const auto f = tabulate_values([](double w) { return 1.0 + 0.5 * std::sin(2.0 * std::log(w)); }, g, Form::N_form,
                                 Extrapolation::power_law_fit);
  for (double x : {-3.0, -1.234, 0.0, 0.77, 2.2, 3.5}) {
    for (double dx : {0.3, -0.2, 1e-3}) CHECK(f.diff_log(x, dx) == Approx(f.sample_log(x + dx) - f.sample_log(x)).epsilon(1e-12));
    // slope times dx for dx far below the cell size
    const double d = f.diff_log(x, 1e-13) / 1e-13;
    const double fd = (f.sample_log(x + 1e-6) - f.sample_log(x - 1e-6)) / 2e-6;
    CHECK(d == Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("log derivative examples") {
  const FrequencyGrid g(0.1, 10.0, 256);
  const auto f = tabulate_values([](double w) { return std::sqrt(w); }, g, Form::N_form);
  const GridFunction d = log_derivative(f);
  for (std::size_t j = 2; j + 2 < g.size(); ++j) CHECK(d.values[j] == Approx(0.5 * std::sqrt(g[j])).epsilon(1e-8));
  const auto c = tabulate_values([](double) { return 4.0; }, g, Form::N_form);
  CHECK(log_derivative(c).sup_abs() == 0.0);
}

TEST_CASE("analytic spectra") {
  const AnalyticSpectrum rj(RayleighJeans{2.0, 1.0});
  CHECK(rj(3.0) == Approx(1.0 / 7.0));
  CHECK(AnalyticSpectrum::kz_mass_exponent(0.0) == Approx(5.0 / 3.0));
  CHECK(AnalyticSpectrum::kz_energy_exponent(0.0) == Approx(2.0));
  const AnalyticSpectrum b(GaussianBumpInLogOmega{2.0, 0.3, 1.5, 0.25});
  CHECK(b(2.0) == Approx(1.75));
  CHECK(b(2.0 * std::exp(0.3)) == Approx(0.25 + 1.5 * std::exp(-0.5)));
  CHECK_THROWS(AnalyticSpectrum(RayleighJeans{0.0, 0.0}));
  CHECK_THROWS(AnalyticSpectrum(GaussianBumpInLogOmega{1.0, -0.1, 1.0, 0.0}));
  CHECK_FALSE(rj.support().has_value());
  REQUIRE(b.support().has_value() == false);  // positive baseline: no compact support
  const auto s = AnalyticSpectrum(GaussianBumpInLogOmega{1.0, 0.3, 1.0, 0.0}).support();
  REQUIRE(s.has_value());
  CHECK(s->first < 0.1);
  CHECK(s->second > 10.0);
}

TEST_CASE("smoothed indicator has a plateau and compact support") {
  CHECK(smoothed_indicator(0.0) == 1.0);
  CHECK(smoothed_indicator(0.5) == 1.0);
  CHECK(smoothed_indicator(-0.5) == 1.0);
  CHECK(smoothed_indicator(1.0) == 0.0);
  CHECK(smoothed_indicator(-1.3) == 0.0);
  double prev = 1.0;
  for (double x = 0.5; x <= 1.0; x += 0.01) {
    const double v = smoothed_indicator(x);
    CHECK(v <= prev);
    CHECK(v == Approx(smoothed_indicator(-x)));
    prev = v;
  }
}

TEST_CASE("three-bump data has an eps-independent L^p norm") {
  for (double p : {1.0, 2.0}) {
    auto norm = [&](double eps) {
      const AnalyticSpectrum f(LemmaTwoData{eps, p});
      const double lo = 1.0 / 3.0 - eps * eps - eps, hi = 1.0 + eps * eps;
      const int n = 400000;
      const double h = (hi - lo) / n;
      double s = 0.0;
      for (int i = 0; i <= n; ++i) s += (i == 0 || i == n ? 0.5 : 1.0) * std::pow(f(lo + i * h), p);
      return std::pow(s * h, 1.0 / p);
    };
    const double a = norm(0.1), b = norm(0.05), c = norm(0.025);
    CHECK(b == Approx(a).epsilon(1e-3));
    CHECK(c == Approx(a).epsilon(1e-3));
  }
}
