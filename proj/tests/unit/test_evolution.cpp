#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>

#include "mmt/evolution.hpp"

using namespace mmt;
using doctest::Approx;

namespace {

const ModelParams kParams = ModelParams::make(0.0);
const ResonanceQuad& quad() {
  static const ResonanceQuad q = build_quadrature(kParams, 4, 8);
  return q;
}

SpectrumField bump_field(std::size_t nodes, double floor = 1e-3) {
  const FrequencyGrid g(0.05, 20.0, nodes);
  return tabulate_values(
      [floor](double w) {
        const double x = std::log(w) / 0.5;
        return floor + std::exp(-0.5 * x * x);
      },
      g, Form::N_form);
}

SpectrumField rj_field(std::size_t nodes) {
  // n = 1/omega, N = omega^(1/2) at beta = 0
  return tabulate(AnalyticSpectrum(RayleighJeans{1.0, 0.0}), FrequencyGrid(0.01, 100.0, nodes), kParams, Form::N_form,
                  Extrapolation::power_law_fit);
}

double max_rel_diff(const SpectrumField& a, const SpectrumField& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a.value(j) - b.value(j)) / std::abs(b.value(j)));
  return m;
}

}  // namespace

TEST_CASE("zero field is a fixed point") {
  const FrequencyGrid g(0.1, 10.0, 32);
  const SpectrumField z(g, std::vector<double>(32, 0.0), Form::N_form);
  CHECK(collision_rhs(z, quad()).sup_abs() == 0.0);
  const SpectrumField s = step_rk4(z, 0.1, quad());
  for (std::size_t j = 0; j < s.size(); ++j) CHECK(s.value(j) == 0.0);
}

TEST_CASE("Rayleigh-Jeans barely moves in one step") {
  const SpectrumField N = rj_field(128);
  const SpectrumField s = step_rk4(N, 1e-3, quad());
  CHECK(max_rel_diff(s, N) <= 1e-8);
}

TEST_CASE("RK4 local error is fifth order") {
  // constant N stays constant and obeys N' = a N^3, a = C(1)(1); the interpolant is exact there
  const FrequencyGrid g(0.1, 10.0, 16);
  const double a = collision_rhs(tabulate_values([](double) { return 1.0; }, g, Form::N_form), quad()).values[7];
  CHECK(a == Approx(0.02851881345).epsilon(1e-6));
  const SpectrumField N = tabulate_values([](double) { return 3.0; }, g, Form::N_form);
  auto local_error = [&](double dt) {
    const SpectrumField s = step_rk4(N, dt, quad());
    const double exact = 3.0 / std::sqrt(1.0 - 18.0 * a * dt);
    double e = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j) e = std::max(e, std::abs(s.value(j) - exact));
    return e;
  };
  const double e1 = local_error(0.2), e2 = local_error(0.1);
  CHECK(std::log2(e1 / e2) >= 4.5);
  CHECK(e2 <= 1e-8);
}

TEST_CASE("positivity violations name node and stage") {
  const SpectrumField N = bump_field(64);
  bool thrown = false;
  try {
    (void)step_rk4(N, 0.5, quad(), 0.999e-3);
  } catch (const PositivityViolation& e) {
    thrown = true;
    CHECK(e.node < N.size());
    CHECK(e.stage >= 1);
    CHECK(e.stage <= 5);
  }
  CHECK(thrown);
  CHECK_THROWS_AS(step_rk4(N, 0.0, quad()), std::domain_error);
}

TEST_CASE("controller validation") {
  StepController c;
  CHECK_NOTHROW(c.validate());
  c.dt_init = 0.0;
  CHECK_THROWS(c.validate());
  c = {};
  c.safety = 1.5;
  CHECK_THROWS(c.validate());
  c = {};
  c.dt_min = 1.0;
  CHECK_THROWS(c.validate());
  c = {};
  c.positivity_floor = -1.0;
  CHECK_THROWS(c.validate());
  c = {};
  c.tol_rk = 0.0;
  CHECK_THROWS(c.validate());
}

TEST_CASE("integrate rejects bad input") {
  const SpectrumField N = bump_field(32);
  CHECK_THROWS_AS(integrate(convert_form(N, kParams, Form::n_form), 0.1, {}, quad()), std::invalid_argument);
  CHECK_THROWS_AS(integrate(N, 0.0, {}, quad()), std::domain_error);
  StepController c;
  c.positivity_floor = 1.0;
  CHECK_THROWS_AS(integrate(N, 0.1, c, quad()), std::domain_error);
}

TEST_CASE("Rayleigh-Jeans stays put under integrate") {
  StepController c;
  c.dt_init = 0.05;
  const SpectrumField N = rj_field(128);
  const Trajectory tr = integrate(N, 0.2, c, quad(), {{0.1}});
  CHECK(tr.status == RunStatus::horizon_reached);
  CHECK(tr.t_end == 0.2);
  REQUIRE(tr.times.size() == 2);
  CHECK(tr.times[0] == Approx(0.1).epsilon(1e-14));
  CHECK(tr.rejected_positivity == 0);
  CHECK(max_rel_diff(tr.snapshots.back(), N) <= 1e-6);
  const double m0 = tr.diagnostics.front().mass;
  for (const auto& d : tr.diagnostics) CHECK(std::abs(d.mass - m0) <= 1e-6 * m0);
}

TEST_CASE("bump evolution: entropy grows, mass and energy are kept") {
  StepController c;
  c.dt_init = 0.05;
  const Trajectory tr = integrate(bump_field(96), 0.3, c, quad());
  CHECK(tr.status == RunStatus::horizon_reached);
  CHECK(tr.worst_entropy_drop <= 1e-8);
  const auto& a = tr.diagnostics.front();
  const auto& b = tr.diagnostics.back();
  CHECK(b.entropy > a.entropy);
  CHECK(std::abs(b.mass - a.mass) <= 1e-3 * a.mass);
  CHECK(std::abs(b.energy - a.energy) <= 1e-3 * a.energy);
  CHECK(tr.smoothing_budget > 0.0);
  for (std::size_t i = 1; i < tr.diagnostics.size(); ++i) CHECK(tr.diagnostics[i].t > tr.diagnostics[i - 1].t);
}

TEST_CASE("step cap below dt_min is reported as blow-up") {
  StepController c;
  c.dt_min = 1e-2;
  // sup N = 100 caps the step at 0.5 / (100 * (100 + sup DN)), far below dt_min
  const FrequencyGrid g(0.1, 10.0, 32);
  const SpectrumField N = tabulate_values([](double w) { return 1.0 + 99.0 * std::exp(-std::log(w) * std::log(w)); },
                                          g, Form::N_form);
  const Trajectory tr = integrate(N, 1.0, c, quad());
  CHECK(tr.status == RunStatus::blow_up_suspected);
  CHECK(tr.t_end < 1.0);
  CHECK(tr.snapshots.size() == 1);
  CHECK(to_string(tr.status) != to_string(RunStatus::horizon_reached));
}

TEST_CASE("trajectory is identical for any worker count") {
  StepController c;
  c.dt_init = 0.05;
  const SpectrumField N = bump_field(48);
  const int saved = max_workers();
  set_max_workers(1);
  const Trajectory a = integrate(N, 0.1, c, quad());
  set_max_workers(4);
  const Trajectory b = integrate(N, 0.1, c, quad());
  set_max_workers(saved);
  IntegrateOptions serial;
  serial.exec = Execution::serial;
  const Trajectory s = integrate(N, 0.1, c, quad(), serial);
  REQUIRE(a.diagnostics.size() == b.diagnostics.size());
  REQUIRE(a.diagnostics.size() == s.diagnostics.size());
  const auto& va = a.snapshots.back().values();
  const auto& vb = b.snapshots.back().values();
  const auto& vs = s.snapshots.back().values();
  CHECK(std::memcmp(va.data(), vb.data(), va.size() * sizeof(double)) == 0);
  CHECK(std::memcmp(va.data(), vs.data(), va.size() * sizeof(double)) == 0);
}

TEST_CASE("on_step sees every record") {
  std::size_t calls = 0;
  IntegrateOptions o;
  o.on_step = [&](const DiagnosticsRecord&) { ++calls; };
  StepController c;
  c.dt_init = 0.05;
  const Trajectory tr = integrate(bump_field(32), 0.05, c, quad(), o);
  CHECK(calls == tr.diagnostics.size());
  CHECK(tr.accepted + 1 == tr.diagnostics.size());
}
