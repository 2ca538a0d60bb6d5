#include "mmt/evolution.hpp"

#include <algorithm>
#include <cmath>

#include "mmt/collision.hpp"

namespace mmt {

void StepController::validate() const {
  if (!(dt_init > 0.0)) throw std::domain_error("controller.dt_init must be positive");
  if (!(safety > 0.0 && safety <= 1.0)) throw std::domain_error("controller.safety must lie in (0, 1]");
  if (!(dt_min > 0.0 && dt_min <= dt_max)) throw std::domain_error("controller.dt_min must lie in (0, dt_max]");
  if (!(positivity_floor >= 0.0)) throw std::domain_error("controller.positivity_floor must be >= 0");
  if (!(tol_rk > 0.0)) throw std::domain_error("controller.tol_rk must be positive");
}

PositivityViolation::PositivityViolation(std::size_t node_, int stage_, double value)
    : std::runtime_error("positivity violated at node " + std::to_string(node_) + " in stage " +
                         std::to_string(stage_) + " (value " + std::to_string(value) + ")"),
      node(node_),
      stage(stage_) {}

std::string_view to_string(RunStatus s) {
  return s == RunStatus::horizon_reached ? "horizon_reached" : "blow_up_suspected";
}

GridFunction collision_rhs(const SpectrumField& N, const ResonanceQuad& quad, Execution exec,
                           double* extrapolated_fraction) {
  CollisionResult r = collide_grid(N, quad, Evaluator::split, exec);
  if (extrapolated_fraction != nullptr) *extrapolated_fraction = r.extrapolated_fraction;
  return std::move(r.values);
}

namespace {

SpectrumField stage_field(const SpectrumField& N, const GridFunction& k, double a, double floor, int stage) {
  std::vector<double> y(N.size());
  for (std::size_t j = 0; j < y.size(); ++j) {
    y[j] = N.value(j) + a * k.values[j];
    if (!std::isfinite(y[j])) throw NonFiniteError("non-finite value at node " + std::to_string(j));
    if (y[j] < floor) throw PositivityViolation(j, stage, y[j]);
  }
  return N.with_values(std::move(y));
}

}  // namespace

SpectrumField step_rk4(const SpectrumField& N, double dt, const ResonanceQuad& quad, double positivity_floor,
                       const GridFunction* k1_in, Execution exec) {
  if (!(dt > 0.0)) throw std::domain_error("step_rk4: dt must be positive");
  const GridFunction k1 = k1_in != nullptr ? *k1_in : collision_rhs(N, quad, exec);
  const GridFunction k2 = collision_rhs(stage_field(N, k1, 0.5 * dt, positivity_floor, 2), quad, exec);
  const GridFunction k3 = collision_rhs(stage_field(N, k2, 0.5 * dt, positivity_floor, 3), quad, exec);
  const GridFunction k4 = collision_rhs(stage_field(N, k3, dt, positivity_floor, 4), quad, exec);
  std::vector<double> y(N.size());
  for (std::size_t j = 0; j < y.size(); ++j) {
    y[j] = N.value(j) + dt / 6.0 * (k1.values[j] + 2.0 * k2.values[j] + 2.0 * k3.values[j] + k4.values[j]);
    if (!std::isfinite(y[j])) throw NonFiniteError("non-finite value at node " + std::to_string(j));
    if (y[j] < positivity_floor) throw PositivityViolation(j, 5, y[j]);
  }
  return N.with_values(std::move(y));
}

Trajectory integrate(const SpectrumField& field0, double horizon, const StepController& ctl,
                     const ResonanceQuad& quad, const IntegrateOptions& options) {
  ctl.validate();
  if (field0.form() != Form::N_form) throw std::invalid_argument("integrate expects an N-form field");
  if (!(horizon > 0.0)) throw std::domain_error("integrate: horizon must be positive");
  if (!(field0.min_value() > ctl.positivity_floor))
    throw std::domain_error("integrate: initial field must stay strictly above the positivity floor");

  std::vector<double> stops;
  for (double s : options.snapshot_times)
    if (s > 0.0 && s < horizon) stops.push_back(s);
  stops.push_back(horizon);
  std::sort(stops.begin(), stops.end());
  stops.erase(std::unique(stops.begin(), stops.end()), stops.end());

  const ModelParams& params = quad.params;
  Trajectory tr;
  SpectrumField N = field0;
  double t = 0.0;
  double dt = ctl.dt_init;
  double frac = 0.0;
  GridFunction k1 = collision_rhs(N, quad, options.exec, &frac);

  auto record = [&](double step) {
    DiagnosticsRecord d = compute_diagnostics(N, params, t, step);
    d.extrapolated_fraction = frac;
    if (!tr.diagnostics.empty()) {
      const DiagnosticsRecord& prev = tr.diagnostics.back();
      tr.smoothing_budget += 0.5 * (d.t - prev.t) * (d.seminorm_beta * d.seminorm_beta +
                                                     prev.seminorm_beta * prev.seminorm_beta);
      tr.worst_entropy_drop = std::max(tr.worst_entropy_drop, prev.entropy - d.entropy);
    }
    tr.diagnostics.push_back(d);
    if (options.on_step) options.on_step(d);
  };
  record(0.0);

  std::size_t next = 0;
  while (next < stops.size()) {
    const double stop = stops[next];
    const double sup_N = N.max_value();
    const double sup_DN = tr.diagnostics.back().sup_DN;
    const double cap = ctl.safety / (sup_N * (sup_N + sup_DN));
    const double unclipped = std::min({dt, ctl.dt_max, cap});
    if (unclipped < ctl.dt_min) {
      tr.status = RunStatus::blow_up_suspected;
      break;
    }
    double h = unclipped;
    const bool landing = t + h >= stop - 1e-12 * std::max(1.0, stop);
    if (landing) h = stop - t;

    SpectrumField full = N, half = N;
    try {
      full = step_rk4(N, h, quad, ctl.positivity_floor, &k1, options.exec);
      const SpectrumField mid = step_rk4(N, 0.5 * h, quad, ctl.positivity_floor, &k1, options.exec);
      half = step_rk4(mid, 0.5 * h, quad, ctl.positivity_floor, nullptr, options.exec);
      if (!(half.min_value() > ctl.positivity_floor)) throw PositivityViolation(0, 5, half.min_value());
    } catch (const PositivityViolation&) {
      ++tr.rejected_positivity;
      dt = 0.5 * h;
      continue;
    }

    double err = 0.0;
    for (std::size_t j = 0; j < N.size(); ++j)
      err = std::max(err, std::abs(half.value(j) - full.value(j)) / (ctl.tol_rk * (1.0 + std::abs(half.value(j)))));
    const double factor = err == 0.0 ? 4.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 4.0);

    if (err > 1.0) {
      ++tr.rejected;
      dt = h * factor;
      continue;
    }

    ++tr.accepted;
    t = landing ? stop : t + h;
    N = std::move(half);
    k1 = collision_rhs(N, quad, options.exec, &frac);
    record(h);
    dt = std::min(landing ? std::max(h * factor, unclipped) : h * factor, ctl.dt_max);
    if (landing) {
      tr.times.push_back(t);
      tr.snapshots.push_back(N);
      ++next;
    }
  }
  tr.t_end = t;
  if (tr.status == RunStatus::blow_up_suspected) {
    tr.times.push_back(t);
    tr.snapshots.push_back(N);
  }
  return tr;
}

}  // namespace mmt
