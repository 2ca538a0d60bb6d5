#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mmt/diagnostics.hpp"
#include "mmt/parallel.hpp"
#include "mmt/resonance.hpp"
#include "mmt/spectrum.hpp"

namespace mmt {

struct StepController {
  double dt_init = 1e-2;
  double safety = 0.5;
  double dt_min = 1e-10;
  double dt_max = 0.1;
  double positivity_floor = 0.0;
  double tol_rk = 1e-8;

  void validate() const;
};

class PositivityViolation : public std::runtime_error {
 public:
  PositivityViolation(std::size_t node, int stage, double value);
  std::size_t node;
  int stage;  // 1..4 for RK stages, 5 for the step result
};

/// dN/dt on the grid: split evaluator on the quadrature's own u-range.
GridFunction collision_rhs(const SpectrumField& N, const ResonanceQuad& quad, Execution exec = Execution::parallel,
                           double* extrapolated_fraction = nullptr);

/// One classical RK4 step. `k1`, if given, must be collision_rhs(N).
SpectrumField step_rk4(const SpectrumField& N, double dt, const ResonanceQuad& quad, double positivity_floor = 0.0,
                       const GridFunction* k1 = nullptr, Execution exec = Execution::parallel);

enum class RunStatus { horizon_reached, blow_up_suspected };
std::string_view to_string(RunStatus s);

struct Trajectory {
  std::vector<double> times;  // snapshot times
  std::vector<SpectrumField> snapshots;
  std::vector<DiagnosticsRecord> diagnostics;  // t = 0 plus every accepted step
  std::size_t accepted = 0;
  std::size_t rejected = 0;             // local-error rejections
  std::size_t rejected_positivity = 0;  // positivity rejections
  RunStatus status = RunStatus::horizon_reached;
  double t_end = 0.0;
  /// Time-trapezoid of [DN]_beta^2 over the accepted steps.
  double smoothing_budget = 0.0;
  /// Largest drop of entropy over one accepted step (0 if it never drops).
  double worst_entropy_drop = 0.0;
};

struct IntegrateOptions {
  std::vector<double> snapshot_times;  // horizon is always added
  Execution exec = Execution::parallel;
  std::function<void(const DiagnosticsRecord&)> on_step;
};

/// Adaptive step-doubling RK4 from field0 (N-form, strictly positive) to `horizon`.
Trajectory integrate(const SpectrumField& field0, double horizon, const StepController& controller,
                     const ResonanceQuad& quad, const IntegrateOptions& options = {});

}  // namespace mmt
