#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mmt/grid.hpp"
#include "mmt/params.hpp"

namespace mmt {

enum class Form { n_form, N_form };
enum class Extrapolation { constant, power_law_fit };

std::string_view to_string(Form f);
std::string_view to_string(Extrapolation e);
Form parse_form(std::string_view s);
Extrapolation parse_extrapolation(std::string_view s);

/// Fourth-order finite-difference derivative with respect to log(omega).
/// Centered in the interior, one-sided five-point stencils at the two ends.
std::vector<double> log_grid_derivative(std::span<const double> values, double log_step);

/// Cubic Hermite interpolation in (log omega, value) on a log-uniform grid.
///
/// Node slopes come from the fourth-order derivative, then are limited so that
/// every interval with monotone data keeps a monotone interpolant.
class LogCubicInterpolant {
 public:
  LogCubicInterpolant() = default;
  LogCubicInterpolant(const FrequencyGrid& grid, std::vector<double> values, Extrapolation policy);

  /// Value at log-frequency x. Exact at nodes.
  double at_log(double x) const;
  /// at_log(x + dx) - at_log(x), evaluated without cancellation for tiny dx.
  double diff_log(double x, double dx) const;
  bool outside(double x) const { return x < x_lo_ || x > x_hi_; }
  Extrapolation policy() const { return policy_; }
  std::span<const double> values() const { return values_; }
  std::span<const double> slopes() const { return slopes_; }

 private:
  double extrapolate(double x) const;
  // region: -1 below the grid, j for segment [x_j, x_{j+1}], n-1 above the grid
  long region_of(double x) const;
  double region_diff(long region, double x, double dx) const;

  double x_lo_ = 0.0;
  double x_hi_ = 0.0;
  double h_ = 1.0;
  double inv_h_ = 1.0;
  std::vector<double> values_;
  std::vector<double> slopes_;
  Extrapolation policy_ = Extrapolation::constant;
  // power-law tails: value = anchor * exp(rate * (x - x_anchor))
  double low_rate_ = 0.0;
  double high_rate_ = 0.0;
};

/// Nonnegative spectrum (n or N) tabulated on a frequency grid.
class SpectrumField {
 public:
  SpectrumField(FrequencyGrid grid, std::vector<double> values, Form form,
                Extrapolation extrapolation = Extrapolation::constant);

  const FrequencyGrid& grid() const { return grid_; }
  std::span<const double> values() const { return interp_.values(); }
  double value(std::size_t j) const { return interp_.values()[j]; }
  std::size_t size() const { return grid_.size(); }
  Form form() const { return form_; }
  Extrapolation extrapolation() const { return interp_.policy(); }

  /// Sample at frequency omega > 0 (throws std::domain_error otherwise).
  double sample(double omega) const;
  double operator()(double omega) const { return sample(omega); }
  /// Sample at log-frequency; the collision kernels use this form.
  double sample_log(double x) const { return interp_.at_log(x); }
  double diff_log(double x, double dx) const { return interp_.diff_log(x, dx); }
  bool outside_log(double x) const { return interp_.outside(x); }

  double min_value() const;
  double max_value() const;

  /// Same grid, form and policy; new values.
  SpectrumField with_values(std::vector<double> values) const;

 private:
  FrequencyGrid grid_;
  Form form_;
  LogCubicInterpolant interp_;
};

/// Signed function on a grid (log-derivatives, collision values).
struct GridFunction {
  FrequencyGrid grid;
  std::vector<double> values;

  double sup_abs() const;
  /// Interpolated value; constant continuation outside the grid.
  double sample(double omega) const;
};

/// n-form <-> N-form conversion, N = omega^(2 beta + 3/2) n. Identity when already in `target`.
SpectrumField convert_form(const SpectrumField& field, const ModelParams& params, Form target);

/// DN = omega dN/domega on the field's grid (works for either form).
GridFunction log_derivative(const SpectrumField& field);
GridFunction log_derivative(const GridFunction& f);

}  // namespace mmt
