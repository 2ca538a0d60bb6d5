#include "mmt/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mmt {

std::string_view to_string(Form f) { return f == Form::n_form ? "n" : "N"; }

std::string_view to_string(Extrapolation e) {
  return e == Extrapolation::constant ? "constant" : "power-law-fit";
}

Form parse_form(std::string_view s) {
  if (s == "n" || s == "n-form") return Form::n_form;
  if (s == "N" || s == "N-form") return Form::N_form;
  throw std::invalid_argument("unknown spectrum form '" + std::string(s) + "'");
}

Extrapolation parse_extrapolation(std::string_view s) {
  if (s == "constant") return Extrapolation::constant;
  if (s == "power-law-fit" || s == "power_law_fit" || s == "power") return Extrapolation::power_law_fit;
  throw std::invalid_argument("unknown extrapolation policy '" + std::string(s) + "'");
}

std::vector<double> log_grid_derivative(std::span<const double> y, double h) {
  const std::size_t n = y.size();
  if (n < 5) throw std::domain_error("log_derivative needs at least 5 nodes");
  std::vector<double> d(n);
  const double c = 1.0 / (12.0 * h);
  d[0] = c * (-25.0 * y[0] + 48.0 * y[1] - 36.0 * y[2] + 16.0 * y[3] - 3.0 * y[4]);
  d[1] = c * (-3.0 * y[0] - 10.0 * y[1] + 18.0 * y[2] - 6.0 * y[3] + y[4]);
  for (std::size_t j = 2; j + 2 < n; ++j)
    d[j] = c * (y[j - 2] - 8.0 * y[j - 1] + 8.0 * y[j + 1] - y[j + 2]);
  d[n - 2] = -c * (-3.0 * y[n - 1] - 10.0 * y[n - 2] + 18.0 * y[n - 3] - 6.0 * y[n - 4] + y[n - 5]);
  d[n - 1] = -c * (-25.0 * y[n - 1] + 48.0 * y[n - 2] - 36.0 * y[n - 3] + 16.0 * y[n - 4] - 3.0 * y[n - 5]);
  return d;
}

namespace {

double limit_slope(double d, double left, double right) {
  if (left == 0.0 || right == 0.0) return 0.0;
  const double cap = 3.0 * std::min(std::abs(left), std::abs(right));
  if (left * right > 0.0) {
    // monotone neighbourhood: slope must share the secant sign
    if (d * left <= 0.0) return 0.0;
    return std::copysign(std::min(std::abs(d), cap), left);
  }
  return std::copysign(std::min(std::abs(d), cap), d);
}

double limit_end_slope(double d, double secant) {
  if (secant == 0.0 || d * secant <= 0.0) return 0.0;
  return std::copysign(std::min(std::abs(d), 3.0 * std::abs(secant)), secant);
}

}  // namespace

LogCubicInterpolant::LogCubicInterpolant(const FrequencyGrid& grid, std::vector<double> values,
                                         Extrapolation policy)
    : x_lo_(grid.log_min()),
      x_hi_(grid.log_max()),
      h_(grid.log_step()),
      inv_h_(1.0 / grid.log_step()),
      values_(std::move(values)),
      policy_(policy) {
  const std::size_t n = values_.size();
  if (n != grid.size()) throw std::invalid_argument("value count does not match grid size");
  slopes_ = log_grid_derivative(values_, h_);
  std::vector<double> secant(n - 1);
  for (std::size_t j = 0; j + 1 < n; ++j) secant[j] = (values_[j + 1] - values_[j]) * inv_h_;
  slopes_[0] = limit_end_slope(slopes_[0], secant[0]);
  slopes_[n - 1] = limit_end_slope(slopes_[n - 1], secant[n - 2]);
  for (std::size_t j = 1; j + 1 < n; ++j) slopes_[j] = limit_slope(slopes_[j], secant[j - 1], secant[j]);

  if (policy_ == Extrapolation::power_law_fit) {
    auto rate = [&](double a, double b) {
      return (a > 0.0 && b > 0.0) ? (std::log(b) - std::log(a)) * inv_h_ : 0.0;
    };
    low_rate_ = rate(values_[0], values_[1]);
    high_rate_ = rate(values_[n - 2], values_[n - 1]);
  }
}

double LogCubicInterpolant::extrapolate(double x) const {
  if (x < x_lo_) {
    if (policy_ == Extrapolation::constant || low_rate_ == 0.0) return values_.front();
    return values_.front() * std::exp(low_rate_ * (x - x_lo_));
  }
  if (policy_ == Extrapolation::constant || high_rate_ == 0.0) return values_.back();
  return values_.back() * std::exp(high_rate_ * (x - x_hi_));
}

double LogCubicInterpolant::at_log(double x) const {
  if (x < x_lo_ || x > x_hi_) return extrapolate(x);
  const double t = (x - x_lo_) * inv_h_;
  const double r = std::nearbyint(t);
  if (std::abs(t - r) < 1e-11) return values_[static_cast<std::size_t>(r)];
  const std::size_t last = values_.size() - 1;
  std::size_t j = static_cast<std::size_t>(t);
  if (j >= last) j = last - 1;
  const double s = t - static_cast<double>(j);
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
  const double h10 = s3 - 2.0 * s2 + s;
  const double h01 = -2.0 * s3 + 3.0 * s2;
  const double h11 = s3 - s2;
  return h00 * values_[j] + h01 * values_[j + 1] + h_ * (h10 * slopes_[j] + h11 * slopes_[j + 1]);
}

long LogCubicInterpolant::region_of(double x) const {
  const long last = static_cast<long>(values_.size()) - 1;
  if (x < x_lo_) return -1;
  if (x > x_hi_) return last;
  return std::min(static_cast<long>((x - x_lo_) * inv_h_), last - 1);
}

// Difference across [x, x + dx] assuming both ends lie in `region`.
double LogCubicInterpolant::region_diff(long region, double x, double dx) const {
  const long last = static_cast<long>(values_.size()) - 1;
  if (region < 0 || region == last) {
    const double rate = region < 0 ? low_rate_ : high_rate_;
    if (policy_ == Extrapolation::constant || rate == 0.0) return 0.0;
    const double anchor = region < 0 ? values_.front() : values_.back();
    const double edge = region < 0 ? x_lo_ : x_hi_;
    return anchor * std::exp(rate * (x - edge)) * std::expm1(rate * dx);
  }
  const auto j = static_cast<std::size_t>(region);
  const double v0 = values_[j], v1 = values_[j + 1];
  const double d0 = h_ * slopes_[j], d1 = h_ * slopes_[j + 1];
  const double c1 = d0;
  const double c2 = -3.0 * v0 + 3.0 * v1 - 2.0 * d0 - d1;
  const double c3 = 2.0 * v0 - 2.0 * v1 + d0 + d1;
  const double s = (x - x_lo_) * inv_h_ - static_cast<double>(j);
  const double ds = dx * inv_h_;
  return ds * (c1 + c2 * (2.0 * s + ds) + c3 * (3.0 * s * s + 3.0 * s * ds + ds * ds));
}

double LogCubicInterpolant::diff_log(double x, double dx) const {
  if (!(std::abs(dx) < h_)) return at_log(x + dx) - at_log(x);
  const long a = region_of(x);
  const long b = region_of(x + dx);
  if (a == b) return region_diff(a, x, dx);
  if (std::abs(a - b) > 1) return at_log(x + dx) - at_log(x);
  // one node between the two ends: split the difference there
  const long hi = std::max(a, b);
  const double node = x_lo_ + static_cast<double>(hi) * h_;
  const double first = node - x;
  return region_diff(a, x, first) + region_diff(b, node, dx - first);
}

SpectrumField::SpectrumField(FrequencyGrid grid, std::vector<double> values, Form form,
                             Extrapolation extrapolation)
    : grid_(std::move(grid)), form_(form) {
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (!std::isfinite(values[j]) || values[j] < 0.0)
      throw std::domain_error("spectrum value at node " + std::to_string(j) +
                              " is negative or non-finite");
  }
  interp_ = LogCubicInterpolant(grid_, std::move(values), extrapolation);
}

double SpectrumField::sample(double omega) const {
  if (!(omega > 0.0)) throw std::domain_error("sample: omega must be positive");
  return interp_.at_log(std::log(omega));
}

double SpectrumField::min_value() const {
  return *std::min_element(interp_.values().begin(), interp_.values().end());
}

double SpectrumField::max_value() const {
  return *std::max_element(interp_.values().begin(), interp_.values().end());
}

SpectrumField SpectrumField::with_values(std::vector<double> values) const {
  return SpectrumField(grid_, std::move(values), form_, interp_.policy());
}

double GridFunction::sup_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double GridFunction::sample(double omega) const {
  if (!(omega > 0.0)) throw std::domain_error("sample: omega must be positive");
  LogCubicInterpolant interp(grid, values, Extrapolation::constant);
  return interp.at_log(std::log(omega));
}

SpectrumField convert_form(const SpectrumField& field, const ModelParams& params, Form target) {
  if (field.form() == target) return field;
  const double g = params.gamma_scale();
  const double sign = target == Form::N_form ? 1.0 : -1.0;
  std::vector<double> out(field.size());
  for (std::size_t j = 0; j < out.size(); ++j)
    out[j] = field.value(j) * std::exp(sign * g * field.grid().log_at(j));
  return SpectrumField(field.grid(), std::move(out), target, field.extrapolation());
}

GridFunction log_derivative(const SpectrumField& field) {
  const auto v = field.values();
  return GridFunction{field.grid(), log_grid_derivative(v, field.grid().log_step())};
}

GridFunction log_derivative(const GridFunction& f) {
  return GridFunction{f.grid, log_grid_derivative(f.values, f.grid.log_step())};
}

}  // namespace mmt
