#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>

#include "mmt/grid.hpp"
#include "mmt/params.hpp"
#include "mmt/spectrum.hpp"

namespace mmt {

/// n = 1 / (c1 omega + c2).
struct RayleighJeans {
  double c1 = 1.0;
  double c2 = 0.0;
};

/// Constant-flux power laws n = omega^(-x); the exponent depends on beta.
struct KZMass {
  double beta = 0.0;
};
struct KZEnergy {
  double beta = 0.0;
};

/// n = omega^a.
struct PowerLaw {
  double a = 0.0;
};

/// baseline + amplitude * exp(-(log(omega / center))^2 / (2 width^2)).
struct GaussianBumpInLogOmega {
  double center = 1.0;
  double width = 0.3;
  double amplitude = 1.0;
  double baseline = 0.0;
};

/// Three-bump family with heights eps^(-2/p), eps^(-1/p), eps^(-2/p) at 1/3, 2/3, 1.
struct LemmaTwoData {
  double eps = 0.1;
  double p = 2.0;
};

/// Smooth indicator: 1 on |x| <= 1/2, 0 for |x| >= 1, C-infinity in between.
double smoothed_indicator(double x);

/// Closed-form spectrum used as initial data and as an exact sampler for checks.
class AnalyticSpectrum {
 public:
  using Kind = std::variant<RayleighJeans, KZMass, KZEnergy, PowerLaw, GaussianBumpInLogOmega, LemmaTwoData>;

  AnalyticSpectrum(Kind kind);  // NOLINT(google-explicit-constructor)

  double operator()(double omega) const;
  const Kind& kind() const { return kind_; }
  std::string describe() const;

  /// Interval outside which the spectrum is (numerically) zero, if any.
  std::optional<std::pair<double, double>> support() const;

  static double kz_mass_exponent(double beta) { return (4.0 * beta + 5.0) / 3.0; }
  static double kz_energy_exponent(double beta) { return (4.0 * beta + 6.0) / 3.0; }

 private:
  Kind kind_;
};

/// Tabulate an n-form analytic spectrum on `grid` in the requested form.
SpectrumField tabulate(const AnalyticSpectrum& n, const FrequencyGrid& grid, const ModelParams& params,
                       Form form, Extrapolation extrapolation = Extrapolation::constant);

/// Tabulate values of `fn` directly (no form conversion); `fn` gives the stored values.
template <class F>
SpectrumField tabulate_values(F&& fn, const FrequencyGrid& grid, Form form,
                              Extrapolation extrapolation = Extrapolation::constant) {
  std::vector<double> v(grid.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = fn(grid[j]);
  return SpectrumField(grid, std::move(v), form, extrapolation);
}

}  // namespace mmt
