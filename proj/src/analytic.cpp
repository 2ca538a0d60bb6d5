#include "mmt/analytic.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace mmt {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double psi(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

// Gaussian tails are treated as zero beyond this many widths (exp(-36) ~ 2e-16).
constexpr double kBumpReach = 8.5;

}  // namespace

double smoothed_indicator(double x) {
  const double a = std::abs(x);
  if (a <= 0.5) return 1.0;
  if (a >= 1.0) return 0.0;
  const double t = 2.0 * (1.0 - a);  // 0 at the edge of the support, 1 at the plateau
  const double p = psi(t);
  return p / (p + psi(1.0 - t));
}

AnalyticSpectrum::AnalyticSpectrum(Kind kind) : kind_(std::move(kind)) {
  std::visit(overloaded{
                 [](const RayleighJeans& r) {
                   if (r.c1 < 0.0 || r.c2 < 0.0 || (r.c1 == 0.0 && r.c2 == 0.0))
                     throw std::domain_error("Rayleigh-Jeans needs c1, c2 >= 0, not both zero");
                 },
                 [](const GaussianBumpInLogOmega& g) {
                   if (!(g.center > 0.0) || !(g.width > 0.0) || g.amplitude < 0.0 || g.baseline < 0.0)
                     throw std::domain_error("bump needs center > 0, width > 0, amplitude and baseline >= 0");
                 },
                 [](const LemmaTwoData& l) {
                   if (!(l.eps > 0.0 && l.eps < 1.0) || !(l.p >= 1.0))
                     throw std::domain_error("three-bump data needs eps in (0,1) and p >= 1");
                 },
                 [](const auto&) {},
             },
             kind_);
}

double AnalyticSpectrum::operator()(double omega) const {
  return std::visit(
      overloaded{
          [&](const RayleighJeans& r) { return 1.0 / (r.c1 * omega + r.c2); },
          [&](const KZMass& k) { return std::pow(omega, -kz_mass_exponent(k.beta)); },
          [&](const KZEnergy& k) { return std::pow(omega, -kz_energy_exponent(k.beta)); },
          [&](const PowerLaw& p) { return std::pow(omega, p.a); },
          [&](const GaussianBumpInLogOmega& g) {
            const double z = std::log(omega / g.center) / g.width;
            return g.baseline + g.amplitude * std::exp(-0.5 * z * z);
          },
          [&](const LemmaTwoData& l) {
            const double e2 = l.eps * l.eps;
            const double hi = std::pow(l.eps, -2.0 / l.p);
            const double mid = std::pow(l.eps, -1.0 / l.p);
            return hi * smoothed_indicator((omega - 1.0 / 3.0) / e2) +
                   mid * smoothed_indicator((omega - 2.0 / 3.0) / l.eps) +
                   hi * smoothed_indicator((omega - 1.0) / e2);
          },
      },
      kind_);
}

std::optional<std::pair<double, double>> AnalyticSpectrum::support() const {
  using R = std::optional<std::pair<double, double>>;
  return std::visit(overloaded{
                        [](const GaussianBumpInLogOmega& g) -> R {
                          if (g.baseline > 0.0) return std::nullopt;
                          return std::pair{g.center * std::exp(-kBumpReach * g.width),
                                           g.center * std::exp(kBumpReach * g.width)};
                        },
                        [](const LemmaTwoData& l) -> R {
                          const double e2 = l.eps * l.eps;
                          return std::pair{1.0 / 3.0 - e2, 1.0 + e2};
                        },
                        [](const auto&) -> R { return std::nullopt; },
                    },
                    kind_);
}

std::string AnalyticSpectrum::describe() const {
  return std::visit(
      overloaded{
          [](const RayleighJeans& r) { return fmt::format("rayleigh-jeans(c1={},c2={})", r.c1, r.c2); },
          [](const KZMass& k) { return fmt::format("kz-mass(beta={})", k.beta); },
          [](const KZEnergy& k) { return fmt::format("kz-energy(beta={})", k.beta); },
          [](const PowerLaw& p) { return fmt::format("power-law(a={})", p.a); },
          [](const GaussianBumpInLogOmega& g) {
            return fmt::format("bump(center={},width={},amplitude={},baseline={})", g.center, g.width,
                               g.amplitude, g.baseline);
          },
          [](const LemmaTwoData& l) { return fmt::format("three-bump(eps={},p={})", l.eps, l.p); },
      },
      kind_);
}

SpectrumField tabulate(const AnalyticSpectrum& n, const FrequencyGrid& grid, const ModelParams& params,
                       Form form, Extrapolation extrapolation) {
  const double g = form == Form::N_form ? params.gamma_scale() : 0.0;
  return tabulate_values([&](double w) { return std::pow(w, g) * n(w); }, grid, form, extrapolation);
}

}  // namespace mmt
