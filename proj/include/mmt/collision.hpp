#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

#include "mmt/analytic.hpp"
#include "mmt/parallel.hpp"
#include "mmt/resonance.hpp"
#include "mmt/spectrum.hpp"

namespace mmt {

class NonFiniteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Evaluator { sum_form, symmetric, split };
std::string_view to_string(Evaluator e);
Evaluator parse_evaluator(std::string_view s);

/// Samples a tabulated field through its interpolant.
struct FieldSampler {
  const SpectrumField* field;
  double at(double x) const { return field->sample_log(x); }
  double diff(double x, double dx) const { return field->diff_log(x, dx); }
  bool outside(double x) const { return field->outside_log(x); }
};

/// Samples a closed-form function of omega (no grid, no interpolation).
template <class F>
struct FunctionSampler {
  F fn;
  double at(double x) const { return fn(std::exp(x)); }
  double diff(double x, double dx) const { return fn(std::exp(x + dx)) - fn(std::exp(x)); }
  bool outside(double) const { return false; }
};
template <class F>
FunctionSampler(F) -> FunctionSampler<F>;

/// Analytic n-form spectrum, sampled as n (Form::n_form) or as N = omega^gamma n (Form::N_form).
inline auto analytic_sampler(const AnalyticSpectrum& n, const ModelParams& params, Form form) {
  const double g = form == Form::N_form ? params.gamma_scale() : 0.0;
  return FunctionSampler{[n, g](double w) { return g == 0.0 ? n(w) : std::pow(w, g) * n(w); }};
}

struct SumTerms {
  double value = 0.0;
  double abs_sum = 0.0;  // sum of |gain| + |loss| contributions, same rule
};

struct SplitStats {
  double total = 0.0;         // sum over (node, k) of |term|
  double extrapolated = 0.0;  // share of that sum touching off-grid samples
};

namespace detail {

inline void require_positive(double omega) {
  if (!(omega > 0.0)) throw std::domain_error("collision: omega must be positive");
}

inline double checked(double v, double omega) {
  if (!std::isfinite(v))
    throw NonFiniteError("non-finite collision value at omega = " + std::to_string(omega) +
                         " (extrapolated growth too strong for this beta?)");
  return v;
}

template <class S, bool Abs>
SumTerms sum_form(const S& n, double omega, const ResonanceQuad& quad) {
  require_positive(omega);
  SumTerms r;
  if (quad.empty) return r;
  const double xw = std::log(omega);
  const double fw = n.at(xw);
  double total = 0.0, abs_total = 0.0;
  for (const FamilyNode& node : quad.fam) {
    for (int f = 0; f < 4; ++f) {
      const double f1 = n.at(xw + node.log_u[f][0]);
      const double f2 = n.at(xw + node.log_u[f][1]);
      const double f3 = n.at(xw + node.log_u[f][2]);
      const double a = f1 * f2 * f3, b = f1 * f2 * fw, c = f1 * fw * f3, d = fw * f2 * f3;
      total += node.kernel[f] * (a + b - c - d);
      if constexpr (Abs) abs_total += node.kernel[f] * (std::abs(a) + std::abs(b) + std::abs(c) + std::abs(d));
    }
  }
  const double scale = std::exp(quad.params.collision_degree() * xw);
  r.value = scale * total;
  r.abs_sum = scale * abs_total;
  return r;
}

template <class S>
double all_plus(const S& n, double omega, const ResonanceQuad& quad) {
  require_positive(omega);
  if (quad.empty) return 0.0;
  const double xw = std::log(omega);
  const double fw = n.at(xw);
  double total = 0.0;
  for (const FamilyNode& node : quad.fam) {
    for (int f = 0; f < 4; ++f) {
      const double f1 = n.at(xw + node.log_u[f][0]);
      const double f2 = n.at(xw + node.log_u[f][1]);
      const double f3 = n.at(xw + node.log_u[f][2]);
      total += node.kernel[f] * (f1 * f2 * f3 + f1 * f2 * fw + f1 * fw * f3 + fw * f2 * f3);
    }
  }
  return std::exp(quad.params.collision_degree() * xw) * total;
}

template <class S>
double symmetric(const S& N, double omega, const ResonanceQuad& quad) {
  require_positive(omega);
  if (quad.empty) return 0.0;
  const double xw = std::log(omega);
  const double Nw = N.at(xw);
  double total = 0.0;
  for (const SymmetricNode& node : quad.sym) {
    for (int k = 0; k < 4; ++k) {
      double s[4];
      for (int i = 0; i < 4; ++i) s[i] = i == k ? Nw : N.at(xw + node.log_ratio[k][i]);
      total += node.coef[0][k] * (s[1] * s[2] * s[3]) + node.coef[1][k] * (s[0] * s[2] * s[3]) +
               node.coef[2][k] * (s[0] * s[1] * s[3]) + node.coef[3][k] * (s[0] * s[1] * s[2]);
    }
  }
  return total;
}

template <class S, bool Stats>
double split(const S& N, double omega, const ResonanceQuad& quad, SplitStats* stats) {
  require_positive(omega);
  if (quad.empty) return 0.0;
  const double xw = std::log(omega);
  const double Nw = N.at(xw);
  double total = 0.0, mag = 0.0, mag_out = 0.0;
  for (const SymmetricNode& node : quad.sym) {
    for (int k = 0; k < 4; ++k) {
      double s[4];
      for (int i = 0; i < 4; ++i) s[i] = i == k ? Nw : N.at(xw + node.log_ratio[k][i]);
      const double x2 = xw + node.log_ratio[k][1];
      const double x4 = xw + node.log_ratio[k][3];
      const double n1_minus_n2 = N.diff(x2, node.dx12);
      const double n3_minus_n4 = N.diff(x4, node.dx34);
      // v2 = 1, so v2^gamma multiplies the second difference by one
      const double term = node.d21 * (s[1] * s[2] * s[3]) + n1_minus_n2 * (s[2] * s[3]) +
                          node.d43 * (s[0] * s[1] * s[3]) + node.g4 * (s[0] * s[1]) * n3_minus_n4;
      const double contrib = node.outer[k] * term;
      total += contrib;
      if constexpr (Stats) {
        const double a = std::abs(contrib);
        mag += a;
        bool off = false;
        for (int i = 0; i < 4; ++i) off = off || (i != k && N.outside(xw + node.log_ratio[k][i]));
        if (off) mag_out += a;
      }
    }
  }
  if constexpr (Stats) {
    stats->total += mag;
    stats->extrapolated += mag_out;
  }
  return total;
}

}  // namespace detail

/// Sum of the four family integrals S1..S4 on an n-form sampler.
template <class S>
double collide_sum_form(const S& n, double omega, const ResonanceQuad& quad) {
  return detail::checked(detail::sum_form<S, false>(n, omega, quad).value, omega);
}

/// Sum form together with its gain/loss magnitude (for cancellation residuals).
template <class S>
SumTerms collide_sum_terms(const S& n, double omega, const ResonanceQuad& quad) {
  SumTerms t = detail::sum_form<S, true>(n, omega, quad);
  detail::checked(t.value, omega);
  return t;
}

/// Every sign of the trilinear combination flipped to +.
template <class S>
double collide_all_plus(const S& n, double omega, const ResonanceQuad& quad) {
  return detail::checked(detail::all_plus(n, omega, quad), omega);
}

/// Sixteen-term alternating form on an N-form sampler.
template <class S>
double collide_symmetric(const S& N, double omega, const ResonanceQuad& quad) {
  return detail::checked(detail::symmetric(N, omega, quad), omega);
}

/// Regrouped differences form on an N-form sampler.
template <class S>
double collide_split(const S& N, double omega, const ResonanceQuad& quad) {
  return detail::checked(detail::split<S, false>(N, omega, quad, nullptr), omega);
}

template <class S>
double collide_split(const S& N, double omega, const ResonanceQuad& quad, SplitStats& stats) {
  return detail::checked(detail::split<S, true>(N, omega, quad, &stats), omega);
}

/// Split form restricted to u in [eps, 1].
template <class S>
double collide_epsilon(const S& N, double omega, const ResonanceQuad& quad, double eps) {
  detail::require_positive(omega);
  if (eps >= 1.0) return 0.0;
  if (eps < 0.0) throw std::domain_error("collide_epsilon: eps must be nonnegative");
  if (std::max(eps, quad.spec.u_floor) == quad.u_lo) return collide_split(N, omega, quad);
  return collide_split(N, omega, quad.truncated(eps));
}

// Tabulated-field conveniences; these check the form tag.
double collide_sum_form(const SpectrumField& n, double omega, const ResonanceQuad& quad);
double collide_symmetric(const SpectrumField& N, double omega, const ResonanceQuad& quad);
double collide_split(const SpectrumField& N, double omega, const ResonanceQuad& quad);
double collide_epsilon(const SpectrumField& N, double omega, const ResonanceQuad& quad, double eps);

struct CollisionResult {
  GridFunction values;
  Evaluator evaluator;
  QuadSpec spec;
  double u_lo = 0.0;
  std::size_t quad_nodes = 0;
  /// |contribution|-weighted share of terms touching extrapolated samples (split only).
  double extrapolated_fraction = 0.0;
};

/// Evaluate at every grid node. Bitwise identical for any worker count.
CollisionResult collide_grid(const SpectrumField& field, const ResonanceQuad& quad, Evaluator evaluator,
                             Execution exec = Execution::parallel);

}  // namespace mmt
