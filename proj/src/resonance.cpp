#include "mmt/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mmt {

namespace {

void check_unit(double u) {
  if (!(u >= 0.0 && u <= 1.0)) throw std::domain_error("u must lie in [0, 1], got " + std::to_string(u));
}

void check_open_unit(double u) {
  if (!(u > 0.0 && u <= 1.0)) throw std::domain_error("u must lie in (0, 1], got " + std::to_string(u));
}

struct LogV {
  double v1, v3, v4, D;
};

// log v1 = log(1 - u^2/D) and friends, accurate as u -> 0.
LogV log_v(double u) {
  const double logD = std::log1p(u + u * u);
  const double D = 1.0 + u + u * u;
  const double lu = std::log(u);
  return {std::log1p(-u * u / D), lu + std::log1p(u) - logD, lu - logD, logD};
}

}  // namespace

ResonanceNodes v_values(double u) {
  check_unit(u);
  const double D = 1.0 + u + u * u;
  return {(1.0 + u) / D, 1.0, u * (1.0 + u) / D, u / D};
}

double weight_W(double u, double beta) {
  check_open_unit(u);
  const LogV l = log_v(u);
  return std::exp((-beta - 0.5) * (l.v1 + l.v3 + l.v4) - l.D);
}

std::array<double, 3> family_nodes(int family, double u) {
  const double D = 1.0 + u + u * u;
  switch (family) {
    case 1:
      check_unit(u);
      return {(1.0 + u) / D, u * (1.0 + u) / D, u / D};
    case 2:
      check_open_unit(u);
      return {u + 1.0, (u + 1.0) / u, D / u};
    case 3:
      check_unit(u);
      return {D / (u + 1.0), u / (u + 1.0), u};
    case 4:
      check_open_unit(u);
      return {D / ((u + 1.0) * u), 1.0 / (u + 1.0), 1.0 / u};
    default:
      throw std::invalid_argument("family must be 1..4, got " + std::to_string(family));
  }
}

double family_kernel(int family, double u, double beta) {
  check_open_unit(u);
  const double lu = std::log(u);
  const double l1 = std::log1p(u);
  const double lD = std::log1p(u + u * u);
  switch (family) {
    case 1:
      return std::exp((2.0 * beta + 2.0) * (lu + l1) - (3.0 * beta + 4.0) * lD);
    case 2:
      return std::exp((beta + 1.0) * lD + (2.0 * beta + 2.0) * l1 - (2.0 * beta + 3.0) * lu);
    case 3:
      return std::exp((beta + 1.0) * lD + (2.0 * beta + 2.0) * lu - (2.0 * beta + 3.0) * l1);
    case 4:
      return std::exp((beta + 1.0) * lD - (2.0 * beta + 3.0) * (lu + l1));
    default:
      throw std::invalid_argument("family must be 1..4, got " + std::to_string(family));
  }
}

GaussLegendre gauss_legendre(int order) {
  if (order < 1) throw std::domain_error("Gauss-Legendre order must be positive");
  const auto n = static_cast<std::size_t>(order);
  GaussLegendre r{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.x[i] = -x;
    r.x[n - 1 - i] = x;
    r.w[i] = r.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

void graded_rule(double lo, int panels_per_decade, int order, std::vector<double>& u, std::vector<double>& w) {
  u.clear();
  w.clear();
  if (!(lo < 1.0)) return;
  const double decades = -std::log10(lo);
  const int panels = std::max(1, static_cast<int>(std::ceil(panels_per_decade * decades - 1e-9)));
  const GaussLegendre gl = gauss_legendre(order);
  const double log_lo = std::log(lo);
  double a = lo;
  for (int p = 0; p < panels; ++p) {
    const double b = p + 1 == panels ? 1.0 : std::exp(log_lo * (1.0 - static_cast<double>(p + 1) / panels));
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (std::size_t i = 0; i < gl.x.size(); ++i) {
      u.push_back(mid + half * gl.x[i]);
      w.push_back(half * gl.w[i]);
    }
    a = b;
  }
}

namespace {

SymmetricNode symmetric_tables(double u, double weight, const ModelParams& params) {
  const double g = params.gamma_scale();
  const double o = params.outer_exponent();
  const LogV l = log_v(u);
  const double logv[4] = {l.v1, 0.0, l.v3, l.v4};
  const double W = std::exp((-params.beta - 0.5) * (l.v1 + l.v3 + l.v4) - l.D);
  SymmetricNode s{};
  for (int k = 0; k < 4; ++k) {
    for (int i = 0; i < 4; ++i) s.log_ratio[k][i] = logv[i] - logv[k];
    const double sign_k = (k % 2 == 0) ? -1.0 : 1.0;  // (-1)^k with k counted from 1
    s.outer[k] = sign_k * W * std::exp(o * logv[k]) * weight;
  }
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k) {
      const double sign = ((j + k) % 2 == 0) ? 1.0 : -1.0;
      s.coef[j][k] = sign * std::exp(g * logv[j] + o * logv[k]) * W * weight;
    }
  s.d21 = -std::expm1(g * l.v1);
  s.g4 = std::exp(g * l.v4);
  s.d43 = -s.g4 * std::expm1(g * std::log1p(u));
  s.dx12 = l.v1;
  s.dx34 = std::log1p(u);
  return s;
}

FamilyNode family_tables(double u, double weight, double beta) {
  FamilyNode f{};
  for (int fam = 1; fam <= 4; ++fam) {
    const auto nodes = family_nodes(fam, u);
    for (int i = 0; i < 3; ++i) f.log_u[fam - 1][i] = std::log(nodes[static_cast<std::size_t>(i)]);
    f.kernel[fam - 1] = family_kernel(fam, u, beta) * weight;
  }
  return f;
}

}  // namespace

ResonanceQuad build_quadrature(const ModelParams& params, const QuadSpec& spec) {
  params.validate();
  if (spec.order < 4 || spec.order > 32) throw std::domain_error("quadrature order must lie in 4..32");
  if (spec.panels_per_decade < 2) throw std::domain_error("panels_per_decade must be at least 2");
  if (!(spec.u_floor > 0.0 && spec.u_floor < 1.0)) throw std::domain_error("u_floor must lie in (0, 1)");
  ResonanceQuad q;
  q.params = params;
  q.spec = spec;
  q.u_lo = std::max(params.epsilon, spec.u_floor);
  graded_rule(q.u_lo, spec.panels_per_decade, spec.order, q.u, q.weight);
  q.sym.reserve(q.u.size());
  q.fam.reserve(q.u.size());
  for (std::size_t i = 0; i < q.u.size(); ++i) {
    q.sym.push_back(symmetric_tables(q.u[i], q.weight[i], params));
    q.fam.push_back(family_tables(q.u[i], q.weight[i], params.beta));
  }
  return q;
}

ResonanceQuad build_quadrature(const ModelParams& params, int panels_per_decade, int order, double u_floor) {
  return build_quadrature(params, QuadSpec{panels_per_decade, order, u_floor});
}

ResonanceQuad ResonanceQuad::truncated(double eps) const {
  if (eps >= 1.0) {
    ResonanceQuad q;
    q.params = params;
    q.params.epsilon = eps;
    q.spec = spec;
    q.u_lo = 1.0;
    q.empty = true;
    return q;
  }
  ModelParams p = params;
  p.epsilon = eps;
  return build_quadrature(p, spec);
}

}  // namespace mmt
