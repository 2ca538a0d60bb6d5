#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "mmt/params.hpp"

namespace mmt {

/// Scalings of the four resonant frequencies along the one-parameter manifold.
struct ResonanceNodes {
  double v1, v2, v3, v4;
};

ResonanceNodes v_values(double u);

/// (prod v_i)^(-beta - 1/2) / (1 + u + u^2). Singular at u = 0.
double weight_W(double u, double beta);

/// Scalings (u1, u2, u3) of the partner frequencies for family 1..4.
std::array<double, 3> family_nodes(int family, double u);

/// Family kernel K_f(u), so that S_f = omega^(4 beta + 3) * int K_f * combination du.
double family_kernel(int family, double u, double beta);

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
  std::vector<double> x;
  std::vector<double> w;
};

GaussLegendre gauss_legendre(int order);

struct QuadSpec {
  int panels_per_decade = 6;
  int order = 12;
  double u_floor = 1e-12;
};

/// Per-node tables of the N-form kernel.
struct SymmetricNode {
  // log(v_i / v_k), indexed [k][i]
  double log_ratio[4][4];
  // (-1)^(j+k) v_j^gamma v_k^(2 beta - 1/2) W(u) * weight, indexed [j][k]
  double coef[4][4];
  // (-1)^k W(u) v_k^(2 beta - 1/2) * weight
  double outer[4];
  double d21;  // v2^gamma - v1^gamma
  double d43;  // v4^gamma - v3^gamma
  double g4;   // v4^gamma
  double dx12; // log(v1 / v2)
  double dx34; // log(v3 / v4)
};

/// Per-node tables of the four family integrals.
struct FamilyNode {
  double log_u[4][3];  // log of the family scalings
  double kernel[4];    // K_f(u) * weight
};

/// Composite Gauss-Legendre rule on geometrically graded panels of [u_lo, 1].
struct ResonanceQuad {
  ModelParams params;
  QuadSpec spec;
  double u_lo = 0.0;
  bool empty = false;
  std::vector<double> u;
  std::vector<double> weight;
  std::vector<SymmetricNode> sym;
  std::vector<FamilyNode> fam;

  std::size_t size() const { return u.size(); }
  /// Same spec restricted to [max(eps, u_floor), 1]; empty when eps >= 1.
  ResonanceQuad truncated(double eps) const;
};

/// Raw composite rule on [lo, 1]: geometric panels with `panels_per_decade`, `order` points each.
void graded_rule(double lo, int panels_per_decade, int order, std::vector<double>& u, std::vector<double>& w);

/// Rule on [max(params.epsilon, u_floor), 1] with all per-node tables filled.
ResonanceQuad build_quadrature(const ModelParams& params, int panels_per_decade, int order,
                               double u_floor = 1e-12);
ResonanceQuad build_quadrature(const ModelParams& params, const QuadSpec& spec);

}  // namespace mmt
