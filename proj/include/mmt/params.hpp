#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mmt {

/// Parameters of the kinetic MMT equation at dispersion exponent 1/2.
///
/// Every kernel power used anywhere in the library is derived from `beta`
/// through the accessors below, so nothing else stores an exponent.
struct ModelParams {
  double beta = 0.0;
  int p0 = 1;
  double epsilon = 0.0;

  /// Rescaling exponent of the N-form unknown, N = omega^gamma_scale * n.
  double gamma_scale() const { return 2.0 * beta + 1.5; }
  /// Homogeneity of the collision operator: C(n)(omega) carries omega^(4 beta + 3).
  double collision_degree() const { return 4.0 * beta + 3.0; }
  /// Exponent of v_k in the N-form kernel coefficients.
  double outer_exponent() const { return 2.0 * beta - 0.5; }

  /// Smallest integer p0 admissible for `beta`.
  static int minimal_p0(double beta) {
    const double bound = std::max(1.0 / (4.0 * (1.0 - beta)), 1.0 / (4.0 * (1.0 + beta)));
    return static_cast<int>(std::floor(bound)) + 1;
  }

  static ModelParams make(double beta, double epsilon = 0.0) {
    ModelParams p{beta, minimal_p0(beta), epsilon};
    p.validate();
    return p;
  }

  void validate() const {
    if (!(beta > -1.0 && beta < 1.0))
      throw std::domain_error("beta must lie in (-1, 1), got " + std::to_string(beta));
    const double bound = std::max(1.0 / (4.0 * (1.0 - beta)), 1.0 / (4.0 * (1.0 + beta)));
    if (p0 < 1 || !(static_cast<double>(p0) > bound))
      throw std::domain_error("p0 = " + std::to_string(p0) + " must be a positive integer above " +
                              std::to_string(bound));
    if (!(epsilon >= 0.0 && epsilon < 1.0))
      throw std::domain_error("epsilon must lie in [0, 1), got " + std::to_string(epsilon));
  }
};

}  // namespace mmt
