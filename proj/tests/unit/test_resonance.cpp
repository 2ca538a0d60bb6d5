#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "mmt/resonance.hpp"

using namespace mmt;
using doctest::Approx;

TEST_CASE("v values at sample points") {
  auto v = v_values(0.0);
  CHECK(v.v1 == 1.0);
  CHECK(v.v2 == 1.0);
  CHECK(v.v3 == 0.0);
  CHECK(v.v4 == 0.0);
  v = v_values(1.0);
  CHECK(v.v1 == Approx(2.0 / 3.0));
  CHECK(v.v3 == Approx(2.0 / 3.0));
  CHECK(v.v4 == Approx(1.0 / 3.0));
  v = v_values(0.5);
  CHECK(v.v1 == Approx(6.0 / 7.0));
  CHECK(v.v3 == Approx(3.0 / 7.0));
  CHECK(v.v4 == Approx(2.0 / 7.0));
  CHECK(v.v1 + v.v3 == Approx(9.0 / 7.0));
  CHECK(v.v1 * v.v1 + v.v3 * v.v3 + v.v4 * v.v4 == Approx(1.0));
}

TEST_CASE("resonance identities hold to roundoff") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const auto v = v_values(U(rng));
    CHECK(std::abs(v.v1 + v.v3 - v.v2 - v.v4) <= 1e-14);
    CHECK(std::abs(v.v1 * v.v1 + v.v3 * v.v3 + v.v4 * v.v4 - v.v2 * v.v2) <= 1e-14);
    CHECK(v.v4 <= v.v3);
    CHECK(v.v3 <= v.v1);
    CHECK(v.v1 <= v.v2);
  }
}

TEST_CASE("weight examples") {
  CHECK(weight_W(1.0, 0.0) == Approx(std::sqrt(3.0) / 2.0).epsilon(1e-15));
  CHECK(weight_W(1.0, -0.5) == Approx(1.0 / 3.0).epsilon(1e-15));
  for (double u : {0.1, 0.5, 0.9}) CHECK(weight_W(u, -0.5) == Approx(1.0 / (1.0 + u + u * u)).epsilon(1e-15));
  // mpmath, 30 digits
  CHECK(weight_W(0.1, 0.25) == Approx(31.229475891448048782939).epsilon(1e-14));
}

TEST_CASE("weight envelope W u^(2 beta + 1)") {
  for (double beta = -0.999; beta < 1.0; beta += 0.0333) {
    for (double u = 1e-9; u <= 1.0; u *= 1.7) {
      const double e = weight_W(u, beta) * std::pow(u, 2.0 * beta + 1.0);
      CHECK(e >= 0.125);
      CHECK(e <= 6.0);
    }
  }
}

TEST_CASE("family node examples") {
  auto s = family_nodes(1, 1.0);
  CHECK(s[0] == Approx(2.0 / 3.0));
  CHECK(s[1] == Approx(2.0 / 3.0));
  CHECK(s[2] == Approx(1.0 / 3.0));
  s = family_nodes(2, 1.0);
  CHECK(s[0] == Approx(2.0));
  CHECK(s[1] == Approx(2.0));
  CHECK(s[2] == Approx(3.0));
  s = family_nodes(4, 0.5);
  CHECK(s[0] == Approx(7.0 / 3.0));
  CHECK(s[1] == Approx(2.0 / 3.0));
  CHECK(s[2] == Approx(2.0));
  CHECK_THROWS_AS(family_nodes(0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(family_nodes(5, 0.5), std::invalid_argument);
}

TEST_CASE("each family lies on its resonant manifold") {
  // signs (e1, e2, e3) of e1 w1^2 + e2 w2^2 + e3 w3^2 = w^2, with w3 = w1 + w2 - w
  const int signs[4][3] = {{1, 1, 1}, {-1, -1, 1}, {1, -1, -1}, {1, -1, -1}};
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(0.01, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double u = U(rng);
    for (int f = 1; f <= 4; ++f) {
      const auto s = family_nodes(f, u);
      CHECK(s[0] + s[1] - s[2] == Approx(1.0).epsilon(1e-13));
      const int* e = signs[f - 1];
      const double q = e[0] * s[0] * s[0] + e[1] * s[1] * s[1] + e[2] * s[2] * s[2];
      CHECK(std::abs(q - 1.0) <= 1e-14 * (s[0] * s[0] + s[1] * s[1] + s[2] * s[2]));
    }
  }
}

TEST_CASE("Gauss-Legendre is exact to degree 2n - 1") {
  for (int n : {4, 8, 12, 16, 32}) {
    const auto gl = gauss_legendre(n);
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += gl.w[i] * std::pow(gl.x[i], k);
      const double exact = (k % 2 == 1) ? 0.0 : 2.0 / (k + 1);
      CHECK(s == Approx(exact).epsilon(1e-14).scale(1.0));
    }
  }
}

TEST_CASE("graded rule integrates endpoint singularities") {
  std::vector<double> u, w;
  graded_rule(1e-12, 6, 12, u, w);
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += w[i] * std::sqrt(u[i]);
  CHECK(s == Approx(2.0 / 3.0).epsilon(1e-10));
  // beta = 1/4: u^(-2 beta + 1) = u^(1/2), exact 1 / (2 - 2 beta)
  s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += w[i] * std::pow(u[i], -2.0 * 0.25 + 1.0);
  CHECK(s == Approx(1.0 / (2.0 - 0.5)).epsilon(1e-9));
  // beta = 3/4 on the truncated interval
  s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += w[i] / std::sqrt(u[i]);
  CHECK(s == Approx(2.0 - 2.0 * std::sqrt(1e-12)).epsilon(1e-9));
}

TEST_CASE("quadrature respects epsilon and validation") {
  const ResonanceQuad q = build_quadrature(ModelParams::make(0.0, 1e-2), 4, 8);
  CHECK(q.u_lo == 1e-2);
  CHECK(q.size() == 8u * 4u * 2u);
  for (double u : q.u) CHECK(u >= 1e-2);
  const ResonanceQuad full = build_quadrature(ModelParams::make(0.0), QuadSpec{});
  CHECK(full.u_lo == 1e-12);
  CHECK(full.truncated(1.0).empty);
  CHECK(full.truncated(1e-3).u_lo == 1e-3);
  CHECK_THROWS(build_quadrature(ModelParams::make(0.0), 1, 8));
  CHECK_THROWS(build_quadrature(ModelParams::make(0.0), 4, 3));
  CHECK_THROWS(build_quadrature(ModelParams::make(0.0), 4, 33));
}

TEST_CASE("symmetric tables are consistent with v values") {
  const double beta = 0.2;
  const ResonanceQuad q = build_quadrature(ModelParams::make(beta), 4, 8);
  for (std::size_t i = 0; i < q.size(); i += 7) {
    const auto v = v_values(q.u[i]);
    const double vv[4] = {v.v1, v.v2, v.v3, v.v4};
    const auto& s = q.sym[i];
    for (int k = 0; k < 4; ++k)
      for (int j = 0; j < 4; ++j) CHECK(s.log_ratio[k][j] == Approx(std::log(vv[j] / vv[k])).epsilon(1e-12).scale(1.0));
    const double g = 2.0 * beta + 1.5;
    CHECK(std::abs(s.d21 - (std::pow(vv[1], g) - std::pow(vv[0], g))) <= 1e-14);
    CHECK(std::abs(s.d43 - (std::pow(vv[3], g) - std::pow(vv[2], g))) <= 1e-14);
    CHECK(std::abs(s.dx12 - std::log(vv[0] / vv[1])) <= 1e-14);
    CHECK(std::abs(s.dx34 - std::log(vv[2] / vv[3])) <= 1e-14);
  }
}
