#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <string>

#include "mmt/checks.hpp"

using namespace mmt;

namespace {

double extra(const CheckResult& r, const std::string& key) {
  for (const auto& [k, v] : r.extra)
    if (k == key) return v;
  FAIL("missing extra " << key);
  return 0.0;
}

}  // namespace

TEST_CASE("random weighted fields never beat the flat field") {
  // the positive part of the operator is monotone, so f = 1/m bounds the whole family
  for (auto [a, b] : {std::pair<std::uint64_t, std::uint64_t>{1, 2}, {42, 43}}) {
    const CheckResult r = check_lemma1(a, b);
    for (const char* beta : {"-0.5", "-0.25", "0"}) {
      CAPTURE(beta);
      const std::string stem = std::string("beta_") + beta + "_ratio_";
      const double flat = extra(r, stem + "flat");
      CHECK(flat == lemma1_flat_ratio(std::stod(beta)));
      CHECK(extra(r, stem + "seed_a") <= flat * (1.0 + 1e-12));
      CHECK(extra(r, stem + "seed_b") <= flat * (1.0 + 1e-12));
    }
    CHECK(r.value >= 0.0);
  }
}

TEST_CASE("verify suites") {
  const auto& s = verify_suites();
  CHECK(std::find(s.begin(), s.end(), "all") != s.end());
  CHECK_THROWS_AS(run_verify_suite("nope", 1), std::invalid_argument);
  const auto r = run_verify_suite("resonance", 1);
  REQUIRE(r.size() == 1);
  CHECK(r[0].pass);
  CHECK(r[0].value <= r[0].tolerance);
}
