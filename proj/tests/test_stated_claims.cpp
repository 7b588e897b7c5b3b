// Statements about the KGZ index N and the kappa -> 1 limits as stated,
// checked against the implementation as is. See README ("Known failures"):
// several of these do not hold for the validated closed forms.

#include <doctest.h>

#include <cmath>

#include "ptw/indices.hpp"

using namespace ptw;

TEST_CASE("N vanishes at kappa0 = 0.937095") {
  const auto root = kappa0_root();
  REQUIRE(root.has_value());
  CHECK(std::abs(*root - kKappa0Claimed) <= 2e-6);
  CHECK(*root > 0.9370);
  CHECK(*root < 0.9372);
}

TEST_CASE("N changes sign across kappa0") {
  const double a = index_N(kKappa0Claimed - 1e-3);
  const double b = index_N(kKappa0Claimed + 1e-3);
  CHECK(a * b < 0.0);
}

TEST_CASE("N has exactly one sign change on [0.05, 0.995]") {
  const auto s = figure_scan(10, default_figure_grid(10));
  CHECK(s.holds);
}

TEST_CASE("KGZ below kappa0: no stabilizing speed") {
  CHECK(!mu_star(Model::KGZ, 0.5, 1.0).has_value());
}

TEST_CASE("limits as kappa -> 1") {
  const double k = 1.0 - 1e-6;
  CHECK(std::abs(index_M(k) - 4.0) <= 0.04);
  const double f = index_Ftilde(k);
  CHECK(std::abs(std::sqrt(f / (4.0 + f)) - 0.5) <= 0.005);
  CHECK(std::abs(index_N(k) - 0.25) <= 0.02 * 0.25);
}

TEST_CASE("figure 6: threshold periods approach 0 near kappa0") {
  const auto s = figure_scan(6, default_figure_grid(6));
  CHECK(s.holds);
}
