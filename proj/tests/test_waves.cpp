#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ptw/elliptic.hpp"
#include "ptw/errors.hpp"
#include "ptw/waves.hpp"

using namespace ptw;

namespace {

constexpr double pi = std::numbers::pi;
constexpr Model kModels[] = {Model::Boussinesq2, Model::Boussinesq3, Model::KGZ};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("model names round trip") {
  for (Model m : kModels) CHECK(parse_model(model_name(m)) == m);
  CHECK_THROWS_AS(parse_model("kdv"), std::invalid_argument);
}

TEST_CASE("closed-form parameters") {
  SUBCASE("boussinesq3, kappa 0.5") {
    const auto p = build_wave(Model::Boussinesq3, 0.5, 1.0);
    CHECK(rel(p.alpha, 2.0 / std::sqrt(7.0)) < 1e-14);
    CHECK(rel(p.phi1, std::sqrt(2.0) * p.alpha) < 1e-14);
    CHECK(rel(p.T, 2.0 * complete_elliptic(0.5).bigK * std::sqrt(1.75)) < 1e-14);
  }
  SUBCASE("kgz, kappa 0.5") {
    const auto p = build_wave(Model::KGZ, 0.5, 1.0);
    CHECK(rel(p.phi1, 2.0 / std::sqrt(1.75)) < 1e-14);
    CHECK(rel(p.alpha, 1.0 / std::sqrt(1.75)) < 1e-14);
    CHECK(rel(p.T, 2.0 * complete_elliptic(0.5).bigK * std::sqrt(1.75)) < 1e-14);
  }
  SUBCASE("boussinesq2 turning points are roots of the cubic") {
    const double k = 0.6, w = 1.0;
    const auto p = build_wave(Model::Boussinesq2, k, w);
    const double a2 = p.alpha * p.alpha;
    CHECK(rel(a2, 1.0 / (4.0 * std::sqrt(1.0 - k * k + k * k * k * k))) < 1e-14);
    auto cubic = [&](double r) { return r * r * r / 3.0 - w * r * r - p.b; };
    CHECK(std::abs(cubic(p.phi0)) < 1e-10);
    CHECK(std::abs(cubic(p.phi1)) < 1e-10);
  }
}

TEST_CASE("structural identities") {
  for (double k : {0.2, 0.5, 0.9, 0.99}) {
    for (double w : {0.5, 1.0}) {
      CAPTURE(k);
      CAPTURE(w);
      const double k2 = k * k;
      const double K = complete_elliptic(k).bigK;
      {
        const auto p = build_wave(Model::Boussinesq2, k, w);
        const double a2 = p.alpha * p.alpha;
        CHECK(rel(p.phi1 - p.phi0, 12.0 * a2 * k2) < 1e-12);
        CHECK(rel(p.phi1, 4.0 * a2 * (1.0 + k2) + w) < 1e-12);
        CHECK(std::abs(p.phi0 - (4.0 * a2 * (1.0 - 2.0 * k2) + w)) < 1e-12 * p.phi1);
        CHECK(rel(w * w, 16.0 * a2 * a2 * (1.0 - k2 + k2 * k2)) < 1e-12);
        CHECK(rel(p.T, 2.0 * K / p.alpha) < 1e-12);
        CHECK(p.T > 2.0 * pi / std::sqrt(w));
      }
      {
        const auto p = build_wave(Model::Boussinesq3, k, w);
        CHECK(rel(p.alpha, p.phi1 / std::sqrt(2.0)) < 1e-12);
        CHECK(rel(k2, (2.0 * p.phi1 * p.phi1 - 2.0 * w) / (p.phi1 * p.phi1)) < 1e-12);
        CHECK(rel(p.T, 2.0 * K * std::sqrt(2.0 - k2) / std::sqrt(w)) < 1e-12);
        CHECK(p.T > std::sqrt(2.0) * pi / std::sqrt(w));
      }
      {
        const auto p = build_wave(Model::KGZ, k, w);
        CHECK(rel((2.0 - k2) * p.phi1 * p.phi1, 4.0 * w) < 1e-12);
        CHECK(rel(p.alpha, 1.0 / std::sqrt(w * (2.0 - k2))) < 1e-12);
        CHECK(rel(p.T, 2.0 * K * std::sqrt(2.0 - k2) * std::sqrt(w)) < 1e-12);
        // level at the turning point: 4 w^2 b = phi1^4 - 4 w phi1^2
        const double p2 = p.phi1 * p.phi1;
        CHECK(std::abs(4.0 * w * w * p.b - (p2 * p2 - 4.0 * w * p2)) < 1e-12 * p2 * p2);
        CHECK(rel(turning_level(Model::KGZ, p.phi0, w), p.b) < 1e-12);
      }
      {
        const auto p = build_wave(Model::Boussinesq3, k, w);
        CHECK(rel(turning_level(Model::Boussinesq3, p.phi0, w), p.b) < 1e-12);
      }
    }
  }
}

TEST_CASE("speed and w") {
  const auto p = build_wave_from_period(Model::Boussinesq3, 10.0, -0.4);
  REQUIRE(p.c.has_value());
  CHECK(*p.c == -0.4);
  CHECK(*p.c * *p.c + p.w == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(!build_wave(Model::KGZ, 0.5, 1.5).c.has_value());
  CHECK(*build_wave(Model::KGZ, 0.5, 0.75).c == doctest::Approx(0.5));
}

TEST_CASE("period infimum is the small-modulus limit") {
  CHECK(rel(period_of(Model::Boussinesq3, 1e-6, 1.0), std::sqrt(2.0) * pi) < 1e-10);
  CHECK(rel(period_of(Model::Boussinesq2, 1e-6, 1.0), 2.0 * pi) < 1e-10);
  CHECK(rel(period_of(Model::KGZ, 1e-6, 1.0), std::sqrt(2.0) * pi) < 1e-10);
  for (Model m : kModels) {
    CHECK(rel(period_of(m, 1e-6, 0.7), period_infimum(m, 0.7)) < 1e-10);
  }
}

TEST_CASE("period inversion") {
  for (Model m : kModels) {
    for (double k : {0.2, 0.5, 0.9}) {
      CHECK(std::abs(kappa_from_period(m, period_of(m, k, 1.0), 1.0) - k) < 1e-10);
    }
    CHECK(kappa_from_period(m, 12.0, 1.0) > kappa_from_period(m, 9.0, 1.0));
  }
  // T - inf T grows like kappa^4 (the kappa^2 terms of K and sqrt(2 - k^2)
  // cancel), so a 1e-6 excess still only buys kappa ~ 0.07.
  const double T0 = std::sqrt(2.0) * pi * (1 + 1e-6);
  const double k0 = kappa_from_period(Model::Boussinesq3, T0, 1.0);
  CHECK(k0 < 0.1);
  CHECK(rel(period_of(Model::Boussinesq3, k0, 1.0), T0) < 1e-14);
  CHECK_THROWS_AS(kappa_from_period(Model::Boussinesq3, 4.0, 1.0), OutOfRangeError);
  CHECK_THROWS_AS(build_wave_from_period(Model::Boussinesq2, 10.0, 1.0), DomainError);
  CHECK_THROWS_AS(build_wave_from_period(Model::Boussinesq2, 5.0, 0.1), OutOfRangeError);
  CHECK_THROWS_AS(build_wave(Model::KGZ, 1.2, 1.0), DomainError);
  CHECK_THROWS_AS(build_wave(Model::KGZ, 0.5, -1.0), DomainError);
}

TEST_CASE("(T, c) round trip") {
  for (Model m : kModels) {
    const double T = m == Model::KGZ ? 4.0 : 10.0;
    for (double c : {-0.5, 0.45, 0.55}) {
      const auto p = build_wave_from_period(m, T, c);
      CHECK(rel(p.T, T) < 1e-10);
      const auto q = build_wave_from_period(m, p.T, *p.c);
      CHECK(std::abs(q.kappa - p.kappa) < 1e-10);
    }
  }
}

TEST_CASE("sampled profiles") {
  for (Model m : kModels) {
    for (double k : {0.3, 0.6, 0.9}) {
      CAPTURE(model_name(m));
      CAPTURE(k);
      const auto p = build_wave(m, k, 1.0);
      const auto prof = sample_profile(p, 64);
      for (double v : prof.phi) {
        CHECK(v >= p.phi0 - 1e-14);
        CHECK(v <= p.phi1 + 1e-14);
      }
      for (int i = 1; i < 64; ++i) CHECK(std::abs(prof.phi[i] - prof.phi[64 - i]) < 1e-13);
      CHECK(prof.phi[0] == doctest::Approx(p.phi1));
      CHECK(prof.phi[32] == doctest::Approx(p.phi0));
      if (m == Model::KGZ) {
        for (int i = 0; i < 64; ++i) {
          CHECK(prof.psi[i] == -prof.phi[i] * prof.phi[i] / (2.0 * p.w));
        }
      } else {
        CHECK(prof.psi.empty());
      }
      CHECK(ode_residual(sample_profile(p, 256)) <= 1e-8);
    }
  }
  CHECK_THROWS_AS(sample_profile(build_wave(Model::KGZ, 0.5, 1.0), 15), SizeError);
  CHECK_THROWS_AS(sample_profile(build_wave(Model::KGZ, 0.5, 1.0), 8), SizeError);
}

TEST_CASE("ODE residual detects non-solutions and converges") {
  const auto p = build_wave(Model::Boussinesq2, 0.8, 1.0);
  auto prof = sample_profile(p, 256);
  for (double& v : prof.phi) v += 0.01;
  CHECK(ode_residual(prof) > 1e-3);

  double prev = ode_residual(sample_profile(p, 32));
  for (int n : {64, 128, 256}) {
    const double r = ode_residual(sample_profile(p, n));
    CHECK(r <= std::max(prev, 1e-10));  // roundoff floor grows with n
    prev = r;
  }
}

TEST_CASE("profile slope matches a difference quotient") {
  for (Model m : kModels) {
    const auto p = build_wave(m, 0.7, 0.8);
    for (double x : {0.1, 0.9, 2.3}) {
      const double h = 1e-6;
      const double fd = (profile_value(p, x + h) - profile_value(p, x - h)) / (2 * h);
      CHECK(std::abs(profile_slope(p, x) - fd) < 1e-8);
    }
  }
}
