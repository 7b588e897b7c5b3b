#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>

#include "ptw/elliptic.hpp"
#include "ptw/errors.hpp"
#include "ptw/indices.hpp"
#include "ptw/spectral.hpp"
#include "ptw/waves.hpp"

using namespace ptw;

namespace {

constexpr double pi = std::numbers::pi;
constexpr Model kModels[] = {Model::Boussinesq2, Model::Boussinesq3, Model::KGZ};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

double fd(const std::function<double(double)>& f, double k, double h = 1e-6) {
  return (f(k + h) - f(k - h)) / (2 * h);
}

// int_0^K dn^4 dy by the trapezoid rule on the full period [0, 2K] (dn is
// smooth and 2K-periodic, so this converges geometrically).
double quad_I1(double k) {
  const double K = complete_elliptic(k).bigK;
  const int n = 2000;
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = jacobi_scd(2.0 * K * i / n, k).dn;
    s += d * d * d * d;
  }
  return s * (2.0 * K / n) / 2.0;
}

// Both the series branch (kappa < 0.25) and the closed-form branch.
constexpr double kSample[] = {0.05, 0.1, 0.2, 0.3, 0.6, 0.9};

}  // namespace

TEST_CASE("building blocks: values from their definitions") {
  for (double k : kSample) {
    CAPTURE(k);
    const auto e = complete_elliptic(k);
    const double K = e.bigK, E = e.bigE, k2 = k * k;
    const double q = 1.0 - k2 + k2 * k2;
    CHECK(rel(aux_F(k).value, 16 * K * (3 * E + (k2 - 2 + std::sqrt(q)) * K)) < 1e-12);
    CHECK(rel(aux_K4q(k).value, K * K * K * K * q) < 1e-13);
    CHECK(rel(aux_P(k).value, (2 - k2) * K * K) < 1e-13);
    CHECK(rel(aux_KE(k).value, K * E) < 1e-13);
    CHECK(rel(quartic_moment_I1(k).value, quad_I1(k)) < 1e-12);
    CHECK(rel(aux_Q(k).value, K * quad_I1(k) / (2 - k2)) < 1e-12);
    CHECK(rel(aux_G(k), 1.0 / (128.0 * aux_K4q(k).slope)) < 1e-14);
  }
}

TEST_CASE("building blocks: slopes against central differences") {
  using Block = ValueSlope (*)(double);
  const Block blocks[] = {aux_F, aux_K4q, aux_P, aux_KE, quartic_moment_I1, aux_Q};
  for (Block b : blocks) {
    for (double k : {0.1, 0.2, 0.3, 0.6, 0.9}) {
      CAPTURE(k);
      const double num = fd([b](double x) { return b(x).value; }, k);
      // Some slopes vanish like k^3 at small k; compare against the value scale.
      CHECK(std::abs(b(k).slope - num) <= 1e-7 * std::max(std::abs(num), std::abs(b(k).value)));
    }
  }
}

TEST_CASE("series and closed-form branches join at kappa = 0.25") {
  const std::function<double(double)> fs[] = {index_M, index_Ftilde, index_N, ftilde_bracket,
                                              kgz_linv_ratio, lame_mean_bracket};
  for (const auto& f : fs) {
    const double a = f(0.25 - 1e-10);
    const double b = f(0.25 + 1e-10);
    const double slope = (f(0.25 + 2e-6) - f(0.25 + 1e-6)) / 1e-6;
    CHECK(std::abs(a - b) <= 1e-10 * std::abs(b) + 2.0 * std::abs(slope) * 2e-10);
  }
}

TEST_CASE("index functions match the spectral linear solve") {
  // Includes moduli on the series branch.
  const std::pair<Model, double> cases[] = {{Model::Boussinesq3, 0.6}, {Model::Boussinesq3, 0.1},
                                            {Model::Boussinesq2, 0.5}, {Model::Boussinesq2, 0.15},
                                            {Model::KGZ, 0.96},        {Model::KGZ, 0.2}};
  for (auto [m, k] : cases) {
    CAPTURE(model_name(m));
    CAPTURE(k);
    const double numeric = index_numeric(m, build_wave(m, k, 1.0), 256);
    CHECK(rel(index_closed(m, k, 1.0), numeric) < 1e-4);
  }
  CHECK(rel(-1.0 / index_M(0.6), index_numeric(Model::Boussinesq3,
                                                build_wave(Model::Boussinesq3, 0.6, 1.0), 256)) <
        1e-4);
}

TEST_CASE("index scaling and mu*") {
  for (Model m : kModels) {
    for (double k : {0.3, 0.8, 0.97}) {
      const double i1 = index_closed(m, k, 1.0);
      CHECK(rel(index_closed(m, k, 0.25), 4.0 * i1) < 1e-13);
      const auto mu = mu_star(m, k, 1.0);
      if (i1 < 0.0) {
        REQUIRE(mu.has_value());
        CHECK(rel(*mu, 1.0 / (2.0 * std::sqrt(-i1))) < 1e-12);
        const auto r = index_report(m, k, 1.0);
        REQUIRE(r.c_star.has_value());
        CHECK(*r.c_star >= 0.0);
        CHECK(*r.c_star < 1.0);
        CHECK(rel(*r.c_star, threshold_speed(m, k)) < 1e-13);
      } else {
        CHECK(!mu.has_value());
      }
    }
  }
  CHECK(rel(*mu_star(Model::Boussinesq3, 0.5, 1.0),
            1.0 / (2.0 * std::sqrt(-index_closed(Model::Boussinesq3, 0.5, 1.0)))) < 1e-12);
  CHECK(*mu_star(Model::KGZ, 0.99, 1.0) > 0.0);
}

TEST_CASE("limits of M, Ftilde") {
  CHECK(std::isfinite(index_M(1.0 - 1e-6)));
  CHECK(index_M(1e-3) < 1e-4);
  CHECK(index_M(1e-3) > 0.0);
  CHECK(std::isfinite(index_M(1e-6)));
  CHECK(std::isfinite(index_N(1e-6)));
  CHECK(std::isfinite(index_Ftilde(1e-6)));
  for (int i = 1; i <= 19; ++i) CHECK(ftilde_bracket(0.05 * i) > 0.0);
}

TEST_CASE("threshold period maps") {
  CHECK(rel(figure_value(2, 1e-4), std::sqrt(2.0) * pi) < 1e-6);
  CHECK(rel(figure_value(4, 1e-4), 2.0 * pi) < 1e-6);
  for (auto [m, T] : {std::pair{Model::Boussinesq3, 10.0}, std::pair{Model::Boussinesq2, 8.0},
                      std::pair{Model::KGZ, 4.0}}) {
    const auto s = kappa_star_for_period(m, T);
    CHECK(s.c_T > 0.0);
    CHECK(s.c_T < 1.0);
    CHECK(rel(period_of(m, s.kappa_T, 1.0 - s.c_T * s.c_T), T) < 1e-8);
    CHECK(rel(threshold_period_map(m, s.kappa_T), T) < 1e-10);
  }
  CHECK_THROWS_AS(kappa_star_for_period(Model::Boussinesq3, 3.0), OutOfRangeError);
}

TEST_CASE("threshold speeds approach their terminal values") {
  // The approach is logarithmic in 1 - kappa.
  for (auto [id, target] : {std::pair{1, std::sqrt(0.5)}, std::pair{3, 0.5}}) {
    double prev = 1.0;
    for (int j = 2; j <= 9; ++j) {
      const double d = std::abs(figure_value(id, 1.0 - std::pow(10.0, -j)) - target);
      CHECK(d < prev);
      prev = d;
    }
    CHECK(prev < 0.05);
  }
}

TEST_CASE("dkappa/dw along fixed period") {
  for (Model m : kModels) {
    for (double k : {0.1, 0.4, 0.8}) {
      for (double w : {0.6, 1.0}) {
        CAPTURE(model_name(m));
        CAPTURE(k);
        const double T = period_of(m, k, w);
        // kappa(w) has a quartic-root singularity only ~k^4 away in w, so the
        // step must be much smaller than k^4.
        const double h = 1e-4 * std::pow(k, 4) * w;
        const double num = fd([&](double x) { return kappa_from_period(m, T, x); }, w, h);
        CHECK(rel(dkappa_dw(m, k, w), num) < 1e-5);
      }
    }
  }
}

TEST_CASE("<L^-1 1, 1> and <L^-1 phi, phi> closed forms") {
  CHECK(linv_one_closed(Model::Boussinesq2, 0.5, 1.0) > 0.0);
  CHECK(linv_one_closed(Model::Boussinesq3, 0.5, 1.0) > 0.0);
  CHECK_THROWS_AS(linv_one_closed(Model::KGZ, 0.5, 1.0), DomainError);
  for (Model m : kModels) {
    for (double k : {0.2, 0.5, 0.9}) {
      CAPTURE(model_name(m));
      CAPTURE(k);
      const auto p = build_wave(m, k, 1.0);
      const LinvChecks num = linv_checks(m, p, 256);
      CHECK(rel(linv_phi_closed(m, k, 1.0), num.linv_phi) < 1e-6);
      if (m != Model::KGZ) CHECK(rel(linv_one_closed(m, k, 1.0), num.linv_one) < 1e-6);
      if (m == Model::KGZ) CHECK(linv_phi_closed(m, k, 1.0) >= -p.w * p.T / 3.0);
    }
  }
}

TEST_CASE("figure 9 ratio") {
  CHECK(std::abs(kgz_linv_ratio(1e-3) - 1.0 / 3.0) < 1e-3);
  for (int i = 1; i < 100; ++i) CHECK(kgz_linv_ratio(0.01 * i) <= 1.0 / 3.0);
}

TEST_CASE("figure scans") {
  for (int id : {1, 2, 3, 4, 5, 7, 8, 9}) {
    CAPTURE(id);
    const auto grid = default_figure_grid(id);
    const auto s = figure_scan(id, grid);
    CHECK(s.table.size() == grid.size());
    CHECK(s.holds);
  }
  CHECK_THROWS(figure_value(11, 0.5));
}

TEST_CASE("domain checks") {
  CHECK_THROWS_AS(index_closed(Model::Boussinesq3, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(index_closed(Model::Boussinesq3, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(index_closed(Model::KGZ, 0.5, 0.0), DomainError);
  CHECK_THROWS_AS(index_M(1e-7), DomainError);
}
