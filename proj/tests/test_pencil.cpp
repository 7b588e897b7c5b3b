#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "ptw/errors.hpp"
#include "ptw/indices.hpp"
#include "ptw/pencil.hpp"
#include "ptw/spectral.hpp"
#include "ptw/waves.hpp"

using namespace ptw;

namespace {

constexpr double pi = std::numbers::pi;

double max_abs_re(const PencilSpectrum& s) {
  double m = 0.0;
  for (const auto& l : s.eigenvalues) {
    if (std::abs(l) > s.kernel_ball) m = std::max(m, std::abs(l.real()));
  }
  return m;
}

}  // namespace

TEST_CASE("decoupled pencil at c = 0") {
  const auto p = build_wave(Model::Boussinesq3, 0.6, 1.0);
  const auto s = pencil_spectrum(Model::Boussinesq3, p, 0.0, 64);
  const auto h = eig_sym(build_bundle(Model::Boussinesq3, p, 64).opH, true);

  std::vector<double> sq;
  for (const auto& l : s.eigenvalues) sq.push_back(-(l * l).real());
  std::sort(sq.begin(), sq.end());
  // each eigenvalue of H appears twice (lambda = +-sqrt(-h))
  for (int i = 0; i < h.values.size(); ++i) {
    CHECK(std::abs(sq[2 * i] - h.values[i]) <= 1e-8 * h.norm);
    CHECK(std::abs(sq[2 * i + 1] - h.values[i]) <= 1e-8 * h.norm);
  }
  // the single negative eigenvalue -delta^2 of H gives growth delta
  CHECK(std::abs(s.max_growth - std::sqrt(-h.values[0])) <= 1e-8 * std::sqrt(h.norm));
}

TEST_CASE("conjugation symmetry and frame sign") {
  for (auto [m, k, c] : {std::tuple{Model::Boussinesq3, 0.9, 0.3}, std::tuple{Model::Boussinesq2, 0.7, -0.5},
                         std::tuple{Model::KGZ, 0.95, 0.6}}) {
    CAPTURE(model_name(m));
    const double w = 1.0 - c * c;
    const auto p = build_wave(m, k, w);
    const auto a = pencil_spectrum(m, p, c, 64);
    CHECK(a.conj_defect <= 1e-8 * std::sqrt(a.h_norm));
    const auto b = pencil_spectrum(m, p, c, 64, m == Model::KGZ ? 1 : -1);
    CHECK(std::abs(max_abs_re(a) - max_abs_re(b)) <= 1e-8 * std::sqrt(a.h_norm));
  }
}

TEST_CASE("speed ranges") {
  const auto b = speed_range_for_period(Model::Boussinesq3, 10.0);
  CHECK(b.lo == 0.0);
  CHECK(b.hi == doctest::Approx(std::sqrt(1.0 - 2.0 * pi * pi / 100.0)));
  const auto k = speed_range_for_period(Model::KGZ, 4.0);
  CHECK(k.lo == doctest::Approx(std::sqrt(1.0 - 16.0 / (2.0 * pi * pi))));
  CHECK(speed_range_for_period(Model::KGZ, 6.0).lo == 0.0);
  CHECK_THROWS_AS(speed_range_for_period(Model::Boussinesq2, 6.0), OutOfRangeError);
}

TEST_CASE("threshold straddle, Boussinesq3 T = 10") {
  const double cT = kappa_star_for_period(Model::Boussinesq3, 10.0).c_T;
  const auto above = classify_stability(Model::Boussinesq3, 10.0, cT + 0.05, 128);
  CHECK(above.stable);
  CHECK(above.agreement);
  const auto below = classify_stability(Model::Boussinesq3, 10.0, cT - 0.05, 128);
  CHECK(!below.stable);
  CHECK(below.max_growth > 1e-3);
  CHECK(below.agreement);
  REQUIRE(below.threshold_prediction.has_value());
  CHECK(*below.threshold_prediction == doctest::Approx(cT));
  // stability depends on |c| only
  const auto mirrored = classify_stability(Model::Boussinesq3, 10.0, -(cT + 0.05), 128);
  CHECK(mirrored.stable);
}

TEST_CASE("scan, Boussinesq2 T = 8") {
  const double cmax = speed_range_for_period(Model::Boussinesq2, 8.0).hi;
  std::vector<double> grid;
  for (int j = 0; j < 21; ++j) grid.push_back(cmax * j / 21.0);
  const auto r = stability_scan(Model::Boussinesq2, 8.0, grid, 64);
  CHECK(r.rows.size() == 21);
  CHECK(r.monotone);
  CHECK(r.abs_diff <= r.grid_step);
  CHECK(!r.rows.front().stable);
  CHECK(r.rows.back().stable);
}

TEST_CASE("errors") {
  const auto p = build_wave(Model::Boussinesq3, 0.5, 1.0);
  CHECK_THROWS_AS(pencil_spectrum(Model::Boussinesq3, p, 1.0, 64), DomainError);
  CHECK_THROWS_AS(stability_scan(Model::Boussinesq3, 10.0, std::vector<double>{}, 64), SizeError);
  CHECK_THROWS_AS(classify_stability(Model::Boussinesq3, 3.0, 0.1, 64), OutOfRangeError);
}
