#include "ptw/elliptic.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "ptw/errors.hpp"

namespace ptw {

namespace {

constexpr int kMaxAgmSteps = 40;

void check_modulus(double kappa) {
  if (!(kappa >= 0.0) || kappa > kKappaCap) {
    throw DomainError("elliptic modulus must lie in [0, 1 - 1e-12], got " +
                      std::to_string(kappa));
  }
}

}  // namespace

double complementary_sq(double kappa) { return (1.0 - kappa) * (1.0 + kappa); }

namespace {

struct Agm {
  double bigK;
  double sum;  // sum_n 2^(n-1) c_n^2, so that K - E = K * sum
};

// AGM(1, k') with the running sum, c_0 = k.
Agm agm(double kappa) {
  double a = 1.0;
  double b = std::sqrt(complementary_sq(kappa));
  double c = kappa;
  double weight = 0.5;
  double sum = weight * c * c;
  for (int i = 0; i < kMaxAgmSteps; ++i) {
    const double an = 0.5 * (a + b);
    c = c * c / (4.0 * an);  // = (a - b)/2 without the subtraction
    b = std::sqrt(a * b);
    a = an;
    weight *= 2.0;
    sum += weight * c * c;
    if (std::abs(c) <= 1e-17 * a) break;
  }
  return {std::numbers::pi / (2.0 * a), sum};
}

}  // namespace

EllipticPair complete_elliptic(double kappa) {
  check_modulus(kappa);
  if (kappa == 0.0) return {0.0, std::numbers::pi / 2, std::numbers::pi / 2};
  const auto [bigK, sum] = agm(kappa);
  return {kappa, bigK, bigK * (1.0 - sum)};
}

EllipticSlopes d_complete_elliptic(double kappa) {
  if (!(kappa > 0.0)) {
    throw DomainError("dK/dk and dE/dk are 0/0 at kappa = 0; pass kappa > 0");
  }
  check_modulus(kappa);
  // With D = (K - E)/k^2 taken from the AGM sum (no subtraction):
  //   dK/dk = (E - k'^2 K)/(k k'^2) = k (K - D)/k'^2,   dE/dk = (E - K)/k = -k D.
  const auto [bigK, sum] = agm(kappa);
  const double bigD = bigK * sum / (kappa * kappa);
  return {kappa * (bigK - bigD) / complementary_sq(kappa), -kappa * bigD};
}

JacobiTriple jacobi_scd(double y, double kappa) {
  check_modulus(kappa);
  if (!std::isfinite(y)) throw DomainError("jacobi_scd needs a finite argument");
  if (kappa == 0.0) return {std::sin(y), std::cos(y), 1.0};

  // sn has period 4K; reduce to [-2K, 2K] so the Landen phase stays small.
  const double quarter = complete_elliptic(kappa).bigK;
  const double u = y - 4.0 * quarter * std::nearbyint(y / (4.0 * quarter));

  std::array<double, kMaxAgmSteps + 1> a{};
  std::array<double, kMaxAgmSteps + 1> c{};
  a[0] = 1.0;
  c[0] = kappa;
  double b = std::sqrt(complementary_sq(kappa));
  int steps = 0;
  while (steps < kMaxAgmSteps && std::abs(c[steps]) > 1e-17 * a[steps]) {
    a[steps + 1] = 0.5 * (a[steps] + b);
    c[steps + 1] = c[steps] * c[steps] / (4.0 * a[steps + 1]);
    b = std::sqrt(a[steps] * b);
    ++steps;
  }

  double phi = std::ldexp(a[steps] * u, steps);
  for (int i = steps; i > 0; --i) {
    phi = 0.5 * (phi + std::asin(c[i] * std::sin(phi) / a[i]));
  }
  const double sn = std::sin(phi);
  const double cn = std::cos(phi);
  // dn^2 = k'^2 + k^2 cn^2: both terms nonnegative, so no cancellation. The
  // Landen ratio cos(phi_0)/cos(phi_1 - phi_0) is 0/0 at odd multiples of K.
  const double dn = std::sqrt(complementary_sq(kappa) + kappa * kappa * cn * cn);
  return {sn, cn, dn};
}

}  // namespace ptw
