#pragma once

// Complete elliptic integrals K(k), E(k) in Legendre form (modulus k, not the
// parameter m = k^2), their k-derivatives, and the Jacobi functions sn, cn, dn.
// K and E come from the arithmetic-geometric mean; sn/cn/dn from the
// descending Landen (AGM) recursion.

namespace ptw {

/// Largest modulus accepted anywhere. K diverges like log(4/k') at k -> 1.
inline constexpr double kKappaCap = 1.0 - 1e-12;

struct EllipticPair {
  double kappa = 0.0;
  double bigK = 0.0;
  double bigE = 0.0;
};

struct EllipticSlopes {
  double dK_dkappa = 0.0;
  double dE_dkappa = 0.0;
};

struct JacobiTriple {
  double sn = 0.0;
  double cn = 1.0;
  double dn = 1.0;
};

/// K(kappa), E(kappa) for 0 <= kappa <= kKappaCap. Throws DomainError otherwise.
EllipticPair complete_elliptic(double kappa);

/// dK/dk = (E - k'^2 K)/(k k'^2), dE/dk = (E - K)/k. Requires 0 < kappa <= kKappaCap.
EllipticSlopes d_complete_elliptic(double kappa);

/// sn, cn, dn of real argument y.
JacobiTriple jacobi_scd(double y, double kappa);

/// 1 - kappa^2 evaluated without cancellation near kappa = 1.
double complementary_sq(double kappa);

}  // namespace ptw
