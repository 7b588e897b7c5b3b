#include "ptw/waves.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "ptw/elliptic.hpp"
#include "ptw/errors.hpp"
#include "ptw/trig_basis.hpp"

namespace ptw {

std::string_view model_name(Model model) {
  switch (model) {
    case Model::Boussinesq2: return "boussinesq2";
    case Model::Boussinesq3: return "boussinesq3";
    case Model::KGZ: return "kgz";
  }
  return "unknown";
}

Model parse_model(std::string_view name) {
  if (name == "boussinesq2") return Model::Boussinesq2;
  if (name == "boussinesq3") return Model::Boussinesq3;
  if (name == "kgz") return Model::KGZ;
  throw std::invalid_argument("unknown model '" + std::string(name) +
                              "' (expected boussinesq2, boussinesq3 or kgz)");
}

namespace {

constexpr double kBracketLo = 1e-9;
constexpr double kBracketHi = 1.0 - 1e-9;

void check_kappa_w(double kappa, double w) {
  if (!(kappa > 0.0) || kappa > kKappaCap) {
    throw DomainError("wave modulus must lie in (0, 1 - 1e-12], got " + std::to_string(kappa));
  }
  if (!(w > 0.0) || !std::isfinite(w)) {
    throw DomainError("w = 1 - c^2 must be positive, got " + std::to_string(w));
  }
}

// sqrt(1 - k^2 + k^4)
double quartic_root(double kappa) {
  const double k2 = kappa * kappa;
  return std::sqrt(1.0 - k2 + k2 * k2);
}

}  // namespace

double period_of(Model model, double kappa, double w) {
  check_kappa_w(kappa, w);
  const double bigK = complete_elliptic(kappa).bigK;
  const double k2 = kappa * kappa;
  switch (model) {
    case Model::Boussinesq2:
      return 4.0 * bigK * std::sqrt(quartic_root(kappa)) / std::sqrt(w);
    case Model::Boussinesq3:
      return 2.0 * bigK * std::sqrt(2.0 - k2) / std::sqrt(w);
    case Model::KGZ:
      return 2.0 * bigK * std::sqrt(2.0 - k2) * std::sqrt(w);
  }
  throw std::logic_error("unhandled model");
}

double period_infimum(Model model, double w) {
  if (!(w > 0.0)) throw DomainError("w must be positive");
  constexpr double pi = std::numbers::pi;
  switch (model) {
    case Model::Boussinesq2: return 2.0 * pi / std::sqrt(w);
    case Model::Boussinesq3: return std::numbers::sqrt2 * pi / std::sqrt(w);
    case Model::KGZ: return std::numbers::sqrt2 * pi * std::sqrt(w);
  }
  throw std::logic_error("unhandled model");
}

double kappa_from_period(Model model, double T, double w) {
  if (!(w > 0.0)) throw DomainError("w must be positive");
  const double t_lo = period_of(model, kBracketLo, w);
  const double t_hi = period_of(model, kBracketHi, w);
  if (!(T > period_infimum(model, w))) {
    throw OutOfRangeError("period " + std::to_string(T) + " is at or below the infimum " +
                          std::to_string(period_infimum(model, w)) + " for w = " +
                          std::to_string(w));
  }
  if (T <= t_lo) return kBracketLo;
  if (T >= t_hi) {
    throw OutOfRangeError("period " + std::to_string(T) +
                          " needs a modulus beyond 1 - 1e-9 for w = " + std::to_string(w));
  }
  // Bisect to adjacent doubles: near kappa = 1 the period is so steep in
  // kappa that anything coarser shows up in the round trip T -> kappa -> T.
  double lo = kBracketLo;
  double hi = kBracketHi;
  for (;;) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (period_of(model, mid, w) < T) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double turning_level(Model model, double rho, double w) {
  const double r2 = rho * rho;
  switch (model) {
    case Model::Boussinesq2: return r2 * rho / 3.0 - w * r2;
    case Model::Boussinesq3: return 0.5 * r2 * r2 - w * r2;
    case Model::KGZ: return (r2 * r2 - 4.0 * w * r2) / (4.0 * w * w);
  }
  throw std::logic_error("unhandled model");
}

WaveParams build_wave(Model model, double kappa, double w) {
  check_kappa_w(kappa, w);
  WaveParams p;
  p.model = model;
  p.kappa = kappa;
  p.w = w;
  if (w <= 1.0) p.c = std::sqrt(1.0 - w);

  const double k2 = kappa * kappa;
  const double kprime = std::sqrt(complementary_sq(kappa));
  switch (model) {
    case Model::Boussinesq2: {
      const double alpha2 = w / (4.0 * quartic_root(kappa));
      p.alpha = std::sqrt(alpha2);
      p.phi1 = 4.0 * alpha2 * (1.0 + k2) + w;
      p.phi0 = 4.0 * alpha2 * (1.0 - 2.0 * k2) + w;
      p.b = turning_level(model, p.phi0, w);
      break;
    }
    case Model::Boussinesq3: {
      p.alpha = std::sqrt(w / (2.0 - k2));
      p.phi1 = std::numbers::sqrt2 * p.alpha;
      p.phi0 = p.phi1 * kprime;
      p.b = turning_level(model, p.phi1, w);
      break;
    }
    case Model::KGZ: {
      p.alpha = 1.0 / std::sqrt(w * (2.0 - k2));
      p.phi1 = 2.0 * std::sqrt(w / (2.0 - k2));
      p.phi0 = p.phi1 * kprime;
      p.b = turning_level(model, p.phi1, w);
      break;
    }
  }
  p.T = 2.0 * complete_elliptic(kappa).bigK / p.alpha;
  return p;
}

WaveParams build_wave_from_period(Model model, double T, double c) {
  if (!(std::abs(c) < 1.0)) {
    throw DomainError("wave speed must satisfy |c| < 1, got " + std::to_string(c));
  }
  const double w = 1.0 - c * c;
  WaveParams p = build_wave(model, kappa_from_period(model, T, w), w);
  p.c = c;
  return p;
}

double profile_value(const WaveParams& p, double x) {
  const auto [sn, cn, dn] = jacobi_scd(p.alpha * x, p.kappa);
  if (p.model == Model::Boussinesq2) return p.phi0 + (p.phi1 - p.phi0) * cn * cn;
  return p.phi1 * dn;
}

double profile_slope(const WaveParams& p, double x) {
  const auto [sn, cn, dn] = jacobi_scd(p.alpha * x, p.kappa);
  if (p.model == Model::Boussinesq2) {
    return -2.0 * (p.phi1 - p.phi0) * p.alpha * cn * sn * dn;
  }
  return -p.phi1 * p.alpha * p.kappa * p.kappa * sn * cn;
}

WaveProfile sample_profile(const WaveParams& p, int n) {
  if (n < 16 || n % 2 != 0) {
    throw SizeError("profile grid must be even and >= 16, got " + std::to_string(n));
  }
  WaveProfile out;
  out.params = p;
  out.n = n;
  out.xs.resize(n);
  out.phi.resize(n);
  for (int i = 0; i < n; ++i) {
    out.xs[i] = p.T * i / n;
    out.phi[i] = profile_value(p, out.xs[i]);
  }
  if (p.model == Model::KGZ) {
    out.psi.resize(n);
    for (int i = 0; i < n; ++i) out.psi[i] = -out.phi[i] * out.phi[i] / (2.0 * p.w);
  }
  return out;
}

double ode_residual(const WaveProfile& profile) {
  const WaveParams& p = profile.params;
  const TrigBasis basis(profile.n, p.T);
  const Eigen::VectorXd phi =
      Eigen::Map<const Eigen::VectorXd>(profile.phi.data(), profile.n);
  const Eigen::VectorXd phi_xx = basis.differentiate_samples(phi, 2);

  Eigen::VectorXd r;
  switch (p.model) {
    case Model::Boussinesq2:
      r = phi_xx - p.w * phi + 0.5 * phi.array().square().matrix();
      break;
    case Model::Boussinesq3:
      r = phi_xx - p.w * phi + phi.array().cube().matrix();
      break;
    case Model::KGZ:
      r = -p.w * phi_xx + phi - phi.array().cube().matrix() / (2.0 * p.w);
      break;
  }
  return r.cwiseAbs().maxCoeff();
}

}  // namespace ptw
