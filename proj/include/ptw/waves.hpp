#pragma once

#include <optional>
#include <vector>

#include "ptw/model.hpp"

namespace ptw {

/// One periodic traveling wave of the symmetric (a = 0), positive branch.
///
/// Boussinesq2: phi(x) = phi0 + (phi1 - phi0) cn^2(alpha x; kappa)
/// Boussinesq3: phi(x) = phi1 dn(alpha x; kappa)
/// KGZ:         phi(x) = phi1 dn(alpha x; kappa),  psi = -phi^2 / (2 w)
///
/// `w` is 1 - c^2. Waves built from (kappa, w) with w <= 1 carry c = +sqrt(1 - w);
/// waves built from (T, c) keep the requested sign. For w > 1 there is no
/// physical speed and `c` is empty.
struct WaveParams {
  Model model = Model::Boussinesq3;
  double kappa = 0.0;
  double w = 1.0;
  std::optional<double> c;
  double T = 0.0;      // fundamental period
  double alpha = 0.0;  // x -> alpha x scaling of the elliptic argument
  double phi0 = 0.0;   // minimum of the profile
  double phi1 = 0.0;   // maximum of the profile
  double b = 0.0;      // level of the first integral
  double a = 0.0;      // integration constant, fixed to 0
};

struct WaveProfile {
  WaveParams params;
  int n = 0;
  std::vector<double> xs;
  std::vector<double> phi;
  std::vector<double> psi;  // KGZ only
};

WaveParams build_wave(Model model, double kappa, double w);

/// Converts (T, c) to (kappa, w = 1 - c^2) and builds the wave. |c| >= 1 is a
/// DomainError; a period at or below the family infimum is an OutOfRangeError.
WaveParams build_wave_from_period(Model model, double T, double c);

double period_of(Model model, double kappa, double w);

/// Infimum of the admissible periods at fixed w (the kappa -> 0 limit).
double period_infimum(Model model, double w);

/// Bisection on the increasing map kappa -> T on [1e-9, 1 - 1e-9].
double kappa_from_period(Model model, double T, double w);

/// First-integral level of a turning value rho (where phi' = 0).
double turning_level(Model model, double rho, double w);

double profile_value(const WaveParams& p, double x);
double profile_slope(const WaveParams& p, double x);

/// Uniform endpoint-exclusive samples on [0, T). n must be even and >= 16.
WaveProfile sample_profile(const WaveParams& p, int n);

/// Max-norm residual of the traveling-wave ODE with spectral derivatives.
double ode_residual(const WaveProfile& profile);

}  // namespace ptw
