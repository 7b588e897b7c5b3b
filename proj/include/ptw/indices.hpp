#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ptw/model.hpp"

namespace ptw {

/// Closed-form stability indices <H^{-1} psi0', psi0'> for the three families,
/// the speeds at which they change sign, and the auxiliary functions whose
/// signs and limits the stability statements rely on.
///
/// Every function of kappa alone accepts kappa in [kIndexKappaMin, kIndexKappaMax]
/// and throws DomainError outside it. Limits at the endpoints are approached by
/// sampling inside the interval, never evaluated directly.

inline constexpr double kIndexKappaMin = 1e-6;
inline constexpr double kIndexKappaMax = 1.0 - 1e-9;

/// Modulus below which the stated KGZ claim declares every wave
/// unstable. Kept for figure domains; the validated N has no root there.
inline constexpr double kKappa0Claimed = 0.937095;

/// f(kappa) together with df/dkappa, both assembled analytically.
struct ValueSlope {
  double value = 0.0;
  double slope = 0.0;
};

// -- building blocks (exposed so each analytic slope can be checked) ---------

/// F = 16 K [3E + (k^2 - 2 + sqrt(1 - k^2 + k^4)) K]
ValueSlope aux_F(double kappa);
/// K^4 (1 - k^2 + k^4)
ValueSlope aux_K4q(double kappa);
/// G = 1 / (128 d/dk[K^4 (1 - k^2 + k^4)])
double aux_G(double kappa);
/// (2 - k^2) K^2, the KGZ period-squared factor T^2 / (4 w)
ValueSlope aux_P(double kappa);
/// K E
ValueSlope aux_KE(double kappa);
/// I1 = int_0^K dn^4 = ((4 - 2k^2) E - (1 - k^2) K) / 3
ValueSlope quartic_moment_I1(double kappa);
/// K I1 / (2 - k^2)
ValueSlope aux_Q(double kappa);

// -- index functions ----------------------------------------------------------

/// Boussinesq u^3: <H^{-1}psi0',psi0'> = -1/(w M).
double index_M(double kappa);

/// 1 - 16 sqrt(1-k^2+k^4) K^2 F' G; positive on (0,1).
double ftilde_bracket(double kappa);

/// Boussinesq u^2/2: <H^{-1}psi0',psi0'> = -1/(w Ftilde). Throws
/// ArithmeticError if ftilde_bracket vanishes.
double index_Ftilde(double kappa);

/// KGZ integration constant c1, from its defining ratio of integrals.
double c1_kgz(double kappa);

/// The "function of kappa only" rational form of c1 as stated alongside the
/// derivation. It does not agree with c1_kgz; kept for diagnostics.
double c1_kgz_reduced(double kappa);

/// KGZ: <H^{-1}psi0',psi0'> = -N/w.
double index_N(double kappa);

/// N assembled with c1_kgz_reduced instead of c1_kgz (diagnostic only).
double index_N_reduced_c1(double kappa);

/// Two-term expansion bracket of <L^{-1}1,1> for the dn (u^3) wave:
/// B1/((k^2-2-2s)B3) + B2/((k^2-2+2s)B4), s = sqrt(1-k^2+k^4).
double lame_mean_bracket(double kappa);

/// 2 d/dk[K E] / d/dk[(2 - k^2) K^2]; tends to 1/3 as k -> 0.
double kgz_linv_ratio(double kappa);

// -- indices, speeds, thresholds ---------------------------------------------

double index_closed(Model model, double kappa, double w);

/// 1 / (2 sqrt(-index)) when the index is negative; empty when the index is
/// nonnegative (unstable for every speed).
std::optional<double> mu_star(Model model, double kappa, double w);

/// Minimal |c| for stability at modulus kappa. Throws NoThresholdError when
/// the index is nonnegative.
double threshold_speed(Model model, double kappa);

/// Period of the wave sitting exactly at the threshold speed.
double threshold_period_map(Model model, double kappa);

struct ThresholdSolution {
  double kappa_T = 0.0;
  double c_T = 0.0;
};

/// Solves threshold_period_map(model, kappa) = T. OutOfRangeError if T lies
/// outside the range of the map on [kIndexKappaMin, kIndexKappaMax].
ThresholdSolution kappa_star_for_period(Model model, double T);

/// Bisection root of index_N, if it changes sign on [0.05, 0.995].
std::optional<double> kappa0_root();
/// Same search on index_N_reduced_c1.
std::optional<double> kappa0_root_reduced_c1();

/// dkappa/dw along a family of fixed period.
double dkappa_dw(Model model, double kappa, double w);

/// <L^{-1} 1, 1>: Boussinesq2 and Boussinesq3 only.
double linv_one_closed(Model model, double kappa, double w);
/// <L^{-1} phi, phi> for all three families.
double linv_phi_closed(Model model, double kappa, double w);

struct IndexReport {
  Model model = Model::Boussinesq3;
  double kappa = 0.0;
  double w = 0.0;
  double index_closed = 0.0;
  std::optional<double> mu_star;
  std::optional<double> c_star;
  std::string stable_iff;
};

IndexReport index_report(Model model, double kappa, double w);

// -- figure data ----------------------------------------------------------------

struct FigureScan {
  int figure = 0;
  std::string claim;
  std::vector<std::pair<double, double>> table;
  bool holds = false;
  double worst_kappa = 0.0;
  double worst_value = 0.0;
};

/// The plotted function of figure `figure` (1..10).
double figure_value(int figure, double kappa);

/// Grid used when the caller does not supply one.
std::vector<double> default_figure_grid(int figure);

/// Tabulates figure `figure` on the grid and checks its claim. Never throws on
/// a failed claim; the verdict is in `holds`.
FigureScan figure_scan(int figure, std::span<const double> kappa_grid);

}  // namespace ptw
