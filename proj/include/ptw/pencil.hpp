#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "ptw/model.hpp"
#include "ptw/waves.hpp"

namespace ptw {

/// Spectrum of the quadratic pencil  lambda^2 psi + 2 s c lambda psi' + H psi = 0
/// via the companion matrix [[0, I], [-H, -2 s c D]] on the mean-zero space.
/// s = +1 for the Boussinesq families, -1 for KGZ.
struct PencilSpectrum {
  Model model = Model::Boussinesq3;
  WaveParams params;
  double c = 0.0;
  int n = 0;
  std::vector<std::complex<double>> eigenvalues;
  double max_growth = 0.0;   // max Re(lambda) outside the kernel ball
  double conj_defect = 0.0;  // max distance from conj(lambda) to the spectrum
  double h_norm = 0.0;       // ||H||_2
  double kernel_ball = 0.0;  // |lambda| below this is attributed to ker H
};

/// `frame_sign` overrides s (tests use it to check reflection symmetry).
PencilSpectrum pencil_spectrum(Model model, const WaveParams& params, double c, int n,
                               std::optional<int> frame_sign = std::nullopt);

/// growth_tol * sqrt(||H||): the line between discretization noise and growth.
double growth_tolerance(const PencilSpectrum& spectrum, double growth_tol);

struct StabilityVerdict {
  bool stable = false;
  double max_growth = 0.0;
  double tolerance = 0.0;
  double kappa = 0.0;
  std::optional<double> threshold_prediction;  // c_T; empty when T is outside the map's range
  bool predicted_stable = false;               // |c| >= threshold_speed(kappa(T, c))
  bool agreement = false;
};

/// Builds the wave of period T and speed c, solves the pencil and compares
/// with the closed-form threshold at the wave's own modulus. OutOfRangeError / DomainError for inadmissible (T, c).
StabilityVerdict classify_stability(Model model, double T, double c, int n,
                                    double growth_tol = 1e-6);

struct ScanRow {
  double c = 0.0;
  double max_growth = 0.0;
  bool stable = false;
};

struct ScanResult {
  Model model = Model::Boussinesq3;
  double T = 0.0;
  std::vector<ScanRow> rows;
  double c_T_closed = 0.0;
  double c_T_empirical = 0.0;  // midpoint of the last unstable / first stable pair
  double abs_diff = 0.0;
  double grid_step = 0.0;      // largest spacing of the c grid
  bool monotone = false;       // no stable -> unstable switch along increasing |c|
};

/// c_grid must be sorted by increasing |c|.
ScanResult stability_scan(Model model, double T, std::span<const double> c_grid, int n,
                          double growth_tol = 1e-6);

/// Open interval of |c| admitting a wave of period T (from the period
/// infimum): Boussinesq [0, c_max), KGZ (c_min, 1).
struct SpeedRange {
  double lo = 0.0;
  double hi = 1.0;
};
SpeedRange speed_range_for_period(Model model, double T);

}  // namespace ptw
