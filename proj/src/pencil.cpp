#include "ptw/pencil.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "ptw/errors.hpp"
#include "ptw/indices.hpp"
#include "ptw/spectral.hpp"

namespace ptw {

PencilSpectrum pencil_spectrum(Model model, const WaveParams& params, double c, int n,
                               std::optional<int> frame_sign) {
  if (!(std::abs(c) < 1.0)) {
    throw DomainError("pencil speed must satisfy |c| < 1, got " + std::to_string(c));
  }
  const SpectralOperatorBundle b = build_bundle(model, params, n);
  const Eigen::MatrixXd& H = b.opH;
  const Eigen::MatrixXd& D = b.diffH;
  const int m = static_cast<int>(H.rows());
  const double s = frame_sign.value_or(model == Model::KGZ ? -1 : 1);

  // Companion matrix under the similarity diag(I, R): the (psi, lambda psi)
  // blocks then have comparable size even though ||H|| ~ k_max^4.
  const Eigen::VectorXd rho = H.diagonal().cwiseAbs().cwiseMax(1.0).cwiseSqrt();
  const Eigen::VectorXd inv = rho.cwiseInverse();
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(2 * m, 2 * m);
  comp.topRightCorner(m, m) = rho.asDiagonal();
  comp.bottomLeftCorner(m, m) = -(inv.asDiagonal() * H);
  comp.bottomRightCorner(m, m) = -2.0 * s * c * (inv.asDiagonal() * D * rho.asDiagonal());

  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  if (es.info() != Eigen::Success) {
    throw SolverError("companion eigensolver did not converge (size " + std::to_string(2 * m) +
                      ", c = " + std::to_string(c) + ")");
  }

  PencilSpectrum out;
  out.model = model;
  out.params = params;
  out.c = c;
  out.n = n;
  out.eigenvalues.assign(es.eigenvalues().begin(), es.eigenvalues().end());
  out.h_norm = eig_sym(H, true).norm;
  out.kernel_ball = 1e-6 * std::sqrt(out.h_norm);

  out.max_growth = 0.0;
  for (const auto& l : out.eigenvalues) {
    if (std::abs(l) > out.kernel_ball) out.max_growth = std::max(out.max_growth, l.real());
  }
  for (const auto& l : out.eigenvalues) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& mu : out.eigenvalues) best = std::min(best, std::abs(std::conj(l) - mu));
    out.conj_defect = std::max(out.conj_defect, best);
  }
  return out;
}

double growth_tolerance(const PencilSpectrum& spectrum, double growth_tol) {
  return growth_tol * std::sqrt(spectrum.h_norm);
}

SpeedRange speed_range_for_period(Model model, double T) {
  constexpr double pi = std::numbers::pi;
  const double inf1 = period_infimum(model, 1.0);
  switch (model) {
    case Model::Boussinesq2:
    case Model::Boussinesq3:
      if (!(T > inf1)) {
        throw OutOfRangeError("period must exceed " + std::to_string(inf1) + " for " +
                              std::string(model_name(model)));
      }
      return {0.0, std::sqrt(1.0 - inf1 * inf1 / (T * T))};
    case Model::KGZ: {
      if (!(T > 0.0)) throw OutOfRangeError("period must be positive");
      const double w_max = T * T / (2.0 * pi * pi);
      return {w_max >= 1.0 ? 0.0 : std::sqrt(1.0 - w_max), 1.0};
    }
  }
  throw std::logic_error("unhandled model");
}

StabilityVerdict classify_stability(Model model, double T, double c, int n, double growth_tol) {
  const WaveParams p = build_wave_from_period(model, T, c);
  const PencilSpectrum spec = pencil_spectrum(model, p, c, n);
  StabilityVerdict v;
  v.kappa = p.kappa;
  v.max_growth = spec.max_growth;
  v.tolerance = growth_tolerance(spec, growth_tol);
  v.stable = spec.max_growth <= v.tolerance;
  try {
    v.threshold_prediction = kappa_star_for_period(model, T).c_T;
  } catch (const OutOfRangeError&) {
    // Every wave of this period sits on one side of its threshold.
  }
  try {
    v.predicted_stable = std::abs(c) >= threshold_speed(model, p.kappa);
  } catch (const NoThresholdError&) {
    v.predicted_stable = false;
  }
  v.agreement = v.stable == v.predicted_stable;
  return v;
}

ScanResult stability_scan(Model model, double T, std::span<const double> c_grid, int n,
                          double growth_tol) {
  if (c_grid.empty()) throw SizeError("speed grid is empty");
  ScanResult r;
  r.model = model;
  r.T = T;
  r.c_T_closed = kappa_star_for_period(model, T).c_T;
  for (double c : c_grid) {
    const WaveParams p = build_wave_from_period(model, T, c);
    const PencilSpectrum spec = pencil_spectrum(model, p, c, n);
    r.rows.push_back({c, spec.max_growth, spec.max_growth <= growth_tolerance(spec, growth_tol)});
  }

  r.monotone = true;
  int last_unstable = -1;
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    if (!r.rows[i].stable) {
      if (last_unstable != static_cast<int>(i) - 1) r.monotone = false;
      last_unstable = static_cast<int>(i);
    }
    if (i > 0) {
      r.grid_step = std::max(r.grid_step, std::abs(r.rows[i].c) - std::abs(r.rows[i - 1].c));
    }
  }
  if (last_unstable < 0) {
    r.c_T_empirical = std::abs(r.rows.front().c);
  } else if (last_unstable + 1 == static_cast<int>(r.rows.size())) {
    r.c_T_empirical = std::abs(r.rows.back().c);
  } else {
    r.c_T_empirical =
        0.5 * (std::abs(r.rows[last_unstable].c) + std::abs(r.rows[last_unstable + 1].c));
  }
  r.abs_diff = std::abs(r.c_T_empirical - r.c_T_closed);
  return r;
}

}  // namespace ptw
