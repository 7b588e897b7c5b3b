#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ptw/model.hpp"
#include "ptw/trig_basis.hpp"
#include "ptw/waves.hpp"

namespace ptw {

/// Galerkin matrices of the linearized operators in the TrigBasis coefficient
/// space (dimension m = n - 1). Coefficient dot products are L2 products.
///
/// Boussinesq: L = -d^2 + w - f'(phi),  H = -D L D restricted to mean zero
///             (constant coefficient removed, size m - 1).
/// KGZ:        L = -w d^2 + 1 - 3 phi^2/(2w);
///             H = [[H1, A], [A^T, H2]],  H1 = -w d^2 + 1 - phi^2/(2w),
///             H2 = -w d^2,  A z = phi z'; the second component is mean zero,
///             so H has size 2m - 1.
struct SpectralOperatorBundle {
  Model model;
  WaveParams params;
  int n;
  TrigBasis basis;
  Eigen::MatrixXd diff1;     // m x m
  Eigen::MatrixXd opL;       // m x m
  Eigen::MatrixXd opA;       // m x m, KGZ only
  Eigen::MatrixXd opH_full;  // before removing the mean mode
  Eigen::MatrixXd opH;       // restricted
  Eigen::MatrixXd diffH;     // d/dx on the space opH acts on (blockwise for KGZ)
  std::vector<int> kept;     // rows of opH_full retained in opH
  std::string meanzero_mask;

  /// Embeds a vector of the restricted space into the full coefficient space.
  Eigen::VectorXd expand(const Eigen::VectorXd& restricted) const;
  Eigen::VectorXd restrict_to(const Eigen::VectorXd& full) const;
};

/// n even and >= 32.
SpectralOperatorBundle build_bundle(Model model, const WaveParams& params, int n);

struct SymEigen {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // orthonormal columns; empty when values_only
  double max_residual = 0.0;  // max_i ||A v_i - l_i v_i|| / ||A||
  double norm = 0.0;          // max |l_i|
};

/// Dense symmetric eigensolver. Throws SolverError on non-convergence or a
/// residual above 1e-10 ||A||.
SymEigen eig_sym(const Eigen::MatrixXd& a, bool values_only = false);

// -- Lame references ------------------------------------------------------------

enum class LameFamily {
  SixSn,     // -d^2/dy^2 + 6 k^2 sn^2            on [0, 4K]
  TwelveSn,  // -d^2/dy^2 - 4(1+k^2) + 12 k^2 sn^2 on [0, 2K]
};

struct LameEntry {
  double eigenvalue;
  std::function<double(double)> eigenfunction;
};

struct LameSpectrumRef {
  LameFamily family;
  double kappa;
  double period;
  std::vector<LameEntry> entries;  // increasing eigenvalues
};

LameSpectrumRef lame_reference(LameFamily family, double kappa);
double lame_potential(LameFamily family, double kappa, double y);
/// Galerkin matrix of the Lame operator on its reference period.
Eigen::MatrixXd lame_operator(LameFamily family, double kappa, int n);

// -- checks against the wave theory ------------------------------------------------

struct SpectralReport {
  double lowest_eigenvalue = 0.0;   // -delta^2
  double kernel_eigenvalue = 0.0;   // eigenvalue closest to zero
  double kernel_residual = 0.0;     // ||H psi0|| for the predicted unit psi0
  double spectral_gap_sigma = 0.0;  // smallest positive eigenvalue past the kernel
  int n_negative = 0;
  int kernel_dimension = 0;
  double operator_norm = 0.0;
  bool verified = false;  // n_negative == 1 and kernel_dimension == 1
};

/// Predicted kernel vector of H in the restricted coordinates, unit L2 norm:
/// Boussinesq phi - mean(phi); KGZ (phi', -(phi^2 - mean(phi^2))/(2w)).
Eigen::VectorXd predicted_kernel(const SpectralOperatorBundle& bundle);

SpectralReport verify_kernel(const SpectralOperatorBundle& bundle);
SpectralReport verify_kernel(Model model, const WaveParams& params, int n);

/// <H^{-1} psi0', psi0'> with psi0 the computed unit kernel vector of H.
double index_numeric(const SpectralOperatorBundle& bundle);
double index_numeric(Model model, const WaveParams& params, int n);

struct LinvChecks {
  double linv_one = 0.0;  // <L^{-1} 1, 1>
  double linv_phi = 0.0;  // <L^{-1} phi, phi>
};

/// Both forms on the complement of ker L. Throws SolverError if 1 or phi has a
/// relative component above 1e-8 along the computed kernel of L.
LinvChecks linv_checks(const SpectralOperatorBundle& bundle);
LinvChecks linv_checks(Model model, const WaveParams& params, int n);

/// Grid size used by the command line: 256, or 512 once kappa > 0.9999.
int default_grid(double kappa);

}  // namespace ptw
