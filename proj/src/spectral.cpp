#include "ptw/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ptw/elliptic.hpp"
#include "ptw/errors.hpp"

namespace ptw {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& a) { return 0.5 * (a + a.transpose()); }

Eigen::MatrixXd select(const Eigen::MatrixXd& a, const std::vector<int>& idx) {
  const int k = static_cast<int>(idx.size());
  Eigen::MatrixXd out(k, k);
  for (int j = 0; j < k; ++j) {
    for (int i = 0; i < k; ++i) out(i, j) = a(idx[i], idx[j]);
  }
  return out;
}

// Congruence A -> S^-1 A S^-1 with S = diag sqrt(max(|a_ii|, 1)). Inertia is
// unchanged, and the huge diagonal of high Fourier modes (|A| ~ k^4 for the
// Boussinesq H) no longer sets the eigensolver's absolute error, so the
// small eigenvalues near the kernel come out to working precision.
struct ScaledEigen {
  Eigen::VectorXd scale;  // S
  SymEigen eig;           // of S^-1 A S^-1
  int kernel = 0;         // index of the eigenvalue closest to zero

  Eigen::VectorXd kernel_vector() const {
    Eigen::VectorXd v = eig.vectors.col(kernel).cwiseQuotient(scale);
    return v / v.norm();
  }

  // <A^+ f, f> over the complement of the kernel mode.
  double form(const Eigen::VectorXd& f) const {
    const Eigen::VectorXd coef = eig.vectors.transpose() * f.cwiseQuotient(scale);
    double sum = 0.0;
    for (int i = 0; i < coef.size(); ++i) {
      if (i != kernel) sum += coef[i] * coef[i] / eig.values[i];
    }
    return sum;
  }
};

ScaledEigen scaled_eigen(const Eigen::MatrixXd& a, bool values_only) {
  ScaledEigen out;
  out.scale = a.diagonal().cwiseAbs().cwiseMax(1.0).cwiseSqrt();
  const Eigen::VectorXd inv = out.scale.cwiseInverse();
  out.eig = eig_sym(inv.asDiagonal() * a * inv.asDiagonal(), values_only);
  out.eig.values.cwiseAbs().minCoeff(&out.kernel);
  return out;
}

}  // namespace

Eigen::VectorXd SpectralOperatorBundle::expand(const Eigen::VectorXd& restricted) const {
  Eigen::VectorXd full = Eigen::VectorXd::Zero(opH_full.rows());
  for (std::size_t i = 0; i < kept.size(); ++i) full[kept[i]] = restricted[i];
  return full;
}

Eigen::VectorXd SpectralOperatorBundle::restrict_to(const Eigen::VectorXd& full) const {
  Eigen::VectorXd out(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i) out[i] = full[kept[i]];
  return out;
}

SpectralOperatorBundle build_bundle(Model model, const WaveParams& params, int n) {
  if (n < 32 || n % 2 != 0) {
    throw SizeError("spectral grid must be even and >= 32, got " + std::to_string(n));
  }
  if (params.model != model || !(params.T > 0.0) || !(params.w > 0.0)) {
    throw DomainError("wave parameters do not belong to the requested model");
  }
  SpectralOperatorBundle b{model, params, n, TrigBasis(n, params.T), {}, {}, {}, {}, {}, {}, {}, {}};
  const TrigBasis& basis = b.basis;
  const int m = basis.dim();
  const double w = params.w;

  Eigen::VectorXd phi(n);
  for (int i = 0; i < n; ++i) phi[i] = profile_value(params, basis.grid()[i]);

  const Eigen::MatrixXd& D = b.diff1 = basis.derivative();
  const Eigen::MatrixXd lap = -D * D;  // -d^2, symmetric positive semidefinite
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(m, m);

  if (model == Model::KGZ) {
    const Eigen::VectorXd phi2 = phi.array().square();
    b.opL = symmetrized(w * lap + I - basis.multiplication(1.5 * phi2 / w));
    b.opA = basis.multiplication(phi) * D;
    const Eigen::MatrixXd H1 = symmetrized(w * lap + I - basis.multiplication(0.5 * phi2 / w));
    b.opH_full.resize(2 * m, 2 * m);
    b.opH_full << H1, b.opA, b.opA.transpose(), w * lap;
    b.opH_full = symmetrized(b.opH_full);
    for (int i = 0; i < 2 * m; ++i) {
      if (i != m) b.kept.push_back(i);
    }
    Eigen::MatrixXd dd = Eigen::MatrixXd::Zero(2 * m, 2 * m);
    dd.topLeftCorner(m, m) = D;
    dd.bottomRightCorner(m, m) = D;
    b.diffH = select(dd, b.kept);
    b.meanzero_mask = "second component: constant mode removed";
  } else {
    const Eigen::VectorXd fprime =
        model == Model::Boussinesq2 ? phi : Eigen::VectorXd(3.0 * phi.array().square());
    b.opL = symmetrized(lap + w * I - basis.multiplication(fprime));
    b.opH_full = symmetrized(-D * b.opL * D);
    for (int i = 1; i < m; ++i) b.kept.push_back(i);
    b.diffH = select(D, b.kept);
    b.meanzero_mask = "constant mode removed";
  }
  b.opH = select(b.opH_full, b.kept);
  return b;
}

SymEigen eig_sym(const Eigen::MatrixXd& a, bool values_only) {
  if (a.rows() != a.cols() || a.rows() == 0) throw SizeError("eig_sym needs a square matrix");
  const double scale = a.cwiseAbs().maxCoeff();
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(scale, 1e-300)) {
    throw DomainError("eig_sym needs a symmetric matrix");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      a, values_only ? Eigen::EigenvaluesOnly : Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) {
    throw SolverError("symmetric eigensolver did not converge (size " +
                      std::to_string(a.rows()) + ", max |a_ij| = " + std::to_string(scale) + ")");
  }
  SymEigen out;
  out.values = es.eigenvalues();
  out.norm = out.values.cwiseAbs().maxCoeff();
  if (!values_only) {
    out.vectors = es.eigenvectors();
    if (out.norm > 0.0) {
      const Eigen::MatrixXd r = a * out.vectors - out.vectors * out.values.asDiagonal();
      out.max_residual = r.colwise().norm().maxCoeff() / out.norm;
    }
    if (out.max_residual > 1e-10) {
      throw SolverError("eigenpair residual " + std::to_string(out.max_residual) +
                        " exceeds 1e-10 ||A|| (size " + std::to_string(a.rows()) + ")");
    }
  }
  return out;
}

// -- Lame references ------------------------------------------------------------

double lame_potential(LameFamily family, double kappa, double y) {
  const double sn = jacobi_scd(y, kappa).sn;
  const double k2 = kappa * kappa;
  if (family == LameFamily::SixSn) return 6.0 * k2 * sn * sn;
  return -4.0 * (1.0 + k2) + 12.0 * k2 * sn * sn;
}

LameSpectrumRef lame_reference(LameFamily family, double kappa) {
  if (!(kappa >= 0.0 && kappa < 1.0)) {
    throw DomainError("Lame reference needs kappa in [0, 1), got " + std::to_string(kappa));
  }
  const double K = complete_elliptic(kappa).bigK;
  const double k2 = kappa * kappa;
  auto scd = [kappa](double y) { return jacobi_scd(y, kappa); };
  LameSpectrumRef ref{family, kappa, 0.0, {}};

  if (family == LameFamily::SixSn) {
    ref.period = 4.0 * K;
    const double s = std::sqrt(1.0 - k2 + k2 * k2);
    const double am = 1.0 + k2 - s;
    const double ap = 1.0 + k2 + s;
    ref.entries = {
        {2.0 + 2.0 * k2 - 2.0 * s, [=](double y) { const double v = scd(y).sn; return 1.0 - am * v * v; }},
        {1.0 + k2, [=](double y) { const auto t = scd(y); return t.cn * t.dn; }},
        {1.0 + 4.0 * k2, [=](double y) { const auto t = scd(y); return t.sn * t.dn; }},
        {4.0 + k2, [=](double y) { const auto t = scd(y); return t.sn * t.cn; }},
        {2.0 + 2.0 * k2 + 2.0 * s, [=](double y) { const double v = scd(y).sn; return 1.0 - ap * v * v; }},
    };
  } else {
    ref.period = 2.0 * K;
    const double r = std::sqrt(1.0 - k2 + 4.0 * k2 * k2);
    const double am = 1.0 + 2.0 * k2 - r;
    const double ap = 1.0 + 2.0 * k2 + r;
    ref.entries = {
        {k2 - 2.0 - 2.0 * r, [=](double y) { const auto t = scd(y); return t.dn * (1.0 - am * t.sn * t.sn); }},
        {0.0, [=](double y) { const auto t = scd(y); return t.dn * t.sn * t.cn; }},
        {k2 - 2.0 + 2.0 * r, [=](double y) { const auto t = scd(y); return t.dn * (1.0 - ap * t.sn * t.sn); }},
    };
  }
  return ref;
}

Eigen::MatrixXd lame_operator(LameFamily family, double kappa, int n) {
  const double K = complete_elliptic(kappa).bigK;
  const TrigBasis basis(n, family == LameFamily::SixSn ? 4.0 * K : 2.0 * K);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = lame_potential(family, kappa, basis.grid()[i]);
  const Eigen::MatrixXd D = basis.derivative();
  return symmetrized(-D * D + basis.multiplication(v));
}

// -- checks ---------------------------------------------------------------------

Eigen::VectorXd predicted_kernel(const SpectralOperatorBundle& b) {
  const TrigBasis& basis = b.basis;
  const int n = b.n;
  Eigen::VectorXd phi(n);
  for (int i = 0; i < n; ++i) phi[i] = profile_value(b.params, basis.grid()[i]);

  Eigen::VectorXd full;
  if (b.model == Model::KGZ) {
    const int m = basis.dim();
    Eigen::VectorXd g = basis.analyze(-phi.array().square().matrix() / (2.0 * b.params.w));
    g[0] = 0.0;
    full.resize(2 * m);
    full << basis.differentiate(basis.analyze(phi)), g;
  } else {
    full = basis.analyze(phi);
    full[0] = 0.0;
  }
  Eigen::VectorXd v = b.restrict_to(full);
  return v / v.norm();
}

SpectralReport verify_kernel(const SpectralOperatorBundle& b) {
  SpectralReport r;
  const SymEigen plain = eig_sym(b.opH, true);
  r.operator_norm = plain.norm;

  // Inertia from the congruent, well-scaled matrix.
  const ScaledEigen scaled = scaled_eigen(b.opH, true);
  const double tol = 1e3 * kEps * scaled.eig.norm;
  for (int i = 0; i < scaled.eig.values.size(); ++i) {
    const double l = scaled.eig.values[i];
    if (l < -tol) ++r.n_negative;
    if (std::abs(l) <= tol) ++r.kernel_dimension;
  }

  const Eigen::VectorXd& vals = plain.values;
  int i0 = 0;
  vals.cwiseAbs().minCoeff(&i0);
  r.lowest_eigenvalue = vals[0];
  r.kernel_eigenvalue = vals[i0];
  r.spectral_gap_sigma = std::numeric_limits<double>::infinity();
  for (int i = 0; i < vals.size(); ++i) {
    if (i != i0 && vals[i] > 0.0) r.spectral_gap_sigma = std::min(r.spectral_gap_sigma, vals[i]);
  }
  r.kernel_residual = (b.opH * predicted_kernel(b)).norm();
  r.verified = r.n_negative == 1 && r.kernel_dimension == 1;
  return r;
}

SpectralReport verify_kernel(Model model, const WaveParams& params, int n) {
  return verify_kernel(build_bundle(model, params, n));
}

double index_numeric(const SpectralOperatorBundle& b) {
  const ScaledEigen scaled = scaled_eigen(b.opH, false);
  const Eigen::VectorXd psi0 = scaled.kernel_vector();
  return scaled.form(b.diffH * psi0);
}

double index_numeric(Model model, const WaveParams& params, int n) {
  return index_numeric(build_bundle(model, params, n));
}

LinvChecks linv_checks(const SpectralOperatorBundle& b) {
  const ScaledEigen scaled = scaled_eigen(b.opL, false);
  const Eigen::VectorXd ker = scaled.kernel_vector();
  const int m = b.basis.dim();

  Eigen::VectorXd one = Eigen::VectorXd::Zero(m);
  one[0] = std::sqrt(b.params.T);
  Eigen::VectorXd phi(b.n);
  for (int i = 0; i < b.n; ++i) phi[i] = profile_value(b.params, b.basis.grid()[i]);
  const Eigen::VectorXd phi_hat = b.basis.analyze(phi);

  for (const Eigen::VectorXd* f : {static_cast<const Eigen::VectorXd*>(&one), &phi_hat}) {
    const double overlap = std::abs(ker.dot(*f)) / f->norm();
    if (overlap > 1e-8) {
      throw SolverError("right-hand side has relative component " + std::to_string(overlap) +
                        " along ker L; <L^-1 f, f> is undefined");
    }
  }
  return {scaled.form(one), scaled.form(phi_hat)};
}

LinvChecks linv_checks(Model model, const WaveParams& params, int n) {
  return linv_checks(build_bundle(model, params, n));
}

int default_grid(double kappa) { return kappa > 0.9999 ? 512 : 256; }

}  // namespace ptw
