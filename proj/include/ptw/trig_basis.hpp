#pragma once

#include <Eigen/Dense>

namespace ptw {

/// Real orthonormal Fourier basis on [0, T) sampled on an n-point uniform grid
/// (n even, endpoint excluded).
///
/// Coefficient layout: index 0 is the constant 1/sqrt(T); index 2k-1 and 2k
/// are sqrt(2/T) cos(2 pi k x/T) and sqrt(2/T) sin(2 pi k x/T) for
/// k = 1 .. n/2 - 1. The Nyquist mode is dropped, so dim() = n - 1 and every
/// basis function is orthonormal under the grid quadrature with weight T/n.
/// Coefficient-space dot products are therefore L2(0,T) inner products.
class TrigBasis {
 public:
  TrigBasis(int n, double period);

  int grid_size() const { return n_; }
  int dim() const { return n_ - 1; }
  double period() const { return period_; }
  double weight() const { return period_ / n_; }
  const Eigen::VectorXd& grid() const { return grid_; }

  /// Angular wavenumber 2 pi k / T of coefficient slot `index`.
  double wavenumber(int index) const;

  /// Grid samples -> coefficients (discrete L2 projection).
  Eigen::VectorXd analyze(const Eigen::VectorXd& samples) const;
  /// Coefficients -> grid samples.
  Eigen::VectorXd synthesize(const Eigen::VectorXd& coeffs) const;

  /// d/dx in coefficient space; antisymmetric, annihilates the constant.
  Eigen::MatrixXd derivative() const;
  Eigen::VectorXd differentiate(const Eigen::VectorXd& coeffs) const;

  /// Galerkin matrix of multiplication by a sampled potential; symmetric.
  Eigen::MatrixXd multiplication(const Eigen::VectorXd& potential) const;

  /// Spectral derivative of grid samples, returned on the grid.
  Eigen::VectorXd differentiate_samples(const Eigen::VectorXd& samples, int order) const;

 private:
  int n_;
  double period_;
  Eigen::VectorXd grid_;
  Eigen::MatrixXd samples_;  // n x dim, column j = basis function j on the grid
};

}  // namespace ptw
