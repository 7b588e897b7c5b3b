#include "ptw/trig_basis.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ptw/errors.hpp"

namespace ptw {

TrigBasis::TrigBasis(int n, double period) : n_(n), period_(period) {
  if (n < 4 || n % 2 != 0) {
    throw SizeError("trigonometric grid needs an even size >= 4, got " + std::to_string(n));
  }
  if (!(period > 0.0) || !std::isfinite(period)) {
    throw DomainError("grid period must be positive and finite");
  }
  grid_.resize(n);
  for (int i = 0; i < n; ++i) grid_[i] = period * i / n;

  samples_.resize(n, dim());
  const double c0 = 1.0 / std::sqrt(period);
  const double ck = std::sqrt(2.0 / period);
  for (int i = 0; i < n; ++i) {
    samples_(i, 0) = c0;
    for (int k = 1; k < n / 2; ++k) {
      // Exact integer phase reduction keeps cos/sin arguments in [0, 2 pi).
      const double angle = 2.0 * std::numbers::pi * ((static_cast<long>(k) * i) % n) / n;
      samples_(i, 2 * k - 1) = ck * std::cos(angle);
      samples_(i, 2 * k) = ck * std::sin(angle);
    }
  }
}

double TrigBasis::wavenumber(int index) const {
  const int k = (index + 1) / 2;
  return 2.0 * std::numbers::pi * k / period_;
}

Eigen::VectorXd TrigBasis::analyze(const Eigen::VectorXd& samples) const {
  return weight() * (samples_.transpose() * samples);
}

Eigen::VectorXd TrigBasis::synthesize(const Eigen::VectorXd& coeffs) const {
  return samples_ * coeffs;
}

Eigen::MatrixXd TrigBasis::derivative() const {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(dim(), dim());
  for (int k = 1; k < n_ / 2; ++k) {
    const double omega = wavenumber(2 * k);
    d(2 * k, 2 * k - 1) = -omega;  // (cos)' = -omega sin
    d(2 * k - 1, 2 * k) = omega;   // (sin)' =  omega cos
  }
  return d;
}

Eigen::VectorXd TrigBasis::differentiate(const Eigen::VectorXd& coeffs) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(coeffs.size());
  for (int k = 1; k < n_ / 2; ++k) {
    const double omega = wavenumber(2 * k);
    out[2 * k - 1] = omega * coeffs[2 * k];
    out[2 * k] = -omega * coeffs[2 * k - 1];
  }
  return out;
}

Eigen::MatrixXd TrigBasis::multiplication(const Eigen::VectorXd& potential) const {
  const Eigen::MatrixXd weighted = potential.asDiagonal() * samples_;
  Eigen::MatrixXd m = weight() * (samples_.transpose() * weighted);
  return 0.5 * (m + m.transpose());
}

Eigen::VectorXd TrigBasis::differentiate_samples(const Eigen::VectorXd& samples,
                                                 int order) const {
  Eigen::VectorXd c = analyze(samples);
  for (int i = 0; i < order; ++i) c = differentiate(c);
  return synthesize(c);
}

}  // namespace ptw
