#pragma once

// Gaussian Wigner functions described by (mean, covariance), with
// Sigma_ij = < {dz_i, dz_j} / 2 >, so the vacuum is (hbar / 2) I.

#include "ncphase/darboux.hpp"

#include <span>

namespace ncphase {

enum class Picture { commutative, noncommutative };

std::string_view to_string(Picture picture);

class GaussianState {
 public:
  /// Rejects asymmetric or non positive-definite covariances.
  GaussianState(Vector mean, Matrix cov, Picture picture, Ordering ordering, double hbar = 1.0);

  const Vector& mean() const { return mean_; }
  const Matrix& cov() const { return cov_; }
  Picture picture() const { return picture_; }
  const Ordering& ordering() const { return ordering_; }
  double hbar() const { return hbar_; }
  int n_modes() const { return ordering_.n_modes(); }
  Index dim() const { return ordering_.dim(); }

  GaussianState reordered(const Ordering& to) const;
  GaussianState with_picture(Picture picture) const;

 private:
  Vector mean_;
  Matrix cov_;
  Picture picture_;
  Ordering ordering_;
  double hbar_;
};

/// Pointwise evaluator with the covariance factorized once.
class GaussianWigner {
 public:
  /// Throws IllConditioned if cond(Sigma) > 1e12.
  explicit GaussianWigner(const GaussianState& state);

  double operator()(const Vector& point) const;
  const Ordering& ordering() const { return ordering_; }
  int n_modes() const { return ordering_.n_modes(); }
  double peak() const { return normalization_; }

 private:
  Vector mean_;
  Eigen::LLT<Matrix> chol_;
  double normalization_;
  Ordering ordering_;
};

/// N exp(-(z - m)^T Sigma^{-1} (z - m) / 2), N = 1 / ((2 pi)^n sqrt(det Sigma)).
double wigner_eval(const GaussianState& state, const Vector& point, const Ordering& point_ordering);
double wigner_eval(const GaussianState& state, const Vector& point);

GaussianState to_nc_picture(const GaussianState& state, const DarbouxMap& map);
GaussianState to_commutative_picture(const GaussianState& state, const DarbouxMap& map);

/// |det S|^{-1} W(S^{-1} z). Since Omega = S (hbar J) S^T, |det S| = sqrt(det Omega) / hbar^n,
/// which is 1 / sqrt(det Omega) at hbar = 1.
double wigner_nc_eval(const GaussianState& state, const DarbouxMap& map, const Vector& point_z);

GaussianState make_vacuum(int n_modes, double hbar = 1.0);
GaussianState make_vacuum(const Ordering& ordering, double hbar = 1.0);
/// Sigma = Diag_k hbar (n_k + 1/2) I_2.
GaussianState make_thermal(std::span<const double> mean_occupations, double hbar = 1.0);
GaussianState make_thermal(std::span<const double> mean_occupations, const Ordering& ordering,
                           double hbar = 1.0);
/// Two modes in (x1, x2, p1, p2) ordering.
GaussianState make_two_mode_squeezed(double r, double hbar = 1.0);

}  // namespace ncphase
