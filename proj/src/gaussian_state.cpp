#include "ncphase/gaussian_state.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <sstream>

namespace ncphase {

std::string_view to_string(Picture picture) {
  return picture == Picture::commutative ? "commutative" : "noncommutative";
}

GaussianState::GaussianState(Vector mean, Matrix cov, Picture picture, Ordering ordering,
                             double hbar)
    : mean_(std::move(mean)), cov_(std::move(cov)), picture_(picture), ordering_(ordering),
      hbar_(hbar) {
  const Index dim = ordering_.dim();
  if (mean_.size() != dim) throw Error(ErrorCode::DimensionMismatch, "mean has the wrong length");
  if (cov_.rows() != dim || cov_.cols() != dim) {
    throw Error(ErrorCode::DimensionMismatch, "covariance has the wrong shape");
  }
  if (!(hbar_ > 0.0)) throw Error(ErrorCode::InvalidArgument, "hbar must be positive");
  if (!cov_.allFinite() || !mean_.allFinite()) {
    throw Error(ErrorCode::InvalidArgument, "non-finite state entries");
  }
  if (symmetry_defect(cov_) > tol::construction) {
    throw Error(ErrorCode::SymmetryViolation, "covariance is not symmetric");
  }
  const Vector evals = Eigen::SelfAdjointEigenSolver<Matrix>(cov_, Eigen::EigenvaluesOnly).eigenvalues();
  if (!(evals(0) > 1e-14 * evals(evals.size() - 1))) {
    throw Error(ErrorCode::NotPositiveDefinite, "covariance is not positive definite");
  }
}

GaussianState GaussianState::reordered(const Ordering& to) const {
  return GaussianState(reorder(mean_, ordering_, to), reorder(cov_, ordering_, to), picture_, to,
                       hbar_);
}

GaussianState GaussianState::with_picture(Picture picture) const {
  return GaussianState(mean_, cov_, picture, ordering_, hbar_);
}

GaussianWigner::GaussianWigner(const GaussianState& state)
    : mean_(state.mean()), chol_(state.cov()), ordering_(state.ordering()) {
  const Vector evals =
      Eigen::SelfAdjointEigenSolver<Matrix>(state.cov(), Eigen::EigenvaluesOnly).eigenvalues();
  const double cond = evals(evals.size() - 1) / evals(0);
  if (!(cond <= tol::condition_number)) {
    std::ostringstream os;
    os << "covariance condition number " << cond << " exceeds " << tol::condition_number;
    throw Error(ErrorCode::IllConditioned, os.str());
  }
  if (chol_.info() != Eigen::Success) {
    throw Error(ErrorCode::IllConditioned, "Cholesky factorization failed");
  }
  // sqrt(det Sigma) = prod diag(L)
  const Vector diag = chol_.matrixL().toDenseMatrix().diagonal();
  double log_norm = -static_cast<double>(state.n_modes()) * std::log(2.0 * std::numbers::pi);
  for (Index i = 0; i < diag.size(); ++i) log_norm -= std::log(diag(i));
  normalization_ = std::exp(log_norm);
}

double GaussianWigner::operator()(const Vector& point) const {
  if (point.size() != mean_.size()) {
    throw Error(ErrorCode::DimensionMismatch, "evaluation point has the wrong length");
  }
  const Vector y = chol_.matrixL().solve(point - mean_);
  return normalization_ * std::exp(-0.5 * y.squaredNorm());
}

double wigner_eval(const GaussianState& state, const Vector& point, const Ordering& point_ordering) {
  if (!(point_ordering == state.ordering())) {
    throw Error(ErrorCode::OrderingMismatch, "point is in " + point_ordering.describe() +
                                                 ", state in " + state.ordering().describe());
  }
  return GaussianWigner(state)(point);
}

double wigner_eval(const GaussianState& state, const Vector& point) {
  return wigner_eval(state, point, state.ordering());
}

namespace {

void check_transport(const GaussianState& state, const DarbouxMap& map, Picture expected) {
  if (state.picture() != expected) {
    throw Error(ErrorCode::PictureFormMismatch,
                "state is in the " + std::string(to_string(state.picture())) + " picture");
  }
  if (state.dim() != map.S().rows()) {
    throw Error(ErrorCode::DimensionMismatch, "state and Darboux map dimensions differ");
  }
  if (!(state.ordering() == map.ordering())) {
    throw Error(ErrorCode::OrderingMismatch, "state in " + state.ordering().describe() +
                                                 ", map in " + map.ordering().describe());
  }
}

Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

}  // namespace

GaussianState to_nc_picture(const GaussianState& state, const DarbouxMap& map) {
  check_transport(state, map, Picture::commutative);
  const Matrix& s = map.S();
  return GaussianState(s * state.mean(), symmetrize(s * state.cov() * s.transpose()),
                       Picture::noncommutative, state.ordering(), state.hbar());
}

GaussianState to_commutative_picture(const GaussianState& state, const DarbouxMap& map) {
  check_transport(state, map, Picture::noncommutative);
  const Matrix& s_inv = map.S_inv();
  return GaussianState(s_inv * state.mean(), symmetrize(s_inv * state.cov() * s_inv.transpose()),
                       Picture::commutative, state.ordering(), state.hbar());
}

double wigner_nc_eval(const GaussianState& state, const DarbouxMap& map, const Vector& point_z) {
  check_transport(state, map, Picture::commutative);
  if (point_z.size() != state.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "evaluation point has the wrong length");
  }
  const double det_omega = map.source_form().matrix().determinant();
  const double hbar_n = std::pow(map.hbar(), state.n_modes());
  const Vector zeta = map.S_inv() * point_z;
  return hbar_n / std::sqrt(det_omega) * GaussianWigner(state)(zeta);
}

GaussianState make_vacuum(int n_modes, double hbar) {
  return make_vacuum(Ordering::global(n_modes), hbar);
}

GaussianState make_vacuum(const Ordering& ordering, double hbar) {
  const Index dim = ordering.dim();
  return GaussianState(Vector::Zero(dim), 0.5 * hbar * Matrix::Identity(dim, dim),
                       Picture::commutative, ordering, hbar);
}

GaussianState make_thermal(std::span<const double> mean_occupations, double hbar) {
  return make_thermal(mean_occupations,
                      Ordering::global(static_cast<int>(mean_occupations.size())), hbar);
}

GaussianState make_thermal(std::span<const double> mean_occupations, const Ordering& ordering,
                           double hbar) {
  if (static_cast<int>(mean_occupations.size()) != ordering.n_modes()) {
    throw Error(ErrorCode::DimensionMismatch, "one occupation per mode is required");
  }
  Matrix cov = Matrix::Zero(ordering.dim(), ordering.dim());
  for (int k = 0; k < ordering.n_modes(); ++k) {
    const double n = mean_occupations[static_cast<std::size_t>(k)];
    if (!(n >= 0.0)) throw Error(ErrorCode::NegativeOccupation, "mean occupation must be >= 0");
    cov(ordering.x_index(k), ordering.x_index(k)) = hbar * (n + 0.5);
    cov(ordering.p_index(k), ordering.p_index(k)) = hbar * (n + 0.5);
  }
  return GaussianState(Vector::Zero(ordering.dim()), std::move(cov), Picture::commutative, ordering,
                       hbar);
}

GaussianState make_two_mode_squeezed(double r, double hbar) {
  const double c = std::cosh(2.0 * r);
  const double s = std::sinh(2.0 * r);
  Matrix cov(4, 4);
  cov << c, s, 0, 0,
         s, c, 0, 0,
         0, 0, c, -s,
         0, 0, -s, c;
  cov *= 0.5 * hbar;
  return GaussianState(Vector::Zero(4), std::move(cov), Picture::commutative, Ordering::global(2),
                       hbar);
}

}  // namespace ncphase
