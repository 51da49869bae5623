#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <string_view>

namespace ncphase {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

namespace tol {
// Fixed, not configurable per call.
inline constexpr double construction = 1e-12;
inline constexpr double derived = 1e-10;
inline constexpr double cross_party = 1e-14;
inline constexpr double psd_verdict = 1e-10;
inline constexpr double pivot = 1e-10;
inline constexpr double condition_number = 1e12;
}  // namespace tol

enum class ErrorCode {
  NotSkewSymmetric,
  SingularForm,
  PartitionMismatch,
  NonInvertible,
  DeformationTooLarge,
  OrderingMismatch,
  IllConditioned,
  DimensionMismatch,
  NegativeOccupation,
  NotPositiveDefinite,
  ShapeMismatch,
  SymmetryViolation,
  PictureFormMismatch,
  NotInvolutive,
  ModeCountMismatch,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// max_ij |M + M^T|_ij
double skew_defect(const Matrix& m);
/// max_ij |M - M^T|_ij
double symmetry_defect(const Matrix& m);
double max_abs(const Matrix& m);

}  // namespace ncphase
