#include "ncphase/common.hpp"

namespace ncphase {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotSkewSymmetric: return "NotSkewSymmetric";
    case ErrorCode::SingularForm: return "SingularForm";
    case ErrorCode::PartitionMismatch: return "PartitionMismatch";
    case ErrorCode::NonInvertible: return "NonInvertible";
    case ErrorCode::DeformationTooLarge: return "DeformationTooLarge";
    case ErrorCode::OrderingMismatch: return "OrderingMismatch";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NegativeOccupation: return "NegativeOccupation";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::SymmetryViolation: return "SymmetryViolation";
    case ErrorCode::PictureFormMismatch: return "PictureFormMismatch";
    case ErrorCode::NotInvolutive: return "NotInvolutive";
    case ErrorCode::ModeCountMismatch: return "ModeCountMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

double skew_defect(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return (m + m.transpose()).cwiseAbs().maxCoeff();
}

double symmetry_defect(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.transpose()).cwiseAbs().maxCoeff();
}

double max_abs(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

}  // namespace ncphase
