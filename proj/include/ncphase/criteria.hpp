#pragma once

#include "ncphase/gaussian_state.hpp"

#include <span>
#include <vector>

namespace ncphase {

/// passes <=> min_eigenvalue >= -tol::psd_verdict.
struct PSDVerdict {
  bool passes = false;
  double min_eigenvalue = 0.0;
  Index matrix_dim = 0;
  double tolerance = tol::psd_verdict;
};

PSDVerdict make_verdict(double min_eigenvalue, Index matrix_dim);

/// Smallest eigenvalue of the Hermitian matrix A + iB (A symmetric, B skew),
/// computed from the real symmetric embedding [[A, -B], [B, A]].
double hermitian_psd_min_eig(const Matrix& A, const Matrix& B);

/// Sigma + (i/2) F >= 0. Commutative states pair with J, noncommutative
/// states with a deformed form.
PSDVerdict rsup_check(const GaussianState& state, const PhaseSpaceForm& form);

enum class SeparabilityLabel { entangled, separable, ppt_pass_undetermined };

std::string_view to_string(SeparabilityLabel label);

struct PPTVerdict {
  PSDVerdict psd;
  SeparabilityLabel label = SeparabilityLabel::ppt_pass_undetermined;

  bool entangled() const { return label == SeparabilityLabel::entangled; }
};

/// Sigma + (i/2) Omega' >= 0 with Omega' = Diag[Omega^A, -Omega^B]. For a
/// commutative state pass J as `omega`. A pass is labelled separable only for
/// 1+1 modes in the commutative picture.
PPTVerdict ppt_separability_check(const GaussianState& state, const PhaseSpaceForm& omega,
                                  ModePartition partition);

/// (M m, M Sigma M^T) for an involution M (Lambda or D).
GaussianState mirror_covariance(const GaussianState& state, const Matrix& involution);

struct WitnessRecord {
  double theta = 0.0;
  double eta = 0.0;
  double margin = 0.0;
  bool entangled = false;
};

/// Deformed form used by the scan: planar blocks on consecutive mode pairs,
/// laid out in `ordering`.
PhaseSpaceForm scan_form(double theta, double eta, const Ordering& ordering, ModePartition partition,
                         double hbar);

/// Re-reads the fixed covariance of a commutative-PPT-passing state as a
/// noncommutative covariance under Omega(theta, eta) for every grid point.
/// Records are ordered theta-major. Grid points are evaluated on up to
/// `max_threads` threads.
std::vector<WitnessRecord> kinematic_entanglement_scan(const GaussianState& state,
                                                       std::span<const double> theta_grid,
                                                       std::span<const double> eta_grid,
                                                       ModePartition partition,
                                                       unsigned max_threads = 1);

}  // namespace ncphase
