#include "ncphase/criteria.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace ncphase {

PSDVerdict make_verdict(double min_eigenvalue, Index matrix_dim) {
  return PSDVerdict{min_eigenvalue >= -tol::psd_verdict, min_eigenvalue, matrix_dim,
                    tol::psd_verdict};
}

double hermitian_psd_min_eig(const Matrix& A, const Matrix& B) {
  if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows()) {
    throw Error(ErrorCode::ShapeMismatch, "A and B must be square and of equal size");
  }
  if (symmetry_defect(A) > tol::construction) {
    throw Error(ErrorCode::SymmetryViolation, "A is not symmetric");
  }
  if (skew_defect(B) > tol::construction) {
    throw Error(ErrorCode::SymmetryViolation, "B is not skew-symmetric");
  }
  const Index n = A.rows();
  Matrix embedding(2 * n, 2 * n);
  embedding << A, -B, B, A;
  // Exact symmetrization keeps the solver input bitwise symmetric.
  embedding = 0.5 * (embedding + embedding.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(embedding, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

namespace {

bool picture_matches(Picture picture, FormRole role) {
  if (picture == Picture::commutative) return role == FormRole::standard_J;
  return role != FormRole::standard_J;
}

void check_pairing(const GaussianState& state, const PhaseSpaceForm& form) {
  if (state.dim() != form.dim()) {
    throw Error(ErrorCode::ShapeMismatch, "state and form dimensions differ");
  }
  if (!(state.ordering() == form.ordering())) {
    throw Error(ErrorCode::OrderingMismatch, "state in " + state.ordering().describe() +
                                                 ", form in " + form.ordering().describe());
  }
  if (!picture_matches(state.picture(), form.role())) {
    throw Error(ErrorCode::PictureFormMismatch,
                std::string(to_string(state.picture())) + " state paired with form role " +
                    std::string(to_string(form.role())));
  }
  if (state.hbar() != form.hbar()) {
    throw Error(ErrorCode::PictureFormMismatch, "state and form use different hbar");
  }
}

}  // namespace

PSDVerdict rsup_check(const GaussianState& state, const PhaseSpaceForm& form) {
  check_pairing(state, form);
  return make_verdict(hermitian_psd_min_eig(state.cov(), 0.5 * form.matrix()), state.dim());
}

std::string_view to_string(SeparabilityLabel label) {
  switch (label) {
    case SeparabilityLabel::entangled: return "entangled";
    case SeparabilityLabel::separable: return "separable";
    case SeparabilityLabel::ppt_pass_undetermined: return "ppt_pass";
  }
  return "unknown";
}

PPTVerdict ppt_separability_check(const GaussianState& state, const PhaseSpaceForm& omega,
                                  ModePartition partition) {
  if (!partition.bipartite() || partition.n_modes() != state.n_modes()) {
    throw Error(ErrorCode::PartitionMismatch, "partition must split the state's modes in two");
  }
  if (omega.role() == FormRole::custom ||
      !is_block_diagonal(omega.matrix(), omega.ordering(), partition)) {
    throw Error(ErrorCode::PartitionMismatch,
                "PPT needs a block-diagonal form Diag[Omega^A, Omega^B]");
  }
  check_pairing(state, omega);
  const PhaseSpaceForm omega_prime = build_omega_prime(omega, partition);
  PPTVerdict verdict;
  verdict.psd =
      make_verdict(hermitian_psd_min_eig(state.cov(), 0.5 * omega_prime.matrix()), state.dim());
  if (!verdict.psd.passes) {
    verdict.label = SeparabilityLabel::entangled;
  } else if (state.picture() == Picture::commutative && partition.n_A == 1 && partition.n_B == 1) {
    verdict.label = SeparabilityLabel::separable;
  } else {
    verdict.label = SeparabilityLabel::ppt_pass_undetermined;
  }
  return verdict;
}

GaussianState mirror_covariance(const GaussianState& state, const Matrix& involution) {
  if (involution.rows() != state.dim() || involution.cols() != state.dim()) {
    throw Error(ErrorCode::ShapeMismatch, "involution does not match the state dimension");
  }
  const Index dim = state.dim();
  if (max_abs(involution * involution - Matrix::Identity(dim, dim)) > tol::derived) {
    throw Error(ErrorCode::NotInvolutive, "M*M differs from the identity");
  }
  Matrix cov = involution * state.cov() * involution.transpose();
  cov = 0.5 * (cov + cov.transpose()).eval();
  return GaussianState(involution * state.mean(), std::move(cov), state.picture(),
                       state.ordering(), state.hbar());
}

PhaseSpaceForm scan_form(double theta, double eta, const Ordering& ordering, ModePartition partition,
                         double hbar) {
  const NCParameters params = NCParameters::planar_pairs(partition.n_modes(), theta, eta, hbar);
  const PhaseSpaceForm global = build_omega(params, partition, Layout::global_blocked);
  return global.reordered(ordering);
}

std::vector<WitnessRecord> kinematic_entanglement_scan(const GaussianState& state,
                                                       std::span<const double> theta_grid,
                                                       std::span<const double> eta_grid,
                                                       ModePartition partition,
                                                       unsigned max_threads) {
  if (state.picture() != Picture::commutative) {
    throw Error(ErrorCode::PictureFormMismatch, "scan starts from a commutative state");
  }
  const PhaseSpaceForm j = build_J(state.ordering(), state.hbar());
  const PPTVerdict baseline = ppt_separability_check(state, j, partition);
  if (baseline.entangled()) {
    throw Error(ErrorCode::InvalidArgument, "state already fails the commutative PPT test");
  }

  const GaussianState reread = state.with_picture(Picture::noncommutative);
  const std::size_t n_eta = eta_grid.size();
  const std::size_t total = theta_grid.size() * n_eta;
  std::vector<WitnessRecord> records(total);

  auto evaluate = [&](std::size_t index) {
    const double theta = theta_grid[index / n_eta];
    const double eta = eta_grid[index % n_eta];
    const PhaseSpaceForm omega = scan_form(theta, eta, state.ordering(), partition, state.hbar());
    const PPTVerdict v = ppt_separability_check(reread, omega, partition);
    records[index] = WitnessRecord{theta, eta, v.psd.min_eigenvalue, v.entangled()};
  };

  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(std::max(1u, max_threads), std::max<std::size_t>(total, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < total; ++i) evaluate(i);
    return records;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < total; i = next++) {
        try {
          evaluate(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return records;
}

}  // namespace ncphase
