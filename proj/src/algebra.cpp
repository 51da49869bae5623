#include "ncphase/algebra.hpp"

#include <cmath>
#include <sstream>

namespace ncphase {

namespace {

void require_square(const Matrix& m, Index dim, const char* what) {
  if (m.rows() != dim || m.cols() != dim) {
    std::ostringstream os;
    os << what << " must be " << dim << "x" << dim << ", got " << m.rows() << "x" << m.cols();
    throw Error(ErrorCode::ShapeMismatch, os.str());
  }
}

}  // namespace

Ordering Ordering::global(int n_modes) {
  if (n_modes < 1) throw Error(ErrorCode::InvalidArgument, "n_modes must be >= 1");
  return Ordering(Layout::global_blocked, ModePartition{n_modes, 0});
}

Ordering Ordering::party(ModePartition partition) {
  if (partition.n_A < 1 || partition.n_B < 0) {
    throw Error(ErrorCode::PartitionMismatch, "party A needs at least one mode");
  }
  return Ordering(Layout::party_blocked, partition);
}

Ordering Ordering::of(Layout layout, ModePartition partition) {
  return layout == Layout::global_blocked ? global(partition.n_modes()) : party(partition);
}

Index Ordering::x_index(int mode) const {
  if (layout_ == Layout::global_blocked || mode < partition_.n_A) return mode;
  return 2 * partition_.n_A + (mode - partition_.n_A);
}

Index Ordering::p_index(int mode) const {
  if (layout_ == Layout::global_blocked) return n_modes() + mode;
  if (mode < partition_.n_A) return partition_.n_A + mode;
  return 2 * partition_.n_A + partition_.n_B + (mode - partition_.n_A);
}

bool Ordering::operator==(const Ordering& other) const {
  if (layout_ != other.layout_ || n_modes() != other.n_modes()) return false;
  if (layout_ == Layout::party_blocked) return partition_ == other.partition_;
  return true;
}

std::string Ordering::describe() const {
  std::ostringstream os;
  if (layout_ == Layout::global_blocked) {
    os << "global(" << n_modes() << ")";
  } else {
    os << "party(" << partition_.n_A << "," << partition_.n_B << ")";
  }
  return os.str();
}

std::vector<Index> permutation(const Ordering& from, const Ordering& to) {
  if (from.n_modes() != to.n_modes()) {
    throw Error(ErrorCode::DimensionMismatch,
                "cannot reorder " + from.describe() + " into " + to.describe());
  }
  std::vector<Index> perm(static_cast<std::size_t>(from.dim()));
  for (int k = 0; k < from.n_modes(); ++k) {
    perm[static_cast<std::size_t>(from.x_index(k))] = to.x_index(k);
    perm[static_cast<std::size_t>(from.p_index(k))] = to.p_index(k);
  }
  return perm;
}

Matrix reorder(const Matrix& m, const Ordering& from, const Ordering& to) {
  require_square(m, from.dim(), "matrix");
  const auto perm = permutation(from, to);
  Matrix out(m.rows(), m.cols());
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      out(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]) = m(i, j);
    }
  }
  return out;
}

Vector reorder(const Vector& v, const Ordering& from, const Ordering& to) {
  if (v.size() != from.dim()) throw Error(ErrorCode::DimensionMismatch, "vector length");
  const auto perm = permutation(from, to);
  Vector out(v.size());
  for (Index i = 0; i < v.size(); ++i) out(perm[static_cast<std::size_t>(i)]) = v(i);
  return out;
}

std::vector<int> party_of_index(const Ordering& ordering, ModePartition partition) {
  if (partition.n_modes() != ordering.n_modes()) {
    throw Error(ErrorCode::PartitionMismatch, "partition does not cover the ordering's modes");
  }
  if (ordering.layout() == Layout::party_blocked && !(ordering.partition() == partition)) {
    throw Error(ErrorCode::PartitionMismatch,
                "ordering " + ordering.describe() + " is blocked for a different partition");
  }
  std::vector<int> party(static_cast<std::size_t>(ordering.dim()));
  for (int k = 0; k < ordering.n_modes(); ++k) {
    const int p = k < partition.n_A ? 0 : 1;
    party[static_cast<std::size_t>(ordering.x_index(k))] = p;
    party[static_cast<std::size_t>(ordering.p_index(k))] = p;
  }
  return party;
}

bool is_block_diagonal(const Matrix& m, const Ordering& ordering, ModePartition partition,
                       double tolerance) {
  const auto party = party_of_index(ordering, partition);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (party[static_cast<std::size_t>(i)] != party[static_cast<std::size_t>(j)] &&
          std::abs(m(i, j)) >= tolerance) {
        return false;
      }
    }
  }
  return true;
}

NCParameters NCParameters::commutative(int n_modes, double hbar) {
  return NCParameters{n_modes, hbar, Matrix::Zero(n_modes, n_modes), Matrix::Zero(n_modes, n_modes)};
}

NCParameters NCParameters::planar(double theta, double eta, double hbar) {
  return planar_pairs(2, theta, eta, hbar);
}

NCParameters NCParameters::planar_pairs(int n_modes, double theta, double eta, double hbar) {
  NCParameters params = commutative(n_modes, hbar);
  if ((theta != 0.0 || eta != 0.0) && n_modes % 2 != 0) {
    throw Error(ErrorCode::InvalidArgument, "planar deformation needs an even number of modes");
  }
  for (int k = 0; k + 1 < n_modes; k += 2) {
    params.theta(k, k + 1) = theta;
    params.theta(k + 1, k) = -theta;
    params.eta(k, k + 1) = eta;
    params.eta(k + 1, k) = -eta;
  }
  return params;
}

void NCParameters::validate() const {
  if (n_modes < 1) throw Error(ErrorCode::InvalidArgument, "n_modes must be >= 1");
  if (!(hbar > 0.0)) throw Error(ErrorCode::InvalidArgument, "hbar must be positive");
  require_square(theta, n_modes, "theta");
  require_square(eta, n_modes, "eta");
  if (skew_defect(theta) > tol::construction) {
    throw Error(ErrorCode::NotSkewSymmetric, "theta is not skew-symmetric");
  }
  if (skew_defect(eta) > tol::construction) {
    throw Error(ErrorCode::NotSkewSymmetric, "eta is not skew-symmetric");
  }
}

std::string_view to_string(FormRole role) {
  switch (role) {
    case FormRole::omega: return "omega";
    case FormRole::standard_J: return "J";
    case FormRole::omega_prime: return "omega_prime";
    case FormRole::custom: return "custom";
  }
  return "unknown";
}

bool is_nonsingular(const Matrix& m) {
  const double scale = max_abs(m);
  if (scale == 0.0) return false;
  const double det = (m / scale).determinant();
  return std::abs(det) > 1e-14;
}

Matrix standard_J_matrix(const Ordering& ordering, double hbar) {
  Matrix j = Matrix::Zero(ordering.dim(), ordering.dim());
  for (int k = 0; k < ordering.n_modes(); ++k) {
    j(ordering.x_index(k), ordering.p_index(k)) = hbar;
    j(ordering.p_index(k), ordering.x_index(k)) = -hbar;
  }
  return j;
}

PhaseSpaceForm::PhaseSpaceForm(Matrix matrix, Ordering ordering, FormRole role, double hbar)
    : matrix_(std::move(matrix)), ordering_(ordering), role_(role), hbar_(hbar) {
  require_square(matrix_, ordering_.dim(), "phase-space form");
  if (!(hbar_ > 0.0)) throw Error(ErrorCode::InvalidArgument, "hbar must be positive");
  if (skew_defect(matrix_) > tol::construction) {
    throw Error(ErrorCode::NotSkewSymmetric, "phase-space form is not skew-symmetric");
  }
  if (!is_nonsingular(matrix_)) {
    throw Error(ErrorCode::SingularForm, "phase-space form is singular");
  }
  if (role_ == FormRole::standard_J && matrix_ != standard_J_matrix(ordering_, hbar_)) {
    throw Error(ErrorCode::InvalidArgument, "role J requires the exact canonical block form");
  }
}

PhaseSpaceForm PhaseSpaceForm::reordered(const Ordering& to) const {
  return PhaseSpaceForm(reorder(matrix_, ordering_, to), to, role_, hbar_);
}

PhaseSpaceForm build_J(int n_modes, double hbar) { return build_J(Ordering::global(n_modes), hbar); }

PhaseSpaceForm build_J(const Ordering& ordering, double hbar) {
  return PhaseSpaceForm(standard_J_matrix(ordering, hbar), ordering, FormRole::standard_J, hbar);
}

PhaseSpaceForm build_omega(const NCParameters& params, ModePartition partition, Layout layout) {
  params.validate();
  if (partition.n_modes() != params.n_modes) {
    throw Error(ErrorCode::PartitionMismatch, "partition does not match n_modes");
  }
  const int n = params.n_modes;
  const Ordering global = Ordering::global(n);
  Matrix omega(2 * n, 2 * n);
  omega << params.theta, params.hbar * Matrix::Identity(n, n),
      -params.hbar * Matrix::Identity(n, n), params.eta;
  if (skew_defect(omega) > tol::construction) {
    throw Error(ErrorCode::NotSkewSymmetric, "assembled form is not skew-symmetric");
  }
  if (!is_nonsingular(omega)) throw Error(ErrorCode::SingularForm, "assembled form is singular");

  const bool bipartite_ok = is_block_diagonal(omega, global, partition);
  if (layout == Layout::party_blocked) {
    if (!bipartite_ok) {
      throw Error(ErrorCode::PartitionMismatch,
                  "cross-party noncommutativity prevents the form Diag[Omega^A, Omega^B]");
    }
    const Ordering party = Ordering::party(partition);
    return PhaseSpaceForm(reorder(omega, global, party), party, FormRole::omega, params.hbar);
  }
  return PhaseSpaceForm(std::move(omega), global, bipartite_ok ? FormRole::omega : FormRole::custom,
                        params.hbar);
}

Matrix build_lambda(ModePartition partition, Layout layout) {
  if (!partition.bipartite()) {
    throw Error(ErrorCode::PartitionMismatch, "mirror reflection needs n_A >= 1 and n_B >= 1");
  }
  const Ordering ordering = Ordering::of(layout, partition);
  Matrix lambda = Matrix::Identity(ordering.dim(), ordering.dim());
  for (int k = partition.n_A; k < partition.n_modes(); ++k) {
    lambda(ordering.p_index(k), ordering.p_index(k)) = -1.0;
  }
  return lambda;
}

PhaseSpaceForm build_omega_prime(const PhaseSpaceForm& omega, ModePartition partition) {
  if (!partition.bipartite()) {
    throw Error(ErrorCode::PartitionMismatch, "Omega' needs a bipartition");
  }
  if (!is_block_diagonal(omega.matrix(), omega.ordering(), partition)) {
    throw Error(ErrorCode::PartitionMismatch, "form is not block-diagonal over the partition");
  }
  const auto party = party_of_index(omega.ordering(), partition);
  Matrix flipped = omega.matrix();
  for (Index i = 0; i < flipped.rows(); ++i) {
    for (Index j = 0; j < flipped.cols(); ++j) {
      if (party[static_cast<std::size_t>(i)] == 1 && party[static_cast<std::size_t>(j)] == 1) {
        flipped(i, j) = -flipped(i, j);
      }
    }
  }
  FormRole role = FormRole::omega_prime;
  if (omega.role() == FormRole::omega_prime) {
    role = flipped == standard_J_matrix(omega.ordering(), omega.hbar()) ? FormRole::standard_J
                                                                         : FormRole::omega;
  }
  return PhaseSpaceForm(std::move(flipped), omega.ordering(), role, omega.hbar());
}

Matrix build_D(const Matrix& S, const Matrix& lambda, const Ordering& ordering,
               ModePartition partition) {
  require_square(S, ordering.dim(), "S");
  require_square(lambda, ordering.dim(), "Lambda");
  if (!partition.bipartite()) throw Error(ErrorCode::PartitionMismatch, "D needs a bipartition");
  if (!is_block_diagonal(S, ordering, partition)) {
    throw Error(ErrorCode::PartitionMismatch, "S is not block-diagonal over the partition");
  }
  Eigen::FullPivLU<Matrix> lu(S);
  if (!lu.isInvertible()) throw Error(ErrorCode::NonInvertible, "S is not invertible");
  Matrix d = S * lambda * lu.inverse();
  return d;
}

}  // namespace ncphase
