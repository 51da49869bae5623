#pragma once

// Algebraic skeleton of the deformed phase space: coordinate orderings,
// bipartitions, the canonical form J, the deformed form Omega, the mirror
// reflection Lambda and the partially reflected form Omega'.

#include "ncphase/common.hpp"

#include <string>
#include <vector>

namespace ncphase {

struct ModePartition {
  int n_A = 1;
  int n_B = 0;

  int n_modes() const { return n_A + n_B; }
  bool bipartite() const { return n_A >= 1 && n_B >= 1; }
  bool operator==(const ModePartition&) const = default;
};

/// global_blocked: (x_1..x_n, p_1..p_n).
/// party_blocked:  (x^A.., p^A.., x^B.., p^B..), one canonical block per party.
enum class Layout { global_blocked, party_blocked };

class Ordering {
 public:
  static Ordering global(int n_modes);
  static Ordering party(ModePartition partition);
  static Ordering of(Layout layout, ModePartition partition);

  Layout layout() const { return layout_; }
  ModePartition partition() const { return partition_; }
  int n_modes() const { return partition_.n_modes(); }
  Index dim() const { return 2 * n_modes(); }

  Index x_index(int mode) const;
  Index p_index(int mode) const;

  /// Global layouts compare by mode count only; party layouts also by partition.
  bool operator==(const Ordering& other) const;
  std::string describe() const;

 private:
  Ordering(Layout layout, ModePartition partition) : layout_(layout), partition_(partition) {}

  Layout layout_;
  ModePartition partition_;
};

/// perm[i] is the index in `to` of coordinate i of `from`.
std::vector<Index> permutation(const Ordering& from, const Ordering& to);
Matrix reorder(const Matrix& m, const Ordering& from, const Ordering& to);
Vector reorder(const Vector& v, const Ordering& from, const Ordering& to);

/// 0 for party A, 1 for party B, per phase-space index.
std::vector<int> party_of_index(const Ordering& ordering, ModePartition partition);
bool is_block_diagonal(const Matrix& m, const Ordering& ordering, ModePartition partition,
                       double tolerance = tol::cross_party);

struct NCParameters {
  int n_modes = 1;
  double hbar = 1.0;
  Matrix theta;  // [x_i, x_j] = i theta_ij
  Matrix eta;    // [p_i, p_j] = i eta_ij

  static NCParameters commutative(int n_modes, double hbar = 1.0);
  /// Two modes, theta_12 = theta, eta_12 = eta.
  static NCParameters planar(double theta, double eta, double hbar = 1.0);
  /// Planar blocks on consecutive mode pairs (0,1), (2,3), ...
  static NCParameters planar_pairs(int n_modes, double theta, double eta, double hbar = 1.0);

  void validate() const;
};

enum class FormRole { omega, standard_J, omega_prime, custom };

std::string_view to_string(FormRole role);

/// Real skew nonsingular 2n x 2n matrix: [z_i, z_j] = i F_ij.
class PhaseSpaceForm {
 public:
  PhaseSpaceForm(Matrix matrix, Ordering ordering, FormRole role, double hbar = 1.0);

  const Matrix& matrix() const { return matrix_; }
  const Ordering& ordering() const { return ordering_; }
  FormRole role() const { return role_; }
  double hbar() const { return hbar_; }
  Index dim() const { return matrix_.rows(); }
  int n_modes() const { return ordering_.n_modes(); }

  PhaseSpaceForm reordered(const Ordering& to) const;

 private:
  Matrix matrix_;
  Ordering ordering_;
  FormRole role_;
  double hbar_;
};

bool is_nonsingular(const Matrix& m);

Matrix standard_J_matrix(const Ordering& ordering, double hbar = 1.0);

PhaseSpaceForm build_J(int n_modes, double hbar = 1.0);
PhaseSpaceForm build_J(const Ordering& ordering, double hbar = 1.0);

/// Omega = [[Theta, hbar I], [-hbar I, Pi]]. In party_blocked layout the
/// bipartite form Diag[Omega^A, Omega^B] is returned and cross-party
/// noncommutativity is rejected; in global_blocked layout it is accepted and
/// tagged FormRole::custom.
PhaseSpaceForm build_omega(const NCParameters& params, ModePartition partition,
                           Layout layout = Layout::global_blocked);

/// Diag[I^A, Lambda^B], Lambda^B = Diag[I, -I]: B momenta reflected.
Matrix build_lambda(ModePartition partition, Layout layout = Layout::party_blocked);

/// Diag[Omega^A, -Omega^B].
PhaseSpaceForm build_omega_prime(const PhaseSpaceForm& omega, ModePartition partition);

/// D = S Lambda S^{-1} for block-diagonal S; D = D^{-1}.
Matrix build_D(const Matrix& S, const Matrix& lambda, const Ordering& ordering,
               ModePartition partition);

}  // namespace ncphase
