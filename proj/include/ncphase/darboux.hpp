#pragma once

// Darboux (Seiberg-Witten) maps S with Omega = S (hbar J) S^T. At hbar = 1
// this is the usual Omega = S J S^T; J carries hbar so that commutative and
// deformed forms are compared on the same footing.

#include "ncphase/algebra.hpp"

namespace ncphase {

enum class DarbouxMethod {
  planar_closed_form,
  symplectic_gram_schmidt,
  /// S = U * diag(sqrt(sigma_k / hbar)) from the real Schur form of Omega.
  /// U is orthogonal, so S Lambda S^{-1} is an orthogonal reflection.
  orthogonal_normal_form,
};

std::string_view to_string(DarbouxMethod method);

class DarbouxMap {
 public:
  /// Certifies ||S S_inv - I|| and ||S (hbar J) S^T - Omega|| against tol::derived.
  DarbouxMap(Matrix S, Matrix S_inv, PhaseSpaceForm source_form, DarbouxMethod method);

  const Matrix& S() const { return S_; }
  const Matrix& S_inv() const { return S_inv_; }
  const PhaseSpaceForm& source_form() const { return source_form_; }
  DarbouxMethod method() const { return method_; }
  const Ordering& ordering() const { return source_form_.ordering(); }
  double hbar() const { return source_form_.hbar(); }

  /// max-norm of S (hbar J) S^T - Omega.
  double residual() const;

 private:
  Matrix S_;
  Matrix S_inv_;
  PhaseSpaceForm source_form_;
  DarbouxMethod method_;
};

/// nu, mu, theta, eta for x_i = nu q_i - (theta / 2 nu hbar) eps_ij k_j,
/// p_i = mu k_i + (eta / 2 mu hbar) eps_ij q_j.
struct PlanarSWConstants {
  double nu = 1.0;
  double mu = 1.0;
  double theta = 0.0;
  double eta = 0.0;
  double hbar = 1.0;

  /// nu mu + theta eta / (4 nu mu hbar^2); equals 1 for a consistent map.
  double consistency() const { return nu * mu + theta * eta / (4.0 * nu * mu * hbar * hbar); }
};

/// nu = mu = sqrt(lambda), lambda = (1 + sqrt(1 - theta eta / hbar^2)) / 2.
/// Throws DeformationTooLarge when theta eta >= hbar^2.
PlanarSWConstants planar_sw_constants(double theta, double eta, double hbar = 1.0);

/// 4x4 map (q1, q2, k1, k2) -> (x1, x2, p1, p2), global-blocked ordering.
DarbouxMap build_planar_S(const PlanarSWConstants& constants);

/// Symplectic Gram-Schmidt over the standard basis in index order.
DarbouxMap build_general_S(const PhaseSpaceForm& omega);

DarbouxMap build_normal_form_S(const PhaseSpaceForm& omega);

/// Diag[S^A, S^B], each party solved independently.
/// planar_closed_form requires every party to be a planar two-mode block.
DarbouxMap build_bipartite_S(const PhaseSpaceForm& omega, ModePartition partition,
                             DarbouxMethod method = DarbouxMethod::symplectic_gram_schmidt);

Matrix build_D(const DarbouxMap& map, const Matrix& lambda, ModePartition partition);

}  // namespace ncphase
