#include "ncphase/darboux.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>
#include <utility>

namespace ncphase {

std::string_view to_string(DarbouxMethod method) {
  switch (method) {
    case DarbouxMethod::planar_closed_form: return "planar_closed_form";
    case DarbouxMethod::symplectic_gram_schmidt: return "symplectic_gram_schmidt";
    case DarbouxMethod::orthogonal_normal_form: return "orthogonal_normal_form";
  }
  return "unknown";
}

DarbouxMap::DarbouxMap(Matrix S, Matrix S_inv, PhaseSpaceForm source_form, DarbouxMethod method)
    : S_(std::move(S)), S_inv_(std::move(S_inv)), source_form_(std::move(source_form)),
      method_(method) {
  const Index dim = source_form_.dim();
  if (S_.rows() != dim || S_.cols() != dim || S_inv_.rows() != dim || S_inv_.cols() != dim) {
    throw Error(ErrorCode::DimensionMismatch, "Darboux map does not match the form dimension");
  }
  const double inverse_defect = max_abs(S_ * S_inv_ - Matrix::Identity(dim, dim));
  if (inverse_defect > tol::derived) {
    throw Error(ErrorCode::NonInvertible, "S_inv is not the inverse of S");
  }
  const double r = residual();
  if (r > tol::derived) {
    std::ostringstream os;
    os << "S J S^T misses Omega by " << r;
    throw Error(ErrorCode::SingularForm, os.str());
  }
}

double DarbouxMap::residual() const {
  const Matrix j = standard_J_matrix(source_form_.ordering(), source_form_.hbar());
  return max_abs(S_ * j * S_.transpose() - source_form_.matrix());
}

PlanarSWConstants planar_sw_constants(double theta, double eta, double hbar) {
  if (!(hbar > 0.0)) throw Error(ErrorCode::InvalidArgument, "hbar must be positive");
  const double ratio = theta * eta / (hbar * hbar);
  if (!(ratio < 1.0)) {
    std::ostringstream os;
    os << "theta*eta = " << theta * eta << " >= hbar^2; no real planar map exists";
    throw Error(ErrorCode::DeformationTooLarge, os.str());
  }
  const double lambda = 0.5 * (1.0 + std::sqrt(1.0 - ratio));
  const double root = std::sqrt(lambda);
  return PlanarSWConstants{root, root, theta, eta, hbar};
}

DarbouxMap build_planar_S(const PlanarSWConstants& c) {
  if (!(c.nu > 0.0) || !(c.mu > 0.0)) throw Error(ErrorCode::InvalidArgument, "nu, mu must be positive");
  if (std::abs(c.consistency() - 1.0) > tol::construction) {
    throw Error(ErrorCode::InvalidArgument, "planar constants violate nu mu + theta eta/(4 nu mu hbar^2) = 1");
  }
  const double a = c.theta / (2.0 * c.nu * c.hbar);
  const double b = c.eta / (2.0 * c.mu * c.hbar);
  // eps_12 = 1 = -eps_21
  Matrix s(4, 4);
  s << c.nu, 0.0, 0.0, -a,
       0.0, c.nu, a, 0.0,
       0.0, b, c.mu, 0.0,
       -b, 0.0, 0.0, c.mu;
  const PhaseSpaceForm omega =
      build_omega(NCParameters::planar(c.theta, c.eta, c.hbar), ModePartition{2, 0});
  // The block structure decouples into (q1, k2) and (q2, k1) pairs.
  const double det2 = c.nu * c.mu - a * b;
  Matrix s_inv(4, 4);
  s_inv << c.mu / det2, 0.0, 0.0, a / det2,
           0.0, c.mu / det2, -a / det2, 0.0,
           0.0, -b / det2, c.nu / det2, 0.0,
           b / det2, 0.0, 0.0, c.nu / det2;
  return DarbouxMap(std::move(s), std::move(s_inv), omega, DarbouxMethod::planar_closed_form);
}

DarbouxMap build_general_S(const PhaseSpaceForm& omega) {
  const Matrix& w = omega.matrix();
  const Ordering& ordering = omega.ordering();
  const double hbar = omega.hbar();
  const Index dim = omega.dim();
  const int n = omega.n_modes();

  std::vector<Vector> candidates;
  candidates.reserve(static_cast<std::size_t>(dim));
  for (Index i = 0; i < dim; ++i) candidates.push_back(Vector::Unit(dim, i));
  std::vector<bool> alive(static_cast<std::size_t>(dim), true);

  auto form = [&w](const Vector& u, const Vector& v) { return u.dot(w * v); };

  Matrix t = Matrix::Zero(dim, dim);
  for (int k = 0; k < n; ++k) {
    std::size_t e_idx = candidates.size();
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (alive[i] && candidates[i].norm() > tol::pivot) {
        e_idx = i;
        break;
      }
    }
    if (e_idx == candidates.size()) throw Error(ErrorCode::SingularForm, "basis collapsed");
    const Vector e = candidates[e_idx].normalized();

    std::size_t f_idx = candidates.size();
    double best = 0.0;
    for (std::size_t j = 0; j < candidates.size(); ++j) {
      if (!alive[j] || j == e_idx) continue;
      const double norm = candidates[j].norm();
      if (norm <= tol::pivot) continue;
      const double pivot = std::abs(form(e, candidates[j] / norm));
      if (pivot > best) {
        best = pivot;
        f_idx = j;
      }
    }
    if (f_idx == candidates.size() || best <= tol::pivot) {
      throw Error(ErrorCode::SingularForm, "no symplectic partner above the pivot threshold");
    }
    Vector f = candidates[f_idx];
    f *= hbar / form(e, f);
    alive[e_idx] = false;
    alive[f_idx] = false;

    for (std::size_t j = 0; j < candidates.size(); ++j) {
      if (!alive[j]) continue;
      Vector& c = candidates[j];
      for (int pass = 0; pass < 2; ++pass) {
        const double a = form(f, c) / hbar;
        const double b = -form(e, c) / hbar;
        c += a * e + b * f;
      }
      const double norm = c.norm();
      if (norm > 0.0) c /= norm;
    }
    t.col(ordering.x_index(k)) = e;
    t.col(ordering.p_index(k)) = f;
  }

  // T^T Omega T = hbar J  =>  S = T^{-T} = Omega T (hbar J)^{-1} and S^{-1} = T^T.
  const Matrix j_unit = standard_J_matrix(ordering, 1.0);
  Matrix s = -(w * t * j_unit) / hbar;
  Matrix s_inv = t.transpose();
  return DarbouxMap(std::move(s), std::move(s_inv), omega, DarbouxMethod::symplectic_gram_schmidt);
}

DarbouxMap build_normal_form_S(const PhaseSpaceForm& omega) {
  const Matrix& w = omega.matrix();
  const Ordering& ordering = omega.ordering();
  const double hbar = omega.hbar();
  const Index dim = omega.dim();

  Eigen::RealSchur<Matrix> schur(w);
  if (schur.info() != Eigen::Success) throw Error(ErrorCode::SingularForm, "real Schur failed");
  Matrix u = schur.matrixU();
  const Matrix& block = schur.matrixT();

  Matrix s = Matrix::Zero(dim, dim);
  Matrix s_inv = Matrix::Zero(dim, dim);
  for (int k = 0; k < omega.n_modes(); ++k) {
    const Index i = 2 * k;
    if (std::abs(block(i + 1, i)) <= tol::pivot) {
      throw Error(ErrorCode::SingularForm, "real Schur form is not made of 2x2 rotation blocks");
    }
    double sigma = 0.5 * (block(i, i + 1) - block(i + 1, i));
    Vector first = u.col(i);
    Vector second = u.col(i + 1);
    if (sigma < 0.0) {
      std::swap(first, second);
      sigma = -sigma;
    }
    const double scale = std::sqrt(sigma / hbar);
    s.col(ordering.x_index(k)) = scale * first;
    s.col(ordering.p_index(k)) = scale * second;
    s_inv.row(ordering.x_index(k)) = first.transpose() / scale;
    s_inv.row(ordering.p_index(k)) = second.transpose() / scale;
  }
  return DarbouxMap(std::move(s), std::move(s_inv), omega, DarbouxMethod::orthogonal_normal_form);
}

namespace {

DarbouxMap solve_party(const PhaseSpaceForm& party_form, DarbouxMethod method) {
  switch (method) {
    case DarbouxMethod::planar_closed_form: {
      if (party_form.n_modes() != 2) {
        throw Error(ErrorCode::InvalidArgument, "planar closed form needs two modes per party");
      }
      const Matrix& m = party_form.matrix();
      const double theta = m(0, 1);
      const double eta = m(2, 3);
      const DarbouxMap planar = build_planar_S(planar_sw_constants(theta, eta, party_form.hbar()));
      if (max_abs(planar.source_form().matrix() - m) > tol::construction) {
        throw Error(ErrorCode::InvalidArgument, "party form is not of planar type");
      }
      return planar;
    }
    case DarbouxMethod::symplectic_gram_schmidt: return build_general_S(party_form);
    case DarbouxMethod::orthogonal_normal_form: return build_normal_form_S(party_form);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown Darboux method");
}

}  // namespace

DarbouxMap build_bipartite_S(const PhaseSpaceForm& omega, ModePartition partition,
                             DarbouxMethod method) {
  if (!partition.bipartite()) throw Error(ErrorCode::PartitionMismatch, "needs a bipartition");
  if (!is_block_diagonal(omega.matrix(), omega.ordering(), partition)) {
    throw Error(ErrorCode::PartitionMismatch, "form is not block-diagonal over the partition");
  }
  const Ordering party = Ordering::party(partition);
  const Matrix blocked = reorder(omega.matrix(), omega.ordering(), party);
  const Index dim_a = 2 * partition.n_A;
  const Index dim_b = 2 * partition.n_B;

  const PhaseSpaceForm form_a(blocked.topLeftCorner(dim_a, dim_a), Ordering::global(partition.n_A),
                              FormRole::custom, omega.hbar());
  const PhaseSpaceForm form_b(blocked.bottomRightCorner(dim_b, dim_b),
                              Ordering::global(partition.n_B), FormRole::custom, omega.hbar());
  const DarbouxMap map_a = solve_party(form_a, method);
  const DarbouxMap map_b = solve_party(form_b, method);

  Matrix s = Matrix::Zero(dim_a + dim_b, dim_a + dim_b);
  Matrix s_inv = Matrix::Zero(dim_a + dim_b, dim_a + dim_b);
  s.topLeftCorner(dim_a, dim_a) = map_a.S();
  s.bottomRightCorner(dim_b, dim_b) = map_b.S();
  s_inv.topLeftCorner(dim_a, dim_a) = map_a.S_inv();
  s_inv.bottomRightCorner(dim_b, dim_b) = map_b.S_inv();
  return DarbouxMap(reorder(s, party, omega.ordering()), reorder(s_inv, party, omega.ordering()),
                    omega, method);
}

Matrix build_D(const DarbouxMap& map, const Matrix& lambda, ModePartition partition) {
  return build_D(map.S(), lambda, map.ordering(), partition);
}

}  // namespace ncphase
