#include "ncphase/dynamics.hpp"

#include <unsupported/Eigen/MatrixFunctions>

namespace ncphase {

void QuadraticHamiltonian::validate() const {
  const Index dim = ordering.dim();
  if (G.rows() != dim || G.cols() != dim) {
    throw Error(ErrorCode::DimensionMismatch, "G does not match the phase-space dimension");
  }
  if (symmetry_defect(G) > tol::construction) {
    throw Error(ErrorCode::SymmetryViolation, "G is not symmetric");
  }
  if (linear.size() != 0 && linear.size() != dim) {
    throw Error(ErrorCode::DimensionMismatch, "linear term has the wrong length");
  }
}

Matrix expm(const Matrix& m) { return m.exp(); }

LinearFlow::LinearFlow(const QuadraticHamiltonian& hamiltonian, const PhaseSpaceForm& form) {
  hamiltonian.validate();
  if (!(hamiltonian.ordering == form.ordering())) {
    throw Error(ErrorCode::OrderingMismatch, "Hamiltonian in " + hamiltonian.ordering.describe() +
                                                 ", form in " + form.ordering().describe());
  }
  const Index dim = form.dim();
  generator_ = form.matrix() * hamiltonian.G / form.hbar();
  augmented_ = Matrix::Zero(dim + 1, dim + 1);
  augmented_.topLeftCorner(dim, dim) = generator_;
  if (hamiltonian.linear.size() == dim) {
    augmented_.topRightCorner(dim, 1) = form.matrix() * hamiltonian.linear / form.hbar();
  }
}

LinearFlow::Step LinearFlow::at(double t) const {
  const Index dim = generator_.rows();
  if (t == 0.0) return Step{Matrix::Identity(dim, dim), Vector::Zero(dim)};
  const Matrix full = expm(t * augmented_);
  return Step{full.topLeftCorner(dim, dim), full.topRightCorner(dim, 1)};
}

GaussianState apply_step(const GaussianState& state, const LinearFlow::Step& step) {
  if (step.transfer.rows() != state.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "flow and state dimensions differ");
  }
  Matrix cov = step.transfer * state.cov() * step.transfer.transpose();
  cov = 0.5 * (cov + cov.transpose()).eval();
  return GaussianState(step.transfer * state.mean() + step.shift, std::move(cov), state.picture(),
                       state.ordering(), state.hbar());
}

GaussianState evolve(const GaussianState& state, const QuadraticHamiltonian& hamiltonian,
                     const PhaseSpaceForm& form, double t) {
  if (!(state.ordering() == form.ordering())) {
    throw Error(ErrorCode::OrderingMismatch, "state in " + state.ordering().describe() +
                                                 ", form in " + form.ordering().describe());
  }
  const bool commutative_form = form.role() == FormRole::standard_J;
  if ((state.picture() == Picture::commutative) != commutative_form) {
    throw Error(ErrorCode::PictureFormMismatch,
                std::string(to_string(state.picture())) + " state paired with form role " +
                    std::string(to_string(form.role())));
  }
  return apply_step(state, LinearFlow(hamiltonian, form).at(t));
}

QuadraticHamiltonian nc_hamiltonian(const QuadraticHamiltonian& hamiltonian, const DarbouxMap& map) {
  hamiltonian.validate();
  if (!(hamiltonian.ordering == map.ordering())) {
    throw Error(ErrorCode::OrderingMismatch, "Hamiltonian and Darboux map orderings differ");
  }
  const Matrix& s = map.S();
  const Matrix& s_inv = map.S_inv();
  // Weyl symbol of H(S xi): quadratic form S^T G S, linear S^T l.
  const Matrix g_tilde = s.transpose() * hamiltonian.G * s;
  Matrix g = s_inv.transpose() * g_tilde * s_inv;
  g = 0.5 * (g + g.transpose()).eval();
  Vector linear;
  if (hamiltonian.linear.size() != 0) {
    const Vector l_tilde = s.transpose() * hamiltonian.linear;
    linear = s_inv.transpose() * l_tilde;
  }
  return QuadraticHamiltonian{std::move(g), std::move(linear), hamiltonian.ordering};
}

}  // namespace ncphase
