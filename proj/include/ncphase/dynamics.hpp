#pragma once

// Exact Gaussian dynamics under quadratic Hamiltonians. For symbols of degree
// <= 2 the Moyal bracket of the (J or Omega) structure reduces to its Poisson
// bracket, so the flow is linear: dz/dt = (F / hbar) (G z + l).

#include "ncphase/gaussian_state.hpp"

namespace ncphase {

/// H(z) = z^T G z / 2 + l^T z.
struct QuadraticHamiltonian {
  Matrix G;
  Vector linear;  // empty means no linear term
  Ordering ordering = Ordering::global(1);

  void validate() const;
};

/// Scaling and squaring with a Pade approximant.
Matrix expm(const Matrix& m);

/// Flow map of one (H, form) pair; the generator is built once and
/// exponentiated per time.
class LinearFlow {
 public:
  LinearFlow(const QuadraticHamiltonian& hamiltonian, const PhaseSpaceForm& form);

  /// z(t) = transfer(t) z(0) + shift(t)
  struct Step {
    Matrix transfer;
    Vector shift;
  };
  Step at(double t) const;

  const Matrix& generator() const { return generator_; }

 private:
  Matrix augmented_;
  Matrix generator_;
};

GaussianState apply_step(const GaussianState& state, const LinearFlow::Step& step);

/// mean(t) = e^{tA} m + int_0^t e^{sA} ds (F l / hbar), cov(t) = e^{tA} Sigma e^{tA}^T,
/// A = F G / hbar. Commutative states evolve with J, noncommutative ones with Omega.
GaussianState evolve(const GaussianState& state, const QuadraticHamiltonian& hamiltonian,
                     const PhaseSpaceForm& form, double t);

/// H^NC(z) = H~(S^{-1} z), H~(xi) = H(S xi). Returns the composed quadratic form.
QuadraticHamiltonian nc_hamiltonian(const QuadraticHamiltonian& hamiltonian, const DarbouxMap& map);

}  // namespace ncphase
