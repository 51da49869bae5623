#include "doctest.h"
#include "ncphase/criteria.hpp"
#include "ncphase/dynamics.hpp"
#include "support/oracles.hpp"

#include <cmath>
#include <numbers>

using namespace ncphase;

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

QuadraticHamiltonian oscillator(const Ordering& ordering) {
  return QuadraticHamiltonian{Matrix::Identity(ordering.dim(), ordering.dim()), Vector(), ordering};
}

GaussianState random_state(oracle::Generator& gen, int n_modes, Picture picture) {
  const Index dim = 2 * n_modes;
  Vector mean(dim);
  for (Index i = 0; i < dim; ++i) mean(i) = gen.normal();
  return GaussianState(mean, gen.spd(dim, 0.5, 2.0), picture, Ordering::global(n_modes));
}

}  // namespace

TEST_CASE("expm: rotation generator") {
  const Matrix j = build_J(1).matrix();
  const double t = 0.7;
  Matrix rotation(2, 2);
  rotation << std::cos(t), std::sin(t), -std::sin(t), std::cos(t);
  CHECK(max_abs(expm(t * j) - rotation) <= 1e-14);
  CHECK(max_abs(expm(Matrix::Zero(3, 3)) - Matrix::Identity(3, 3)) == 0.0);
}

TEST_CASE("evolve: identity at t = 0") {
  oracle::Generator gen(3);
  const GaussianState s = random_state(gen, 2, Picture::commutative);
  const GaussianState same = evolve(s, oscillator(s.ordering()), build_J(2), 0.0);
  CHECK(same.cov() == s.cov());
  CHECK(same.mean() == s.mean());
}

TEST_CASE("evolve: free oscillator recurrence") {
  Vector mean(2);
  mean << 1.0, -0.5;
  Matrix cov(2, 2);
  cov << 2.0, 0.3, 0.3, 0.4;
  const GaussianState s(mean, cov, Picture::commutative, Ordering::global(1));
  const GaussianState back = evolve(s, oscillator(s.ordering()), build_J(1), two_pi);
  CHECK(max_abs(back.cov() - cov) <= 1e-9);
  CHECK(max_abs(back.mean() - mean) <= 1e-9);

  // Quarter period maps (x, p) -> (p, -x).
  const GaussianState quarter = evolve(s, oscillator(s.ordering()), build_J(1), two_pi / 4);
  CHECK(std::abs(quarter.mean()(0) - mean(1)) <= 1e-12);
  CHECK(std::abs(quarter.mean()(1) + mean(0)) <= 1e-12);
}

TEST_CASE("evolve: Liouville invariance and composition") {
  oracle::Generator gen(12);
  for (int trial = 0; trial < 20; ++trial) {
    const PhaseSpaceForm omega(gen.skew_nonsingular(4), Ordering::global(2), FormRole::custom);
    QuadraticHamiltonian h{gen.symmetric(4), Vector(), Ordering::global(2)};
    if (trial % 2 == 0) h.linear = gen.gaussian(4, 1);
    const GaussianState s = random_state(gen, 2, Picture::noncommutative);
    const double t1 = gen.uniform(0.0, 1.0);
    const double t2 = gen.uniform(0.0, 1.0);
    const GaussianState direct = evolve(s, h, omega, t1 + t2);
    const GaussianState composed = evolve(evolve(s, h, omega, t1), h, omega, t2);
    CHECK(max_abs(direct.cov() - composed.cov()) <= 1e-9 * std::max(1.0, max_abs(direct.cov())));
    CHECK(max_abs(direct.mean() - composed.mean()) <= 1e-9 * std::max(1.0, direct.mean().cwiseAbs().maxCoeff()));
    const double d0 = s.cov().determinant();
    CHECK(std::abs(direct.cov().determinant() / d0 - 1.0) <= 1e-8);
  }
}

TEST_CASE("evolve: linear term matches the variation-of-constants integral") {
  // H = (x^2 + p^2)/2 + f x: dx/dt = p, dp/dt = -x - f; equilibrium at x = -f.
  const double f = 0.8;
  QuadraticHamiltonian h{Matrix::Identity(2, 2), Eigen::Vector2d(f, 0.0), Ordering::global(1)};
  const GaussianState s = make_vacuum(1);
  const double t = 1.3;
  const GaussianState out = evolve(s, h, build_J(1), t);
  // x(t) = -f + f cos t, p(t) = -f sin t, starting at rest at the origin.
  CHECK(std::abs(out.mean()(0) - (-f + f * std::cos(t))) <= 1e-13);
  CHECK(std::abs(out.mean()(1) - (-f * std::sin(t))) <= 1e-13);
}

TEST_CASE("evolve: pairing and ordering guards") {
  const GaussianState v = make_vacuum(2);
  const PhaseSpaceForm omega = build_omega(NCParameters::planar(0.2, 0.1), ModePartition{2, 0});
  try {
    evolve(v, oscillator(v.ordering()), omega, 1.0);
    FAIL("expected PictureFormMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PictureFormMismatch);
  }
  const Ordering party = Ordering::party(ModePartition{1, 1});
  try {
    evolve(v, oscillator(party), build_J(2), 1.0);
    FAIL("expected OrderingMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OrderingMismatch);
  }
  QuadraticHamiltonian asym = oscillator(v.ordering());
  asym.G(0, 1) = 1.0;
  CHECK_THROWS_AS(evolve(v, asym, build_J(2), 1.0), Error);
}

TEST_CASE("quantumness is preserved along both flows") {
  oracle::Generator gen(77);
  for (int trial = 0; trial < 10; ++trial) {
    const PhaseSpaceForm omega = build_omega(
        NCParameters::planar(gen.uniform(-0.5, 0.5), gen.uniform(-0.5, 0.5)), ModePartition{2, 0});
    const QuadraticHamiltonian h{gen.spd(4, 0.5, 2.0), Vector(), Ordering::global(2)};
    const GaussianState start = to_nc_picture(
        GaussianState(Vector::Zero(4), gen.spd(4, 0.3, 1.2), Picture::commutative, Ordering::global(2)),
        build_general_S(omega));
    const bool initial = rsup_check(start, omega).passes;
    for (int k = 1; k <= 10; ++k) {
      CHECK(rsup_check(evolve(start, h, omega, 0.4 * k), omega).passes == initial);
    }
  }
}

TEST_CASE("NC Hamiltonian composition reproduces G") {
  oracle::Generator gen(4);
  const PhaseSpaceForm omega(gen.skew_nonsingular(4), Ordering::global(2), FormRole::custom);
  const DarbouxMap map = build_general_S(omega);
  const QuadraticHamiltonian h{gen.symmetric(4), gen.gaussian(4, 1), Ordering::global(2)};
  const QuadraticHamiltonian composed = nc_hamiltonian(h, map);
  CHECK(max_abs(composed.G - h.G) <= 1e-12);
  CHECK(max_abs(composed.linear - h.linear) <= 1e-12);
}
