#include "doctest.h"
#include "ncphase/darboux.hpp"
#include "support/oracles.hpp"

#include <cmath>

using namespace ncphase;

namespace {

bool is_signed_permutation(const Matrix& m) {
  for (Index i = 0; i < m.rows(); ++i) {
    int nonzero = 0;
    for (Index j = 0; j < m.cols(); ++j) {
      if (std::abs(m(i, j)) > 1e-12) {
        ++nonzero;
        if (std::abs(std::abs(m(i, j)) - 1.0) > 1e-12) return false;
      }
    }
    if (nonzero != 1) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("planar_sw_constants") {
  const PlanarSWConstants zero = planar_sw_constants(0.0, 0.0);
  CHECK(zero.nu == 1.0);
  CHECK(zero.mu == 1.0);

  const PlanarSWConstants c = planar_sw_constants(0.2, 0.2);
  const double lambda = (1.0 + std::sqrt(0.96)) / 2.0;
  CHECK(std::abs(c.nu * c.mu - lambda) < 1e-15);
  CHECK(std::abs(c.consistency() - 1.0) < 1e-12);
  // Frozen from an independent evaluation: sqrt((1 + sqrt(0.96)) / 2).
  CHECK(c.nu == doctest::Approx(0.9949361530051241).epsilon(1e-14));

  try {
    planar_sw_constants(2.0, 1.0);
    FAIL("expected DeformationTooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DeformationTooLarge);
  }
  CHECK_THROWS_AS(planar_sw_constants(1.0, 1.0), Error);
  // Negative products are always admissible.
  CHECK(std::abs(planar_sw_constants(3.0, -2.0).consistency() - 1.0) < 1e-12);
}

TEST_CASE("build_planar_S") {
  CHECK(build_planar_S(planar_sw_constants(0.0, 0.0)).S() == Matrix::Identity(4, 4));

  const DarbouxMap map = build_planar_S(planar_sw_constants(0.2, 0.2));
  const Matrix omega = build_omega(NCParameters::planar(0.2, 0.2), ModePartition{2, 0}).matrix();
  CHECK(max_abs(map.S() * build_J(2).matrix() * map.S().transpose() - omega) <= 1e-12);
  CHECK(max_abs(oracle::commutator_table(map.S(), 1.0) - omega) <= 1e-12);
  // det Omega = (det S)^2 with det S > 0.
  CHECK(std::abs(map.S().determinant() - std::sqrt(oracle::laplace_det(omega))) <= 1e-12);
  CHECK(std::abs(map.S().determinant() - 0.96) <= 1e-12);
  CHECK(max_abs(map.S() * map.S_inv() - Matrix::Identity(4, 4)) <= 1e-14);
}

TEST_CASE("build_planar_S keeps hbar") {
  const double hbar = 0.5;
  const DarbouxMap map = build_planar_S(planar_sw_constants(0.1, 0.12, hbar));
  const Matrix omega = build_omega(NCParameters::planar(0.1, 0.12, hbar), ModePartition{2, 0}).matrix();
  CHECK(max_abs(oracle::commutator_table(map.S(), hbar) - omega) <= 1e-12);
}

TEST_CASE("commutative limit of the planar map") {
  const double theta = 1e-6;
  const double eta = 1e-6;
  const DarbouxMap map = build_planar_S(planar_sw_constants(theta, eta));
  CHECK(max_abs(map.S() - Matrix::Identity(4, 4)) <= 1.0 * (theta + eta));
}

TEST_CASE("build_general_S") {
  const DarbouxMap identity = build_general_S(build_J(3));
  CHECK(is_signed_permutation(identity.S()));
  CHECK(identity.residual() <= 1e-12);

  const PhaseSpaceForm planar = build_omega(NCParameters::planar(0.3, 0.1), ModePartition{2, 0});
  const DarbouxMap general = build_general_S(planar);
  const DarbouxMap closed = build_planar_S(planar_sw_constants(0.3, 0.1));
  CHECK(general.residual() <= 1e-10);
  CHECK(closed.residual() <= 1e-10);
  CHECK(max_abs(general.S() - closed.S()) > 1e-3);  // a different, equally valid map

  oracle::Generator gen(42);
  const PhaseSpaceForm random(gen.skew_nonsingular(6), Ordering::global(3), FormRole::custom);
  const DarbouxMap map = build_general_S(random);
  CHECK(map.residual() <= 1e-10);
  const double det_s = map.S().determinant();
  CHECK(std::abs(det_s * det_s / random.matrix().determinant() - 1.0) <= 1e-8);
}

TEST_CASE("build_general_S is deterministic and honours orderings") {
  oracle::Generator gen(5);
  const Matrix m = gen.skew_nonsingular(6);
  const PhaseSpaceForm a(m, Ordering::global(3), FormRole::custom);
  CHECK(build_general_S(a).S() == build_general_S(a).S());

  const Ordering party = Ordering::party(ModePartition{1, 2});
  const DarbouxMap reordered = build_general_S(a.reordered(party));
  CHECK(reordered.residual() <= 1e-10);
}

TEST_CASE("build_general_S rejects degenerate forms") {
  Matrix nearly(4, 4);
  nearly << 0, 1, 0, 0,
            -1, 0, 0, 0,
            0, 0, 0, 1e-13,
            0, 0, -1e-13, 0;
  // The constructor's determinant test rejects this before the solver sees it.
  CHECK_THROWS_AS(PhaseSpaceForm(nearly, Ordering::global(2), FormRole::custom), Error);
}

TEST_CASE("normal form map gives an orthogonal mirror") {
  const ModePartition p{2, 2};
  const PhaseSpaceForm omega =
      build_omega(NCParameters::planar_pairs(4, 0.3, 0.2), p, Layout::party_blocked);
  const DarbouxMap normal = build_bipartite_S(omega, p, DarbouxMethod::orthogonal_normal_form);
  CHECK(normal.residual() <= 1e-10);
  const Matrix d = build_D(normal, build_lambda(p), p);
  CHECK(max_abs(d * d.transpose() - Matrix::Identity(8, 8)) <= 1e-12);

  const DarbouxMap planar = build_bipartite_S(omega, p, DarbouxMethod::planar_closed_form);
  const Matrix d_planar = build_D(planar, build_lambda(p), p);
  CHECK(max_abs(d_planar * d_planar - Matrix::Identity(8, 8)) <= 1e-10);
  CHECK(max_abs(d_planar * d_planar.transpose() - Matrix::Identity(8, 8)) > 1e-3);
}

TEST_CASE("bipartite assembly") {
  const ModePartition p{2, 2};
  const PhaseSpaceForm omega =
      build_omega(NCParameters::planar_pairs(4, 0.1, 0.1), p, Layout::party_blocked);
  for (DarbouxMethod method : {DarbouxMethod::planar_closed_form,
                               DarbouxMethod::symplectic_gram_schmidt,
                               DarbouxMethod::orthogonal_normal_form}) {
    const DarbouxMap map = build_bipartite_S(omega, p, method);
    CHECK(map.residual() <= 1e-10);
    CHECK(is_block_diagonal(map.S(), map.ordering(), p, 1e-15));
  }

  // D^2 = I for the closed-form blocks at theta = eta = 0.1.
  const DarbouxMap planar = build_bipartite_S(omega, p, DarbouxMethod::planar_closed_form);
  const Matrix d = build_D(planar, build_lambda(p), p);
  CHECK(max_abs(d * d - Matrix::Identity(8, 8)) <= 1e-10);
  CHECK(max_abs(d.topLeftCorner(4, 4) - Matrix::Identity(4, 4)) <= 1e-15);

  // D^{-1} Omega D^{-T} = Omega'.
  const Matrix prime = d * omega.matrix() * d.transpose();
  CHECK(max_abs(prime - build_omega_prime(omega, p).matrix()) <= 1e-10);
}

TEST_CASE("closed-form D blocks") {
  // S^B = [[nu I, -a eps], [b eps, mu I]] with eps = [[0,1],[-1,0]] and Lambda^B = Diag[I, -I]:
  // S^B Lambda^B (S^B)^{-1} multiplied out by hand.
  const PlanarSWConstants c = planar_sw_constants(0.1, 0.1);
  const double a = c.theta / (2 * c.nu);
  const double b = c.eta / (2 * c.mu);
  const double det2 = c.nu * c.mu - a * b;
  Matrix eps(2, 2);
  eps << 0, 1, -1, 0;
  const Matrix I2 = Matrix::Identity(2, 2);
  Matrix expected(4, 4);
  // (S Lambda)(S^{-1}) with S^{-1} = [[mu I, a eps], [-b eps, nu I]] / det2.
  expected << (c.nu * c.mu * I2 + a * b * I2) / det2, (c.nu * a * eps + a * c.nu * eps) / det2,
      (b * c.mu * eps + c.mu * b * eps) / det2, (-b * a * I2 - c.mu * c.nu * I2) / det2;
  // eps * eps = -I turns the -a b eps^2 terms into +a b I.
  const Matrix sb = build_planar_S(c).S();
  Matrix lb = Matrix::Identity(4, 4);
  lb(2, 2) = lb(3, 3) = -1;
  CHECK(max_abs(sb * lb * build_planar_S(c).S_inv() - expected) <= 1e-14);
}
