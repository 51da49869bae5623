#pragma once

// Test-only oracles, written independently of the library's numerical paths.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

namespace oracle {

using Matrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;

/// Cofactor expansion along the first row.
inline double laplace_det(const Matrix& m) {
  const Eigen::Index n = m.rows();
  if (n == 1) return m(0, 0);
  if (n == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  double det = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (m(0, j) == 0.0) continue;
    Matrix minor(n - 1, n - 1);
    for (Eigen::Index r = 1; r < n; ++r) {
      Eigen::Index c2 = 0;
      for (Eigen::Index c = 0; c < n; ++c) {
        if (c == j) continue;
        minor(r - 1, c2++) = m(r, c);
      }
    }
    det += ((j % 2 == 0) ? 1.0 : -1.0) * m(0, j) * laplace_det(minor);
  }
  return det;
}

/// Commutator table [z_i, z_j] / i for z = S zeta with [zeta_i, zeta_j] = i hbar J_ij,
/// expanded term by term.
inline Matrix commutator_table(const Matrix& s, double hbar) {
  const Eigen::Index dim = s.rows();
  const Eigen::Index n = dim / 2;
  Matrix table = Matrix::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      double sum = 0.0;
      for (Eigen::Index a = 0; a < n; ++a) {
        // [q_a, k_a] = i hbar, [k_a, q_a] = -i hbar
        sum += s(i, a) * s(j, n + a) * hbar;
        sum -= s(i, n + a) * s(j, a) * hbar;
      }
      table(i, j) = sum;
    }
  }
  return table;
}

/// Cyclic complex Jacobi on the Hermitian matrix A + iB. Returns sorted eigenvalues.
inline std::vector<double> hermitian_eigenvalues(const Matrix& A, const Matrix& B) {
  using C = std::complex<double>;
  const Eigen::Index n = A.rows();
  CMatrix h(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) h(i, j) = C(A(i, j), B(i, j));

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (i != j) off += std::norm(h(i, j));
    if (off < 1e-30) break;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const C hpq = h(p, q);
        const double mag = std::abs(hpq);
        if (mag < 1e-300) continue;
        const C phase = hpq / mag;
        const double app = h(p, p).real();
        const double aqq = h(q, q).real();
        const double angle = 0.5 * std::atan2(2.0 * mag, aqq - app);
        const double c = std::cos(angle);
        const double s = std::sin(angle);
        // Unitary rotation in the (p, q) plane zeroing h(p, q).
        CMatrix g = CMatrix::Identity(n, n);
        g(p, p) = c;
        g(q, q) = c;
        g(p, q) = s * phase;
        g(q, p) = -s * std::conj(phase);
        h = g.adjoint() * h * g;
        h(p, q) = 0.0;
        h(q, p) = 0.0;
      }
    }
  }
  std::vector<double> evals(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) evals[static_cast<std::size_t>(i)] = h(i, i).real();
  std::sort(evals.begin(), evals.end());
  return evals;
}

inline double hermitian_min_eigenvalue(const Matrix& A, const Matrix& B) {
  return hermitian_eigenvalues(A, B).front();
}

/// Random matrices for property tests.
class Generator {
 public:
  explicit Generator(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }

  Matrix gaussian(Eigen::Index rows, Eigen::Index cols) {
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = normal();
    return m;
  }

  Matrix skew(Eigen::Index dim, double scale = 1.0) {
    const Matrix g = gaussian(dim, dim);
    return scale * (g - g.transpose()) / 2.0;
  }

  Matrix symmetric(Eigen::Index dim, double scale = 1.0) {
    const Matrix g = gaussian(dim, dim);
    return scale * (g + g.transpose()) / 2.0;
  }

  /// Skew nonsingular with singular values bounded away from zero.
  Matrix skew_nonsingular(Eigen::Index dim) {
    while (true) {
      Matrix m = skew(dim);
      Eigen::JacobiSVD<Matrix> svd(m);
      const auto& sv = svd.singularValues();
      if (sv(sv.size() - 1) > 0.2 && sv(0) < 6.0) return m;
    }
  }

  /// Symmetric positive definite with eigenvalues in [lo, hi] (random orthogonal frame).
  Matrix spd(Eigen::Index dim, double lo, double hi) {
    Eigen::HouseholderQR<Matrix> qr(gaussian(dim, dim));
    const Matrix q = qr.householderQ();
    Eigen::VectorXd d(dim);
    for (Eigen::Index i = 0; i < dim; ++i) d(i) = uniform(lo, hi);
    Matrix m = q * d.asDiagonal() * q.transpose();
    return 0.5 * (m + m.transpose());
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace oracle
