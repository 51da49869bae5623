#pragma once

// CHSH functional built from displaced-parity correlations of a two-mode
// Wigner function:
//
//   B = E(0,0) + E(a1,0) + E(0,a2) - E(a1,a2),   E(a1,a2) = (pi hbar)^2 W(z).
//
// The classic form carries pi^2/4 in front of W because it uses a Wigner
// convention whose two-mode vacuum peak is (2/pi)^2. Here the vacuum peak is
// 1/(pi hbar)^2, so E = (pi hbar)^2 W is the same parity correlation: the
// vacuum at the origin gives E = 1 and B = 2.
//
// Amplitudes map to phase space as a1 = x + i p_x (mode A) and
// a2 = y + i p_y (mode B).

#include "ncphase/dynamics.hpp"

#include <array>
#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace ncphase {

using Amplitude = std::complex<double>;

inline constexpr double kTsirelsonBound = 2.8284271247461903;  // 2 sqrt(2)
inline constexpr double kLocalBound = 2.0;

/// Scaling between a Wigner sample and the displaced-parity correlation.
double parity_scale(double hbar);

struct CHSHEvaluation {
  Amplitude alpha1;
  Amplitude alpha2;
  std::array<double, 4> w_samples{};  // W(0,0), W(a1,0), W(0,a2), W(a1,a2)
  double bell_value = 0.0;
  bool nonlocal = false;
  double scale = 0.0;
};

/// Phase-space point of (a1, a2) laid out in `ordering` (two modes).
Vector amplitude_point(Amplitude alpha1, Amplitude alpha2, const Ordering& ordering);

using WignerFunction = std::function<double(const Vector&)>;

CHSHEvaluation bell_chsh(const WignerFunction& wigner, const Ordering& ordering, double hbar,
                         Amplitude alpha1, Amplitude alpha2);
CHSHEvaluation bell_chsh(const GaussianState& state, Amplitude alpha1, Amplitude alpha2);

struct BellSearch {
  int grid_points = 21;  // per real coordinate
  double range = 2.0;    // grid covers [-range, range]^4
  bool refine = true;
  int max_iterations = 500;
  double step_tolerance = 1e-6;
};

struct BellOptimum {
  CHSHEvaluation best;
  CHSHEvaluation grid_best;
  int iterations = 0;
  bool budget_exhausted = false;
};

/// Maximizes |B| over the amplitudes: coarse grid, then Nelder-Mead.
/// Grid ties go to the amplitude pair of smallest norm.
BellOptimum bell_optimize(const GaussianState& state, const PhaseSpaceForm& form,
                          const BellSearch& search = {});

enum class AmplitudePolicy { fixed, reoptimize };

struct TrajectoryOptions {
  AmplitudePolicy policy = AmplitudePolicy::fixed;
  /// Used by the fixed policy; optimized on the initial state when absent.
  std::optional<std::pair<Amplitude, Amplitude>> amplitudes;
  BellSearch search;
};

struct TrajectoryRow {
  double t = 0.0;
  CHSHEvaluation commutative;
  CHSHEvaluation noncommutative;

  double delta() const { return noncommutative.bell_value - commutative.bell_value; }
};

/// Evolves the same initial Gaussian with J (commutative branch) and Omega
/// (noncommutative branch) and evaluates B on both.
std::vector<TrajectoryRow> compare_bell_trajectories(const GaussianState& initial,
                                                     const QuadraticHamiltonian& hamiltonian,
                                                     const PhaseSpaceForm& omega,
                                                     std::span<const double> times,
                                                     const TrajectoryOptions& options = {});

/// Amplitudes the fixed policy uses for `initial`.
std::pair<Amplitude, Amplitude> trajectory_amplitudes(const GaussianState& initial,
                                                      const TrajectoryOptions& options);

}  // namespace ncphase
