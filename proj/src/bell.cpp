#include "ncphase/bell.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ncphase {

double parity_scale(double hbar) {
  const double v = std::numbers::pi * hbar;
  return v * v;
}

Vector amplitude_point(Amplitude alpha1, Amplitude alpha2, const Ordering& ordering) {
  if (ordering.n_modes() != 2) {
    throw Error(ErrorCode::ModeCountMismatch, "the Bell functional needs exactly two modes");
  }
  const Ordering split = Ordering::party(ModePartition{1, 1});
  Vector point(4);
  point << alpha1.real(), alpha1.imag(), alpha2.real(), alpha2.imag();
  return reorder(point, split, ordering);
}

CHSHEvaluation bell_chsh(const WignerFunction& wigner, const Ordering& ordering, double hbar,
                         Amplitude alpha1, Amplitude alpha2) {
  if (ordering.n_modes() != 2) {
    throw Error(ErrorCode::ModeCountMismatch, "the Bell functional needs exactly two modes");
  }
  CHSHEvaluation out;
  out.alpha1 = alpha1;
  out.alpha2 = alpha2;
  out.scale = parity_scale(hbar);
  out.w_samples = {wigner(amplitude_point(0.0, 0.0, ordering)),
                   wigner(amplitude_point(alpha1, 0.0, ordering)),
                   wigner(amplitude_point(0.0, alpha2, ordering)),
                   wigner(amplitude_point(alpha1, alpha2, ordering))};
  const auto& w = out.w_samples;
  out.bell_value = out.scale * (w[0] + w[1] + w[2] - w[3]);
  out.nonlocal = std::abs(out.bell_value) > kLocalBound + tol::derived;
  return out;
}

CHSHEvaluation bell_chsh(const GaussianState& state, Amplitude alpha1, Amplitude alpha2) {
  if (state.n_modes() != 2) {
    throw Error(ErrorCode::ModeCountMismatch, "the Bell functional needs exactly two modes");
  }
  const GaussianWigner wigner(state);
  return bell_chsh([&wigner](const Vector& z) { return wigner(z); }, state.ordering(), state.hbar(),
                   alpha1, alpha2);
}

namespace {

using Coords = std::array<double, 4>;

double norm2(const Coords& c) { return c[0] * c[0] + c[1] * c[1] + c[2] * c[2] + c[3] * c[3]; }

Amplitude first(const Coords& c) { return {c[0], c[1]}; }
Amplitude second(const Coords& c) { return {c[2], c[3]}; }

// Nelder-Mead on f (minimized) starting from `start` with edge `step`.
struct SimplexResult {
  Coords best;
  double value;
  int iterations;
  bool converged;
};

template <typename F>
SimplexResult nelder_mead(F&& f, const Coords& start, double step, int max_iterations,
                          double tolerance) {
  constexpr int n = 4;
  std::array<Coords, n + 1> x;
  std::array<double, n + 1> fx;
  x[0] = start;
  for (int i = 0; i < n; ++i) {
    x[i + 1] = start;
    x[i + 1][i] += step;
  }
  for (int i = 0; i <= n; ++i) fx[i] = f(x[i]);

  auto combine = [](const Coords& a, const Coords& b, double t) {
    Coords out;
    for (int k = 0; k < n; ++k) out[k] = a[k] + t * (b[k] - a[k]);
    return out;
  };

  int iteration = 0;
  bool converged = false;
  while (true) {
    std::array<int, n + 1> order;
    for (int i = 0; i <= n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return fx[a] < fx[b]; });
    std::array<Coords, n + 1> xs;
    std::array<double, n + 1> fs;
    for (int i = 0; i <= n; ++i) {
      xs[i] = x[order[i]];
      fs[i] = fx[order[i]];
    }
    x = xs;
    fx = fs;

    double size = 0.0;
    for (int i = 1; i <= n; ++i) {
      for (int k = 0; k < n; ++k) size = std::max(size, std::abs(x[i][k] - x[0][k]));
    }
    if (size < tolerance) {
      converged = true;
      break;
    }
    if (iteration >= max_iterations) break;
    ++iteration;

    Coords centroid{};
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < n; ++k) centroid[k] += x[i][k] / n;
    }
    const Coords reflected = combine(centroid, x[n], -1.0);
    const double f_reflected = f(reflected);
    if (f_reflected < fx[0]) {
      const Coords expanded = combine(centroid, x[n], -2.0);
      const double f_expanded = f(expanded);
      if (f_expanded < f_reflected) {
        x[n] = expanded;
        fx[n] = f_expanded;
      } else {
        x[n] = reflected;
        fx[n] = f_reflected;
      }
      continue;
    }
    if (f_reflected < fx[n - 1]) {
      x[n] = reflected;
      fx[n] = f_reflected;
      continue;
    }
    const bool outside = f_reflected < fx[n];
    const Coords contracted = outside ? combine(centroid, reflected, 0.5) : combine(centroid, x[n], 0.5);
    const double f_contracted = f(contracted);
    if (f_contracted < std::min(f_reflected, fx[n])) {
      x[n] = contracted;
      fx[n] = f_contracted;
      continue;
    }
    for (int i = 1; i <= n; ++i) {
      x[i] = combine(x[0], x[i], 0.5);
      fx[i] = f(x[i]);
    }
  }
  return SimplexResult{x[0], fx[0], iteration, converged};
}

}  // namespace

BellOptimum bell_optimize(const GaussianState& state, const PhaseSpaceForm& form,
                          const BellSearch& search) {
  if (state.n_modes() != 2) {
    throw Error(ErrorCode::ModeCountMismatch, "the Bell functional needs exactly two modes");
  }
  if (!(state.ordering() == form.ordering())) {
    throw Error(ErrorCode::OrderingMismatch, "state and form orderings differ");
  }
  if ((state.picture() == Picture::commutative) != (form.role() == FormRole::standard_J)) {
    throw Error(ErrorCode::PictureFormMismatch, "state picture does not match the form");
  }
  if (search.grid_points < 1 || !(search.range >= 0.0) || search.max_iterations < 0) {
    throw Error(ErrorCode::InvalidArgument, "invalid Bell search specification");
  }

  const GaussianWigner wigner(state);
  const Ordering& ordering = state.ordering();
  const double scale = parity_scale(state.hbar());
  const int m = search.grid_points;
  std::vector<double> axis(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    axis[static_cast<std::size_t>(i)] =
        m == 1 ? 0.0 : -search.range + 2.0 * search.range * i / (m - 1);
  }

  // Single-party samples are shared across the 4D grid.
  const std::size_t plane = static_cast<std::size_t>(m) * static_cast<std::size_t>(m);
  std::vector<double> w_a(plane);
  std::vector<double> w_b(plane);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const Amplitude a{axis[static_cast<std::size_t>(i)], axis[static_cast<std::size_t>(j)]};
      w_a[static_cast<std::size_t>(i * m + j)] = wigner(amplitude_point(a, 0.0, ordering));
      w_b[static_cast<std::size_t>(i * m + j)] = wigner(amplitude_point(0.0, a, ordering));
    }
  }
  const double w_origin = wigner(amplitude_point(0.0, 0.0, ordering));

  Coords best_coords{};
  double best_abs = -1.0;
  double best_norm = 0.0;
  for (std::size_t a = 0; a < plane; ++a) {
    const Coords ca{axis[a / static_cast<std::size_t>(m)], axis[a % static_cast<std::size_t>(m)], 0, 0};
    for (std::size_t b = 0; b < plane; ++b) {
      const Coords c{ca[0], ca[1], axis[b / static_cast<std::size_t>(m)],
                     axis[b % static_cast<std::size_t>(m)]};
      const double joint = wigner(amplitude_point(first(c), second(c), ordering));
      const double value = std::abs(scale * (w_origin + w_a[a] + w_b[b] - joint));
      const double n2 = norm2(c);
      // Relative slack keeps ties (e.g. the flat vacuum ridge) stable under rounding.
      const double slack = 1e-13 * std::max(1.0, best_abs);
      if (value > best_abs + slack || (std::abs(value - best_abs) <= slack && n2 < best_norm)) {
        best_abs = std::max(value, best_abs);
        best_coords = c;
        best_norm = n2;
      }
    }
  }

  BellOptimum out;
  out.grid_best = bell_chsh([&wigner](const Vector& z) { return wigner(z); }, ordering,
                            state.hbar(), first(best_coords), second(best_coords));
  out.best = out.grid_best;
  if (!search.refine) return out;

  auto objective = [&](const Coords& c) {
    const CHSHEvaluation e = bell_chsh([&wigner](const Vector& z) { return wigner(z); }, ordering,
                                       state.hbar(), first(c), second(c));
    return -std::abs(e.bell_value);
  };
  const double step = m > 1 ? 2.0 * search.range / (m - 1) : 0.1;
  const SimplexResult refined = nelder_mead(objective, best_coords, step, search.max_iterations,
                                            search.step_tolerance);
  out.iterations = refined.iterations;
  out.budget_exhausted = !refined.converged;
  if (-refined.value > std::abs(out.grid_best.bell_value)) {
    out.best = bell_chsh([&wigner](const Vector& z) { return wigner(z); }, ordering, state.hbar(),
                         first(refined.best), second(refined.best));
  }
  return out;
}

std::pair<Amplitude, Amplitude> trajectory_amplitudes(const GaussianState& initial,
                                                      const TrajectoryOptions& options) {
  if (options.amplitudes) return *options.amplitudes;
  const GaussianState commutative = initial.with_picture(Picture::commutative);
  const BellOptimum opt =
      bell_optimize(commutative, build_J(initial.ordering(), initial.hbar()), options.search);
  return {opt.best.alpha1, opt.best.alpha2};
}

std::vector<TrajectoryRow> compare_bell_trajectories(const GaussianState& initial,
                                                     const QuadraticHamiltonian& hamiltonian,
                                                     const PhaseSpaceForm& omega,
                                                     std::span<const double> times,
                                                     const TrajectoryOptions& options) {
  if (initial.n_modes() != 2) {
    throw Error(ErrorCode::ModeCountMismatch, "the Bell functional needs exactly two modes");
  }
  if (omega.role() == FormRole::standard_J) {
    throw Error(ErrorCode::PictureFormMismatch, "the noncommutative branch needs a deformed form");
  }
  if (!(omega.ordering() == initial.ordering())) {
    throw Error(ErrorCode::OrderingMismatch, "state and form orderings differ");
  }
  const PhaseSpaceForm j = build_J(initial.ordering(), initial.hbar());
  const GaussianState start_c = initial.with_picture(Picture::commutative);
  const GaussianState start_nc = initial.with_picture(Picture::noncommutative);
  const LinearFlow flow_c(hamiltonian, j);
  const LinearFlow flow_nc(hamiltonian, omega);

  std::pair<Amplitude, Amplitude> fixed{};
  if (options.policy == AmplitudePolicy::fixed) fixed = trajectory_amplitudes(initial, options);

  std::vector<TrajectoryRow> rows;
  rows.reserve(times.size());
  for (double t : times) {
    const GaussianState state_c = apply_step(start_c, flow_c.at(t));
    const GaussianState state_nc = apply_step(start_nc, flow_nc.at(t));
    TrajectoryRow row;
    row.t = t;
    if (options.policy == AmplitudePolicy::fixed) {
      row.commutative = bell_chsh(state_c, fixed.first, fixed.second);
      row.noncommutative = bell_chsh(state_nc, fixed.first, fixed.second);
    } else {
      row.commutative = bell_optimize(state_c, j, options.search).best;
      row.noncommutative = bell_optimize(state_nc, omega, options.search).best;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace ncphase
