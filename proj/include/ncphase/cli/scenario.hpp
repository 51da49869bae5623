#pragma once
// JSON scenario files. Matrices are arrays of row arrays; theta and eta also
// accept a scalar, expanded to planar blocks on consecutive mode pairs.
#include "ncphase/bell.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ncphase::cli {

/// Unreadable file or malformed JSON.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Well-formed JSON describing an inconsistent scenario. Each issue reads
/// "<field path>: <message>".
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  std::vector<std::string> issues_;
};

enum class StateKind { vacuum, thermal, two_mode_squeezed, explicit_moments };

struct StateSpec {
  StateKind kind = StateKind::vacuum;
  Picture picture = Picture::commutative;
  std::vector<double> occupations;  // thermal
  double r = 0.0;                   // two_mode_squeezed
  Vector mean;                      // explicit
  Matrix cov;                       // explicit
  Layout layout = Layout::global_blocked;
};

struct HamiltonianSpec {
  Matrix G;
  Vector linear;
};

struct BellSpec {
  std::optional<std::pair<Amplitude, Amplitude>> amplitudes;
  BellSearch search;
  AmplitudePolicy policy = AmplitudePolicy::fixed;
};

struct Scenario {
  double hbar = 1.0;
  int modes = 0;
  ModePartition partition;
  Layout layout = Layout::global_blocked;
  Matrix theta;
  Matrix eta;
  std::optional<double> theta_scalar;
  std::optional<double> eta_scalar;
  StateSpec state;
  std::optional<HamiltonianSpec> hamiltonian;
  std::optional<BellSpec> bell;
  std::vector<double> times;

  Ordering ordering() const { return Ordering::of(layout, partition); }
  NCParameters parameters() const;
  PhaseSpaceForm omega() const;
  /// Form the state pairs with: J for commutative states, Omega otherwise.
  PhaseSpaceForm state_form() const;
  /// Initial state, laid out in ordering().
  GaussianState initial_state() const;
  QuadraticHamiltonian quadratic_hamiltonian() const;
};

Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace ncphase::cli
