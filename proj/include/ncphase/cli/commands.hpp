#pragma once
#include "ncphase/cli/scenario.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ncphase::cli {

enum class Command { check_quantum, check_separable, kinematic_scan, bell, evolve_compare };

std::optional<Command> parse_command(std::string_view name);
std::string_view to_string(Command command);

namespace exit_code {
inline constexpr int success = 0;
inline constexpr int input_failure = 1;
inline constexpr int validation_failure = 2;
inline constexpr int negative_verdict = 3;
}  // namespace exit_code

/// "start:stop:count", count evenly spaced points including both ends.
struct GridRange {
  double start = 0.0;
  double stop = 0.0;
  int count = 0;
  std::string text;
  std::vector<double> points() const;
};

/// Throws ValidationError naming `flag` on malformed input.
GridRange parse_range(std::string_view text, std::string_view flag);

struct RunOptions {
  Command command = Command::check_quantum;
  std::filesystem::path scenario;
  std::optional<std::filesystem::path> out;
  std::optional<GridRange> theta_range;
  std::optional<GridRange> eta_range;
  bool verify = false;
  unsigned max_threads = 1;
};

/// Runs one command and returns its exit code. CSV goes to `options.out` when
/// set and to `out` otherwise; diagnostics go to `err`. With `verify`, the
/// CSV at `options.out` is re-read and every row recomputed instead.
int run(const RunOptions& options, std::ostream& out, std::ostream& err);

/// printf "%.17g": round-trips every double.
std::string format_number(double value);

}  // namespace ncphase::cli
