#include "ncphase/cli/commands.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <thread>

namespace {

// NCPHASE_MAX_THREADS caps scan parallelism; unset means all hardware threads.
std::optional<unsigned> thread_cap(std::ostream& err) {
  const char* raw = std::getenv("NCPHASE_MAX_THREADS");
  if (raw == nullptr || *raw == '\0') return std::max(1u, std::thread::hardware_concurrency());
  char* end = nullptr;
  const long value = std::strtol(raw, &end, 10);
  if (*end != '\0' || value < 1 || value > 4096) {
    err << "error: NCPHASE_MAX_THREADS: expected a positive integer, got '" << raw << "'\n";
    return std::nullopt;
  }
  return static_cast<unsigned>(value);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace ncphase::cli;

  CLI::App app{"Gaussian states on noncommutative phase space"};
  app.set_version_flag("--version", "ncphase 0.1.0");

  std::string command_name;
  std::string scenario;
  std::string out;
  std::string theta_range;
  std::string eta_range;
  bool verify = false;

  app.add_option("command", command_name,
                 "check-quantum | check-separable | kinematic-scan | bell | evolve-compare")
      ->required();
  app.add_option("--scenario", scenario, "Scenario JSON file")->required();
  app.add_option("--out", out, "CSV destination (stdout when omitted)");
  app.add_option("--theta-range", theta_range, "kinematic-scan theta grid, start:stop:count");
  app.add_option("--eta-range", eta_range, "kinematic-scan eta grid, start:stop:count");
  app.add_flag("--verify", verify, "Re-read --out and recompute every row");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_code::success : exit_code::input_failure;
  }

  const auto command = parse_command(command_name);
  if (!command) {
    std::cerr << "error: unknown command '" << command_name << "'\n";
    return exit_code::input_failure;
  }
  const auto threads = thread_cap(std::cerr);
  if (!threads) return exit_code::validation_failure;

  RunOptions options;
  options.command = *command;
  options.scenario = scenario;
  options.verify = verify;
  options.max_threads = *threads;
  if (!out.empty()) options.out = out;
  try {
    if (!theta_range.empty()) options.theta_range = parse_range(theta_range, "--theta-range");
    if (!eta_range.empty()) options.eta_range = parse_range(eta_range, "--eta-range");
  } catch (const ValidationError& e) {
    for (const auto& issue : e.issues()) std::cerr << "error: " << issue << "\n";
    return exit_code::validation_failure;
  }
  return run(options, std::cout, std::cerr);
}
