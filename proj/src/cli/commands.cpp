#include "ncphase/cli/commands.hpp"
#include "ncphase/criteria.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace ncphase::cli {

namespace {

constexpr double kVerifyTolerance = 1e-10;

using Row = std::vector<std::string>;

struct Table {
  Row header;
  std::vector<Row> rows;
  bool negative = false;
};

std::string format_bool(bool value) { return value ? "true" : "false"; }

std::string join(const Row& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) line += ',';
    line += cells[i];
  }
  return line;
}

std::string metadata_line(const RunOptions& options) {
  std::string line = "# ncphase command=" + std::string(to_string(options.command)) +
                     " scenario=" + options.scenario.filename().string();
  if (options.theta_range) line += " theta-range=" + options.theta_range->text;
  if (options.eta_range) line += " eta-range=" + options.eta_range->text;
  return line;
}

std::string render(const RunOptions& options, const Table& table) {
  std::string text = metadata_line(options) + "\n" + join(table.header) + "\n";
  for (const auto& row : table.rows) text += join(row) + "\n";
  return text;
}

// ---------------------------------------------------------------------------
// Command bodies

const Row kCheckHeader{"picture", "form", "passes", "min_eigenvalue"};
const Row kSeparableHeader{"picture", "form", "passes", "min_eigenvalue", "label"};
const Row kScanHeader{"theta", "eta", "margin", "entangled"};
const Row kBellHeader{"alpha1_re", "alpha1_im", "alpha2_re", "alpha2_im", "w_00",  "w_10",
                      "w_01",      "w_11",      "bell",      "nonlocal",  "source", "budget_exhausted"};
const Row kEvolveHeader{"t",           "bell_c",      "bell_nc",      "delta",        "nonlocal_c",
                        "nonlocal_nc", "alpha1_re_c", "alpha1_im_c",  "alpha2_re_c",  "alpha2_im_c",
                        "alpha1_re_nc", "alpha1_im_nc", "alpha2_re_nc", "alpha2_im_nc"};

const Row& header_for(Command command) {
  switch (command) {
    case Command::check_quantum: return kCheckHeader;
    case Command::check_separable: return kSeparableHeader;
    case Command::kinematic_scan: return kScanHeader;
    case Command::bell: return kBellHeader;
    case Command::evolve_compare: return kEvolveHeader;
  }
  return kCheckHeader;
}

void require_two_modes(const Scenario& scenario, std::string_view command) {
  if (scenario.modes != 2) {
    throw ValidationError({"modes: " + std::string(command) + " needs exactly two modes, got " +
                           std::to_string(scenario.modes)});
  }
}

void require_bipartite(const Scenario& scenario, std::string_view command) {
  if (!scenario.partition.bipartite()) {
    throw ValidationError({"partition: " + std::string(command) + " needs two non-empty parties"});
  }
}

PPTVerdict separability(const Scenario& scenario) {
  require_bipartite(scenario, "check-separable");
  return ppt_separability_check(scenario.initial_state(), scenario.state_form(), scenario.partition);
}

std::pair<std::vector<double>, std::vector<double>> scan_grids(const Scenario& scenario,
                                                               const RunOptions& options) {
  auto grid = [&](const std::optional<GridRange>& range, const std::optional<double>& scalar,
                  const std::string& flag) {
    if (range) {
      if (range->count < 1) throw ValidationError({flag + ": empty range"});
      return range->points();
    }
    if (scalar) return std::vector<double>{*scalar};
    throw ValidationError({flag + ": required unless the scenario gives a scalar value"});
  };
  return {grid(options.theta_range, scenario.theta_scalar, "--theta-range"),
          grid(options.eta_range, scenario.eta_scalar, "--eta-range")};
}

Row amplitude_cells(Amplitude a1, Amplitude a2) {
  return {format_number(a1.real()), format_number(a1.imag()), format_number(a2.real()),
          format_number(a2.imag())};
}

Row bell_row(const CHSHEvaluation& e, std::string_view source, bool budget_exhausted) {
  Row row = amplitude_cells(e.alpha1, e.alpha2);
  for (double w : e.w_samples) row.push_back(format_number(w));
  row.push_back(format_number(e.bell_value));
  row.push_back(format_bool(e.nonlocal));
  row.emplace_back(source);
  row.push_back(format_bool(budget_exhausted));
  return row;
}

TrajectoryOptions trajectory_options(const Scenario& scenario) {
  TrajectoryOptions options;
  if (scenario.bell) {
    options.policy = scenario.bell->policy;
    options.amplitudes = scenario.bell->amplitudes;
    options.search = scenario.bell->search;
  }
  return options;
}

Table run_command(const Scenario& scenario, const RunOptions& options) {
  Table table;
  table.header = header_for(options.command);
  switch (options.command) {
    case Command::check_quantum: {
      const PhaseSpaceForm form = scenario.state_form();
      const PSDVerdict v = rsup_check(scenario.initial_state(), form);
      table.rows.push_back({std::string(to_string(scenario.state.picture)), std::string(to_string(form.role())),
                            format_bool(v.passes), format_number(v.min_eigenvalue)});
      table.negative = !v.passes;
      break;
    }
    case Command::check_separable: {
      const PPTVerdict v = separability(scenario);
      table.rows.push_back({std::string(to_string(scenario.state.picture)),
                            std::string(to_string(scenario.state_form().role())), format_bool(v.psd.passes),
                            format_number(v.psd.min_eigenvalue), std::string(to_string(v.label))});
      table.negative = v.entangled();
      break;
    }
    case Command::kinematic_scan: {
      require_bipartite(scenario, "kinematic-scan");
      const auto [thetas, etas] = scan_grids(scenario, options);
      const auto records = kinematic_entanglement_scan(scenario.initial_state(), thetas, etas,
                                                       scenario.partition, options.max_threads);
      for (const auto& r : records) {
        table.rows.push_back(
            {format_number(r.theta), format_number(r.eta), format_number(r.margin), format_bool(r.entangled)});
      }
      break;
    }
    case Command::bell: {
      require_two_modes(scenario, "bell");
      const GaussianState state = scenario.initial_state();
      if (scenario.bell && scenario.bell->amplitudes) {
        const auto [a1, a2] = *scenario.bell->amplitudes;
        table.rows.push_back(bell_row(bell_chsh(state, a1, a2), "given", false));
      } else {
        const BellSearch search = scenario.bell ? scenario.bell->search : BellSearch{};
        const BellOptimum opt = bell_optimize(state, scenario.state_form(), search);
        table.rows.push_back(bell_row(opt.best, "optimized", opt.budget_exhausted));
      }
      break;
    }
    case Command::evolve_compare: {
      require_two_modes(scenario, "evolve-compare");
      const QuadraticHamiltonian h = scenario.quadratic_hamiltonian();
      if (scenario.times.empty()) throw ValidationError({"times: evolve-compare needs at least one time"});
      const auto rows = compare_bell_trajectories(scenario.initial_state(), h, scenario.omega(), scenario.times,
                                                  trajectory_options(scenario));
      for (const auto& r : rows) {
        Row row{format_number(r.t),
                format_number(r.commutative.bell_value),
                format_number(r.noncommutative.bell_value),
                format_number(r.delta()),
                format_bool(r.commutative.nonlocal),
                format_bool(r.noncommutative.nonlocal)};
        for (auto& c : amplitude_cells(r.commutative.alpha1, r.commutative.alpha2)) row.push_back(std::move(c));
        for (auto& c : amplitude_cells(r.noncommutative.alpha1, r.noncommutative.alpha2)) {
          row.push_back(std::move(c));
        }
        table.rows.push_back(std::move(row));
      }
      break;
    }
  }
  return table;
}

// ---------------------------------------------------------------------------
// --verify

struct CsvFile {
  std::string metadata;
  std::vector<Row> rows;
};

Row split(const std::string& line) {
  Row cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

CsvFile read_csv(const std::filesystem::path& path, const Row& header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  CsvFile file;
  std::string line;
  if (!std::getline(in, file.metadata) || !file.metadata.starts_with("# ncphase")) {
    throw InputError(path.string() + ": missing '# ncphase' metadata line");
  }
  if (!std::getline(in, line) || split(line) != header) {
    throw InputError(path.string() + ": header does not match '" + join(header) + "'");
  }
  while (std::getline(in, line)) {
    Row cells = split(line);
    if (cells.size() != header.size()) {
      throw InputError(path.string() + ": row " + std::to_string(file.rows.size() + 1) + " has " +
                       std::to_string(cells.size()) + " cells, expected " + std::to_string(header.size()));
    }
    file.rows.push_back(std::move(cells));
  }
  return file;
}

double parse_number(const std::string& cell) {
  double value = 0.0;
  char* end = nullptr;
  value = std::strtod(cell.c_str(), &end);
  if (cell.empty() || end != cell.c_str() + cell.size()) throw InputError("not a number: '" + cell + "'");
  return value;
}

bool parse_bool(const std::string& cell) {
  if (cell == "true") return true;
  if (cell == "false") return false;
  throw InputError("not a boolean: '" + cell + "'");
}

class Mismatches {
 public:
  void number(std::size_t row, const std::string& column, const std::string& cell, double expected) {
    const double got = parse_number(cell);
    if (std::abs(got - expected) > kVerifyTolerance * std::max(1.0, std::abs(expected))) {
      add(row, column, cell, format_number(expected));
    }
  }
  void text(std::size_t row, const std::string& column, const std::string& cell, const std::string& expected) {
    if (cell != expected) add(row, column, cell, expected);
  }
  void flag(std::size_t row, const std::string& column, const std::string& cell, bool expected) {
    if (parse_bool(cell) != expected) add(row, column, cell, format_bool(expected));
  }
  void count(std::size_t got, std::size_t expected) {
    if (got != expected) {
      list_.push_back("row count " + std::to_string(got) + ", expected " + std::to_string(expected));
    }
  }
  const std::vector<std::string>& list() const { return list_; }

 private:
  void add(std::size_t row, const std::string& column, const std::string& got, const std::string& expected) {
    list_.push_back("row " + std::to_string(row + 1) + " " + column + ": file has " + got + ", recomputed " +
                    expected);
  }
  std::vector<std::string> list_;
};

Amplitude amplitude_at(const Row& row, std::size_t first) {
  return {parse_number(row[first]), parse_number(row[first + 1])};
}

std::vector<std::string> verify_rows(const Scenario& scenario, const RunOptions& options, const CsvFile& file) {
  Mismatches m;
  const Row& h = header_for(options.command);
  switch (options.command) {
    case Command::check_quantum:
    case Command::check_separable: {
      // One-row reports: recompute in full.
      const Table fresh = run_command(scenario, options);
      m.count(file.rows.size(), fresh.rows.size());
      for (std::size_t i = 0; i < std::min(file.rows.size(), fresh.rows.size()); ++i) {
        for (std::size_t c = 0; c < h.size(); ++c) {
          if (h[c] == "min_eigenvalue") {
            m.number(i, h[c], file.rows[i][c], parse_number(fresh.rows[i][c]));
          } else {
            m.text(i, h[c], file.rows[i][c], fresh.rows[i][c]);
          }
        }
      }
      break;
    }
    case Command::kinematic_scan: {
      require_bipartite(scenario, "kinematic-scan");
      const auto [thetas, etas] = scan_grids(scenario, options);
      m.count(file.rows.size(), thetas.size() * etas.size());
      const GaussianState state = scenario.initial_state();
      const GaussianState reread = state.with_picture(Picture::noncommutative);
      for (std::size_t i = 0; i < file.rows.size(); ++i) {
        const Row& row = file.rows[i];
        const double theta = parse_number(row[0]);
        const double eta = parse_number(row[1]);
        const PhaseSpaceForm omega = scan_form(theta, eta, state.ordering(), scenario.partition, scenario.hbar);
        const PPTVerdict v = ppt_separability_check(reread, omega, scenario.partition);
        m.number(i, h[2], row[2], v.psd.min_eigenvalue);
        m.flag(i, h[3], row[3], v.entangled());
      }
      break;
    }
    case Command::bell: {
      require_two_modes(scenario, "bell");
      m.count(file.rows.size(), 1);
      const GaussianState state = scenario.initial_state();
      for (std::size_t i = 0; i < file.rows.size(); ++i) {
        const Row& row = file.rows[i];
        const CHSHEvaluation e = bell_chsh(state, amplitude_at(row, 0), amplitude_at(row, 2));
        for (std::size_t k = 0; k < 4; ++k) m.number(i, h[4 + k], row[4 + k], e.w_samples[k]);
        m.number(i, h[8], row[8], e.bell_value);
        m.flag(i, h[9], row[9], e.nonlocal);
      }
      break;
    }
    case Command::evolve_compare: {
      require_two_modes(scenario, "evolve-compare");
      const QuadraticHamiltonian hamiltonian = scenario.quadratic_hamiltonian();
      m.count(file.rows.size(), scenario.times.size());
      const GaussianState initial = scenario.initial_state();
      const GaussianState c0 = initial.with_picture(Picture::commutative);
      const GaussianState nc0 = initial.with_picture(Picture::noncommutative);
      const PhaseSpaceForm j = build_J(initial.ordering(), scenario.hbar);
      const PhaseSpaceForm omega = scenario.omega();
      for (std::size_t i = 0; i < file.rows.size(); ++i) {
        const Row& row = file.rows[i];
        const double t = parse_number(row[0]);
        if (i < scenario.times.size()) m.number(i, h[0], row[0], scenario.times[i]);
        const CHSHEvaluation c =
            bell_chsh(evolve(c0, hamiltonian, j, t), amplitude_at(row, 6), amplitude_at(row, 8));
        const CHSHEvaluation nc =
            bell_chsh(evolve(nc0, hamiltonian, omega, t), amplitude_at(row, 10), amplitude_at(row, 12));
        m.number(i, h[1], row[1], c.bell_value);
        m.number(i, h[2], row[2], nc.bell_value);
        m.flag(i, h[4], row[4], c.nonlocal);
        m.flag(i, h[5], row[5], nc.nonlocal);
        m.number(i, h[3], row[3], nc.bell_value - c.bell_value);
      }
      break;
    }
  }
  return m.list();
}

// ---------------------------------------------------------------------------

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw InputError("cannot write " + path.string());
  file << text;
  if (!file.flush()) throw InputError("failed writing " + path.string());
}

int execute(const RunOptions& options, std::ostream& out, std::ostream& err) {
  const Scenario scenario = load_scenario(options.scenario);
  if (options.verify) {
    if (!options.out) throw ValidationError({"--out: --verify needs the CSV file to check"});
    const CsvFile file = read_csv(*options.out, header_for(options.command));
    const std::string expected_meta = metadata_line(options);
    if (file.metadata != expected_meta) {
      err << "warning: metadata differs from this invocation: " << file.metadata << "\n";
    }
    const auto mismatches = verify_rows(scenario, options, file);
    if (!mismatches.empty()) {
      for (const auto& line : mismatches) err << "mismatch: " << line << "\n";
      return exit_code::negative_verdict;
    }
    out << "verified " << file.rows.size() << " rows in " << options.out->string() << "\n";
    return exit_code::success;
  }

  const Table table = run_command(scenario, options);
  const std::string text = render(options, table);
  if (options.out) {
    write_text(*options.out, text);
  } else {
    out << text;
  }
  return table.negative ? exit_code::negative_verdict : exit_code::success;
}

}  // namespace

std::optional<Command> parse_command(std::string_view name) {
  for (Command c : {Command::check_quantum, Command::check_separable, Command::kinematic_scan, Command::bell,
                    Command::evolve_compare}) {
    if (to_string(c) == name) return c;
  }
  return std::nullopt;
}

std::string_view to_string(Command command) {
  switch (command) {
    case Command::check_quantum: return "check-quantum";
    case Command::check_separable: return "check-separable";
    case Command::kinematic_scan: return "kinematic-scan";
    case Command::bell: return "bell";
    case Command::evolve_compare: return "evolve-compare";
  }
  return "unknown";
}

std::vector<double> GridRange::points() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int k = 0; k < count; ++k) {
    out.push_back(count == 1 ? start : start + (stop - start) * k / (count - 1));
  }
  return out;
}

GridRange parse_range(std::string_view text, std::string_view flag) {
  const std::string where(flag);
  const auto first = text.find(':');
  const auto second = first == std::string_view::npos ? first : text.find(':', first + 1);
  if (second == std::string_view::npos || text.find(':', second + 1) != std::string_view::npos) {
    throw ValidationError({where + ": expected start:stop:count, got '" + std::string(text) + "'"});
  }
  GridRange range;
  range.text = std::string(text);
  auto number = [&](std::string_view part, double& value) {
    const std::string s(part);
    char* end = nullptr;
    value = std::strtod(s.c_str(), &end);
    return !s.empty() && end == s.c_str() + s.size() && std::isfinite(value);
  };
  const std::string_view count_text = text.substr(second + 1);
  const auto [ptr, ec] = std::from_chars(count_text.data(), count_text.data() + count_text.size(), range.count);
  if (!number(text.substr(0, first), range.start) ||
      !number(text.substr(first + 1, second - first - 1), range.stop) || ec != std::errc() ||
      ptr != count_text.data() + count_text.size() || range.count < 0) {
    throw ValidationError({where + ": expected start:stop:count, got '" + std::string(text) + "'"});
  }
  return range;
}

std::string format_number(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

int run(const RunOptions& options, std::ostream& out, std::ostream& err) {
  try {
    return execute(options, out, err);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::input_failure;
  } catch (const ValidationError& e) {
    for (const auto& issue : e.issues()) err << "error: " << issue << "\n";
    return exit_code::validation_failure;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::validation_failure;
  }
}

}  // namespace ncphase::cli
