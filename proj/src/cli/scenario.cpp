#include "ncphase/cli/scenario.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace ncphase::cli {

namespace {

using nlohmann::json;

std::string join_issues(const std::vector<std::string>& issues) {
  std::string out = "invalid scenario";
  for (const auto& issue : issues) out += "\n  " + issue;
  return out;
}

class Issues {
 public:
  void add(const std::string& path, const std::string& message) {
    list_.push_back(path + ": " + message);
  }
  bool empty() const { return list_.empty(); }
  std::vector<std::string> take() { return std::move(list_); }

 private:
  std::vector<std::string> list_;
};

std::string at(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

std::string field(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void reject_unknown(const json& object, const std::string& path, std::set<std::string> known,
                    Issues& issues) {
  for (const auto& item : object.items()) {
    if (!known.contains(item.key())) issues.add(field(path, item.key()), "unknown field");
  }
}

std::optional<double> read_number(const json& node, const std::string& path, Issues& issues) {
  if (!node.is_number()) {
    issues.add(path, "expected a number");
    return std::nullopt;
  }
  return node.get<double>();
}

std::optional<int> read_count(const json& node, const std::string& path, Issues& issues) {
  if (!node.is_number_integer()) {
    issues.add(path, "expected an integer");
    return std::nullopt;
  }
  const auto value = node.get<long long>();
  if (value < 0 || value > 1'000'000) {
    issues.add(path, "out of range");
    return std::nullopt;
  }
  return static_cast<int>(value);
}

std::optional<std::string> read_choice(const json& node, const std::string& path,
                                       std::initializer_list<std::string_view> choices,
                                       Issues& issues) {
  if (node.is_string()) {
    const auto value = node.get<std::string>();
    for (auto choice : choices) {
      if (value == choice) return value;
    }
  }
  std::string expected;
  for (auto choice : choices) expected += (expected.empty() ? "" : " | ") + std::string(choice);
  issues.add(path, "expected one of " + expected);
  return std::nullopt;
}

std::optional<Vector> read_vector(const json& node, const std::string& path, Issues& issues) {
  if (!node.is_array()) {
    issues.add(path, "expected an array of numbers");
    return std::nullopt;
  }
  Vector v(static_cast<Index>(node.size()));
  bool ok = true;
  for (std::size_t i = 0; i < node.size(); ++i) {
    const auto value = read_number(node[i], at(path, i), issues);
    if (value) v(static_cast<Index>(i)) = *value;
    ok = ok && value.has_value();
  }
  return ok ? std::optional<Vector>(v) : std::nullopt;
}

std::optional<Matrix> read_matrix(const json& node, const std::string& path, Issues& issues) {
  if (!node.is_array() || node.empty()) {
    issues.add(path, "expected a non-empty array of row arrays");
    return std::nullopt;
  }
  const std::size_t cols = node[0].is_array() ? node[0].size() : 0;
  Matrix m(static_cast<Index>(node.size()), static_cast<Index>(cols));
  bool ok = true;
  for (std::size_t i = 0; i < node.size(); ++i) {
    const json& row = node[i];
    if (!row.is_array()) {
      issues.add(at(path, i), "expected a row array");
      ok = false;
      continue;
    }
    if (row.size() != cols) {
      issues.add(at(path, i), "row has " + std::to_string(row.size()) + " entries, expected " +
                                  std::to_string(cols));
      ok = false;
      continue;
    }
    for (std::size_t j = 0; j < cols; ++j) {
      const auto value = read_number(row[j], at(at(path, i), j), issues);
      if (value) m(static_cast<Index>(i), static_cast<Index>(j)) = *value;
      ok = ok && value.has_value();
    }
  }
  return ok ? std::optional<Matrix>(m) : std::nullopt;
}

bool check_shape(const Matrix& m, Index rows, Index cols, const std::string& path, Issues& issues) {
  if (m.rows() == rows && m.cols() == cols) return true;
  std::ostringstream msg;
  msg << "shape " << m.rows() << "x" << m.cols() << ", expected " << rows << "x" << cols;
  issues.add(path, msg.str());
  return false;
}

Layout read_layout(const json& node, const std::string& path, Issues& issues) {
  const auto value = read_choice(node, path, {"global", "party"}, issues);
  return value && *value == "party" ? Layout::party_blocked : Layout::global_blocked;
}

void read_deformation(const json& root, const std::string& key, int modes, Matrix& matrix,
                      std::optional<double>& scalar, Issues& issues) {
  matrix = Matrix::Zero(modes, modes);
  if (!root.contains(key)) return;
  const json& node = root[key];
  if (node.is_number()) {
    scalar = node.get<double>();
    for (int k = 0; k + 1 < modes; k += 2) {
      matrix(k, k + 1) = *scalar;
      matrix(k + 1, k) = -*scalar;
    }
    return;
  }
  const auto m = read_matrix(node, key, issues);
  if (!m || !check_shape(*m, modes, modes, key, issues)) return;
  if (skew_defect(*m) > tol::construction) {
    issues.add(key, "matrix is not skew-symmetric");
    return;
  }
  matrix = *m;
}

StateSpec read_state(const json& node, int modes, Layout layout, Issues& issues) {
  StateSpec spec;
  spec.layout = layout;
  const std::string path = "state";
  if (!node.is_object()) {
    issues.add(path, "expected an object");
    return spec;
  }
  if (!node.contains("type")) {
    issues.add(field(path, "type"), "missing");
    return spec;
  }
  const auto type = read_choice(node["type"], field(path, "type"),
                                {"vacuum", "thermal", "two_mode_squeezed", "explicit"}, issues);
  if (!type) return spec;
  if (node.contains("picture")) {
    const auto picture = read_choice(node["picture"], field(path, "picture"),
                                     {"commutative", "noncommutative"}, issues);
    if (picture && *picture == "noncommutative") spec.picture = Picture::noncommutative;
  }
  const Index dim = 2 * static_cast<Index>(modes);

  if (*type == "vacuum") {
    spec.kind = StateKind::vacuum;
    reject_unknown(node, path, {"type", "picture"}, issues);
  } else if (*type == "thermal") {
    spec.kind = StateKind::thermal;
    reject_unknown(node, path, {"type", "picture", "occupations"}, issues);
    const std::string occ_path = field(path, "occupations");
    if (!node.contains("occupations")) {
      issues.add(occ_path, "missing");
    } else if (const auto occ = read_vector(node["occupations"], occ_path, issues)) {
      if (modes > 0 && occ->size() != modes) {
        issues.add(occ_path, "has " + std::to_string(occ->size()) + " entries, expected " +
                                 std::to_string(modes));
      }
      for (Index k = 0; k < occ->size(); ++k) {
        if ((*occ)(k) < 0.0) issues.add(at(occ_path, static_cast<std::size_t>(k)), "negative occupation");
      }
      spec.occupations.assign(occ->data(), occ->data() + occ->size());
    }
  } else if (*type == "two_mode_squeezed") {
    spec.kind = StateKind::two_mode_squeezed;
    reject_unknown(node, path, {"type", "picture", "r"}, issues);
    if (modes > 0 && modes != 2) issues.add(field(path, "type"), "two_mode_squeezed needs modes = 2");
    if (!node.contains("r")) {
      issues.add(field(path, "r"), "missing");
    } else if (const auto r = read_number(node["r"], field(path, "r"), issues)) {
      spec.r = *r;
    }
  } else {
    spec.kind = StateKind::explicit_moments;
    reject_unknown(node, path, {"type", "picture", "mean", "cov", "ordering"}, issues);
    if (node.contains("ordering")) spec.layout = read_layout(node["ordering"], field(path, "ordering"), issues);
    if (!node.contains("cov")) {
      issues.add(field(path, "cov"), "missing");
    } else if (const auto cov = read_matrix(node["cov"], field(path, "cov"), issues)) {
      if (modes == 0 || check_shape(*cov, dim, dim, field(path, "cov"), issues)) {
        if (symmetry_defect(*cov) > tol::construction) {
          issues.add(field(path, "cov"), "matrix is not symmetric");
        }
        spec.cov = *cov;
      }
    }
    if (!node.contains("mean")) {
      spec.mean = Vector::Zero(dim);
    } else if (const auto mean = read_vector(node["mean"], field(path, "mean"), issues)) {
      if (modes > 0 && mean->size() != dim) {
        issues.add(field(path, "mean"), "has " + std::to_string(mean->size()) + " entries, expected " +
                                            std::to_string(dim));
      }
      spec.mean = *mean;
    }
  }
  return spec;
}

HamiltonianSpec read_hamiltonian(const json& node, int modes, Issues& issues) {
  HamiltonianSpec spec;
  const std::string path = "hamiltonian";
  if (!node.is_object()) {
    issues.add(path, "expected an object");
    return spec;
  }
  reject_unknown(node, path, {"G", "linear"}, issues);
  const Index dim = 2 * static_cast<Index>(modes);
  if (!node.contains("G")) {
    issues.add(field(path, "G"), "missing");
  } else if (const auto g = read_matrix(node["G"], field(path, "G"), issues)) {
    if (modes == 0 || check_shape(*g, dim, dim, field(path, "G"), issues)) {
      if (symmetry_defect(*g) > tol::construction) issues.add(field(path, "G"), "matrix is not symmetric");
      spec.G = *g;
    }
  }
  if (node.contains("linear")) {
    if (const auto l = read_vector(node["linear"], field(path, "linear"), issues)) {
      if (modes > 0 && l->size() != dim) {
        issues.add(field(path, "linear"), "has " + std::to_string(l->size()) + " entries, expected " +
                                              std::to_string(dim));
      }
      spec.linear = *l;
    }
  }
  return spec;
}

std::optional<Amplitude> read_amplitude(const json& node, const std::string& path, Issues& issues) {
  if (!node.is_array() || node.size() != 2) {
    issues.add(path, "expected [re, im]");
    return std::nullopt;
  }
  const auto re = read_number(node[0], at(path, 0), issues);
  const auto im = read_number(node[1], at(path, 1), issues);
  if (!re || !im) return std::nullopt;
  return Amplitude{*re, *im};
}

BellSpec read_bell(const json& node, Issues& issues) {
  BellSpec spec;
  const std::string path = "bell";
  if (!node.is_object()) {
    issues.add(path, "expected an object");
    return spec;
  }
  reject_unknown(node, path, {"amplitudes", "search", "policy"}, issues);
  if (node.contains("amplitudes")) {
    const json& amps = node["amplitudes"];
    const std::string amp_path = field(path, "amplitudes");
    if (!amps.is_array() || amps.size() != 2) {
      issues.add(amp_path, "expected [[re, im], [re, im]]");
    } else {
      const auto a1 = read_amplitude(amps[0], at(amp_path, 0), issues);
      const auto a2 = read_amplitude(amps[1], at(amp_path, 1), issues);
      if (a1 && a2) spec.amplitudes = std::make_pair(*a1, *a2);
    }
  }
  if (node.contains("policy")) {
    const auto policy = read_choice(node["policy"], field(path, "policy"), {"fixed", "reoptimize"}, issues);
    if (policy && *policy == "reoptimize") spec.policy = AmplitudePolicy::reoptimize;
  }
  if (node.contains("search")) {
    const json& search = node["search"];
    const std::string search_path = field(path, "search");
    if (!search.is_object()) {
      issues.add(search_path, "expected an object");
      return spec;
    }
    reject_unknown(search, search_path,
                   {"grid_points", "range", "refine", "max_iterations", "step_tolerance"}, issues);
    if (search.contains("grid_points")) {
      const auto n = read_count(search["grid_points"], field(search_path, "grid_points"), issues);
      if (n && (*n < 1 || *n > 101)) issues.add(field(search_path, "grid_points"), "must lie in [1, 101]");
      if (n) spec.search.grid_points = *n;
    }
    if (search.contains("range")) {
      const auto r = read_number(search["range"], field(search_path, "range"), issues);
      if (r && !(*r > 0.0)) issues.add(field(search_path, "range"), "must be positive");
      if (r) spec.search.range = *r;
    }
    if (search.contains("refine")) {
      if (search["refine"].is_boolean()) {
        spec.search.refine = search["refine"].get<bool>();
      } else {
        issues.add(field(search_path, "refine"), "expected a boolean");
      }
    }
    if (search.contains("max_iterations")) {
      const auto n = read_count(search["max_iterations"], field(search_path, "max_iterations"), issues);
      if (n) spec.search.max_iterations = *n;
    }
    if (search.contains("step_tolerance")) {
      const auto s = read_number(search["step_tolerance"], field(search_path, "step_tolerance"), issues);
      if (s && !(*s > 0.0)) issues.add(field(search_path, "step_tolerance"), "must be positive");
      if (s) spec.search.step_tolerance = *s;
    }
  }
  return spec;
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

Scenario parse_scenario(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
  Issues issues;
  Scenario s;
  if (!root.is_object()) throw ValidationError({"$: expected a JSON object"});
  reject_unknown(root, "",
                 {"hbar", "modes", "partition", "ordering", "theta", "eta", "state", "hamiltonian", "bell",
                  "times"},
                 issues);

  if (root.contains("hbar")) {
    const auto hbar = read_number(root["hbar"], "hbar", issues);
    if (hbar && !(*hbar > 0.0)) issues.add("hbar", "must be positive");
    if (hbar) s.hbar = *hbar;
  }
  if (!root.contains("modes")) {
    issues.add("modes", "missing");
  } else if (const auto modes = read_count(root["modes"], "modes", issues)) {
    if (*modes < 1) {
      issues.add("modes", "must be at least 1");
    } else {
      s.modes = *modes;
    }
  }
  s.partition = ModePartition{s.modes, 0};
  if (root.contains("partition")) {
    const json& node = root["partition"];
    if (!node.is_array() || node.size() != 2) {
      issues.add("partition", "expected [n_A, n_B]");
    } else {
      const auto a = read_count(node[0], "partition[0]", issues);
      const auto b = read_count(node[1], "partition[1]", issues);
      if (a && b) {
        if (*a < 1) issues.add("partition[0]", "party A needs at least one mode");
        if (s.modes > 0 && *a + *b != s.modes) {
          issues.add("partition", "sums to " + std::to_string(*a + *b) + ", expected modes = " +
                                      std::to_string(s.modes));
        }
        s.partition = ModePartition{*a, *b};
      }
    }
  }
  if (root.contains("ordering")) s.layout = read_layout(root["ordering"], "ordering", issues);

  read_deformation(root, "theta", s.modes, s.theta, s.theta_scalar, issues);
  read_deformation(root, "eta", s.modes, s.eta, s.eta_scalar, issues);

  if (!root.contains("state")) {
    issues.add("state", "missing");
  } else {
    s.state = read_state(root["state"], s.modes, s.layout, issues);
  }
  if (root.contains("hamiltonian")) s.hamiltonian = read_hamiltonian(root["hamiltonian"], s.modes, issues);
  if (root.contains("bell")) s.bell = read_bell(root["bell"], issues);
  if (root.contains("times")) {
    if (const auto times = read_vector(root["times"], "times", issues)) {
      s.times.assign(times->data(), times->data() + times->size());
    }
  }
  if (!issues.empty()) throw ValidationError(issues.take());
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read scenario file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

NCParameters Scenario::parameters() const {
  NCParameters params;
  params.n_modes = modes;
  params.hbar = hbar;
  params.theta = theta;
  params.eta = eta;
  return params;
}

PhaseSpaceForm Scenario::omega() const { return build_omega(parameters(), partition, layout); }

PhaseSpaceForm Scenario::state_form() const {
  if (state.picture == Picture::commutative) return build_J(ordering(), hbar);
  return omega();
}

GaussianState Scenario::initial_state() const {
  const Ordering target = ordering();
  auto finish = [&](const GaussianState& g) { return g.reordered(target).with_picture(state.picture); };
  switch (state.kind) {
    case StateKind::vacuum:
      return finish(make_vacuum(target, hbar));
    case StateKind::thermal:
      return finish(make_thermal(state.occupations, target, hbar));
    case StateKind::two_mode_squeezed:
      return finish(make_two_mode_squeezed(state.r, hbar));
    case StateKind::explicit_moments:
      return finish(GaussianState(state.mean, state.cov, Picture::commutative,
                                  Ordering::of(state.layout, partition), hbar));
  }
  throw Error(ErrorCode::InvalidArgument, "unknown state kind");
}

QuadraticHamiltonian Scenario::quadratic_hamiltonian() const {
  if (!hamiltonian) throw ValidationError({"hamiltonian: required by this command"});
  QuadraticHamiltonian h{hamiltonian->G, hamiltonian->linear, ordering()};
  h.validate();
  return h;
}

}  // namespace ncphase::cli
