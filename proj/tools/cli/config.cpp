#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "fraclab/error.hpp"
#include "fraclab/grid.hpp"
#include "fraclab/io.hpp"
#include "fraclab/orders.hpp"

namespace fraclab::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::string t = s;
  std::replace(t.begin(), t.end(), ',', ' ');
  std::istringstream in(t);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

[[noreturn]] void bad(const std::string& key, const std::string& why) {
  fail(ErrorKind::malformed_input, "config: " + key + ": " + why);
}

double to_number(const std::string& key, const std::string& v) {
  try {
    return parse_double(v);
  } catch (const std::exception&) {
    bad(key, "expected a number, got '" + v + "'");
  }
}

int to_int(const std::string& key, const std::string& v) {
  const double x = to_number(key, v);
  if (x != std::floor(x) || std::abs(x) > 1e9) bad(key, "expected an integer, got '" + v + "'");
  return static_cast<int>(x);
}

std::vector<double> to_numbers(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& w : split_list(v)) out.push_back(to_number(key, w));
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "on" || v == "true" || v == "yes" || v == "1") return true;
  if (v == "off" || v == "false" || v == "no" || v == "0") return false;
  bad(key, "expected on/off, got '" + v + "'");
}

// [checks] parameters: key -> expected shape
const std::map<std::string, std::string>& check_keys() {
  static const std::map<std::string, std::string> k = {
      {"window", "number"},          {"tail", "word"},
      {"hamiltonian_tol", "number"}, {"balance_tol", "number"},
      {"trace_tol", "number"},       {"energy_R", "numbers"},
      {"energy_mode", "word"},       {"energy_exponent", "number"},
      {"energy_tolerance", "number"}, {"monotonicity_R", "numbers"},
      {"pohozaev_R", "number"},      {"pohozaev_tol", "number"},
      {"identity_tol", "number"},    {"stability_tol", "number"},
      {"sigma_tol", "number"},       {"growth_R", "numbers"},
      {"growth_F", "word"},          {"growth_probe", "word"},
      {"bounded_R", "numbers"},      {"bounded_margin", "number"},
      {"symmetry_tol", "number"},    {"cross_k", "numbers"},
      {"cross_tol", "number"},       {"decay_R", "number"},
  };
  return k;
}

}  // namespace

const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> c = {
      "solve",     "hamiltonian", "radial-hamiltonian", "monotonicity", "energy-scan",
      "pohozaev",  "stability",   "spectrum",           "sigma",        "growth",
      "decay",     "symmetry",    "structure",          "balance",      "dichotomy",
      "cross-validate", "bounded-energy", "orientability", "h-monotone"};
  return c;
}

double ExperimentConfig::number(const std::string& key) const {
  return to_number("checks." + key, params.at(key));
}
std::vector<double> ExperimentConfig::numbers(const std::string& key) const {
  return to_numbers("checks." + key, params.at(key));
}
std::string ExperimentConfig::word(const std::string& key) const { return params.at(key); }

ExperimentConfig parse_config(const std::string& text, const std::string& path) {
  ExperimentConfig c;
  c.path = path;
  c.text = text;
  static const std::map<std::string, std::set<std::string>> schema = {
      {"orders", {"s"}},
      {"nonlinearity", {"label", "term"}},
      {"grid", {"L", "Nx", "Y", "Ny", "grading", "radial", "ambient_n", "boundary_dim"}},
      {"solver",
       {"newton_tol", "newton_max", "krylov_tol", "krylov_max", "damping", "linear", "boundary",
        "alpha", "beta", "top", "initial", "direction_deg"}},
      {"checks", {}},
      {"output", {"dir", "snapshot"}},
  };
  std::string section;
  std::map<std::string, std::string> seen;  // section.key -> value
  std::vector<std::string> terms;
  std::istringstream in(text);
  int lineno = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++lineno;
    std::string line = raw;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(lineno);
    if (line.front() == '[') {
      if (line.back() != ']') bad(where, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!schema.count(section)) bad(where, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) bad(where, "expected key = value");
    if (section.empty()) bad(where, "key outside of any section");
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    const std::string full = section + "." + key;
    if (value.empty()) bad(full, "empty value");
    if (section == "checks") {
      if (key != "run" && !check_keys().count(key)) bad(full, "unknown key");
    } else if (!schema.at(section).count(key)) {
      bad(full, "unknown key");
    }
    if (full == "nonlinearity.term") {
      terms.push_back(value);
      continue;
    }
    if (seen.count(full)) bad(full, "duplicate key");
    seen[full] = value;
  }
  auto get = [&](const std::string& k) -> const std::string* {
    auto it = seen.find(k);
    return it == seen.end() ? nullptr : &it->second;
  };
  auto need = [&](const std::string& k) -> const std::string& {
    const auto* v = get(k);
    if (!v) bad(k, "missing required key");
    return *v;
  };

  // [orders]
  c.s = to_numbers("orders.s", need("orders.s"));
  try {
    make_orders(c.s);
  } catch (const Error& e) {
    bad("orders.s", e.what());
  }
  const int m = static_cast<int>(c.s.size());

  // [nonlinearity]
  if (const auto* v = get("nonlinearity.label")) c.label = *v;
  if (terms.empty()) bad("nonlinearity.term", "at least one term is required");
  c.H.m = m;
  for (const auto& t : terms) {
    try {
      c.H.add(parse_term(t, m));
    } catch (const Error& e) {
      bad("nonlinearity.term", e.what());
    }
  }
  c.H.description = c.label;

  // [grid]
  c.L = to_number("grid.L", need("grid.L"));
  c.Y = to_number("grid.Y", need("grid.Y"));
  c.nx = to_int("grid.Nx", need("grid.Nx"));
  c.ny = to_int("grid.Ny", need("grid.Ny"));
  if (const auto* v = get("grid.grading")) c.grading = to_number("grid.grading", *v);
  if (const auto* v = get("grid.radial")) c.radial = to_bool("grid.radial", *v);
  if (const auto* v = get("grid.ambient_n")) c.ambient_n = to_int("grid.ambient_n", *v);
  if (const auto* v = get("grid.boundary_dim")) c.boundary_dim = to_int("grid.boundary_dim", *v);
  if (c.radial && c.ambient_n < 2) bad("grid.ambient_n", "radial grids need ambient_n >= 2");
  if (!c.radial && c.ambient_n != 1) bad("grid.ambient_n", "slab grids have ambient_n = 1");
  if (c.boundary_dim != 1 && c.boundary_dim != 2) bad("grid.boundary_dim", "must be 1 or 2");
  if (c.radial && c.boundary_dim != 1) bad("grid.boundary_dim", "radial grids are 1-D");
  try {
    build_grid(c.L, c.nx, c.Y, c.ny, c.grading, c.radial, c.ambient_n, c.boundary_dim);
  } catch (const Error& e) {
    bad("grid", e.what());
  }

  // [solver]
  if (const auto* v = get("solver.newton_tol")) c.solver.newton_tol = to_number("solver.newton_tol", *v);
  if (const auto* v = get("solver.newton_max")) c.solver.newton_max = to_int("solver.newton_max", *v);
  if (const auto* v = get("solver.krylov_tol")) c.solver.krylov_tol = to_number("solver.krylov_tol", *v);
  if (const auto* v = get("solver.krylov_max")) c.solver.krylov_max = to_int("solver.krylov_max", *v);
  if (const auto* v = get("solver.damping")) c.solver.damping = to_bool("solver.damping", *v);
  if (!(c.solver.newton_tol > 0)) bad("solver.newton_tol", "must be positive");
  if (c.solver.newton_max < 1) bad("solver.newton_max", "must be at least 1");
  if (!(c.solver.krylov_tol > 0)) bad("solver.krylov_tol", "must be positive");
  if (c.solver.krylov_max < 1) bad("solver.krylov_max", "must be at least 1");
  if (const auto* v = get("solver.linear")) {
    if (*v == "auto") c.solver.linear = LinearSolver::automatic;
    else if (*v == "direct") c.solver.linear = LinearSolver::direct;
    else if (*v == "cg") c.solver.linear = LinearSolver::cg;
    else bad("solver.linear", "expected auto, direct or cg");
  }
  if (const auto* v = get("solver.boundary")) c.boundary = *v;
  static const std::set<std::string> kinds = {"states", "step",     "pn-exact",
                                              "periodic", "constant", "layer1d"};
  if (!kinds.count(c.boundary)) bad("solver.boundary", "unknown boundary kind '" + c.boundary + "'");
  if (const auto* v = get("solver.top")) {
    if (*v == "neumann") c.top = TopBC::neumann;
    else if (*v == "dirichlet") c.top = TopBC::dirichlet;
    else bad("solver.top", "expected neumann or dirichlet");
  }
  if (c.boundary != "periodic") {
    c.alpha = to_numbers("solver.alpha", need("solver.alpha"));
    if (static_cast<int>(c.alpha.size()) != m) bad("solver.alpha", "needs one value per component");
    if (c.boundary == "constant") {
      if (get("solver.beta")) bad("solver.beta", "not used with a constant far field");
      c.beta = c.alpha;
    } else {
      c.beta = to_numbers("solver.beta", need("solver.beta"));
      if (static_cast<int>(c.beta.size()) != m) bad("solver.beta", "needs one value per component");
    }
  }
  if (c.boundary == "pn-exact")
    for (double s : c.s)
      if (s != 0.5) bad("solver.boundary", "pn-exact data is the s = 1/2 layer");
  if (c.boundary == "states" && c.top == TopBC::dirichlet)
    bad("solver.top", "states boundary prescribes lateral values only");
  if (c.boundary == "periodic" && c.radial) bad("solver.boundary", "periodic needs a slab grid");
  if (c.boundary == "periodic" && c.top == TopBC::dirichlet)
    bad("solver.top", "periodic runs have a Neumann top");
  if (c.radial != (c.boundary == "constant"))
    bad("solver.boundary", "radial grids use a constant far field and only they do");
  if ((c.boundary == "layer1d") != (c.boundary_dim == 2))
    bad("solver.boundary", "layer1d is the boundary kind of 2-D boundary grids");
  if (const auto* v = get("solver.direction_deg")) c.direction_deg = to_number("solver.direction_deg", *v);
  if (const auto* v = get("solver.initial")) {
    auto w = split_list(*v);
    c.initial = w.front();
    for (size_t k = 1; k < w.size(); ++k) c.initial_args.push_back(to_number("solver.initial", w[k]));
  }
  const size_t want = c.initial == "tanh" || c.initial == "boundary" ? 0
                      : c.initial == "constant"                      ? static_cast<size_t>(m)
                      : c.initial == "bump"                          ? 2
                                                                     : 99;
  if (want == 99) bad("solver.initial", "unknown initial guess '" + c.initial + "'");
  if (c.initial_args.size() != want) bad("solver.initial", "wrong number of arguments");
  if (c.initial == "tanh" && c.boundary == "periodic")
    bad("solver.initial", "tanh needs limit states");

  // [checks]
  if (const auto* v = get("checks.run")) c.checks = split_list(*v);
  if (c.checks.empty()) bad("checks.run", "no checks listed");
  for (const auto& k : c.checks)
    if (std::find(known_checks().begin(), known_checks().end(), k) == known_checks().end())
      bad("checks.run", "unknown check '" + k + "'");
  for (const auto& [full, value] : seen) {
    if (full.rfind("checks.", 0) != 0 || full == "checks.run") continue;
    const std::string key = full.substr(7);
    const auto& shape = check_keys().at(key);
    if (shape == "number") to_number(full, value);
    if (shape == "numbers") to_numbers(full, value);
    c.params[key] = value;
  }
  if (c.has("tail") && c.params["tail"] != "none" && c.params["tail"] != "power_law")
    bad("checks.tail", "expected none or power_law");

  // [output]
  if (const auto* v = get("output.dir")) c.out_dir = *v;
  if (const auto* v = get("output.snapshot")) c.snapshot = to_bool("output.snapshot", *v);
  return c;
}

ExperimentConfig load_config(const std::string& path) { return parse_config(read_file(path), path); }

}  // namespace fraclab::cli
