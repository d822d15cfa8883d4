// One line per acceptance criterion; exit status 0 only when every criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "config.hpp"
#include "fraclab/functionals.hpp"
#include "fraclab/io.hpp"
#include "fraclab/orders.hpp"
#include "fraclab/solver.hpp"
#include "fraclab/stability.hpp"
#include "pipeline.hpp"

namespace fs = std::filesystem;
using namespace fraclab;
using namespace fraclab::cli;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Run {
  std::string name;
  RunResult result;
  double seconds = 0.0;
  fs::path dir;

  const CheckRow* row(const std::string& check, const std::string& metric) const {
    for (const auto& r : result.rows)
      if (r.check == check && r.metric == metric) return &r;
    return nullptr;
  }
  std::vector<const CheckRow*> rows(const std::string& check) const {
    std::vector<const CheckRow*> out;
    for (const auto& r : result.rows)
      if (r.check == check) out.push_back(&r);
    return out;
  }
};

int worker_threads() { return std::max(1u, std::min(4u, std::thread::hardware_concurrency())); }

fs::path scratch_root() {
  static const fs::path root = [] {
    auto p = fs::temp_directory_path() / "fraclab_acceptance";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return root;
}

Run run_config(const ExperimentConfig& c, const std::string& name) {
  Run r;
  r.name = name;
  r.dir = scratch_root() / name;
  fs::remove_all(r.dir);
  std::ostringstream log;
  const auto t0 = Clock::now();
  r.result = run_experiment(c, r.dir.string(), worker_threads(), log);
  r.seconds = seconds_since(t0);
  return r;
}

const std::vector<std::string> shipped = {
    "pn_layer_s05",  "layer_s025",    "layer_s05",          "layer_s075",
    "radial_n2_s05", "coupled_m2_orientable", "symmetry_n2", "liouville_m2"};

std::map<std::string, Run>& runs() {
  static std::map<std::string, Run> cache;
  return cache;
}

const Run& shipped_run(const std::string& name) {
  auto& cache = runs();
  auto it = cache.find(name);
  if (it != cache.end()) return it->second;
  const auto c = load_config(std::string(FRACLAB_CONFIG_DIR) + "/" + name + ".cfg");
  return cache.emplace(name, run_config(c, name)).first->second;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

struct Verdict {
  bool pass = true;
  std::string detail;

  void need(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [FAIL]");
  }
  // a named row must exist and pass
  void row(const Run& r, const std::string& check, const std::string& metric,
           const std::string& label) {
    const CheckRow* x = r.row(check, metric);
    if (!x) {
      need(false, label + " missing");
      return;
    }
    need(x->status == "pass", label + " " + fmt(x->observed));
  }
  void all_rows(const Run& r, const std::string& check, const std::string& label) {
    const auto rows = r.rows(check);
    bool ok = !rows.empty();
    for (const auto* x : rows) ok = ok && (x->status == "pass" || x->status == "info");
    need(ok, label + " (" + r.name + ")");
  }
  void runtime(double s, double limit, const std::string& label) {
    need(s < limit, label + " " + fmt(s) + " s < " + fmt(limit) + " s");
  }
};

Verdict constants() {
  Verdict v;
  const auto t0 = Clock::now();
  // 40-digit reference values (tests/oracles/gamma_constants.py)
  const std::pair<double, double> refs[] = {
      {0.1, 0.19557356719531744193}, {0.2, 0.38438299689988675356}, {0.3, 0.5725404585683117331},
      {0.4, 0.77119461100066289916}, {0.5, 1.0},                    {0.6, 1.2966895589460238404},
      {0.7, 1.7466014585250251399},  {0.8, 2.6015718907057998922},  {0.9, 5.1131654156581886694}};
  double worst = 0.0;
  for (const auto& [s, d] : refs) worst = std::max(worst, std::abs(make_orders({s}).d[0] / d - 1));
  v.need(std::abs(make_orders({0.5}).d[0] - 1.0) <= 1e-12, "d_1/2 = 1");
  v.need(worst <= 1e-12, "max rel err " + fmt(worst));
  v.runtime(seconds_since(t0), 1.0, "runtime");
  return v;
}

Verdict extension_realizes_operator() {
  Verdict v;
  const auto c = parse_config(R"([orders]
s = 0.25, 0.5, 0.75

[nonlinearity]
label = placeholder
term = 0.5 monomial 2 0 0
term = 0.5 monomial 0 2 0
term = 0.5 monomial 0 0 2

[grid]
L = 10
Nx = 21
Y = 10
Ny = 10

[solver]
boundary = states
alpha = 0, 0, 0
beta = 0, 0, 0

[checks]
run = cross-validate
cross_k = 1 2
cross_tol = 1e-2
)",
                              "cross-validate");
  const auto r = run_config(c, "cross_validate");
  double dtn = 0.0, pv = 0.0;
  bool ok = r.result.rows.size() == 18;
  for (const auto& x : r.result.rows) {
    ok = ok && x.status == "pass";
    if (x.metric.rfind("dtn_vs_symbol", 0) == 0) dtn = std::max(dtn, x.observed);
    if (x.metric.rfind("pv_vs_spectral", 0) == 0) pv = std::max(pv, x.observed);
  }
  v.need(ok && dtn <= 1e-2, "DtN vs symbol max rel " + fmt(dtn));
  v.need(ok && pv <= 1e-2, "PV vs spectral max rel " + fmt(pv));
  v.runtime(r.seconds, 30.0, "runtime");
  return v;
}

Verdict exact_layer() {
  Verdict v;
  const auto& r = shipped_run("pn_layer_s05");
  v.row(r, "solve", "converged", "converged");
  v.row(r, "solve", "trace_sup_error_vs_exact", "trace sup-error");
  v.runtime(r.seconds, 60.0, "runtime");
  return v;
}

Verdict hamiltonian_identity() {
  Verdict v;
  const auto& r = shipped_run("pn_layer_s05");
  v.row(r, "hamiltonian", "sup_residual_corrected", "corrected residual");
  const CheckRow* printed = r.row("hamiltonian", "sup_residual_printed");
  const CheckRow* disc = r.row("hamiltonian", "sup_fiber_discrepancy");
  if (printed && disc)
    v.need(true, "printed/identity " + fmt(printed->observed / disc->observed));
  v.row(r, "hamiltonian", "printed_over_discrepancy_minus_2", "printed ratio - 2");
  v.row(r, "balance", "abs_H_alpha_minus_H_beta", "balance");
  return v;
}

Verdict energy_growth() {
  Verdict v;
  const auto& a = shipped_run("layer_s025");
  const auto& b = shipped_run("layer_s075");
  const auto& c = shipped_run("layer_s05");
  v.row(a, "energy-scan", "abs_exponent_minus_0.5", "s=0.25 |exp - 0.5|");
  v.row(b, "energy-scan", "exponent", "s=0.75 exponent");
  v.row(c, "energy-scan", "E_over_logR_variation", "s=0.5 E/logR variation");
  for (const Run* r : {&a, &b, &c}) v.runtime(r->seconds, 120.0, r->name);
  return v;
}

Verdict monotonicity_formula() {
  Verdict v;
  const auto& r = shipped_run("radial_n2_s05");
  v.row(r, "monotonicity", "H_nonpositive_certified", "H <= 0 certified");
  v.row(r, "monotonicity", "min_slope_over_max_abs_I", "min slope / max|I|");
  v.row(r, "pohozaev", "residual_over_dominant", "Pohozaev residual / dominant");
  return v;
}

Verdict radial_monotone_quantity() {
  Verdict v;
  const auto& r = shipped_run("radial_n2_s05");
  v.row(r, "radial-hamiltonian", "max_upward_slope_over_scale", "max upward slope / scale");
  v.row(r, "radial-hamiltonian", "identity_imbalance", "derivative identity imbalance");
  return v;
}

Verdict radial_structure() {
  Verdict v;
  const auto& r = shipped_run("radial_n2_s05");
  v.row(r, "structure", "abs_grad_H_at_0", "|grad H(0)|");
  v.row(r, "structure", "H_v00_minus_H_0", "H(v(0,0)) - H(0)");
  v.row(r, "structure", "sum_H_ij_at_0", "sum H_ij(0)");
  return v;
}

Verdict stability() {
  Verdict v;
  const auto& r = shipped_run("coupled_m2_orientable");
  v.row(r, "stability", "quadratic_gap", "gap");
  v.row(r, "spectrum", "smallest_eigenvalue", "smallest eigenvalue");
  v.row(r, "spectrum", "minimizer_one_signed", "one-signed minimizer");
  v.row(r, "stability", "poincare_reduction_slack", "Poincare slack");
  return v;
}

Verdict quotient_machinery() {
  Verdict v;
  for (const char* name : {"pn_layer_s05", "coupled_m2_orientable"}) {
    const auto& r = shipped_run(name);
    v.all_rows(r, "sigma", "sigma variance and residuals");
    v.row(r, "growth", "hypothesis_satisfied_log", std::string("F = log satisfied (") + name + ")");
    v.row(r, "growth", "probe_power(1)_refused", std::string("power(1) refused (") + name + ")");
  }
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> U(-2, 2);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const int m = 2 + t % 7;
    std::vector<double> sigma(m);
    std::vector<std::vector<double>> h(m, std::vector<double>(m));
    for (auto& x : sigma) x = U(rng);
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j) h[i][j] = h[j][i] = U(rng);
    for (auto f : {OddFunction::identity, OddFunction::cube}) {
      const auto k = k_term(sigma, h, f);
      worst = std::max(worst, std::abs(k.lhs - k.rhs) / std::max(1.0, k.scale));
    }
  }
  v.need(worst <= 1e-12, "K-term identity worst " + fmt(worst));
  return v;
}

Verdict energy_bound_and_dichotomy() {
  Verdict v;
  int applicable = 0, dichotomy_runs = 0;
  bool be_ok = true, di_ok = true;
  for (const auto& name : shipped) {
    const auto& r = shipped_run(name);
    for (const auto* x : r.rows("bounded-energy")) {
      if (x->status == "n/a") continue;
      ++applicable;
      be_ok = be_ok && x->status == "pass";
    }
    const auto d = r.rows("dichotomy");
    if (!d.empty()) ++dichotomy_runs;
    for (const auto* x : d) di_ok = di_ok && x->status == "pass";
  }
  v.need(applicable > 0 && be_ok, "bounded-energy on " + std::to_string(applicable) +
                                      " grad H >= 0 components");
  v.need(dichotomy_runs > 0 && di_ok,
         "dichotomy flat-or-one-signed on " + std::to_string(dichotomy_runs) + " runs");
  return v;
}

Verdict symmetry() {
  Verdict v;
  const auto t0 = Clock::now();
  const auto c = load_config(std::string(FRACLAB_CONFIG_DIR) + "/symmetry_n2.cfg");
  const auto orders = std::make_shared<const FractionalOrders>(make_orders(c.s));
  // synthetic: a converged 1-D layer rotated onto the 2-D boundary at 45 degrees
  const double th = std::numbers::pi / 4;
  auto g2 = std::make_shared<const HalfSpaceGrid>(
      build_grid(c.L, c.nx, c.Y, c.ny, c.grading, false, 1, 2));
  const double h1 = 0.5 * g2->h;
  const int half = static_cast<int>(std::ceil((std::sqrt(2.0) * c.L + h1) / h1));
  auto g1 = std::make_shared<const HalfSpaceGrid>(build_grid(half * h1, 2 * half + 1, c.Y, c.ny, c.grading));
  auto [line, rep] = solve_coupled(g1, orders, c.H, BoundaryData::states(c.alpha, c.beta),
                                   tanh_profile(g1, orders, c.alpha, c.beta), c.solver);
  v.need(rep.converged, "1-D layer converged");
  const auto sd = symmetry_diagnostic(rotate_layer(line, g2, th));
  double angle = 0.0, aniso = 0.0;
  for (size_t i = 0; i < sd.direction.size(); ++i) {
    const double dot = std::abs(sd.direction[i][0] * std::cos(th) + sd.direction[i][1] * std::sin(th));
    angle = std::max(angle, std::acos(std::min(1.0, dot)));
    aniso = std::max(aniso, sd.anisotropy[i]);
  }
  v.need(angle <= 1e-6, "synthetic angular error " + fmt(angle));
  v.need(aniso <= 1e-10, "synthetic anisotropy " + fmt(aniso));
  const auto& r = shipped_run("symmetry_n2");
  v.row(r, "solve", "converged", "symmetry_n2 converged");
  v.all_rows(r, "symmetry", "symmetry_n2 anisotropy <= 5e-2");
  v.runtime(seconds_since(t0) + r.seconds, 300.0, "runtime");
  return v;
}

Verdict determinism() {
  Verdict v;
  int files = 0;
  std::vector<std::string> differing;
  for (const auto& name : shipped) {
    const auto& first = shipped_run(name);
    const auto c = load_config(std::string(FRACLAB_CONFIG_DIR) + "/" + name + ".cfg");
    const auto again = run_config(c, name + "_rerun");
    for (const auto& e : fs::directory_iterator(first.dir)) {
      if (e.path().extension() != ".csv") continue;
      ++files;
      const auto other = again.dir / e.path().filename();
      if (!fs::exists(other) || read_file(e.path().string()) != read_file(other.string()))
        differing.push_back(name + "/" + e.path().filename().string());
    }
  }
  std::string list;
  for (const auto& d : differing) list += " " + d;
  v.need(differing.empty() && files > 0,
         std::to_string(files) + " CSV files compared across " + std::to_string(shipped.size()) +
             " configs" + (differing.empty() ? "" : ", differing:" + list));
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"constants", constants},
      {"extension realizes the operator", extension_realizes_operator},
      {"exact-layer solve", exact_layer},
      {"Hamiltonian identity", hamiltonian_identity},
      {"energy growth", energy_growth},
      {"monotonicity formula", monotonicity_formula},
      {"radial monotone quantity", radial_monotone_quantity},
      {"radial structure", radial_structure},
      {"stability", stability},
      {"quotient and Liouville machinery", quotient_machinery},
      {"energy bound and dichotomy", energy_bound_and_dichotomy},
      {"symmetry diagnostic", symmetry},
      {"determinism", determinism},
  };
  int failed = 0;
  for (size_t k = 0; k < criteria.size(); ++k) {
    Verdict v;
    try {
      v = criteria[k].second();
    } catch (const std::exception& e) {
      v.need(false, std::string("threw: ") + e.what());
    }
    failed += v.pass ? 0 : 1;
    std::printf("%s criterion %2zu %s: %s\n", v.pass ? "PASS" : "FAIL", k + 1,
                criteria[k].first.c_str(), v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria pass\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
