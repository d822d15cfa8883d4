#include "pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <map>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include <Eigen/Core>
#include <boost/version.hpp>
#include <json.hpp>

#include "fraclab/error.hpp"
#include "fraclab/fractional.hpp"
#include "fraclab/functionals.hpp"
#include "fraclab/io.hpp"
#include "fraclab/orders.hpp"
#include "fraclab/stability.hpp"

namespace fraclab::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* version = "0.1.0";

struct CheckOutput {
  std::vector<CheckRow> rows;
  std::vector<Artifact> files;

  void add(std::string check, std::string metric, std::string rel, double thr, double obs,
           std::string note = {}) {
    bool ok = false;
    if (rel == "<=") ok = obs <= thr;
    else if (rel == ">=") ok = obs >= thr;
    else if (rel == "<") ok = obs < thr;
    rows.push_back({std::move(check), std::move(metric), rel, thr, obs,
                    rel == "info" ? "info" : (ok ? "pass" : "fail"), std::move(note)});
  }
  void flag(std::string check, std::string metric, bool ok, std::string note = {}) {
    rows.push_back({std::move(check), std::move(metric), "flag", 1.0, ok ? 1.0 : 0.0,
                    ok ? "pass" : "fail", std::move(note)});
  }
  void na(std::string check, std::string metric, double obs, std::string note) {
    rows.push_back({std::move(check), std::move(metric), "info", 0.0, obs, "n/a", std::move(note)});
  }
};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// R list given as "min max count": geometric when geometric = true, else linear
std::vector<double> radius_list(const std::vector<double>& spec, bool geometric,
                                const std::string& key) {
  require(spec.size() == 3 && spec[2] >= 2 && spec[2] == std::floor(spec[2]) && spec[0] > 0 &&
              spec[1] > spec[0],
          ErrorKind::malformed_input, "config: checks." + key + ": expected 'min max count'");
  const int n = static_cast<int>(spec[2]);
  std::vector<double> r;
  for (int k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / (n - 1);
    r.push_back(geometric ? spec[0] * std::pow(spec[1] / spec[0], t)
                          : spec[0] + t * (spec[1] - spec[0]));
  }
  return r;
}

struct Setup {
  std::shared_ptr<const HalfSpaceGrid> grid;
  std::shared_ptr<const FractionalOrders> orders;
  BoundaryData bc;
  FieldSet initial;
  std::optional<FieldSet> exact;  // closed-form solution when one is known
};

Setup build_setup(const ExperimentConfig& c, const SolverOptions& opt, std::ostream& log) {
  Setup st;
  st.grid = std::make_shared<const HalfSpaceGrid>(
      build_grid(c.L, c.nx, c.Y, c.ny, c.grading, c.radial, c.ambient_n, c.boundary_dim));
  st.orders = std::make_shared<const FractionalOrders>(make_orders(c.s));
  std::optional<FieldSet> far;
  const auto& b = c.boundary;
  if (b == "states") {
    st.bc = BoundaryData::states(c.alpha, c.beta, TopBC::neumann);
  } else if (b == "periodic") {
    st.bc = BoundaryData::periodic(c.top);
  } else {
    if (b == "step") far = step_field(st.grid, st.orders, c.alpha, c.beta);
    if (b == "pn-exact") {
      far = pn_exact_field(st.grid, st.orders, c.alpha, c.beta);
      st.exact = far;
    }
    if (b == "constant") {
      far = make_field(st.grid, st.orders, 0.0);
      for (int i = 0; i < far->m(); ++i)
        std::fill(far->values[i].begin(), far->values[i].end(), c.alpha[i]);
    }
    if (b == "layer1d") {
      const double th = c.direction_deg * std::numbers::pi / 180.0;
      const double h1 = 0.5 * st.grid->h;
      const double need = (std::abs(std::cos(th)) + std::abs(std::sin(th))) * c.L + h1;
      const int half = static_cast<int>(std::ceil(need / h1));
      auto g1 = std::make_shared<const HalfSpaceGrid>(
          build_grid(half * h1, 2 * half + 1, c.Y, c.ny, c.grading));
      auto [line, rep] = solve_coupled(g1, st.orders, c.H, BoundaryData::states(c.alpha, c.beta),
                                       tanh_profile(g1, st.orders, c.alpha, c.beta), opt);
      log << "layer1d: line solve " << (rep.converged ? "converged" : "did not converge")
          << " in " << rep.outer_iterations << " iterations\n";
      require(rep.converged, ErrorKind::hypothesis_violated,
              "layer1d: the 1-D layer used as boundary data did not converge");
      far = rotate_layer(line, st.grid, th);
    }
    st.bc = BoundaryData::prescribed(*far, c.top);
  }
  if (c.initial == "tanh") {
    st.initial = tanh_profile(st.grid, st.orders, c.alpha, c.beta);
  } else if (c.initial == "boundary") {
    st.initial = far ? *far : tanh_profile(st.grid, st.orders, c.alpha, c.beta);
  } else if (c.initial == "constant") {
    st.initial = make_field(st.grid, st.orders, 0.0);
    for (int i = 0; i < st.initial.m(); ++i)
      std::fill(st.initial.values[i].begin(), st.initial.values[i].end(), c.initial_args[i]);
  } else {
    st.initial = bump_profile(st.grid, st.orders, c.alpha, c.initial_args[0], c.initial_args[1]);
  }
  return st;
}

std::string param(const ExperimentConfig& c, const std::string& key, const std::string& dflt) {
  return c.has(key) ? c.word(key) : dflt;
}
double param_number(const ExperimentConfig& c, const std::string& key, double dflt) {
  return c.has(key) ? c.number(key) : dflt;
}
std::vector<double> param_numbers(const ExperimentConfig& c, const std::string& key,
                                  std::vector<double> dflt) {
  return c.has(key) ? c.numbers(key) : dflt;
}

FiberTail tail_of(const ExperimentConfig& c) {
  return param(c, "tail", "none") == "power_law" ? FiberTail::power_law : FiberTail::none;
}

std::vector<std::string> column_names(const std::string& stem, int m) {
  std::vector<std::string> out;
  for (int i = 0; i < m; ++i) out.push_back(stem + "_" + std::to_string(i));
  return out;
}

std::string trace_csv(const FieldSet& v) {
  const auto& g = *v.grid;
  CsvTable t;
  if (g.boundary_dim == 1) {
    t.columns = {g.radial ? "r" : "x"};
  } else {
    t.columns = {"x1", "x2"};
  }
  for (const auto& n : column_names("u", v.m())) t.columns.push_back(n);
  for (int p = 0; p < g.row_size(); ++p) {
    std::vector<double> row;
    if (g.boundary_dim == 1) {
      row.push_back(g.x[p]);
    } else {
      row.push_back(g.x[p % g.nx]);
      row.push_back(g.x[p / g.nx]);
    }
    for (int i = 0; i < v.m(); ++i) row.push_back(v.values[i][p]);
    t.rows.push_back(std::move(row));
  }
  return t.str();
}

std::vector<std::vector<double>> derivative_fields(const FieldSet& v) {
  std::vector<std::vector<double>> d;
  for (int i = 0; i < v.m(); ++i) d.push_back(x_derivative(*v.grid, v.values[i]));
  return d;
}

using CheckFn = std::function<void(CheckOutput&)>;

void cross_validate_check(const ExperimentConfig& c, CheckOutput& o);
void run_parallel(std::vector<std::pair<std::string, CheckFn>>& jobs,
                  std::vector<CheckOutput>& results, int threads);

// Runs the requested checks other than solve; the closures borrow this frame.
std::vector<CheckOutput> run_checks(const ExperimentConfig& c, const Setup* setup,
                                    const FieldSet* field, int threads) {
  std::map<std::string, CheckFn> k;
  k["cross-validate"] = [&](CheckOutput& o) { cross_validate_check(c, o); };
  std::vector<std::pair<std::string, CheckFn>> jobs;
  std::vector<CheckOutput> results;
  if (!field) {
    for (const auto& name : c.checks)
      if (name == "cross-validate") jobs.emplace_back(name, k.at(name));
    run_parallel(jobs, results, threads);
    return results;
  }
  const Setup& st = *setup;
  const FieldSet& v = *field;
  const auto& H = c.H;
  const auto& g = *st.grid;
  const int m = v.m();

  k["hamiltonian"] = [&](CheckOutput& o) {
    const auto hp = hamiltonian_profile(v, H, c.alpha, tail_of(c), param_number(c, "window", 0.6));
    o.add("hamiltonian", "sup_residual_corrected", "<=", param_number(c, "hamiltonian_tol", 1e-3),
          hp.sup_corrected);
    o.add("hamiltonian", "sup_residual_printed", "info", 0.0, hp.sup_printed,
          "identity as printed, sign of the potential gap flipped");
    o.add("hamiltonian", "sup_fiber_discrepancy", "info", 0.0, hp.sup_w);
    const double ratio = hp.sup_w > 0 ? hp.sup_printed / hp.sup_w : NAN;
    o.add("hamiltonian", "printed_over_discrepancy_minus_2", "<=", 0.1, std::abs(ratio - 2.0),
          "printed-sign residual ~ 2 x identity magnitude");
    o.add("hamiltonian", "derivative_relation", "info", 0.0, hp.derivative_relation);
    CsvTable t;
    t.comments = {"hamiltonian profile: w = sum (1/2) int y^a (v_x^2 - v_y^2) dy"};
    t.columns = {"x", "w", "gap", "residual_corrected", "residual_printed"};
    for (size_t j = 0; j < hp.x.size(); ++j)
      t.rows.push_back({hp.x[j], hp.w[j], hp.gap[j], hp.residual_corrected[j], hp.residual_printed[j]});
    o.files.push_back({"hamiltonian.csv", t.str()});
  };

  k["balance"] = [&](CheckOutput& o) {
    const double gap = std::abs(H.value(c.alpha.data()) - H.value(c.beta.data()));
    o.add("balance", "abs_H_alpha_minus_H_beta", "<=", param_number(c, "balance_tol", 1e-3), gap);
  };

  k["radial-hamiltonian"] = [&](CheckOutput& o) {
    const auto rh = radial_hamiltonian(v, H, tail_of(c));
    const double sc = rh.scale > 0 ? rh.scale : 1.0;
    o.add("radial-hamiltonian", "max_upward_slope_over_scale", "<=", 1e-6,
          rh.max_upward_slope / sc);
    o.add("radial-hamiltonian", "identity_imbalance", "<=", param_number(c, "identity_tol", 2e-2),
          rh.identity_imbalance);
    o.add("radial-hamiltonian", "printed_max_upward_slope_over_scale", "info", 0.0,
          rh.max_upward_slope_printed / sc);
    o.add("radial-hamiltonian", "identity_imbalance_alt", "info", 0.0, rh.identity_imbalance_alt,
          "with (2/d) H in place of 2 d H");
    CsvTable t;
    t.columns = {"r", "curve", "curve_printed", "curve_alt"};
    for (size_t j = 0; j < rh.r.size(); ++j)
      t.rows.push_back({rh.r[j], rh.curve[j], rh.curve_printed[j], rh.curve_alt[j]});
    o.files.push_back({"radial_hamiltonian.csv", t.str()});
  };

  k["monotonicity"] = [&](CheckOutput& o) {
    const auto R = radius_list(param_numbers(c, "monotonicity_R", {1, 10, 19}), false, "monotonicity_R");
    const auto mc = monotonicity_curve(v, H, R);
    o.flag("monotonicity", "H_nonpositive_certified", mc.applicable,
           "worst sampled H = " + format_double(mc.certificate_worst));
    const double sc = mc.max_abs_I > 0 ? mc.max_abs_I : 1.0;
    o.add("monotonicity", "min_slope_over_max_abs_I", ">=", -1e-6, mc.min_slope / sc);
    const double mid = R[R.size() / 2];
    const auto bal = monotonicity_balance(v, H, mid, 0.5 * (R[1] - R[0]));
    o.add("monotonicity", "derivative_balance", "<=", param_number(c, "identity_tol", 2e-2),
          bal.imbalance, "at R = " + format_double(mid));
    CsvTable t;
    t.columns = {"R", "I", "slope"};
    for (size_t j = 0; j < mc.R.size(); ++j) t.rows.push_back({mc.R[j], mc.I[j], mc.slope[j]});
    o.files.push_back({"monotonicity.csv", t.str()});
  };

  k["energy-scan"] = [&](CheckOutput& o) {
    const auto R = radius_list(param_numbers(c, "energy_R", {10, 100, 11}), true, "energy_R");
    const auto ep = energy_scan(v, H, R);
    const std::string mode = param(c, "energy_mode", "exponent");
    const double target = param_number(c, "energy_exponent", 0.0);
    const double tol = param_number(c, "energy_tolerance", 0.1);
    if (mode == "exponent") {
      o.add("energy-scan", "abs_exponent_minus_" + format_double(target), "<=", tol,
            std::abs(ep.exponent - target), "fitted exponent " + format_double(ep.exponent));
    } else if (mode == "at_most") {
      o.add("energy-scan", "exponent", "<=", target, ep.exponent);
    } else if (mode == "log") {
      o.add("energy-scan", "E_over_logR_variation", "<=", tol, ep.log_ratio_variation);
    } else {
      fail(ErrorKind::malformed_input, "config: checks.energy_mode: expected exponent, at_most or log");
    }
    if (mode != "at_most") o.add("energy-scan", "exponent", "info", 0.0, ep.exponent);
    o.add("energy-scan", "fit_residual", "info", 0.0, ep.fit_residual);
    CsvTable t;
    t.columns = {"R", "E"};
    for (size_t j = 0; j < ep.R.size(); ++j) t.rows.push_back({ep.R[j], ep.E[j]});
    o.files.push_back({"energy.csv", t.str()});
  };

  k["pohozaev"] = [&](CheckOutput& o) {
    const double R = param_number(c, "pohozaev_R", 5.0);
    const auto pz = pohozaev_residual(v, H, R);
    o.add("pohozaev", "residual_over_dominant", "<=", param_number(c, "pohozaev_tol", 0.03),
          pz.dominant > 0 ? std::abs(pz.residual) / pz.dominant : 0.0, "at R = " + format_double(R));
    CsvTable t;
    t.columns = {"R", "sphere_normal", "sphere_gradient", "bulk", "potential_bulk",
                 "potential_sphere", "residual"};
    t.rows.push_back({R, pz.sphere_normal, pz.sphere_gradient, pz.bulk, pz.potential_bulk,
                      pz.potential_sphere, pz.residual});
    o.files.push_back({"pohozaev.csv", t.str()});
  };

  k["stability"] = [&](CheckOutput& o) {
    const double tol = param_number(c, "stability_tol", 1e-6);
    const auto orient = check_orientability(H, trace_range(v));
    const auto fam = default_family(v, orient.orientable ? orient.theta : std::vector<int>{});
    const auto rep = stability_gap(v, H, fam);
    o.add("stability", "quadratic_gap", ">=", -tol, rep.quadratic_gap, "minimizer " + rep.family);
    CsvTable t;
    for (size_t j = 0; j < fam.size(); ++j) t.comments.push_back(std::to_string(j) + ": " + fam[j].id);
    t.columns = {"test", "gap"};
    for (size_t j = 0; j < rep.gaps.size(); ++j) t.rows.push_back({double(j), rep.gaps[j]});
    o.files.push_back({"stability_gaps.csv", t.str()});
    if (g.boundary_dim == 1 && g.measure_dim() == 1) {
      const auto pr = poincare_reduction(v, H, cutoff_scales(g));
      o.add("stability", "poincare_reduction_slack", ">=", -tol, pr.slack,
            std::to_string(pr.tested) + " scale assignments");
    }
    o.files.push_back({"stability.json", to_json_text(rep) + "\n"});
  };

  k["spectrum"] = [&](CheckOutput& o) {
    const double tol = param_number(c, "stability_tol", 1e-6);
    const auto rep = linearized_spectrum(v, H);
    o.add("spectrum", "smallest_eigenvalue", ">=", -tol, rep.smallest_eigenvalue);
    o.flag("spectrum", "minimizer_one_signed", rep.eigenvector_sign_consistent);
    o.add("spectrum", "iterations", "info", 0.0, rep.eigen_iterations,
          rep.eigen_converged ? "converged" : "iteration cap reached");
    CsvTable t;
    t.columns = {"index", "eigenvalue"};
    for (size_t j = 0; j < rep.eigenvalues.size(); ++j) t.rows.push_back({double(j), rep.eigenvalues[j]});
    o.files.push_back({"spectrum.csv", t.str()});
    o.files.push_back({"spectrum.json", to_json_text(rep) + "\n"});
  };

  auto derivative_pair = [&]() {
    FieldSet phi = v;
    phi.values = derivative_fields(v);
    return phi;
  };

  k["sigma"] = [&](CheckOutput& o) {
    const double tol = param_number(c, "sigma_tol", 1e-8);
    const auto phi = derivative_pair();
    try {
      const auto sr = sigma_residual(v, H, phi, phi);
      for (int i = 0; i < m; ++i) {
        const std::string s = std::to_string(i);
        const double sc = sr.scale[i] > 0 ? sr.scale[i] : 1.0;
        o.add("sigma", "variance_" + s, "<=", tol, sr.variance[i]);
        o.add("sigma", "interior_residual_" + s, "<=", tol, sr.interior[i] / sc);
        o.add("sigma", "boundary_residual_" + s, "<=", tol, sr.boundary[i] / sc);
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::hypothesis_violated) throw;
      o.flag("sigma", "phi_nonvanishing", false, e.what());
    }
  };

  k["growth"] = [&](CheckOutput& o) {
    const auto phi = derivative_pair();
    FieldSet sigma = v;
    for (auto& col : sigma.values) std::fill(col.begin(), col.end(), 1.0);
    const double top = 0.9 * std::min(g.L, g.Y);
    const auto R = radius_list(param_numbers(c, "growth_R", {2, top, 12}), true, "growth_R");
    const auto F = parse_growth(param(c, "growth_F", "log"));
    const auto curve = liouville_growth(sigma, phi, F, R);
    o.flag("growth", "hypothesis_satisfied_" + F.str(), curve.hypothesis_satisfied,
           "sup " + format_double(curve.sup));
    if (c.has("growth_probe")) {
      const auto probe = parse_growth(c.word("growth_probe"));
      bool refused = false;
      std::string note = "accepted";
      try {
        require_growth_class(probe);
      } catch (const Error& e) {
        refused = e.kind() == ErrorKind::class_violation;
        note = e.what();
      }
      o.flag("growth", "probe_" + probe.str() + "_refused", refused, note);
    }
    CsvTable t;
    t.columns = {"R", "value"};
    for (size_t j = 0; j < curve.R.size(); ++j) t.rows.push_back({curve.R[j], curve.value[j]});
    o.files.push_back({"growth.csv", t.str()});
  };

  k["decay"] = [&](CheckOutput& o) {
    const auto dr = decay_checks(v, tail_of(c));
    o.flag("decay", "fiber_energy_decreasing_outward", dr.tail_decreasing);
    for (int i = 0; i < m; ++i) {
      const std::string s = std::to_string(i);
      o.add("decay", "sup_(1+y)|v_x|_" + s, "info", 0.0, dr.grad_x_bound[i]);
      o.add("decay", "sup_y^(1-a)|y^a v_y|_" + s, "info", 0.0, dr.grad_y_bound[i]);
      o.add("decay", "fiber_energy_at_edge_" + s, "info", 0.0, dr.fiber_tail[i]);
    }
    CsvTable t;
    t.columns = {"x"};
    for (const auto& n : column_names("fiber_energy", m)) t.columns.push_back(n);
    for (size_t j = 0; j < dr.x.size(); ++j) {
      std::vector<double> row = {dr.x[j]};
      for (int i = 0; i < m; ++i) row.push_back(dr.fiber_energy[i][j]);
      t.rows.push_back(std::move(row));
    }
    o.files.push_back({"decay.csv", t.str()});
  };

  k["symmetry"] = [&](CheckOutput& o) {
    const auto sd = symmetry_diagnostic(v);
    const double th = c.direction_deg * std::numbers::pi / 180.0;
    CsvTable t;
    t.columns = {"component", "direction_x1", "direction_x2", "anisotropy"};
    for (int i = 0; i < m; ++i) {
      const std::string s = std::to_string(i);
      o.add("symmetry", "anisotropy_" + s, "<=", param_number(c, "symmetry_tol", 5e-2),
            sd.anisotropy[i], sd.defined[i] ? "" : "constant component");
      const double cosang = std::abs(sd.direction[i][0] * std::cos(th) + sd.direction[i][1] * std::sin(th));
      o.add("symmetry", "angle_to_boundary_direction_" + s, "info", 0.0,
            std::acos(std::min(1.0, cosang)));
      t.rows.push_back({double(i), sd.direction[i][0], sd.direction[i][1], sd.anisotropy[i]});
    }
    o.files.push_back({"symmetry.csv", t.str()});
  };

  k["structure"] = [&](CheckOutput& o) {
    try {
      const auto rs = radial_structure_checks(v, H);
      o.add("structure", "abs_grad_H_at_0", "<=", 1e-10, rs.grad_at_zero);
      o.add("structure", "H_v00_minus_H_0", "<", 0.0, rs.potential_gap);
      o.add("structure", "fiber_lower_bound_on_gap", "info", 0.0, rs.gap_lower_bound,
            "sum (1/2d) int y^a v_y(0,y)^2 dy");
      const bool dec = std::all_of(rs.monotone_decreasing.begin(), rs.monotone_decreasing.end(),
                                   [](bool b) { return b; });
      if (dec)
        o.add("structure", "sum_H_ij_at_0", "<=", 0.0, rs.hessian_sum);
      else
        o.na("structure", "sum_H_ij_at_0", rs.hessian_sum, "components not all decreasing");
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::hypothesis_violated) throw;
      o.flag("structure", "far_field_vanishes", false, e.what());
    }
  };

  k["dichotomy"] = [&](CheckOutput& o) {
    const auto tags = dichotomy_check(v);
    for (int i = 0; i < m; ++i)
      o.flag("dichotomy", "not_mixed_" + std::to_string(i), tags[i] != DichotomyTag::mixed,
             to_string(tags[i]));
  };

  k["bounded-energy"] = [&](CheckOutput& o) {
    const double top = 0.9 * std::min(g.L, g.Y);
    const auto R = radius_list(param_numbers(c, "bounded_R", {top / 10, top, 6}), true, "bounded_R");
    const auto be = bounded_energy_check(v, H, R, param_number(c, "bounded_margin", 0.1));
    CsvTable t;
    t.columns = {"R"};
    for (const auto& n : column_names("energy", m)) t.columns.push_back(n);
    for (size_t j = 0; j < R.size(); ++j) {
      std::vector<double> row = {R[j]};
      for (int i = 0; i < m; ++i) row.push_back(be.integrals[i][j]);
      t.rows.push_back(std::move(row));
    }
    o.files.push_back({"bounded_energy.csv", t.str()});
    for (int i = 0; i < m; ++i) {
      const std::string s = std::to_string(i);
      const std::string note = "fitted " + format_double(be.exponent[i]) + ", n - 2s = " +
                               format_double(be.predicted[i]);
      if (be.applicable)
        o.add("bounded-energy", "slack_" + s, ">=", 0.0, be.slack[i], note);
      else
        o.na("bounded-energy", "slack_" + s, be.slack[i],
             note + "; grad H >= 0 not certified (worst " + format_double(be.certificate_worst) + ")");
    }
  };

  k["orientability"] = [&](CheckOutput& o) {
    const auto rep = check_orientability(H, trace_range(v));
    std::string th;
    for (int t : rep.theta) th += t > 0 ? "+" : "-";
    o.flag("orientability", "orientable", rep.orientable, "theta " + th);
  };

  k["h-monotone"] = [&](CheckOutput& o) {
    const auto rep = check_H_monotone(v, H, *st.orders);
    for (int i = 0; i < m; ++i)
      o.flag("h-monotone", "monotone_" + std::to_string(i), rep.monotone[i]);
    o.add("h-monotone", "pair_slack", ">=", 0.0, rep.pair_slack);
  };
  for (const auto& name : c.checks)
    if (name != "solve") jobs.emplace_back(name, k.at(name));
  run_parallel(jobs, results, threads);
  return results;
}

void cross_validate_check(const ExperimentConfig& c, CheckOutput& o) {
  const double tol = param_number(c, "cross_tol", 1e-2);
  std::vector<double> ss = c.s;
  std::sort(ss.begin(), ss.end());
  ss.erase(std::unique(ss.begin(), ss.end()), ss.end());
  const auto ks = param_numbers(c, "cross_k", {1, 2});
  auto grid = std::make_shared<const HalfSpaceGrid>(build_grid(2 * std::numbers::pi, 257, 10, 120, 3));
  ExtensionBC bc;
  bc.lateral = LateralBC::periodic;
  const double h = std::numbers::pi / 64;
  for (size_t si = 0; si < ss.size(); ++si) {
    const double s = ss[si], d = make_orders({s}).d[0];
    for (double k : ks) {
      // truncate where cos(k x) = 0 so the neglected tail is purely oscillatory
      const double X = std::numbers::pi / k * (std::floor(31.5 * k) + 0.5);
      const int N = static_cast<int>(std::lround(2 * X / h));
      LineFunction u;
      u.x0 = -X;
      u.h = 2 * X / N;
      u.tail = TailKind::decay;
      for (int j = 0; j <= N; ++j) u.u.push_back(std::cos(k * u.x(j)));
      const auto cv = cross_validate(u, s, grid, bc);
      const double amp = std::pow(std::abs(k), 2 * s);
      double flux_err = 0.0;
      for (size_t j = 0; j < cv.x.size(); ++j)
        flux_err = std::max(flux_err, std::abs(cv.flux[j] - d * amp * std::cos(k * cv.x[j])));
      const std::string tag = "s" + format_double(s) + "_k" + format_double(k);
      o.add("cross-validate", "dtn_vs_symbol_rel_" + tag, "<=", tol, flux_err / (d * amp));
      o.add("cross-validate", "pv_vs_spectral_rel_" + tag, "<=", tol, cv.pv_vs_spectral / amp);
      o.add("cross-validate", "pv_vs_dtn_rel_" + tag, "<=", tol, cv.pv_vs_dtn / (d * amp));
      CsvTable t;
      t.comments = {"cos(k x), s = " + format_double(s) + ", k = " + format_double(k)};
      t.columns = {"x", "pv", "spectral", "flux"};
      for (size_t j = 0; j < cv.x.size(); ++j) t.rows.push_back({cv.x[j], cv.pv[j], cv.spectral[j], cv.flux[j]});
      o.files.push_back({"cross_validate_" + tag + ".csv", t.str()});
    }
  }
}

class RunLock {
 public:
  explicit RunLock(const fs::path& dir) : path_(dir / ".fraclab.lock") {
    std::FILE* f = std::fopen(path_.c_str(), "wx");
    require(f != nullptr, ErrorKind::io,
            "run directory " + dir.string() + " is locked by another process (" + path_.string() + ")");
    std::fclose(f);
  }
  ~RunLock() {
    std::error_code ec;
    fs::remove(path_, ec);
  }
  RunLock(const RunLock&) = delete;
  RunLock& operator=(const RunLock&) = delete;

 private:
  fs::path path_;
};

void run_parallel(std::vector<std::pair<std::string, CheckFn>>& jobs,
                  std::vector<CheckOutput>& results, int threads) {
  results.assign(jobs.size(), {});
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (size_t j; (j = next++) < jobs.size();) {
      try {
        jobs[j].second(results[j]);
      } catch (const std::exception& e) {
        results[j].flag(jobs[j].first, "completed", false, e.what());
      }
    }
  };
  const int n = std::max(1, std::min<int>(threads, static_cast<int>(jobs.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
}

int exit_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::io: return exit_io;
    case ErrorKind::malformed_input:
    case ErrorKind::invalid_argument:
    case ErrorKind::grid_mismatch:
    case ErrorKind::scope_limit: return exit_schema;
    default: return exit_check_failed;
  }
}

}  // namespace

int resolve_threads(std::optional<int> requested) {
  if (requested) {
    require(*requested >= 1, ErrorKind::malformed_input, "--threads must be at least 1");
    return *requested;
  }
  if (const char* env = std::getenv("FRACLAB_THREADS")) {
    const double n = parse_double(env);
    require(n >= 1 && n == std::floor(n), ErrorKind::malformed_input,
            "FRACLAB_THREADS must be a positive integer");
    return static_cast<int>(n);
  }
  return 1;
}

std::string summary_csv(const std::vector<CheckRow>& rows) {
  std::string s = "check,metric,relation,threshold,observed,status,note\n";
  for (const auto& r : rows)
    s += csv_field(r.check) + "," + csv_field(r.metric) + "," + r.relation + "," +
         format_double(r.threshold) + "," + format_double(r.observed) + "," + r.status + "," +
         csv_field(r.note) + "\n";
  return s;
}

RunResult run_experiment(const ExperimentConfig& c, const std::string& out_dir, int threads,
                         std::ostream& log) {
  RunResult res;
  res.out_dir = out_dir;
  const std::string started = utc_now();
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  require(!ec, ErrorKind::io, "cannot create run directory " + out_dir + ": " + ec.message());
  RunLock lock(out_dir);

  std::vector<CheckOutput> outputs;
  const auto& want = c.checks;
  auto wants = [&](const std::string& k) { return std::find(want.begin(), want.end(), k) != want.end(); };
  res.files.push_back({"config.cfg", c.text});

  const bool needs_field = std::any_of(want.begin(), want.end(),
                                       [](const std::string& k) { return k != "cross-validate"; });
  bool solved = true;
  std::optional<Setup> st;
  std::optional<FieldSet> v;
  if (needs_field) {
    st = build_setup(c, c.solver, log);
    auto [field, rep] = c.radial ? solve_radial(st->grid, st->orders, c.H, st->bc, st->initial, c.solver)
                                 : solve_coupled(st->grid, st->orders, c.H, st->bc, st->initial, c.solver);
    log << "solve: " << to_string(rep.status) << " after " << rep.outer_iterations
        << " iterations, residual " << format_double(rep.residual_history.back()) << "\n";
    solved = rep.converged;
    CheckOutput o;
    o.flag("solve", "converged", rep.converged, to_string(rep.status));
    o.add("solve", "final_scaled_residual", "<=", c.solver.newton_tol, rep.residual_history.back());
    o.add("solve", "newton_iterations", "info", 0.0, rep.outer_iterations);
    o.add("solve", "indefinite_steps", "info", 0.0, rep.indefinite_steps);
    if (st->exact) {
      double err = 0.0;
      for (int i = 0; i < field.m(); ++i)
        for (int p = 0; p < st->grid->row_size(); ++p)
          err = std::max(err, std::abs(field.values[i][p] - st->exact->values[i][p]));
      o.add("solve", "trace_sup_error_vs_exact", "<=", param_number(c, "trace_tol", 5e-3), err);
    }
    CsvTable t;
    t.columns = {"iteration", "scaled_residual", "energy"};
    for (size_t j = 0; j < rep.residual_history.size(); ++j)
      t.rows.push_back({double(j), rep.residual_history[j],
                        j < rep.energy_history.size() ? rep.energy_history[j] : NAN});
    o.files.push_back({"solve.csv", t.str()});
    o.files.push_back({"trace.csv", trace_csv(field)});
    if (c.snapshot) o.files.push_back({"solution.flab", encode_snapshot(field)});
    if (!wants("solve")) o.rows.clear();
    outputs.push_back(std::move(o));
    v = std::move(field);
  }

  if (solved)
    for (auto& r : run_checks(c, st ? &*st : nullptr, v ? &*v : nullptr, threads))
      outputs.push_back(std::move(r));

  for (auto& o : outputs) {
    for (auto& r : o.rows) res.rows.push_back(std::move(r));
    for (auto& f : o.files) res.files.push_back(std::move(f));
  }
  res.files.push_back({"summary.csv", summary_csv(res.rows)});

  for (const auto& f : res.files) write_file((fs::path(out_dir) / f.name).string(), f.contents);

  const bool failed = std::any_of(res.rows.begin(), res.rows.end(),
                                  [](const CheckRow& r) { return r.status == "fail"; });
  res.exit_code = !solved ? exit_nonconvergence : failed ? exit_check_failed : exit_ok;

  nlohmann::ordered_json man;
  man["tool"] = "fraclab";
  man["versions"] = {{"fraclab", version},
                     {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                   std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                   std::to_string(EIGEN_MINOR_VERSION)},
                     {"boost", BOOST_LIB_VERSION}};
  man["config"] = c.path;
  man["config_hash"] = hex64(fnv1a64(c.text));
  man["label"] = c.label;
  man["started"] = started;
  man["finished"] = utc_now();
  man["threads"] = threads;
  auto files = nlohmann::ordered_json::array();
  for (const auto& f : res.files)
    files.push_back({{"name", f.name}, {"bytes", f.contents.size()}, {"fnv1a64", hex64(fnv1a64(f.contents))}});
  man["files"] = files;
  auto checks = nlohmann::ordered_json::array();
  for (const auto& r : res.rows) {
    nlohmann::ordered_json row;
    row["check"] = r.check;
    row["metric"] = r.metric;
    row["relation"] = r.relation;
    row["threshold"] = format_double(r.threshold);
    row["observed"] = format_double(r.observed);
    row["status"] = r.status;
    if (!r.note.empty()) row["note"] = r.note;
    checks.push_back(row);
  }
  man["checks"] = checks;
  man["exit_code"] = res.exit_code;
  write_file((fs::path(out_dir) / "manifest.json").string(), man.dump(2) + "\n");
  return res;
}

namespace {

void print_table(const std::vector<std::vector<std::string>>& rows, std::ostream& out) {
  if (rows.empty()) return;
  std::vector<size_t> w(rows.front().size(), 0);
  for (const auto& r : rows)
    for (size_t j = 0; j < r.size(); ++j) w[j] = std::max(w[j], r[j].size());
  for (const auto& r : rows) {
    for (size_t j = 0; j < r.size(); ++j)
      out << std::left << std::setw(static_cast<int>(w[j]) + 2) << r[j];
    out << "\n";
  }
}

}  // namespace

int run_command(const std::string& config_path, const std::optional<std::string>& out,
                std::optional<int> threads, std::ostream& out_stream, std::ostream& err) {
  try {
    const auto c = load_config(config_path);
    const int nt = resolve_threads(threads);
    std::string dir = out ? *out : c.out_dir;
    if (dir.empty()) dir = (fs::path("runs") / fs::path(config_path).stem()).string();
    const auto res = run_experiment(c, dir, nt, err);
    std::vector<std::vector<std::string>> tab = {{"check", "metric", "threshold", "observed", "status"}};
    for (const auto& r : res.rows)
      tab.push_back({r.check, r.metric,
                     r.relation == "info" || r.relation == "flag" ? r.relation
                                                                  : r.relation + " " + format_double(r.threshold),
                     format_double(r.observed), r.status});
    print_table(tab, out_stream);
    out_stream << "run directory: " << dir << "  exit " << res.exit_code << "\n";
    return res.exit_code;
  } catch (const Error& e) {
    err << "fraclab: " << e.what() << "\n";
    return exit_for(e);
  } catch (const std::exception& e) {
    err << "fraclab: " << e.what() << "\n";
    return exit_check_failed;
  }
}

int validate_command(const std::string& config_path, std::ostream& out, std::ostream& err) {
  try {
    const auto c = load_config(config_path);
    out << "ok: " << config_path << " (m = " << c.s.size() << ", " << c.checks.size()
        << " checks)\n";
    return exit_ok;
  } catch (const Error& e) {
    err << "fraclab: " << e.what() << "\n";
    return e.kind() == ErrorKind::io ? exit_io : exit_schema;
  }
}

int report_command(const std::vector<std::string>& dirs, std::ostream& out, std::ostream& err) {
  std::vector<std::vector<std::string>> tab = {{"run", "check", "metric", "threshold", "observed", "status"}};
  std::string csv = "run,check,metric,relation,threshold,observed,status\n";
  bool bad = false;
  for (const auto& d : dirs) {
    try {
      const auto man = nlohmann::json::parse(read_file((fs::path(d) / "manifest.json").string()));
      for (const auto& r : man.at("checks")) {
        const std::string status = r.at("status");
        bad = bad || status == "fail";
        const std::string rel = r.at("relation"), thr = r.at("threshold");
        tab.push_back({d, r.at("check"), r.at("metric"),
                       rel == "info" || rel == "flag" ? rel : rel + " " + thr,
                       r.at("observed"), status});
        csv += csv_field(d) + "," + csv_field(r.at("check")) + "," + csv_field(r.at("metric")) +
               "," + rel + "," + thr + "," + std::string(r.at("observed")) + "," + status + "\n";
      }
    } catch (const std::exception& e) {
      err << "fraclab: " << d << ": unreadable manifest (" << e.what() << ")\n";
      tab.push_back({d, "-", "-", "-", "-", "unreadable"});
      csv += csv_field(d) + ",,,,,,unreadable\n";
      bad = true;
    }
  }
  print_table(tab, out);
  out << "\n" << csv;
  return bad ? exit_check_failed : exit_ok;
}

}  // namespace fraclab::cli
