#include "fraclab/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include <Eigen/Dense>

#include "fraclab/error.hpp"

namespace fraclab {

namespace {

constexpr double gl_x[4] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                            0.9602898564975363};
constexpr double gl_w[4] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                            0.1012285362903763};

template <class F>
double gauss_panel(double a, double b, F&& f) {
  double acc = 0.0;
  const double c = 0.5 * (a + b), r = 0.5 * (b - a);
  for (int k = 0; k < 4; ++k) acc += gl_w[k] * (f(c - r * gl_x[k]) + f(c + r * gl_x[k]));
  return r * acc;
}

// composite Gauss over [lo, hi], geometrically refined towards both ends
template <class F>
double arc_integral(double lo, double hi, F&& f) {
  const int panels = 48, levels = 14;
  const double w = (hi - lo) / panels;
  double acc = 0.0;
  for (int k = 1; k + 1 < panels; ++k) acc += gauss_panel(lo + k * w, lo + (k + 1) * w, f);
  for (int side = 0; side < 2; ++side) {
    double inner = w;
    for (int l = 0; l < levels; ++l) {
      const double outer = inner, in = inner * 0.5;
      acc += side == 0 ? gauss_panel(lo + in, lo + outer, f) : gauss_panel(hi - outer, hi - in, f);
      inner = in;
    }
    acc += side == 0 ? gauss_panel(lo, lo + inner, f) : gauss_panel(hi - inner, hi, f);
  }
  return acc;
}

double boundary_H(const FieldSet& v, const NonlinearitySpec& H, int p) {
  double u[32];
  for (int i = 0; i < v.m(); ++i) u[i] = v.values[i][p];
  return H.value(u);
}

std::vector<double> trace_H(const FieldSet& v, const NonlinearitySpec& H) {
  std::vector<double> out(v.grid->node_count(), 0.0);
  for (int p = 0; p < v.grid->row_size(); ++p) out[p] = boundary_H(v, H, p);
  return out;
}

void require_1d(const FieldSet& v, const char* what) {
  require(v.grid->boundary_dim == 1, ErrorKind::grid_mismatch,
          std::string(what) + ": needs a boundary dimension 1 grid");
}

void require_equal(const FieldSet& v, const char* what) {
  require(v.orders->equal_orders(), ErrorKind::invalid_argument,
          std::string(what) + ": requires equal orders s_i");
}

double dot(const std::vector<double>& w, const std::vector<double>& f) {
  double s = 0.0;
  for (size_t p = 0; p < w.size(); ++p)
    if (w[p] != 0.0) s += w[p] * f[p];
  return s;
}

// sum_i (1/d_i) int_region y^{a_i} |grad v_i|^2
double dirichlet(const FieldSet& v, const Gradients& gr, const Region& region, bool scaled) {
  const auto& g = *v.grid;
  std::map<double, std::pair<std::vector<double>, std::vector<double>>> wcache;
  double total = 0.0;
  for (int i = 0; i < v.m(); ++i) {
    const double a = v.orders->a[i];
    auto it = wcache.find(a);
    if (it == wcache.end())
      it = wcache.emplace(a, std::make_pair(region_weights(g, a, region),
                                            region_weights(g, -a, region))).first;
    const auto& [wa, wm] = it->second;
    double s = 0.0;
    for (size_t p = 0; p < wa.size(); ++p) {
      double gx = gr.dx[i][p] * gr.dx[i][p];
      if (!gr.dx2.empty()) gx += gr.dx2[i][p] * gr.dx2[i][p];
      s += wa[p] * gx + wm[p] * gr.q[i][p] * gr.q[i][p];
    }
    total += scaled ? s / v.orders->d[i] : s;
  }
  return total;
}

struct SphereSums {
  double normal = 0.0;    // sum (1/d_i) int y^a (d_nu v)^2
  double gradient = 0.0;  // sum (1/d_i) int y^a |grad v|^2
};

SphereSums sphere_integrals(const FieldSet& v, const Gradients& gr, double R) {
  const auto& g = *v.grid;
  SphereSums out;
  for (int i = 0; i < v.m(); ++i) {
    const double a = v.orders->a[i], id = 1.0 / v.orders->d[i];
    auto integrand = [&](double th, bool normal) {
      const double c = std::cos(th), s = std::sin(th);
      const double xv = R * c, yv = R * s;
      const double vx = interpolate(g, gr.dx[i], g.radial ? std::abs(xv) : xv, yv);
      const double q = interpolate(g, gr.q[i], g.radial ? std::abs(xv) : xv, yv);
      const double ya = std::pow(yv, a);
      double val = normal ? ya * c * c * vx * vx + 2 * c * s * vx * q + s * s * q * q / ya
                          : ya * vx * vx + q * q / ya;
      double meas = R;
      if (g.radial) meas *= sphere_area(g.ambient_n) * std::pow(R * c, g.ambient_n - 1);
      return val * meas;
    };
    const double hi = g.radial ? 0.5 * std::numbers::pi : std::numbers::pi;
    out.normal += id * arc_integral(0.0, hi, [&](double t) { return integrand(t, true); });
    out.gradient += id * arc_integral(0.0, hi, [&](double t) { return integrand(t, false); });
  }
  return out;
}

double boundary_sphere_H(const FieldSet& v, const NonlinearitySpec& H, double R) {
  const auto& g = *v.grid;
  auto Hat = [&](double xv) {
    double u[32];
    for (int i = 0; i < v.m(); ++i) u[i] = interpolate(g, v.values[i], xv, 0.0);
    return H.value(u);
  };
  if (g.radial) return sphere_area(g.ambient_n) * std::pow(R, g.ambient_n - 1) * Hat(R);
  return Hat(R) + Hat(-R);
}

void linear_fit(const std::vector<double>& X, const std::vector<double>& Y, double& slope,
                double& intercept, double& resid) {
  const double n = static_cast<double>(X.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t k = 0; k < X.size(); ++k) {
    sx += X[k];
    sy += Y[k];
    sxx += X[k] * X[k];
    sxy += X[k] * Y[k];
  }
  const double den = n * sxx - sx * sx;
  slope = den != 0 ? (n * sxy - sx * sy) / den : 0.0;
  intercept = (sy - slope * sx) / n;
  resid = 0.0;
  for (size_t k = 0; k < X.size(); ++k) {
    const double e = Y[k] - slope * X[k] - intercept;
    resid += e * e;
  }
  resid = std::sqrt(resid / std::max(1.0, n));
}

}  // namespace

Gradients gradients(const FieldSet& v) {
  const auto& g = *v.grid;
  Gradients gr;
  for (int i = 0; i < v.m(); ++i) {
    gr.dx.push_back(x_derivative(g, v.values[i], 0));
    if (g.boundary_dim == 2) gr.dx2.push_back(x_derivative(g, v.values[i], 1));
    gr.q.push_back(weighted_flux(g, v.values[i], v.orders->a[i]));
  }
  return gr;
}

double energy(const FieldSet& v, const NonlinearitySpec& H, double R) {
  const auto gr = gradients(v);
  const double kinetic = 0.5 * dirichlet(v, gr, Region::cylinder(R), true);
  const auto w = region_weights(*v.grid, 0.0, Region::boundary(R));
  return kinetic - dot(w, trace_H(v, H));
}

EnergyProfile energy_scan(const FieldSet& v, const NonlinearitySpec& H,
                          const std::vector<double>& R) {
  require(R.size() >= 2, ErrorKind::invalid_argument, "energy scan: need at least two radii");
  for (size_t k = 1; k < R.size(); ++k)
    require(R[k] > R[k - 1], ErrorKind::invalid_argument, "energy scan: R must increase");
  EnergyProfile p;
  const auto gr = gradients(v);
  const auto Ht = trace_H(v, H);
  for (double r : R) {
    const double kinetic = 0.5 * dirichlet(v, gr, Region::cylinder(r), true);
    const auto w = region_weights(*v.grid, 0.0, Region::boundary(r));
    p.R.push_back(r);
    p.E.push_back(kinetic - dot(w, Ht));
  }
  std::vector<double> lx, ly, lr, e;
  for (size_t k = R.size() / 2; k < R.size(); ++k) {
    if (p.E[k] <= 0) {
      p.excluded_nonpositive = true;
      continue;
    }
    lx.push_back(std::log(R[k]));
    ly.push_back(std::log(p.E[k]));
    e.push_back(p.E[k]);
  }
  if (lx.size() >= 2) {
    double b;
    linear_fit(lx, ly, p.exponent, b, p.fit_residual);
    p.coefficient = std::exp(b);
    double b2, r2;
    linear_fit(lx, e, p.log_coefficient, b2, r2);
    double lo = INFINITY, hi = -INFINITY;
    for (size_t k = 0; k < lx.size(); ++k) {
      const double ratio = e[k] / lx[k];
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    p.log_ratio_variation = (hi - lo) / lo;
  } else {
    p.exponent = p.fit_residual = p.log_ratio_variation = NAN;
  }
  return p;
}

FiberIntegrals fiber_integrals(const FieldSet& v, const Gradients& gr, int comp, int column,
                               FiberTail tail) {
  const auto& g = *v.grid;
  const double a = v.orders->a[comp];
  const auto wa = g.y_hat_moments(a), wm = g.y_hat_moments(-a);
  const int rs = g.row_size();
  FiberIntegrals f;
  for (int j = 0; j <= g.ny; ++j) {
    const int p = j * rs + column;
    double gx = gr.dx[comp][p] * gr.dx[comp][p];
    if (!gr.dx2.empty()) gx += gr.dx2[comp][p] * gr.dx2[comp][p];
    f.x += wa[j] * gx;
    f.y += wm[j] * gr.q[comp][p] * gr.q[comp][p];
  }
  if (tail == FiberTail::power_law) {
    const int p = g.ny * rs + column;
    const double Y = g.Y;
    double gx = gr.dx[comp][p] * gr.dx[comp][p];
    if (!gr.dx2.empty()) gx += gr.dx2[comp][p] * gr.dx2[comp][p];
    f.x += Y * std::pow(Y, a) * gx / (1.0 - a);
    f.y += Y * std::pow(Y, -a) * gr.q[comp][p] * gr.q[comp][p] / (3.0 - a);
  }
  return f;
}

HamiltonianProfile hamiltonian_profile(const FieldSet& v, const NonlinearitySpec& H,
                                       const std::vector<double>& alpha, FiberTail tail,
                                       double window) {
  require_1d(v, "hamiltonian");
  require_equal(v, "hamiltonian");
  require(!v.grid->radial, ErrorKind::grid_mismatch, "hamiltonian: needs a slab grid (n = 1)");
  require(static_cast<int>(alpha.size()) == v.m(), ErrorKind::invalid_argument,
          "hamiltonian: alpha needs m entries");
  const auto& g = *v.grid;
  const double d = v.orders->d[0];
  const double Halpha = H.value(alpha.data());
  const auto gr = gradients(v);
  HamiltonianProfile hp;
  hp.window = window;
  std::vector<double> conserved;
  for (int c = 0; c < g.nx; ++c) {
    double w = 0.0;
    for (int i = 0; i < v.m(); ++i) {
      const auto f = fiber_integrals(v, gr, i, c, tail);
      w += 0.5 * (f.x - f.y);
    }
    const double gap = d * (boundary_H(v, H, c) - Halpha);
    hp.x.push_back(g.x[c]);
    hp.w.push_back(w);
    hp.gap.push_back(gap);
    hp.residual_corrected.push_back(w + gap);
    hp.residual_printed.push_back(w - gap);
    if (std::abs(g.x[c]) <= window * g.L * (1 + 1e-12)) {
      hp.sup_corrected = std::max(hp.sup_corrected, std::abs(w + gap));
      hp.sup_printed = std::max(hp.sup_printed, std::abs(w - gap));
      hp.sup_w = std::max(hp.sup_w, std::abs(w));
    }
  }
  for (int c = 0; c + 1 < g.nx; ++c)
    if (std::abs(g.x[c]) <= window * g.L && std::abs(g.x[c + 1]) <= window * g.L)
      hp.derivative_relation =
          std::max(hp.derivative_relation,
                   std::abs(hp.residual_corrected[c + 1] - hp.residual_corrected[c]) / g.h);
  hp.balance = std::abs(boundary_H(v, H, g.nx - 1) - boundary_H(v, H, 0));
  return hp;
}

RadialHamiltonian radial_hamiltonian(const FieldSet& v, const NonlinearitySpec& H,
                                     FiberTail tail) {
  require(v.grid->radial, ErrorKind::grid_mismatch, "radial hamiltonian: needs a radial grid");
  require_equal(v, "radial hamiltonian");
  const auto& g = *v.grid;
  const double d = v.orders->d[0];
  const int n = g.ambient_n;
  const auto gr = gradients(v);
  RadialHamiltonian rh;
  std::vector<double> kin_r;
  for (int c = 0; c < g.nx; ++c) {
    double kin = 0.0, ir = 0.0;
    for (int i = 0; i < v.m(); ++i) {
      const auto f = fiber_integrals(v, gr, i, c, tail);
      kin += f.x - f.y;
      ir += f.x;
    }
    const double Hv = boundary_H(v, H, c);
    rh.r.push_back(g.x[c]);
    rh.curve.push_back(kin + 2 * d * Hv);
    rh.curve_printed.push_back(kin - 2 * d * Hv);
    rh.curve_alt.push_back(kin + 2 / d * Hv);
    kin_r.push_back(ir);
    rh.scale = std::max(rh.scale, std::abs(rh.curve.back()));
  }
  rh.max_upward_slope = rh.max_upward_slope_printed = -INFINITY;
  double num = 0, den = 0, num_alt = 0, den_alt = 0;
  for (int c = 0; c + 1 < g.nx; ++c) {
    const double slope = (rh.curve[c + 1] - rh.curve[c]) / g.h;
    const double slope_alt = (rh.curve_alt[c + 1] - rh.curve_alt[c]) / g.h;
    rh.max_upward_slope = std::max(rh.max_upward_slope, slope);
    rh.max_upward_slope_printed =
        std::max(rh.max_upward_slope_printed, (rh.curve_printed[c + 1] - rh.curve_printed[c]) / g.h);
    const double rm = 0.5 * (g.x[c] + g.x[c + 1]);
    if (rm < 5 * g.h) continue;  // centered differences are unreliable next to the axis
    const double T = 2.0 * (n - 1) / rm * 0.5 * (kin_r[c] + kin_r[c + 1]);
    num = std::max(num, std::abs(slope + T));
    den = std::max({den, std::abs(slope), std::abs(T)});
    num_alt = std::max(num_alt, std::abs(slope_alt + T));
    den_alt = std::max({den_alt, std::abs(slope_alt), std::abs(T)});
  }
  rh.identity_imbalance = den > 0 ? num / den : 0.0;
  rh.identity_imbalance_alt = den_alt > 0 ? num_alt / den_alt : 0.0;
  return rh;
}

MonotonicityCurve monotonicity_curve(const FieldSet& v, const NonlinearitySpec& H,
                                     const std::vector<double>& R) {
  require_1d(v, "monotonicity");
  require_equal(v, "monotonicity");
  require(R.size() >= 2, ErrorKind::invalid_argument, "monotonicity: need at least two radii");
  const auto& g = *v.grid;
  const double s = v.orders->s[0];
  const int n = g.measure_dim();
  MonotonicityCurve mc;
  const auto cert = certify_nonpositive(H, trace_range(v));
  mc.applicable = cert.holds;
  mc.certificate_worst = cert.worst;
  const auto gr = gradients(v);
  const auto Ht = trace_H(v, H);
  for (double r : R) {
    const double kin = 0.5 * dirichlet(v, gr, Region::half_ball(r), true);
    const double pot = dot(region_weights(g, 0.0, Region::boundary(r)), Ht);
    mc.R.push_back(r);
    mc.I.push_back(std::pow(r, -(n - 2 * s)) * (kin - pot));
    mc.max_abs_I = std::max(mc.max_abs_I, std::abs(mc.I.back()));
  }
  mc.min_slope = INFINITY;
  for (size_t k = 0; k + 1 < R.size(); ++k) {
    mc.slope.push_back((mc.I[k + 1] - mc.I[k]) / (R[k + 1] - R[k]));
    mc.min_slope = std::min(mc.min_slope, mc.slope.back());
  }
  mc.slope.push_back(NAN);
  return mc;
}

MonotonicityBalance monotonicity_balance(const FieldSet& v, const NonlinearitySpec& H, double R,
                                         double dR) {
  const auto mc = monotonicity_curve(v, H, {R - dR, R + dR});
  const auto& g = *v.grid;
  const double s = v.orders->s[0];
  const int n = g.measure_dim();
  const auto gr = gradients(v);
  const auto sph = sphere_integrals(v, gr, R);
  const double pot = dot(region_weights(g, 0.0, Region::boundary(R)), trace_H(v, H));
  MonotonicityBalance b;
  b.lhs = (mc.I[1] - mc.I[0]) / (2 * dR) * std::pow(R, n + 1 - 2 * s);
  b.rhs = R * sph.normal - 2 * s * pot;
  const double scale = std::max(std::abs(b.lhs), std::abs(b.rhs));
  b.imbalance = scale > 0 ? std::abs(b.lhs - b.rhs) / scale : 0.0;
  return b;
}

PohozaevTerms pohozaev_residual(const FieldSet& v, const NonlinearitySpec& H, double R) {
  require_1d(v, "pohozaev");
  const auto& g = *v.grid;
  const int n = g.measure_dim();
  const auto gr = gradients(v);
  PohozaevTerms t;
  const auto sph = sphere_integrals(v, gr, R);
  t.sphere_normal = R * sph.normal;
  t.sphere_gradient = -0.5 * R * sph.gradient;
  for (int i = 0; i < v.m(); ++i) {
    FieldSet vi;
    vi.grid = v.grid;
    auto oi = std::make_shared<FractionalOrders>(make_orders({v.orders->s[i]}));
    vi.orders = oi;
    vi.values = {v.values[i]};
    Gradients gi{{gr.dx[i]}, {}, {gr.q[i]}};
    t.bulk += 0.5 * (n - 2 * v.orders->s[i]) * dirichlet(vi, gi, Region::half_ball(R), true);
  }
  t.potential_bulk = -n * dot(region_weights(g, 0.0, Region::boundary(R)), trace_H(v, H));
  t.potential_sphere = R * boundary_sphere_H(v, H, R);
  const double terms[5] = {t.sphere_normal, t.sphere_gradient, t.bulk, t.potential_bulk,
                           t.potential_sphere};
  double sum = 0.0;
  for (double x : terms) {
    sum += x;
    t.dominant = std::max(t.dominant, std::abs(x));
  }
  t.residual = std::abs(sum);
  return t;
}

RadialStructure radial_structure_checks(const FieldSet& v, const NonlinearitySpec& H) {
  require(v.grid->radial, ErrorKind::grid_mismatch, "radial structure: needs a radial grid");
  const auto& g = *v.grid;
  const int m = v.m();
  RadialStructure rs;
  for (int i = 0; i < m; ++i) rs.far_field = std::max(rs.far_field, std::abs(v.values[i][g.nx - 1]));
  require(rs.far_field <= 1e-2, ErrorKind::hypothesis_violated,
          "radial structure: far-field value at r = L exceeds 1e-2");
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(m);
  const auto e0 = H.eval(zero);
  rs.grad_at_zero = e0.gradient.norm();
  rs.hessian_sum = e0.hessian.sum();
  rs.potential_gap = boundary_H(v, H, 0) - e0.value;
  const auto gr = gradients(v);
  for (int i = 0; i < m; ++i) {
    double scale = 0.0;
    for (int c = 0; c < g.nx; ++c) scale = std::max(scale, std::abs(v.values[i][c]));
    bool dec = scale > 0;
    for (int c = 1; c < g.nx; ++c) dec = dec && gr.dx[i][c] <= 1e-12 * scale;
    rs.monotone_decreasing.push_back(dec);
    rs.gap_lower_bound += 0.5 / v.orders->d[i] * fiber_integrals(v, gr, i, 0, FiberTail::none).y;
  }
  return rs;
}

DecayReport decay_checks(const FieldSet& v, FiberTail tail) {
  require_1d(v, "decay");
  const auto& g = *v.grid;
  const auto gr = gradients(v);
  DecayReport dr;
  dr.x = g.x;
  const int rs = g.row_size();
  for (int i = 0; i < v.m(); ++i) {
    const double a = v.orders->a[i];
    double cx = 0, cy = 0, cf = 0;
    for (int p = 0; p < g.node_count(); ++p) {
      const double y = g.y[p / rs];
      cx = std::max(cx, std::abs(gr.dx[i][p]) * (1 + y));
      if (y > 1) cy = std::max(cy, std::abs(gr.q[i][p]) * std::pow(y, 1 - a));
      if (y < 1) cf = std::max(cf, std::abs(gr.q[i][p]));
    }
    dr.grad_x_bound.push_back(cx);
    dr.grad_y_bound.push_back(cy);
    dr.flux_bound.push_back(cf);
    std::vector<double> fe;
    for (int c = 0; c < g.nx; ++c) {
      const auto f = fiber_integrals(v, gr, i, c, tail);
      fe.push_back(f.x + f.y);
    }
    const double t = g.radial ? fe.back() : std::max(fe.front(), fe.back());
    dr.fiber_tail.push_back(t);
    // decreasing towards the lateral edges over the outer quarter, minus the
    // last twentieth where the far-field data forces a boundary layer
    const int q = std::max(1, (g.nx - 1) / 4);
    const int strip = (g.nx - 1) / 20;
    for (int c = g.nx - 1 - q; c + 1 < g.nx - strip; ++c)
      dr.tail_decreasing = dr.tail_decreasing && fe[c + 1] <= fe[c] * (1 + 1e-9) + 1e-300;
    if (!g.radial)
      for (int c = q; c > strip; --c)
        dr.tail_decreasing = dr.tail_decreasing && fe[c - 1] <= fe[c] * (1 + 1e-9) + 1e-300;
    dr.fiber_energy.push_back(std::move(fe));
  }
  return dr;
}

SymmetryReport symmetry_diagnostic(const FieldSet& v) {
  const auto& g = *v.grid;
  require(g.boundary_dim == 2, ErrorKind::grid_mismatch, "symmetry: needs a 2-D boundary grid");
  const auto gr = gradients(v);
  SymmetryReport rep;
  const int rs = g.row_size();
  for (int i = 0; i < v.m(); ++i) {
    const auto w = region_weights(g, v.orders->a[i], Region::full_domain());
    Eigen::Matrix2d S = Eigen::Matrix2d::Zero();
    for (int p = 0; p < g.node_count(); ++p) {
      const int q = p % rs, i1 = q % g.nx, i2 = q / g.nx;
      if (i1 == 0 || i2 == 0 || i1 == g.nx - 1 || i2 == g.nx - 1) continue;
      const double a = gr.dx[i][p], b = gr.dx2[i][p];
      S(0, 0) += w[p] * a * a;
      S(0, 1) += w[p] * a * b;
      S(1, 1) += w[p] * b * b;
    }
    S(1, 0) = S(0, 1);
    const double total = S.trace();
    if (!(total > 0)) {
      rep.direction.push_back({1.0, 0.0});
      rep.anisotropy.push_back(0.0);
      rep.defined.push_back(false);
      continue;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(S);
    Eigen::Vector2d dir = es.eigenvectors().col(1);
    if (dir(0) < 0 || (dir(0) == 0 && dir(1) < 0)) dir = -dir;
    rep.direction.push_back({dir(0), dir(1)});
    rep.anisotropy.push_back(std::max(0.0, es.eigenvalues()(0)) / total);
    rep.defined.push_back(true);
  }
  return rep;
}

}  // namespace fraclab
