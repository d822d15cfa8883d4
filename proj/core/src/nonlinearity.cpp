#include "fraclab/nonlinearity.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "fraclab/error.hpp"
#include "fraclab/field.hpp"
#include "fraclab/io.hpp"
#include "fraclab/orders.hpp"

namespace fraclab {

namespace {

double ipow(double x, int e) {
  double r = 1.0;
  for (int k = 0; k < e; ++k) r *= x;
  return r;
}

double monomial_partial(const Term& t, const double* u, int i, int j) {
  // d^2/du_i du_j (or d/du_i when j < 0) of prod u_k^{e_k}
  double r = t.coefficient;
  for (size_t k = 0; k < t.ints.size(); ++k) {
    int e = t.ints[k];
    double c = 1.0;
    if (static_cast<int>(k) == i) {
      c *= e;
      --e;
    }
    if (static_cast<int>(k) == j) {
      c *= e;
      --e;
    }
    if (e < 0) return 0.0;
    r *= c * ipow(u[k], e);
    if (r == 0.0) return 0.0;
  }
  return r;
}

double phase(const Term& t, const double* u) {
  double p = 0.0;
  for (size_t k = 0; k < t.ints.size(); ++k) p += t.ints[k] * u[k];
  return std::numbers::pi * p;
}

}  // namespace

void NonlinearitySpec::add(const Term& t) {
  require(static_cast<int>(t.ints.size()) == m, ErrorKind::malformed_input,
          "nonlinearity: term arity differs from m");
  if (t.kind == TermKind::monomial)
    for (int e : t.ints)
      require(e >= 0, ErrorKind::malformed_input, "nonlinearity: negative exponent");
  terms.push_back(t);
}

double NonlinearitySpec::value(const double* u) const {
  double v = 0.0;
  for (const auto& t : terms) {
    if (t.kind == TermKind::monomial)
      v += monomial_partial(t, u, -1, -1);
    else
      v += t.coefficient * std::cos(phase(t, u));
  }
  return v;
}

void NonlinearitySpec::gradient(const double* u, double* g) const {
  for (int i = 0; i < m; ++i) g[i] = 0.0;
  for (const auto& t : terms) {
    if (t.kind == TermKind::monomial) {
      for (int i = 0; i < m; ++i) g[i] += monomial_partial(t, u, i, -1);
    } else {
      const double sn = -t.coefficient * std::numbers::pi * std::sin(phase(t, u));
      for (int i = 0; i < m; ++i) g[i] += sn * t.ints[i];
    }
  }
}

HEval NonlinearitySpec::eval(const Eigen::VectorXd& u) const {
  require(u.size() == m, ErrorKind::malformed_input, "nonlinearity: state length mismatch");
  HEval r;
  r.gradient = Eigen::VectorXd::Zero(m);
  r.hessian = Eigen::MatrixXd::Zero(m, m);
  const double* p = u.data();
  r.value = value(p);
  gradient(p, r.gradient.data());
  for (const auto& t : terms) {
    if (t.kind == TermKind::monomial) {
      for (int i = 0; i < m; ++i)
        for (int j = 0; j <= i; ++j) r.hessian(i, j) += monomial_partial(t, p, i, j);
    } else {
      const double c = -t.coefficient * std::numbers::pi * std::numbers::pi *
                       std::cos(phase(t, p));
      for (int i = 0; i < m; ++i)
        for (int j = 0; j <= i; ++j) r.hessian(i, j) += c * t.ints[i] * t.ints[j];
    }
  }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < i; ++j) r.hessian(j, i) = r.hessian(i, j);
  return r;
}

HEval eval_nonlinearity(const NonlinearitySpec& H, const std::vector<double>& u) {
  require(static_cast<int>(u.size()) == H.m, ErrorKind::malformed_input,
          "nonlinearity: state length mismatch");
  return H.eval(Eigen::Map<const Eigen::VectorXd>(u.data(), H.m));
}

Term parse_term(const std::string& text, int m) {
  std::istringstream in(text);
  Term t;
  std::string coeff, kind;
  if (!(in >> coeff >> kind)) fail(ErrorKind::malformed_input, "term: expected '<coeff> <kind> <ints>'");
  t.coefficient = parse_double(coeff);
  if (kind == "monomial")
    t.kind = TermKind::monomial;
  else if (kind == "cosine")
    t.kind = TermKind::cosine;
  else
    fail(ErrorKind::malformed_input, "term: unknown kind '" + kind + "'");
  int e;
  while (in >> e) t.ints.push_back(e);
  require(in.eof(), ErrorKind::malformed_input, "term: trailing garbage in '" + text + "'");
  require(static_cast<int>(t.ints.size()) == m, ErrorKind::malformed_input,
          "term: expected " + std::to_string(m) + " integers in '" + text + "'");
  if (t.kind == TermKind::monomial)
    for (int k : t.ints)
      require(k >= 0, ErrorKind::malformed_input, "term: negative exponent");
  return t;
}

std::string format_term(const Term& t) {
  std::string s = format_double(t.coefficient);
  s += t.kind == TermKind::monomial ? " monomial" : " cosine";
  for (int k : t.ints) s += " " + std::to_string(k);
  return s;
}

std::vector<Eigen::VectorXd> sample_box(const Box& box, int n) {
  require(n >= 2, ErrorKind::invalid_argument, "sampler: need at least 2 samples per axis");
  const int m = box.dim();
  for (int i = 0; i < m; ++i)
    require(box.hi[i] >= box.lo[i], ErrorKind::invalid_argument, "sampler: inverted box");
  std::vector<Eigen::VectorXd> pts;
  const double total = std::pow(static_cast<double>(n), m);
  if (total <= 2e5) {
    std::vector<int> idx(m, 0);
    const long count = static_cast<long>(total);
    pts.reserve(count);
    for (long c = 0; c < count; ++c) {
      Eigen::VectorXd u(m);
      for (int i = 0; i < m; ++i)
        u[i] = box.lo[i] + (box.hi[i] - box.lo[i]) * idx[i] / (n - 1.0);
      pts.push_back(u);
      for (int i = 0; i < m; ++i) {
        if (++idx[i] < n) break;
        idx[i] = 0;
      }
    }
    return pts;
  }
  static const int primes[20] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29,
                                 31, 37, 41, 43, 47, 53, 59, 61, 67, 71};
  const int count = 200000;
  pts.reserve(count);
  for (int c = 0; c < count; ++c) {
    Eigen::VectorXd u(m);
    for (int i = 0; i < m; ++i) {
      double f = 1.0, r = 0.0;
      for (int k = c; k > 0; k /= primes[i]) {
        f /= primes[i];
        r += f * (k % primes[i]);
      }
      u[i] = box.lo[i] + (box.hi[i] - box.lo[i]) * r;
    }
    pts.push_back(u);
  }
  return pts;
}

OrientabilityReport check_orientability(const NonlinearitySpec& H, const Box& box,
                                        int samples_per_axis, int theta1) {
  const int m = H.m;
  require(m <= 20, ErrorKind::scope_limit, "orientability: m > 20 not enumerable");
  require(box.dim() == m, ErrorKind::malformed_input, "orientability: box dimension mismatch");
  OrientabilityReport rep;
  rep.theta.assign(m, theta1);
  if (m == 1) {
    rep.orientable = true;
    return rep;
  }
  const auto pts = sample_box(box, samples_per_axis);
  rep.samples = static_cast<long>(pts.size());
  Eigen::MatrixXd lo = Eigen::MatrixXd::Constant(m, m, INFINITY);
  Eigen::MatrixXd hi = Eigen::MatrixXd::Constant(m, m, -INFINITY);
  for (const auto& u : pts) {
    const auto e = H.eval(u);
    lo = lo.cwiseMin(e.hessian);
    hi = hi.cwiseMax(e.hessian);
  }
  double best = -INFINITY;
  std::vector<int> best_theta;
  for (long mask = 0; mask < (1L << (m - 1)); ++mask) {
    std::vector<int> th(m);
    th[0] = theta1;
    for (int i = 1; i < m; ++i) th[i] = (mask >> (i - 1)) & 1 ? -theta1 : theta1;
    double worst = INFINITY;
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j)
        worst = std::min(worst, th[i] * th[j] > 0 ? lo(i, j) : -hi(i, j));
    if (worst >= -orientability_tolerance) {
      rep.orientable = true;
      rep.theta = th;
      rep.worst_violation = worst;
      return rep;
    }
    if (worst > best) {
      best = worst;
      best_theta = th;
    }
  }
  rep.theta = best_theta;
  rep.worst_violation = best;
  return rep;
}

SignCertificate certify_nonpositive(const NonlinearitySpec& H, const Box& box, int n) {
  SignCertificate c;
  c.worst = -INFINITY;
  for (const auto& u : sample_box(box, n)) {
    c.worst = std::max(c.worst, H.value(u.data()));
    ++c.samples;
  }
  c.holds = c.worst <= orientability_tolerance;
  return c;
}

SignCertificate certify_gradient_nonnegative(const NonlinearitySpec& H, const Box& box, int n) {
  SignCertificate c;
  c.worst = INFINITY;
  std::vector<double> g(H.m);
  for (const auto& u : sample_box(box, n)) {
    H.gradient(u.data(), g.data());
    for (double gi : g) c.worst = std::min(c.worst, gi);
    ++c.samples;
  }
  c.holds = c.worst >= -orientability_tolerance;
  return c;
}

Box trace_range(const FieldSet& v) {
  Box b;
  const auto& g = *v.grid;
  const int nb = g.boundary_node_count();
  for (int i = 0; i < v.m(); ++i) {
    double lo = INFINITY, hi = -INFINITY;
    for (int p = 0; p < nb; ++p) {
      lo = std::min(lo, v.values[i][p]);
      hi = std::max(hi, v.values[i][p]);
    }
    b.lo.push_back(lo);
    b.hi.push_back(hi);
  }
  return b;
}

HMonotoneReport check_H_monotone(const FieldSet& v, const NonlinearitySpec& H,
                                 const FractionalOrders& orders) {
  const auto& g = *v.grid;
  require(g.boundary_dim == 1, ErrorKind::grid_mismatch, "H-monotone: boundary dimension must be 1");
  require(v.m() == H.m && orders.m == H.m, ErrorKind::grid_mismatch, "H-monotone: component count mismatch");
  const int m = v.m();
  std::vector<std::vector<double>> dx(m);
  HMonotoneReport rep;
  for (int i = 0; i < m; ++i) {
    dx[i] = x_derivative_trace(g, v.values[i]);
    bool pos = true, neg = true;
    for (double d : dx[i]) {
      pos = pos && d > 1e-10;
      neg = neg && d < -1e-10;
    }
    rep.monotone.push_back(pos || neg);
  }
  rep.pair_slack = m > 1 ? INFINITY : 0.0;
  Eigen::VectorXd u(m);
  for (int p = 0; p < g.nx; ++p) {
    if (m == 1) break;
    for (int i = 0; i < m; ++i) u[i] = v.values[i][p];
    const auto e = H.eval(u);
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j)
        rep.pair_slack = std::min(rep.pair_slack, e.hessian(i, j) * dx[i][p] * dx[j][p]);
  }
  return rep;
}

}  // namespace fraclab
