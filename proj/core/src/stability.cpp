#include "fraclab/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <json.hpp>

#include "fraclab/error.hpp"
#include "fraclab/io.hpp"
#include "fraclab/operator.hpp"

namespace fraclab {

namespace {

// node lies on the lateral or top truncation boundary
std::vector<char> truncation_mask(const HalfSpaceGrid& g) {
  std::vector<char> on(g.node_count(), 0);
  const int rs = g.row_size();
  for (int p = 0; p < g.node_count(); ++p) {
    const int j = p / rs, q = p % rs;
    if (j == g.ny) {
      on[p] = 1;
      continue;
    }
    auto edge = [&](int i) { return i == g.nx - 1 || (!g.radial && i == 0); };
    if (g.boundary_dim == 1)
      on[p] = edge(q);
    else
      on[p] = edge(q % g.nx) || edge(q / g.nx);
  }
  return on;
}

// sqrt(d_i d_j) H_ij(v_p) for every boundary node
std::vector<Eigen::MatrixXd> scaled_hessians(const FieldSet& v, const NonlinearitySpec& H) {
  const int m = v.m(), rs = v.grid->row_size();
  std::vector<Eigen::MatrixXd> out(rs);
  Eigen::VectorXd u(m), sd(m);
  for (int i = 0; i < m; ++i) sd(i) = std::sqrt(v.orders->d[i]);
  for (int p = 0; p < rs; ++p) {
    for (int i = 0; i < m; ++i) u(i) = v.values[i][p];
    out[p] = sd.asDiagonal() * H.eval(u).hessian * sd.asDiagonal();
  }
  return out;
}

std::vector<WeightedOperator> operators(const FieldSet& v) {
  std::vector<WeightedOperator> ops;
  for (int i = 0; i < v.m(); ++i) {
    bool found = false;
    for (int k = 0; k < i; ++k)
      if (v.orders->a[k] == v.orders->a[i]) {
        ops.push_back(ops[k]);
        found = true;
        break;
      }
    if (!found) ops.push_back(assemble_operator(*v.grid, v.orders->a[i]));
  }
  return ops;
}

double gap_with(const FieldSet& v, const std::vector<WeightedOperator>& ops,
                const std::vector<Eigen::MatrixXd>& hess, const std::vector<double>& mb,
                const TestFunction& t) {
  const int m = v.m();
  double kinetic = 0.0, boundary = 0.0;
  for (int i = 0; i < m; ++i) kinetic += ops[i].form(t.zeta[i]);
  for (size_t p = 0; p < mb.size(); ++p)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) boundary += mb[p] * hess[p](i, j) * t.zeta[i][p] * t.zeta[j][p];
  return kinetic - boundary;
}

void check_support(const FieldSet& v, const TestFunction& t, const std::vector<char>& mask) {
  require(static_cast<int>(t.zeta.size()) == v.m(), ErrorKind::invalid_argument,
          "stability: test function '" + t.id + "' has the wrong number of components");
  for (const auto& z : t.zeta) {
    require(z.size() == static_cast<size_t>(v.grid->node_count()), ErrorKind::grid_mismatch,
            "stability: test function '" + t.id + "' does not match the grid");
    for (size_t p = 0; p < z.size(); ++p)
      require(!mask[p] || z[p] == 0.0, ErrorKind::invalid_argument,
              "stability: test function '" + t.id +
                  "' does not vanish on the lateral/top truncation boundary");
  }
}

double smooth_step(double t) {
  // 1 on [0, 1/2], 0 on [1, inf), C-infinity in between
  if (t <= 0.5) return 1.0;
  if (t >= 1.0) return 0.0;
  const double u = 2.0 * (t - 0.5);
  const double a = std::exp(-1.0 / (1.0 - u)), b = std::exp(-1.0 / u);
  return a / (a + b);
}

double variance(const std::vector<double>& x) {
  if (x.empty()) return 0.0;
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
  double s = 0.0;
  for (double e : x) s += (e - mean) * (e - mean);
  return s / x.size();
}

}  // namespace

double quadratic_gap(const FieldSet& v, const NonlinearitySpec& H, const TestFunction& t) {
  check_support(v, t, truncation_mask(*v.grid));
  return gap_with(v, operators(v), scaled_hessians(v, H), v.grid->row_measure(), t);
}

std::vector<double> cutoff(const HalfSpaceGrid& g, double rho) {
  std::vector<double> eta(g.node_count());
  const int rs = g.row_size();
  for (int p = 0; p < g.node_count(); ++p) {
    const int j = p / rs, q = p % rs;
    double r2 = g.y[j] * g.y[j];
    if (g.boundary_dim == 1) {
      r2 += g.x[q] * g.x[q];
    } else {
      r2 += g.x[q % g.nx] * g.x[q % g.nx] + g.x[q / g.nx] * g.x[q / g.nx];
    }
    eta[p] = smooth_step(std::sqrt(r2) / rho);
  }
  return eta;
}

std::vector<double> cutoff_scales(const HalfSpaceGrid& g, int count) {
  std::vector<double> r;
  const double top = 0.9 * std::min(g.L, g.Y);
  for (int k = 0; k < count; ++k) r.push_back(top * std::pow(0.5, k));
  return r;
}

std::vector<TestFunction> default_family(const FieldSet& v, const std::vector<int>& theta) {
  const auto& g = *v.grid;
  const int m = v.m();
  std::vector<std::vector<double>> dx;
  for (int i = 0; i < m; ++i) dx.push_back(x_derivative(g, v.values[i]));
  std::vector<TestFunction> fam;
  const auto scales = cutoff_scales(g);
  for (size_t k = 0; k < scales.size(); ++k) {
    const auto eta = cutoff(g, scales[k]);
    TestFunction bump{"bump-" + std::to_string(k), {}}, mode{"dxv-" + std::to_string(k), {}};
    for (int i = 0; i < m; ++i) {
      const double sd = 1.0 / std::sqrt(v.orders->d[i]);
      const double th = theta.empty() ? 1.0 : theta[i];
      std::vector<double> zb(eta.size()), zm(eta.size());
      for (size_t p = 0; p < eta.size(); ++p) {
        zb[p] = th * sd * eta[p];
        zm[p] = sd * dx[i][p] * eta[p];
      }
      bump.zeta.push_back(std::move(zb));
      mode.zeta.push_back(std::move(zm));
    }
    fam.push_back(std::move(bump));
    fam.push_back(std::move(mode));
  }
  return fam;
}

StabilityReport stability_gap(const FieldSet& v, const NonlinearitySpec& H,
                              const std::vector<TestFunction>& tests) {
  require(!tests.empty(), ErrorKind::invalid_argument, "stability: empty test family");
  const auto mask = truncation_mask(*v.grid);
  for (const auto& t : tests) check_support(v, t, mask);
  const auto ops = operators(v);
  const auto hess = scaled_hessians(v, H);
  const auto mb = v.grid->row_measure();
  StabilityReport r;
  r.quadratic_gap = std::numeric_limits<double>::infinity();
  for (const auto& t : tests) {
    const double gp = gap_with(v, ops, hess, mb, t);
    r.gaps.push_back(gp);
    if (gp < r.quadratic_gap) {
      r.quadratic_gap = gp;
      r.family = t.id;
    }
  }
  return r;
}

PoincareReport poincare_reduction(const FieldSet& v, const NonlinearitySpec& H,
                                  const std::vector<double>& scales) {
  const auto& g = *v.grid;
  require(g.boundary_dim == 1 && g.measure_dim() == 1, ErrorKind::grid_mismatch,
          "poincare: the reduction needs a slab with n = 1");
  require(!scales.empty(), ErrorKind::invalid_argument, "poincare: no cutoff scales");
  const int m = v.m();
  require(m <= 6, ErrorKind::scope_limit, "poincare: at most 6 components");
  const auto ops = operators(v);
  const auto mb = g.row_measure();
  std::vector<std::vector<double>> dx;
  for (int i = 0; i < m; ++i) dx.push_back(x_derivative(g, v.values[i]));
  std::vector<std::vector<double>> etas;
  for (double rho : scales) etas.push_back(cutoff(g, rho));
  std::vector<Eigen::MatrixXd> hess(g.row_size());
  Eigen::VectorXd u(m);
  for (int p = 0; p < g.row_size(); ++p) {
    for (int i = 0; i < m; ++i) u(i) = v.values[i][p];
    hess[p] = H.eval(u).hessian;
  }
  // weighted Dirichlet form of eta with density |d_x v_i|^2 averaged on each edge
  const int K = static_cast<int>(scales.size());
  std::vector<std::vector<double>> lhs(m, std::vector<double>(K, 0.0));
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < K; ++k) {
      double s = 0.0;
      for (const auto& e : ops[i].edges) {
        const double de = etas[k][e.p] - etas[k][e.q];
        s += e.c * de * de * 0.5 * (dx[i][e.p] * dx[i][e.p] + dx[i][e.q] * dx[i][e.q]);
      }
      lhs[i][k] = s / v.orders->d[i];
    }
  PoincareReport rep;
  rep.slack = std::numeric_limits<double>::infinity();
  std::vector<int> assign(m, 0);
  long total = 1;
  for (int i = 0; i < m; ++i) total *= K;
  for (long c = 0; c < total; ++c) {
    long t = c;
    for (int i = 0; i < m; ++i) {
      assign[i] = static_cast<int>(t % K);
      t /= K;
    }
    double left = 0.0, right = 0.0;
    for (int i = 0; i < m; ++i) left += lhs[i][assign[i]];
    for (int p = 0; p < g.row_size(); ++p)
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          if (i == j) continue;
          const double ei = etas[assign[i]][p], ej = etas[assign[j]][p];
          right += mb[p] * hess[p](i, j) *
                   (std::abs(dx[i][p]) * std::abs(dx[j][p]) * ei * ej - dx[i][p] * dx[j][p] * ei * ei);
        }
    ++rep.tested;
    if (left - right < rep.slack) {
      rep.slack = left - right;
      rep.scales = assign;
    }
  }
  return rep;
}

StabilityReport linearized_spectrum(const FieldSet& v, const NonlinearitySpec& H,
                                    int max_iterations, double tol) {
  const auto& g = *v.grid;
  const int m = v.m(), rs = g.row_size();
  const auto mask = truncation_mask(g);
  std::vector<int> dof(g.node_count(), -1);
  int nf = 0;
  for (int p = 0; p < g.node_count(); ++p)
    if (!mask[p]) dof[p] = nf++;
  const int N = m * nf;
  require(nf > 0, ErrorKind::grid_mismatch, "spectrum: no free nodes");
  const auto ops = operators(v);
  const auto hess = scaled_hessians(v, H);
  const auto mb = g.row_measure();

  std::vector<Eigen::Triplet<double>> kt, mt;
  for (int i = 0; i < m; ++i) {
    const int off = i * nf;
    for (const auto& e : ops[i].edges) {
      const int a = dof[e.p], b = dof[e.q];
      if (a >= 0) kt.emplace_back(off + a, off + a, e.c);
      if (b >= 0) kt.emplace_back(off + b, off + b, e.c);
      if (a >= 0 && b >= 0) {
        kt.emplace_back(off + a, off + b, -e.c);
        kt.emplace_back(off + b, off + a, -e.c);
      }
    }
  }
  double hscale = 0.0;
  for (int p = 0; p < rs; ++p) {
    if (dof[p] < 0) continue;
    hscale = std::max(hscale, hess[p].cwiseAbs().rowwise().sum().maxCoeff());
    for (int i = 0; i < m; ++i) {
      mt.emplace_back(i * nf + dof[p], i * nf + dof[p], mb[p]);
      for (int j = 0; j < m; ++j)
        if (hess[p](i, j) != 0.0)
          kt.emplace_back(i * nf + dof[p], j * nf + dof[p], -mb[p] * hess[p](i, j));
    }
  }
  Eigen::SparseMatrix<double> K(N, N), M(N, N);
  K.setFromTriplets(kt.begin(), kt.end());
  M.setFromTriplets(mt.begin(), mt.end());

  StabilityReport r;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  const double shifts[] = {0.0, 1e-4, 1e-3, 1e-2, 1e-1, 1.0, 2.0};
  bool factored = false;
  for (double f : shifts) {
    r.shift = f * std::max(hscale, 1e-300);
    Eigen::SparseMatrix<double> A = K + r.shift * M;
    if (f == 0.0) ldlt.analyzePattern(A);
    ldlt.factorize(A);
    if (ldlt.info() == Eigen::Success && (ldlt.vectorD().array() > 0).all()) {
      factored = true;
      break;
    }
  }
  require(factored, ErrorKind::ill_conditioned, "spectrum: shifted form is not positive definite");

  const int b = std::min(3, N);
  Eigen::MatrixXd X(N, b);
  for (int c = 0; c < b; ++c)
    for (int k = 0; k < N; ++k) X(k, c) = std::cos(0.37 * (c + 1) * k + 0.11 * c) + 1.5 * (c == 0);
  Eigen::VectorXd lam = Eigen::VectorXd::Constant(b, std::numeric_limits<double>::infinity());
  for (int it = 1; it <= max_iterations; ++it) {
    const Eigen::MatrixXd MX = M * X;
    Eigen::MatrixXd Y(N, b);
    for (int c = 0; c < b; ++c) Y.col(c) = ldlt.solve(MX.col(c));
    const Eigen::MatrixXd KY = K * Y, MY = M * Y;
    Eigen::MatrixXd Kr = Y.transpose() * KY, Mr = Y.transpose() * MY;
    Kr = 0.5 * (Kr + Kr.transpose());
    Mr = 0.5 * (Mr + Mr.transpose());
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Kr, Mr);
    X = Y * es.eigenvectors();
    for (int c = 0; c < b; ++c) X.col(c) /= std::sqrt(X.col(c).dot(M * X.col(c)));
    const Eigen::VectorXd next = es.eigenvalues();
    const double change = (next - lam).cwiseAbs().maxCoeff();
    lam = next;
    r.eigen_iterations = it;
    if (change <= tol * std::max(1.0, lam.cwiseAbs().maxCoeff())) {
      r.eigen_converged = true;
      break;
    }
  }
  r.eigenvalues.assign(lam.data(), lam.data() + b);
  r.smallest_eigenvalue = lam(0);

  r.eigenvector = v;
  r.eigenvector_sign_consistent = true;
  for (int i = 0; i < m; ++i) {
    auto& e = r.eigenvector.values[i];
    std::fill(e.begin(), e.end(), 0.0);
    double hi = 0.0, lo = 0.0;
    for (int p = 0; p < g.node_count(); ++p)
      if (dof[p] >= 0) {
        e[p] = X(i * nf + dof[p], 0);
        hi = std::max(hi, e[p]);
        lo = std::min(lo, e[p]);
      }
    const double big = std::max(hi, -lo);
    if (big > 0 && std::min(hi, -lo) > 1e-6 * big) r.eigenvector_sign_consistent = false;
  }
  return r;
}

std::string to_json_text(const StabilityReport& r) {
  nlohmann::ordered_json j;
  auto num = [](double x) -> nlohmann::ordered_json {
    if (std::isfinite(x)) return x;
    return format_double(x);
  };
  j["quadratic-gap"] = num(r.quadratic_gap);
  j["family"] = r.family;
  j["smallest-eigenvalue"] = num(r.smallest_eigenvalue);
  j["eigenvector-sign-consistent"] = r.eigenvector_sign_consistent;
  j["eigen-converged"] = r.eigen_converged;
  j["eigen-iterations"] = r.eigen_iterations;
  return j.dump();
}

SigmaReport sigma_residual(const FieldSet& v, const NonlinearitySpec& H, const FieldSet& phi,
                           const std::vector<double>& direction) {
  const auto& g = *v.grid;
  require(static_cast<int>(direction.size()) == g.boundary_dim, ErrorKind::invalid_argument,
          "sigma: direction needs one entry per boundary dimension");
  double len = 0.0;
  for (double c : direction) len += c * c;
  require(len > 0, ErrorKind::invalid_argument, "sigma: zero direction");
  len = std::sqrt(len);
  FieldSet psi = v;
  for (int i = 0; i < v.m(); ++i) {
    std::fill(psi.values[i].begin(), psi.values[i].end(), 0.0);
    for (int ax = 0; ax < g.boundary_dim; ++ax) {
      const auto d = x_derivative(g, v.values[i], ax);
      for (size_t p = 0; p < d.size(); ++p) psi.values[i][p] += direction[ax] / len * d[p];
    }
  }
  return sigma_residual(v, H, phi, psi);
}

SigmaReport sigma_residual(const FieldSet& v, const NonlinearitySpec& H, const FieldSet& phi,
                           const FieldSet& psi) {
  const auto& g = *v.grid;
  const int m = v.m(), rs = g.row_size();
  require(phi.m() == m && psi.m() == m, ErrorKind::invalid_argument,
          "sigma: phi and psi need m components");
  for (int i = 0; i < m; ++i)
    for (double f : phi.values[i])
      require(f != 0.0 && std::isfinite(f), ErrorKind::hypothesis_violated,
              "sigma: phi vanishes at a node; the quotient is undefined");
  const auto mask = truncation_mask(g);
  const auto ops = operators(v);
  const auto mb = g.row_measure();
  std::vector<Eigen::MatrixXd> hess(rs);
  Eigen::VectorXd u(m);
  for (int p = 0; p < rs; ++p) {
    for (int i = 0; i < m; ++i) u(i) = v.values[i][p];
    hess[p] = H.eval(u).hessian;
  }
  SigmaReport rep;
  rep.sigma = v;
  for (int i = 0; i < m; ++i)
    for (size_t p = 0; p < phi.values[i].size(); ++p)
      rep.sigma.values[i][p] = psi.values[i][p] / phi.values[i][p];
  const auto& sg = rep.sigma.values;
  for (int i = 0; i < m; ++i) {
    std::vector<double> flux(g.node_count(), 0.0), mag(g.node_count(), 0.0);
    const auto& ph = phi.values[i];
    for (const auto& e : ops[i].edges) {
      const double t = e.c * ph[e.p] * ph[e.q] * (sg[i][e.q] - sg[i][e.p]);
      flux[e.p] += t;
      flux[e.q] -= t;
      mag[e.p] = std::max(mag[e.p], std::abs(t));
      mag[e.q] = std::max(mag[e.q], std::abs(t));
    }
    double interior = 0.0, boundary = 0.0, scale = 0.0;
    std::vector<double> free_sigma;
    for (int p = 0; p < g.node_count(); ++p) {
      if (mask[p]) continue;
      free_sigma.push_back(sg[i][p]);
      double r = flux[p];
      if (p < rs) {
        for (int j = 0; j < m; ++j) {
          const double t = v.orders->d[i] * mb[p] * hess[p](i, j) * ph[p] * phi.values[j][p] *
                           (sg[j][p] - sg[i][p]);
          r += t;
          mag[p] = std::max(mag[p], std::abs(t));
        }
        boundary = std::max(boundary, std::abs(r));
      } else {
        interior = std::max(interior, std::abs(r));
      }
      scale = std::max(scale, mag[p]);
    }
    rep.interior.push_back(interior);
    rep.boundary.push_back(boundary);
    rep.scale.push_back(scale);
    rep.variance.push_back(variance(free_sigma));
  }
  return rep;
}

std::string GrowthTag::str() const {
  return kind == GrowthKind::log ? "log" : "power(" + format_double(p) + ")";
}

GrowthTag parse_growth(const std::string& text) {
  if (text == "log") return {GrowthKind::log, 0.0};
  if (text.rfind("power(", 0) == 0 && text.size() > 7 && text.back() == ')')
    return {GrowthKind::power, parse_double(text.substr(6, text.size() - 7))};
  fail(ErrorKind::malformed_input, "growth: expected 'log' or 'power(p)', got '" + text + "'");
}

void require_growth_class(const GrowthTag& F) {
  if (F.kind == GrowthKind::log) return;
  require(F.p >= 0.0, ErrorKind::class_violation,
          "growth: F(r) = r^" + format_double(F.p) + " is decreasing, not in the class F");
  require(F.p <= 0.0, ErrorKind::class_violation,
          "growth: F(r) = r^" + format_double(F.p) +
              " has int dr / (r F(r)) < inf, not in the class F");
}

GrowthCurve liouville_growth(const FieldSet& sigma, const FieldSet& phi, const GrowthTag& F,
                             const std::vector<double>& R) {
  require_growth_class(F);
  require(sigma.m() == phi.m(), ErrorKind::invalid_argument,
          "growth: sigma and phi need the same number of components");
  require(!R.empty(), ErrorKind::invalid_argument, "growth: empty radius list");
  const auto& g = *sigma.grid;
  GrowthCurve c;
  for (double r : R) {
    require(r > (F.kind == GrowthKind::log ? 1.0 : 0.0), ErrorKind::invalid_argument,
            "growth: radius outside the domain of F");
    double total = 0.0;
    for (int i = 0; i < sigma.m(); ++i) {
      const auto w = region_weights(g, sigma.orders->a[i], Region::cylinder(r));
      for (size_t p = 0; p < w.size(); ++p)
        if (w[p] != 0.0) {
          const double f = phi.values[i][p] * sigma.values[i][p];
          total += w[p] * f * f;
        }
    }
    const double Fr = F.kind == GrowthKind::log ? std::log(r) : std::pow(r, F.p);
    c.R.push_back(r);
    c.value.push_back(total / (r * r * Fr));
  }
  c.sup = *std::max_element(c.value.begin(), c.value.end());
  const size_t start = c.R.size() - std::max<size_t>(2, c.R.size() / 4);
  bool nonincreasing = std::isfinite(c.sup);
  for (size_t k = start + 1; k < c.R.size() && k > 0; ++k)
    nonincreasing = nonincreasing && c.value[k] <= c.value[k - 1] * (1 + 1e-12) + 1e-300;
  c.hypothesis_satisfied = nonincreasing;
  return c;
}

BoundedEnergy bounded_energy_check(const FieldSet& v, const NonlinearitySpec& H,
                                   const std::vector<double>& R, double margin) {
  require(R.size() >= 2, ErrorKind::invalid_argument, "bounded energy: need at least two radii");
  const auto& g = *v.grid;
  const int n = g.measure_dim();
  BoundedEnergy b;
  b.R = R;
  const auto cert = certify_gradient_nonnegative(H, trace_range(v));
  b.applicable = cert.holds;
  b.certificate_worst = cert.worst;
  for (int i = 0; i < v.m(); ++i) {
    const double a = v.orders->a[i];
    std::vector<double> dx = x_derivative(g, v.values[i]);
    std::vector<double> dx2;
    if (g.boundary_dim == 2) dx2 = x_derivative(g, v.values[i], 1);
    const auto q = weighted_flux(g, v.values[i], a);
    std::vector<double> I;
    for (double r : R) {
      const auto wa = region_weights(g, a, Region::half_ball(r));
      const auto wm = region_weights(g, -a, Region::half_ball(r));
      double s = 0.0;
      for (size_t p = 0; p < wa.size(); ++p) {
        double gx = dx[p] * dx[p];
        if (!dx2.empty()) gx += dx2[p] * dx2[p];
        s += wa[p] * gx + wm[p] * q[p] * q[p];
      }
      I.push_back(s);
    }
    const double predicted = n - 2 * v.orders->s[i];
    double fitted = std::numeric_limits<double>::quiet_NaN();
    const double top = *std::max_element(I.begin(), I.end());
    if (top > 1e-20 && std::all_of(I.begin(), I.end(), [](double x) { return x > 0; })) {
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      const double k = static_cast<double>(R.size());
      for (size_t j = 0; j < R.size(); ++j) {
        const double lx = std::log(R[j]), ly = std::log(I[j]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
      }
      fitted = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    }
    b.exponent.push_back(fitted);
    b.predicted.push_back(predicted);
    b.slack.push_back(std::isnan(fitted) ? std::numeric_limits<double>::infinity()
                                         : predicted + margin - fitted);
    b.integrals.push_back(std::move(I));
  }
  return b;
}

std::string to_string(DichotomyTag t) {
  switch (t) {
    case DichotomyTag::flat: return "identically-flat";
    case DichotomyTag::one_signed: return "strictly-one-signed";
    case DichotomyTag::mixed: return "mixed";
  }
  return "?";
}

std::vector<DichotomyTag> dichotomy_check(const FieldSet& v) {
  const auto& g = *v.grid;
  require(g.boundary_dim == 1, ErrorKind::grid_mismatch, "dichotomy: needs n = 1");
  std::vector<DichotomyTag> tags;
  for (int i = 0; i < v.m(); ++i) {
    const auto d = x_derivative_trace(g, v.values[i]);
    double vmax = 0.0, dmax = 0.0, pos = 0.0, neg = 0.0;
    for (int c = 0; c < g.nx; ++c) vmax = std::max(vmax, std::abs(v.values[i][c]));
    for (double e : d) {
      dmax = std::max(dmax, std::abs(e));
      pos = std::max(pos, e);
      neg = std::max(neg, -e);
    }
    const double tol = 1e-9 * std::max(1.0, vmax);
    if (dmax <= tol)
      tags.push_back(DichotomyTag::flat);
    else if (std::min(pos, neg) <= tol)
      tags.push_back(DichotomyTag::one_signed);
    else
      tags.push_back(DichotomyTag::mixed);
  }
  return tags;
}

KTerm k_term(const std::vector<double>& sigma, const std::vector<std::vector<double>>& h,
             OddFunction f) {
  const size_t m = sigma.size();
  require(h.size() == m, ErrorKind::invalid_argument, "k-term: h must be m x m");
  auto F = [f](double t) { return f == OddFunction::identity ? t : t * t * t; };
  KTerm k;
  for (size_t i = 0; i < m; ++i) {
    require(h[i].size() == m, ErrorKind::invalid_argument, "k-term: h must be m x m");
    for (size_t j = 0; j < m; ++j) {
      const double t = h[i][j] * sigma[i] * F(sigma[j] - sigma[i]);
      k.lhs += t;
      k.scale = std::max(k.scale, std::abs(t));
      if (i < j) k.rhs -= h[i][j] * (sigma[j] - sigma[i]) * F(sigma[j] - sigma[i]);
    }
  }
  return k;
}

}  // namespace fraclab
