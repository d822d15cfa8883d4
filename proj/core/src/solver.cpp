#include "fraclab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <boost/math/special_functions/beta.hpp>

#include "fraclab/error.hpp"

namespace fraclab {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::iteration_cap: return "iteration-cap";
    case SolveStatus::jacobian_breakdown: return "jacobian-breakdown";
    case SolveStatus::line_search_failure: return "line-search-failure";
  }
  return "?";
}

BoundaryData BoundaryData::states(std::vector<double> alpha, std::vector<double> beta, TopBC top) {
  BoundaryData b;
  b.alpha = std::move(alpha);
  b.beta = std::move(beta);
  b.top = top;
  return b;
}

BoundaryData BoundaryData::prescribed(const FieldSet& f, TopBC top) {
  BoundaryData b;
  b.values = f.values;
  b.top = top;
  return b;
}

BoundaryData BoundaryData::periodic(TopBC top) {
  BoundaryData b;
  b.lateral = LateralBC::periodic;
  b.top = top;
  return b;
}

namespace {

bool on_lateral(const HalfSpaceGrid& g, int p) {
  const int q = p % g.row_size();
  if (g.boundary_dim == 1) {
    const int i = q;
    return g.radial ? i == g.nx - 1 : (i == 0 || i == g.nx - 1);
  }
  const int i1 = q % g.nx, i2 = q / g.nx;
  return i1 == 0 || i2 == 0 || i1 == g.nx - 1 || i2 == g.nx - 1;
}

struct DofMap {
  std::vector<int> dof;
  std::vector<bool> fixed;
  int n = 0;
};

DofMap make_dofs(const HalfSpaceGrid& g, LateralBC lateral, TopBC top, bool bottom_fixed) {
  if (lateral == LateralBC::periodic)
    require(g.boundary_dim == 1 && !g.radial, ErrorKind::invalid_argument,
            "periodic lateral condition needs a 1-D slab grid");
  DofMap d;
  const int N = g.node_count(), rs = g.row_size();
  d.dof.assign(N, -1);
  d.fixed.assign(N, false);
  for (int p = 0; p < N; ++p) {
    const int j = p / rs;
    bool fx = (bottom_fixed && j == 0) || (top == TopBC::dirichlet && j == g.ny);
    if (lateral == LateralBC::dirichlet && on_lateral(g, p)) fx = true;
    d.fixed[p] = fx;
    if (fx) continue;
    if (lateral == LateralBC::periodic && p % rs == g.nx - 1) continue;
    d.dof[p] = d.n++;
  }
  if (lateral == LateralBC::periodic)
    for (int p = 0; p < N; ++p)
      if (!d.fixed[p] && p % rs == g.nx - 1) d.dof[p] = d.dof[p - (g.nx - 1)];
  return d;
}

std::vector<std::vector<double>> dirichlet_values(const HalfSpaceGrid& g, const BoundaryData& bc,
                                                  int m) {
  if (bc.values) {
    require(static_cast<int>(bc.values->size()) == m, ErrorKind::grid_mismatch,
            "boundary data: component count mismatch");
    for (const auto& c : *bc.values)
      require(static_cast<int>(c.size()) == g.node_count(), ErrorKind::grid_mismatch,
              "boundary data: node count mismatch");
    return *bc.values;
  }
  require(bc.top == TopBC::neumann, ErrorKind::invalid_argument,
          "boundary data: top Dirichlet condition needs prescribed values");
  if (bc.lateral != LateralBC::dirichlet) return {};
  require(g.boundary_dim == 1, ErrorKind::invalid_argument,
          "boundary data: 2-D boundary grids need prescribed lateral values");
  require(static_cast<int>(bc.alpha.size()) == m, ErrorKind::invalid_argument,
          "boundary data: alpha must have m entries");
  if (!g.radial)
    require(static_cast<int>(bc.beta.size()) == m, ErrorKind::invalid_argument,
            "boundary data: beta must have m entries");
  std::vector<std::vector<double>> v(m, std::vector<double>(g.node_count(), 0.0));
  for (int i = 0; i < m; ++i)
    for (int p = 0; p < g.node_count(); ++p) {
      const double x = g.x[p % g.nx];
      v[i][p] = (g.radial || x > 0) ? bc.alpha[i] : bc.beta[i];
    }
  return v;
}

// Column-tridiagonal preconditioned CG; returns false on breakdown (indefinite).
struct LineCG {
  std::vector<std::vector<int>> columns;

  void setup(const HalfSpaceGrid& g, const DofMap& dm, int m) {
    columns.clear();
    const int rs = g.row_size();
    std::vector<bool> used(dm.n, false);
    std::vector<std::vector<int>> base;
    for (int c = 0; c < rs; ++c) {
      std::vector<int> col;
      for (int j = 0; j <= g.ny; ++j) {
        const int P = dm.dof[j * rs + c];
        if (P < 0 || used[P]) continue;
        used[P] = true;
        col.push_back(P);
      }
      if (!col.empty()) base.push_back(std::move(col));
    }
    for (int i = 0; i < m; ++i)
      for (const auto& col : base) {
        std::vector<int> shifted(col);
        for (auto& P : shifted) P += i * dm.n;
        columns.push_back(std::move(shifted));
      }
  }

  bool solve(const SpMat& A, const Eigen::VectorXd& b, Eigen::VectorXd& x, double tol, int maxit,
             long& iters) const {
    // factor each column tridiagonal block
    std::vector<std::vector<double>> cd(columns.size()), ce(columns.size());
    for (size_t k = 0; k < columns.size(); ++k) {
      const auto& col = columns[k];
      auto& d = cd[k];
      auto& e = ce[k];
      d.resize(col.size());
      e.assign(col.size(), 0.0);
      for (size_t t = 0; t < col.size(); ++t) {
        d[t] = A.coeff(col[t], col[t]);
        if (t > 0) e[t] = A.coeff(col[t], col[t - 1]);
      }
      bool ok = true;
      for (size_t t = 1; t < col.size() && ok; ++t) {
        const double l = e[t] / d[t - 1];
        d[t] -= l * e[t];
        e[t] = l;
        ok = d[t] > 0;
      }
      if (!ok || d[0] <= 0) {
        for (size_t t = 0; t < col.size(); ++t) {
          d[t] = std::abs(A.coeff(col[t], col[t])) + 1e-300;
          e[t] = 0.0;
        }
      }
    }
    auto precond = [&](const Eigen::VectorXd& r, Eigen::VectorXd& z) {
      z = r;
      for (size_t k = 0; k < columns.size(); ++k) {
        const auto& col = columns[k];
        const auto& d = cd[k];
        const auto& e = ce[k];
        std::vector<double> w(col.size());
        for (size_t t = 0; t < col.size(); ++t) w[t] = r[col[t]] - (t ? e[t] * w[t - 1] : 0.0);
        for (size_t t = 0; t < col.size(); ++t) w[t] /= d[t];
        for (size_t t = col.size() - 1; t-- > 0;) w[t] -= e[t + 1] * w[t + 1];
        for (size_t t = 0; t < col.size(); ++t) z[col[t]] = w[t];
      }
    };
    x = Eigen::VectorXd::Zero(b.size());
    Eigen::VectorXd r = b, z, p, Ap;
    precond(r, z);
    p = z;
    double rz = r.dot(z);
    const double bn = b.norm();
    if (bn == 0.0) return true;
    for (int it = 0; it < maxit; ++it) {
      Ap = A * p;
      const double pAp = p.dot(Ap);
      ++iters;
      if (!(pAp > 0)) return false;
      const double alpha = rz / pAp;
      x += alpha * p;
      r -= alpha * Ap;
      if (r.norm() <= tol * bn) return true;
      precond(r, z);
      const double rz2 = r.dot(z);
      p = z + (rz2 / rz) * p;
      rz = rz2;
    }
    return true;
  }
};

struct LinearResult {
  Eigen::VectorXd x;
  bool ok = false;
  bool pd = false;
};

class Problem {
public:
  Problem(const HalfSpaceGrid& g, const FractionalOrders& o, const NonlinearitySpec* H, DofMap dm)
      : g_(g), o_(o), H_(H), dm_(std::move(dm)), m_(o.m), rs_(g.row_size()) {
    std::map<double, int> seen;
    for (int i = 0; i < m_; ++i) {
      auto it = seen.find(o.a[i]);
      if (it == seen.end()) {
        it = seen.emplace(o.a[i], static_cast<int>(ops_.size())).first;
        ops_.push_back(assemble_operator(g, o.a[i]));
      }
      op_of_.push_back(it->second);
    }
    mb_ = g.row_measure();
    const int n = dm_.n;
    D_ = Eigen::VectorXd::Zero(m_ * n);
    for (int i = 0; i < m_; ++i) {
      const double id = 1.0 / o.d[i];
      for (const auto& e : ops_[op_of_[i]].edges) {
        const int P = dm_.dof[e.p], Q = dm_.dof[e.q];
        const double c = e.c * id;
        if (P >= 0) K_.emplace_back(i * n + P, i * n + P, c), D_[i * n + P] += c;
        if (Q >= 0) K_.emplace_back(i * n + Q, i * n + Q, c), D_[i * n + Q] += c;
        if (P >= 0 && Q >= 0 && P != Q) {
          K_.emplace_back(i * n + P, i * n + Q, -c);
          K_.emplace_back(i * n + Q, i * n + P, -c);
        }
      }
    }
    S_ = D_.cwiseSqrt().cwiseInverse();
  }

  int size() const { return m_ * dm_.n; }
  const Eigen::VectorXd& scale() const { return S_; }
  const Eigen::VectorXd& diag() const { return D_; }
  const DofMap& dofs() const { return dm_; }

  Eigen::VectorXd residual(const std::vector<std::vector<double>>& v) const {
    const int n = dm_.n;
    Eigen::VectorXd F = Eigen::VectorXd::Zero(m_ * n);
    for (int i = 0; i < m_; ++i) {
      const auto Av = ops_[op_of_[i]].apply(v[i]);
      const double id = 1.0 / o_.d[i];
      for (size_t p = 0; p < Av.size(); ++p)
        if (dm_.dof[p] >= 0) F[i * n + dm_.dof[p]] += id * Av[p];
    }
    if (!H_) return F;
    std::vector<double> u(m_), gr(m_);
    for (int p = 0; p < rs_; ++p) {
      const int P = dm_.dof[p];
      if (P < 0) continue;
      for (int i = 0; i < m_; ++i) u[i] = v[i][p];
      H_->gradient(u.data(), gr.data());
      for (int i = 0; i < m_; ++i) F[i * n + P] -= mb_[p] * gr[i];
    }
    return F;
  }

  double energy(const std::vector<std::vector<double>>& v) const {
    double J = 0.0;
    for (int i = 0; i < m_; ++i) J += ops_[op_of_[i]].form(v[i]) / (2.0 * o_.d[i]);
    if (!H_) return J;
    std::vector<double> u(m_);
    for (int p = 0; p < rs_; ++p) {
      for (int i = 0; i < m_; ++i) u[i] = v[i][p];
      J -= mb_[p] * H_->value(u.data());
    }
    return J;
  }

  // scaled Jacobian S (K - B) S + shift I
  SpMat jacobian(const std::vector<std::vector<double>>& v, double shift) const {
    const int n = dm_.n;
    std::vector<Triplet> t = K_;
    if (H_) {
      Eigen::VectorXd u(m_);
      for (int p = 0; p < rs_; ++p) {
        const int P = dm_.dof[p];
        if (P < 0) continue;
        for (int i = 0; i < m_; ++i) u[i] = v[i][p];
        const auto e = H_->eval(u);
        for (int i = 0; i < m_; ++i)
          for (int k = 0; k < m_; ++k) t.emplace_back(i * n + P, k * n + P, -mb_[p] * e.hessian(i, k));
      }
    }
    for (int k = 0; k < m_ * n; ++k) t.emplace_back(k, k, shift * D_[k]);
    SpMat A(m_ * n, m_ * n);
    A.setFromTriplets(t.begin(), t.end());
    return S_.asDiagonal() * A * S_.asDiagonal();
  }

  void step(std::vector<std::vector<double>>& v, const Eigen::VectorXd& delta, double t) const {
    const int n = dm_.n;
    for (int i = 0; i < m_; ++i)
      for (size_t p = 0; p < v[i].size(); ++p)
        if (dm_.dof[p] >= 0) v[i][p] += t * delta[i * n + dm_.dof[p]];
  }

  double scaled_sup(const Eigen::VectorXd& F) const {
    return F.size() ? (F.cwiseAbs().cwiseQuotient(D_)).maxCoeff() : 0.0;
  }

private:
  const HalfSpaceGrid& g_;
  const FractionalOrders& o_;
  const NonlinearitySpec* H_;
  DofMap dm_;
  int m_, rs_;
  std::vector<WeightedOperator> ops_;
  std::vector<int> op_of_;
  std::vector<double> mb_;
  std::vector<Triplet> K_;
  Eigen::VectorXd D_, S_;
};

class LinearBackend {
public:
  LinearBackend(const HalfSpaceGrid& g, const DofMap& dm, int m, const SolverOptions& opt)
      : opt_(opt) {
    direct_ = opt.linear == LinearSolver::direct ||
              (opt.linear == LinearSolver::automatic && g.boundary_dim == 1);
    if (!direct_) cg_.setup(g, dm, m);
  }

  LinearResult solve(const SpMat& A, const Eigen::VectorXd& b, long& iters) {
    LinearResult r;
    if (direct_) {
      if (!analyzed_) {
        ldlt_.analyzePattern(A);
        analyzed_ = true;
      }
      ldlt_.factorize(A);
      ++iters;
      if (ldlt_.info() != Eigen::Success) return r;
      const auto& d = ldlt_.vectorD();
      r.pd = d.size() == 0 || d.minCoeff() > 0;
      if (!d.allFinite() || (d.array() == 0.0).any()) return r;
      r.x = ldlt_.solve(b);
      // one refinement sweep
      Eigen::VectorXd res = b - A * r.x;
      r.x += ldlt_.solve(res);
      r.ok = r.x.allFinite();
      return r;
    }
    r.pd = cg_.solve(A, b, r.x, opt_.krylov_tol, opt_.krylov_max, iters);
    r.ok = r.pd && r.x.allFinite();
    return r;
  }

private:
  SolverOptions opt_;
  bool direct_ = true;
  bool analyzed_ = false;
  Eigen::SimplicialLDLT<SpMat, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt_;
  LineCG cg_;
};

void check_field(const FieldSet& f, const HalfSpaceGrid& g, int m) {
  require(f.m() == m, ErrorKind::grid_mismatch, "field: component count mismatch");
  for (const auto& c : f.values) {
    require(static_cast<int>(c.size()) == g.node_count(), ErrorKind::grid_mismatch,
            "field: node count mismatch");
    for (double x : c) require(std::isfinite(x), ErrorKind::invalid_argument, "field: non-finite value");
  }
}

std::vector<std::vector<double>> with_bc(const FieldSet& initial, const DofMap& dm,
                                         const std::vector<std::vector<double>>& bv, int rs, int nx,
                                         bool periodic) {
  auto v = initial.values;
  for (size_t i = 0; i < v.size(); ++i)
    for (size_t p = 0; p < v[i].size(); ++p) {
      if (dm.fixed[p] && !bv.empty()) v[i][p] = bv[i][p];
      if (periodic && static_cast<int>(p % rs) == nx - 1) v[i][p] = v[i][p - (nx - 1)];
    }
  return v;
}

}  // namespace

double discrete_energy(const FieldSet& v, const NonlinearitySpec& H) {
  const auto& g = *v.grid;
  Problem pr(g, *v.orders, &H, make_dofs(g, LateralBC::neumann, TopBC::neumann, false));
  return pr.energy(v.values);
}

double residual_sup(const FieldSet& v, const NonlinearitySpec& H, const BoundaryData& bc) {
  const auto& g = *v.grid;
  Problem pr(g, *v.orders, &H, make_dofs(g, bc.lateral, bc.top, false));
  return pr.scaled_sup(pr.residual(v.values));
}

std::pair<FieldSet, SolveReport> solve_coupled(std::shared_ptr<const HalfSpaceGrid> grid,
                                               std::shared_ptr<const FractionalOrders> orders,
                                               const NonlinearitySpec& H, const BoundaryData& bc,
                                               const FieldSet& initial, const SolverOptions& opt) {
  const auto& g = *grid;
  const int m = orders->m;
  require(H.m == m, ErrorKind::grid_mismatch, "solve: H and orders disagree on m");
  check_field(initial, g, m);
  if (g.radial) require(bc.lateral == LateralBC::dirichlet || bc.lateral == LateralBC::neumann,
                        ErrorKind::invalid_argument, "solve: radial grids take a value at r = L");

  auto dm = make_dofs(g, bc.lateral, bc.top, false);
  const auto bv = dirichlet_values(g, bc, m);
  Problem pr(g, *orders, &H, dm);
  LinearBackend lin(g, pr.dofs(), m, opt);

  FieldSet out = initial;
  out.grid = grid;
  out.orders = orders;
  auto v = with_bc(initial, pr.dofs(), bv, g.row_size(), g.nx, bc.lateral == LateralBC::periodic);
  SolveReport rep;

  auto merit = [&](const std::vector<std::vector<double>>& w) {
    return pr.residual(w).cwiseProduct(pr.scale()).squaredNorm();
  };

  for (int it = 0;; ++it) {
    const Eigen::VectorXd F = pr.residual(v);
    const double r = pr.scaled_sup(F);
    const double J = pr.energy(v);
    rep.residual_history.push_back(r);
    rep.energy_history.push_back(J);
    rep.outer_iterations = it;
    if (r <= opt.newton_tol) {
      rep.converged = true;
      rep.status = SolveStatus::converged;
      break;
    }
    if (it >= opt.newton_max) {
      rep.status = SolveStatus::iteration_cap;
      break;
    }
    const Eigen::VectorXd b = -F.cwiseProduct(pr.scale());
    auto lr = lin.solve(pr.jacobian(v, 0.0), b, rep.linear_iterations_total);

    bool accepted = false;
    if (lr.ok) {
      const Eigen::VectorXd delta = lr.x.cwiseProduct(pr.scale());
      const double slope = F.dot(delta);
      const double phi0 = b.squaredNorm();
      if (!lr.pd) ++rep.indefinite_steps;
      if (!opt.damping) {
        pr.step(v, delta, 1.0);
        accepted = true;
      } else {
        for (double t = 1.0; t > 1e-10 && !accepted; t *= 0.5) {
          auto w = v;
          pr.step(w, delta, t);
          bool ok = false;
          if (lr.pd && slope < 0) {
            const double Jt = pr.energy(w);
            ok = Jt <= J + 1e-4 * t * slope ||
                 (t == 1.0 && std::abs(slope) < 1e-13 * (1.0 + std::abs(J)) &&
                  Jt <= J + 1e-13 * (1.0 + std::abs(J)));
          }
          if (!ok) ok = merit(w) <= (1.0 - 1e-4 * t) * phi0;
          if (ok) {
            v = std::move(w);
            accepted = true;
          }
        }
      }
    }
    if (!accepted) {
      // pseudo-transient fallback: shifted, positive definite linearization
      const double phi0 = b.squaredNorm();
      for (double tau = 1e-2; tau < 1e8 && !accepted; tau *= 10.0) {
        auto ls = lin.solve(pr.jacobian(v, tau), b, rep.linear_iterations_total);
        if (!ls.ok || !ls.pd) continue;
        const Eigen::VectorXd delta = ls.x.cwiseProduct(pr.scale());
        auto w = v;
        pr.step(w, delta, 1.0);
        if (pr.energy(w) < J || merit(w) < phi0) {
          v = std::move(w);
          accepted = true;
          ++rep.fallback_steps;
        }
      }
    }
    if (!accepted) {
      rep.status = lr.ok ? SolveStatus::line_search_failure : SolveStatus::jacobian_breakdown;
      break;
    }
  }
  out.values = std::move(v);
  return {std::move(out), rep};
}

std::pair<FieldSet, SolveReport> solve_radial(std::shared_ptr<const HalfSpaceGrid> grid,
                                              std::shared_ptr<const FractionalOrders> orders,
                                              const NonlinearitySpec& H, const BoundaryData& bc,
                                              const FieldSet& initial, const SolverOptions& opt) {
  require(grid->radial || grid->ambient_n == 1, ErrorKind::invalid_argument,
          "solve_radial: grid is not radial");
  return solve_coupled(std::move(grid), std::move(orders), H, bc, initial, opt);
}

FieldSet harmonic_extension(const std::vector<double>& trace, double s,
                            std::shared_ptr<const HalfSpaceGrid> grid, const ExtensionBC& bc) {
  const auto& g = *grid;
  require(static_cast<int>(trace.size()) == g.row_size(), ErrorKind::grid_mismatch,
          "extension: trace length differs from the boundary node count");
  auto orders = std::make_shared<const FractionalOrders>(make_orders({s}));
  auto dm = make_dofs(g, bc.lateral, bc.top, true);
  FieldSet v = make_field(grid, orders, 0.0);
  auto& u = v.values[0];
  if (bc.values) {
    require(static_cast<int>(bc.values->size()) == g.node_count(), ErrorKind::grid_mismatch,
            "extension: far-field values have the wrong size");
    for (int p = 0; p < g.node_count(); ++p)
      if (dm.fixed[p]) u[p] = (*bc.values)[p];
  } else {
    require(bc.lateral != LateralBC::dirichlet && bc.top != TopBC::dirichlet,
            ErrorKind::invalid_argument, "extension: Dirichlet far field needs values");
  }
  for (int p = 0; p < g.row_size(); ++p) u[p] = trace[p];
  Problem pr(g, *orders, nullptr, dm);
  SolverOptions opt;
  LinearBackend lin(g, pr.dofs(), 1, opt);
  long iters = 0;
  const SpMat A = pr.jacobian(v.values, 0.0);
  for (int sweep = 0; sweep < 2; ++sweep) {
    const Eigen::VectorXd F = pr.residual(v.values);
    auto lr = lin.solve(A, -F.cwiseProduct(pr.scale()), iters);
    require(lr.ok, ErrorKind::ill_conditioned, "extension: linear solve failed");
    pr.step(v.values, lr.x.cwiseProduct(pr.scale()), 1.0);
  }
  if (bc.lateral == LateralBC::periodic)
    for (int p = 0; p < g.node_count(); ++p)
      if (p % g.nx == g.nx - 1) u[p] = u[p - (g.nx - 1)];
  return v;
}

std::vector<std::vector<double>> dtn(const FieldSet& v) {
  const auto& g = *v.grid;
  const int rs = g.row_size();
  std::vector<std::vector<double>> flux(v.m(), std::vector<double>(rs));
  const double y1 = g.y[1], y2 = g.y[2];
  for (int i = 0; i < v.m(); ++i) {
    const double a = v.orders->a[i];
    const double p = 1.0 - a;
    Eigen::Matrix2d M;
    M << std::pow(y1, p), y1 * y1, std::pow(y2, p), y2 * y2;
    const Eigen::Vector2d cn(M.col(0).norm(), M.col(1).norm());
    const Eigen::Matrix2d Me = M * cn.cwiseInverse().asDiagonal();
    Eigen::JacobiSVD<Eigen::Matrix2d> svd(Me);
    const double cond = svd.singularValues()(0) / svd.singularValues()(1);
    require(cond <= 1e8, ErrorKind::ill_conditioned,
            "dtn: boundary fit ill-conditioned; increase grading or Ny");
    const Eigen::Matrix2d Minv = Me.inverse();
    const auto& u = v.values[i];
    for (int c = 0; c < rs; ++c) {
      const Eigen::Vector2d rhs(u[rs + c] - u[c], u[2 * rs + c] - u[c]);
      const double coef = (Minv * rhs)(0) / cn(0);
      flux[i][c] = -(1.0 - a) * coef;
    }
  }
  return flux;
}

double boundary_flux_balance(const FieldSet& v, const ExtensionBC& bc) {
  const auto& g = *v.grid;
  auto dm = make_dofs(g, bc.lateral, bc.top, true);
  const auto op = assemble_operator(g, v.orders->a[0]);
  const auto Av = op.apply(v.values[0]);
  double sum = 0.0, mag = 0.0;
  for (int p = 0; p < g.node_count(); ++p)
    if (dm.fixed[p]) {
      sum += Av[p];
      mag += std::abs(Av[p]);
    }
  return mag > 0 ? std::abs(sum) / mag : 0.0;
}

namespace {

double row_coordinate(const HalfSpaceGrid& g, int p, double* x2 = nullptr) {
  const int q = p % g.row_size();
  if (g.boundary_dim == 1) return g.x[q];
  if (x2) *x2 = g.x[q / g.nx];
  return g.x[q % g.nx];
}

template <class Fn>
FieldSet profile(std::shared_ptr<const HalfSpaceGrid> grid,
                 std::shared_ptr<const FractionalOrders> orders, Fn fn) {
  FieldSet f = make_field(grid, orders, 0.0);
  const auto& g = *grid;
  for (int i = 0; i < f.m(); ++i)
    for (int p = 0; p < g.node_count(); ++p) {
      double x2 = 0.0;
      const double x = row_coordinate(g, p, &x2);
      f.values[i][p] = fn(i, x, x2, g.y[p / g.row_size()]);
    }
  return f;
}

void check_states(const FractionalOrders& o, const std::vector<double>& alpha,
                  const std::vector<double>& beta) {
  require(static_cast<int>(alpha.size()) == o.m && static_cast<int>(beta.size()) == o.m,
          ErrorKind::invalid_argument, "profile: alpha and beta need m entries");
}

}  // namespace

FieldSet tanh_profile(std::shared_ptr<const HalfSpaceGrid> grid,
                      std::shared_ptr<const FractionalOrders> orders,
                      const std::vector<double>& alpha, const std::vector<double>& beta) {
  check_states(*orders, alpha, beta);
  return profile(grid, orders, [&](int i, double x, double, double y) {
    return 0.5 * (alpha[i] + beta[i]) + 0.5 * (alpha[i] - beta[i]) * std::tanh(x / (1.0 + y));
  });
}

FieldSet pn_exact_field(std::shared_ptr<const HalfSpaceGrid> grid,
                        std::shared_ptr<const FractionalOrders> orders,
                        const std::vector<double>& alpha, const std::vector<double>& beta) {
  check_states(*orders, alpha, beta);
  return profile(grid, orders, [&](int i, double x, double, double y) {
    return 0.5 * (alpha[i] + beta[i]) +
           0.5 * (alpha[i] - beta[i]) * (2.0 / std::numbers::pi) * std::atan(x / (1.0 + y));
  });
}

FieldSet step_field(std::shared_ptr<const HalfSpaceGrid> grid,
                    std::shared_ptr<const FractionalOrders> orders,
                    const std::vector<double>& alpha, const std::vector<double>& beta) {
  check_states(*orders, alpha, beta);
  const auto& o = *orders;
  return profile(grid, orders, [&](int i, double x, double, double y) {
    double gval;
    if (x == 0.0) {
      gval = 0.0;
    } else {
      const double z = x * x / (x * x + y * y);
      gval = (x > 0 ? 1.0 : -1.0) * boost::math::ibeta(0.5, o.s[i], z);
    }
    return 0.5 * (alpha[i] + beta[i]) + 0.5 * (alpha[i] - beta[i]) * gval;
  });
}

FieldSet bump_profile(std::shared_ptr<const HalfSpaceGrid> grid,
                      std::shared_ptr<const FractionalOrders> orders,
                      const std::vector<double>& base, double amplitude, double width) {
  require(static_cast<int>(base.size()) == orders->m, ErrorKind::invalid_argument,
          "profile: base needs m entries");
  return profile(grid, orders, [&](int i, double x, double x2, double y) {
    return base[i] + amplitude / (1.0 + (x * x + x2 * x2 + y * y) / (width * width));
  });
}

FieldSet rotate_layer(const FieldSet& line, std::shared_ptr<const HalfSpaceGrid> grid2,
                      double theta) {
  const auto& g1 = *line.grid;
  const auto& g2 = *grid2;
  require(g1.boundary_dim == 1 && !g1.radial && g2.boundary_dim == 2, ErrorKind::grid_mismatch,
          "rotate_layer: needs a 1-D slab source and a 2-D boundary target");
  require(g1.ny == g2.ny && g1.Y == g2.Y && g1.grading == g2.grading, ErrorKind::grid_mismatch,
          "rotate_layer: y grids differ");
  const double c = std::cos(theta), s = std::sin(theta);
  require(g1.L >= (std::abs(c) + std::abs(s)) * g2.L * (1 - 1e-12), ErrorKind::grid_mismatch,
          "rotate_layer: source line too short");
  FieldSet f = make_field(grid2, line.orders, 0.0);
  for (int i = 0; i < f.m(); ++i)
    for (int p = 0; p < g2.node_count(); ++p) {
      double x2 = 0.0;
      const double x1 = row_coordinate(g2, p, &x2);
      f.values[i][p] = interpolate(g1, line.values[i], c * x1 + s * x2, g2.y[p / g2.row_size()]);
    }
  return f;
}

}  // namespace fraclab
