#include "fraclab/operator.hpp"

#include "fraclab/error.hpp"

namespace fraclab {

WeightedOperator assemble_operator(const HalfSpaceGrid& g, double a) {
  require(a > -1.0 && a < 1.0, ErrorKind::invalid_argument, "operator: a must lie in (-1,1)");
  WeightedOperator op;
  op.a = a;
  op.nodes = g.node_count();
  const auto wy = g.y_hat_moments(a);
  const auto kappa = g.y_face_kappa(a);
  const int nx = g.nx;
  std::vector<double> xm(nx), xf(nx - 1);
  for (int i = 0; i < nx; ++i) xm[i] = g.x_measure(i);
  for (int i = 0; i + 1 < nx; ++i) xf[i] = g.x_face_factor(i);

  if (g.boundary_dim == 1) {
    op.edges.reserve(size_t(2) * g.node_count());
    for (int j = 0; j <= g.ny; ++j)
      for (int i = 0; i + 1 < nx; ++i)
        op.edges.push_back({g.index(i, j), g.index(i + 1, j), wy[j] * xf[i]});
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < nx; ++i)
        op.edges.push_back({g.index(i, j), g.index(i, j + 1), xm[i] * kappa[j]});
    return op;
  }
  op.edges.reserve(size_t(3) * g.node_count());
  for (int j = 0; j <= g.ny; ++j)
    for (int i2 = 0; i2 < nx; ++i2)
      for (int i1 = 0; i1 < nx; ++i1) {
        if (i1 + 1 < nx)
          op.edges.push_back({g.index(i1, i2, j), g.index(i1 + 1, i2, j), wy[j] * xf[i1] * xm[i2]});
        if (i2 + 1 < nx)
          op.edges.push_back({g.index(i1, i2, j), g.index(i1, i2 + 1, j), wy[j] * xf[i2] * xm[i1]});
        if (j < g.ny)
          op.edges.push_back({g.index(i1, i2, j), g.index(i1, i2, j + 1), xm[i1] * xm[i2] * kappa[j]});
      }
  return op;
}

std::vector<double> WeightedOperator::apply(const std::vector<double>& v) const {
  std::vector<double> r(nodes, 0.0);
  for (const auto& e : edges) {
    const double f = e.c * (v[e.p] - v[e.q]);
    r[e.p] += f;
    r[e.q] -= f;
  }
  return r;
}

double WeightedOperator::form(const std::vector<double>& v) const {
  double s = 0.0;
  for (const auto& e : edges) {
    const double d = v[e.p] - v[e.q];
    s += e.c * d * d;
  }
  return s;
}

double WeightedOperator::bilinear(const std::vector<double>& u, const std::vector<double>& v) const {
  double s = 0.0;
  for (const auto& e : edges) s += e.c * (u[e.p] - u[e.q]) * (v[e.p] - v[e.q]);
  return s;
}

std::vector<double> WeightedOperator::diagonal() const {
  std::vector<double> d(nodes, 0.0);
  for (const auto& e : edges) {
    d[e.p] += e.c;
    d[e.q] += e.c;
  }
  return d;
}

}  // namespace fraclab
