#pragma once

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <numbers>
#include <memory>
#include <random>
#include <vector>

#include "fraclab/field.hpp"
#include "fraclab/grid.hpp"
#include "fraclab/nonlinearity.hpp"
#include "fraclab/orders.hpp"
#include "fraclab/solver.hpp"

namespace fraclab::testing {

// Seeded generator for property tests.
struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
  bool coin() { return integer(0, 1) == 1; }

  std::vector<double> vector(int n, double lo, double hi) {
    std::vector<double> v(n);
    for (auto& x : v) x = uniform(lo, hi);
    return v;
  }
  std::vector<std::vector<double>> symmetric(int n, double lo, double hi) {
    std::vector<std::vector<double>> h(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) h[i][j] = h[j][i] = uniform(lo, hi);
    return h;
  }
  double order() { return uniform(0.1, 0.9); }
};

inline std::shared_ptr<const HalfSpaceGrid> grid(double L, int nx, double Y, int ny,
                                                 double grading = 3.0) {
  return std::make_shared<const HalfSpaceGrid>(build_grid(L, nx, Y, ny, grading));
}

inline std::shared_ptr<const FractionalOrders> orders(std::vector<double> s) {
  return std::make_shared<const FractionalOrders>(make_orders(s));
}

// sum over components of c_i * u_i^2 / 2 plus optional coupling lambda u_1 u_2
inline NonlinearitySpec quadratic(const std::vector<double>& c, double lambda = 0.0) {
  NonlinearitySpec H;
  H.m = static_cast<int>(c.size());
  for (int i = 0; i < H.m; ++i) {
    std::vector<int> e(H.m, 0);
    e[i] = 2;
    H.add({c[i] / 2, TermKind::monomial, e});
  }
  if (lambda != 0.0 && H.m >= 2) {
    std::vector<int> e(H.m, 0);
    e[0] = e[1] = 1;
    H.add({lambda, TermKind::monomial, e});
  }
  return H;
}

// -(1 - u_i^2)^2 / 4 per component plus lambda (u_1 u_2 - ...) coupling
inline NonlinearitySpec double_well(int m, double lambda = 0.0) {
  NonlinearitySpec H;
  H.m = m;
  for (int i = 0; i < m; ++i) {
    std::vector<int> e0(m, 0), e2(m, 0), e4(m, 0);
    e2[i] = 2;
    e4[i] = 4;
    H.add({-0.25, TermKind::monomial, e0});
    H.add({0.5 - lambda / 2, TermKind::monomial, e2});
    H.add({-0.25, TermKind::monomial, e4});
  }
  if (lambda != 0.0 && m >= 2) {
    std::vector<int> e(m, 0);
    e[0] = e[1] = 1;
    H.add({lambda, TermKind::monomial, e});
  }
  return H;
}

// -(1 + cos(pi u)) / pi^2
inline NonlinearitySpec peierls_nabarro() {
  const double c = -1.0 / (std::numbers::pi * std::numbers::pi);
  NonlinearitySpec H;
  H.m = 1;
  H.add({c, TermKind::monomial, {0}});
  H.add({c, TermKind::cosine, {1}});
  return H;
}

struct Layer {
  FieldSet v;
  NonlinearitySpec H;
};

// cooperative two-component double-well layer, s = (0.5, 0.7), step far field
inline const Layer& coupled_layer() {
  static const Layer layer = [] {
    const auto g = grid(15, 301, 15, 60);
    const auto o = orders({0.5, 0.7});
    const auto H = double_well(2, 0.25);
    const auto far = step_field(g, o, {1, 1}, {-1, -1});
    auto [v, rep] = solve_coupled(g, o, H, BoundaryData::prescribed(far, TopBC::dirichlet),
                                  tanh_profile(g, o, {1, 1}, {-1, -1}));
    if (!rep.converged) throw std::runtime_error("coupled layer fixture did not converge");
    return Layer{v, H};
  }();
  return layer;
}

inline const Layer& single_layer(double s) {
  static std::map<double, Layer> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(s);
  if (it != cache.end()) return it->second;
  const auto g = grid(15, 301, 15, 60);
  const auto o = orders({s});
  const auto H = double_well(1);
  const auto far = step_field(g, o, {1}, {-1});
  auto [v, rep] = solve_coupled(g, o, H, BoundaryData::prescribed(far, TopBC::dirichlet),
                                tanh_profile(g, o, {1}, {-1}));
  if (!rep.converged) throw std::runtime_error("single layer fixture did not converge");
  return cache.emplace(s, Layer{v, H}).first->second;
}

}  // namespace fraclab::testing
