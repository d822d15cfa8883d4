#include <gtest/gtest.h>

#include <cmath>

#include "fraclab/error.hpp"
#include "fraclab/operator.hpp"
#include "support.hpp"

using namespace fraclab;
using fraclab::testing::Gen;

TEST(Operator, ConstantsAreInTheKernel) {
  const auto g = build_grid(3, 13, 2, 9, 2.5);
  for (double a : {-0.5, 0.0, 0.7}) {
    const auto op = assemble_operator(g, a);
    const auto r = op.apply(std::vector<double>(g.node_count(), 3.0));
    for (double x : r) EXPECT_EQ(x, 0.0);
  }
}

TEST(Operator, LinearInXHasExactEnergy) {
  const auto g = build_grid(3, 13, 2, 9, 2.5);
  for (double a : {-0.5, 0.0, 0.7}) {
    std::vector<double> v(g.node_count());
    for (int p = 0; p < g.node_count(); ++p) v[p] = g.x[p % g.nx];
    EXPECT_NEAR(assemble_operator(g, a).form(v), 6 * std::pow(2.0, 1 + a) / (1 + a), 1e-12);
  }
}

// y^{1-a} is the discrete harmonic profile: the harmonic-mean faces integrate it exactly
TEST(Operator, SingularProfileHasExactEnergy) {
  const auto g = build_grid(3, 13, 2, 9, 3.0);
  for (double a : {-0.5, 0.3, 0.8}) {
    std::vector<double> v(g.node_count());
    for (int p = 0; p < g.node_count(); ++p) v[p] = std::pow(g.y[p / g.nx], 1 - a);
    EXPECT_NEAR(assemble_operator(g, a).form(v), 6 * (1 - a) * std::pow(2.0, 1 - a), 1e-11);
    const auto r = assemble_operator(g, a).apply(v);
    for (int j = 1; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) EXPECT_NEAR(r[g.index(i, j)], 0.0, 1e-12);
  }
}

TEST(Operator, RejectsDegenerateWeight) {
  const auto g = build_grid(1, 5, 1, 4, 1.0);
  EXPECT_THROW(assemble_operator(g, 1.0), Error);
  EXPECT_THROW(assemble_operator(g, -1.0), Error);
}

TEST(OperatorProperty, SymmetricPositiveAndConsistent) {
  Gen gen(17);
  for (int t = 0; t < 40; ++t) {
    const int nx = 2 * gen.integer(2, 8) + 1;
    const int bd = gen.integer(0, 3) == 0 ? 2 : 1;
    const bool radial = bd == 1 && gen.coin();
    const auto g = build_grid(gen.uniform(0.5, 5), nx, gen.uniform(0.5, 5), gen.integer(2, 10),
                              gen.uniform(1, 3), radial, gen.integer(1, 3), bd);
    const auto op = assemble_operator(g, 1 - 2 * gen.order());
    const auto u = gen.vector(g.node_count(), -1, 1), v = gen.vector(g.node_count(), -1, 1);
    const double uv = op.bilinear(u, v);
    EXPECT_NEAR(uv, op.bilinear(v, u), 1e-12 * (1 + std::abs(uv)));
    EXPECT_GE(op.form(u), 0.0);
    EXPECT_NEAR(op.form(u), op.bilinear(u, u), 1e-12 * op.form(u));
    const auto Au = op.apply(u);
    double dot = 0;
    for (int p = 0; p < g.node_count(); ++p) dot += Au[p] * v[p];
    EXPECT_NEAR(dot, uv, 1e-10 * (1 + std::abs(uv)));
    const auto d = op.diagonal();
    for (int p = 0; p < g.node_count(); ++p) EXPECT_GT(d[p], 0.0);
  }
}
