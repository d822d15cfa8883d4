#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "fraclab/field.hpp"
#include "fraclab/nonlinearity.hpp"
#include "fraclab/stability.hpp"
#include "support.hpp"

using namespace fraclab;
using fraclab::testing::Gen;

TEST(KTermProperty, SignIdentityOnRandomInstances) {
  Gen gen(2024);
  for (int t = 0; t < 1000; ++t) {
    const int m = gen.integer(2, 8);
    const auto sigma = gen.vector(m, -3, 3);
    const auto h = gen.symmetric(m, -2, 2);
    for (auto f : {OddFunction::identity, OddFunction::cube}) {
      const auto k = k_term(sigma, h, f);
      ASSERT_LE(std::abs(k.lhs - k.rhs), 1e-12 * std::max(1.0, k.scale)) << "instance " << t;
    }
  }
}

TEST(KTermProperty, NonnegativeCouplingGivesNonpositiveTerm) {
  Gen gen(7);
  for (int t = 0; t < 200; ++t) {
    const int m = gen.integer(2, 6);
    const auto k = k_term(gen.vector(m, -1, 1), gen.symmetric(m, 0, 1), OddFunction::cube);
    EXPECT_LE(k.rhs, 0.0);
  }
}

TEST(SigmaProperty, ShiftByMultipleOfPhiIsInvisible) {
  const auto& L = fraclab::testing::coupled_layer();
  const auto& g = *L.v.grid;
  FieldSet phi = L.v;
  for (int i = 0; i < 2; ++i) phi.values[i] = x_derivative(g, L.v.values[i]);
  Gen gen(99);
  for (int t = 0; t < 5; ++t) {
    FieldSet psi = L.v;
    for (int i = 0; i < 2; ++i)
      for (int p = 0; p < g.node_count(); ++p)
        psi.values[i][p] = phi.values[i][p] * (1 + 0.1 * std::sin(gen.uniform(0, 3) * g.x[p % g.nx]));
    const double c = gen.uniform(-5, 5);
    FieldSet shifted = psi;
    for (int i = 0; i < 2; ++i)
      for (int p = 0; p < g.node_count(); ++p) shifted.values[i][p] += c * phi.values[i][p];
    const auto a = sigma_residual(L.v, L.H, phi, psi);
    const auto b = sigma_residual(L.v, L.H, phi, shifted);
    for (int i = 0; i < 2; ++i) {
      EXPECT_NEAR(a.interior[i], b.interior[i], 1e-10 * (1 + a.scale[i]));
      EXPECT_NEAR(a.boundary[i], b.boundary[i], 1e-10 * (1 + a.scale[i]));
      EXPECT_NEAR(a.variance[i], b.variance[i], 1e-9 * (1 + a.variance[i]));
    }
  }
}

TEST(GapProperty, QuadraticInTheTestFunction) {
  const auto& L = fraclab::testing::coupled_layer();
  const auto fam = default_family(L.v);
  Gen gen(5);
  for (int t = 0; t < 20; ++t) {
    const auto& base = fam[gen.integer(0, static_cast<int>(fam.size()) - 1)];
    const double c = gen.uniform(-4, 4);
    TestFunction scaled = base;
    for (auto& comp : scaled.zeta)
      for (auto& z : comp) z *= c;
    const double g0 = quadratic_gap(L.v, L.H, base), g1 = quadratic_gap(L.v, L.H, scaled);
    EXPECT_NEAR(g1, c * c * g0, 1e-9 * (1 + std::abs(c * c * g0)));
    if (g0 != 0.0 && c != 0.0) EXPECT_EQ(std::signbit(g1), std::signbit(g0));
  }
}

TEST(SpectrumProperty, DecoupledSystemIsTheUnion) {
  const auto& a = fraclab::testing::single_layer(0.5);
  const auto& b = fraclab::testing::single_layer(0.7);
  const double la = linearized_spectrum(a.v, a.H).smallest_eigenvalue;
  const double lb = linearized_spectrum(b.v, b.H).smallest_eigenvalue;
  FieldSet v;
  v.grid = a.v.grid;
  v.orders = fraclab::testing::orders({0.5, 0.7});
  v.values = {a.v.values[0], b.v.values[0]};
  const auto rep = linearized_spectrum(v, fraclab::testing::double_well(2));
  EXPECT_NEAR(rep.smallest_eigenvalue, std::min(la, lb), 1e-8 * (1 + std::abs(std::min(la, lb))));
}

TEST(OrientabilityProperty, PlantedSignPatternsAreFound) {
  Gen gen(31);
  for (int t = 0; t < 100; ++t) {
    const int m = gen.integer(2, 6);
    std::vector<int> theta(m, 1);
    for (int i = 1; i < m; ++i) theta[i] = gen.coin() ? 1 : -1;
    NonlinearitySpec H;
    H.m = m;
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        std::vector<int> e(m, 0);
        e[i] = e[j] = 1;
        H.add({theta[i] * theta[j] * gen.uniform(0.1, 1), TermKind::monomial, e});
      }
    Box box;
    box.lo.assign(m, -1);
    box.hi.assign(m, 1);
    const auto r = check_orientability(H, box, 3);
    ASSERT_TRUE(r.orientable);
    EXPECT_EQ(r.theta, theta);
    // a sign flip of one coupling on a triangle frustrates it
    if (m >= 3) {
      NonlinearitySpec F = H;
      for (auto& term : F.terms)
        if (term.ints[0] == 1 && term.ints[1] == 1) term.coefficient = -term.coefficient;
      EXPECT_FALSE(check_orientability(F, box, 3).orientable);
    }
  }
}

TEST(OrientabilityProperty, ComponentFlipFlipsTheta) {
  Gen gen(41);
  for (int t = 0; t < 50; ++t) {
    const double lambda = gen.uniform(-0.5, 0.5);
    if (std::abs(lambda) < 1e-3) continue;
    const auto r = check_orientability(fraclab::testing::double_well(2, lambda), {{-1, -1}, {1, 1}});
    ASSERT_TRUE(r.orientable);
    EXPECT_EQ(r.theta[1], lambda > 0 ? 1 : -1);
  }
}
