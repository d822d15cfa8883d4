#include <gtest/gtest.h>

#include <cmath>

#include "fraclab/error.hpp"
#include "fraclab/nonlinearity.hpp"
#include "support.hpp"

using namespace fraclab;
using fraclab::testing::Gen;

TEST(Nonlinearity, ParseAndFormatRoundTrip) {
  const Term t = parse_term("-0.25 monomial 2 0 1", 3);
  EXPECT_EQ(t.kind, TermKind::monomial);
  EXPECT_DOUBLE_EQ(t.coefficient, -0.25);
  EXPECT_EQ(t.ints, (std::vector<int>{2, 0, 1}));
  EXPECT_EQ(format_term(t), "-0.25 monomial 2 0 1");
  const Term c = parse_term("0.1 cosine 1 -1", 2);
  EXPECT_EQ(c.kind, TermKind::cosine);
  EXPECT_EQ(parse_term(format_term(c), 2).ints, c.ints);
}

TEST(Nonlinearity, ParseErrors) {
  for (const char* bad : {"", "1", "1 sine 2", "1 monomial 2", "1 monomial 2 x", "1 monomial -1 0",
                          "nan? monomial 1 1"}) {
    try {
      parse_term(bad, 2);
      FAIL() << "accepted '" << bad << "'";
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::malformed_input) << bad;
    }
  }
}

TEST(Nonlinearity, DoubleWellValues) {
  const auto H = fraclab::testing::double_well(1);
  const auto e = eval_nonlinearity(H, {0.0});
  EXPECT_DOUBLE_EQ(e.value, -0.25);
  EXPECT_DOUBLE_EQ(e.gradient[0], 0.0);
  EXPECT_DOUBLE_EQ(e.hessian(0, 0), 1.0);
  const auto w = eval_nonlinearity(H, {1.0});
  EXPECT_NEAR(w.value, 0.0, 1e-15);
  EXPECT_NEAR(w.gradient[0], 0.0, 1e-15);
  EXPECT_NEAR(w.hessian(0, 0), -2.0, 1e-15);
}

TEST(Nonlinearity, CosineTerm) {
  const auto H = fraclab::testing::peierls_nabarro();
  for (double u : {-1.0, 0.0, 0.3, 1.0}) {
    const auto e = eval_nonlinearity(H, {u});
    const double pi = std::numbers::pi;
    EXPECT_NEAR(e.value, -(1 + std::cos(pi * u)) / (pi * pi), 1e-15);
    EXPECT_NEAR(e.gradient[0], std::sin(pi * u) / pi, 1e-15);
    EXPECT_NEAR(e.hessian(0, 0), std::cos(pi * u), 1e-15);
  }
}

TEST(Nonlinearity, ArityMismatch) {
  NonlinearitySpec H;
  H.m = 2;
  EXPECT_THROW(H.add({1.0, TermKind::monomial, {1}}), Error);
  EXPECT_THROW(eval_nonlinearity(H, {1.0}), Error);
}

// random polynomial-plus-cosine H: derivatives against central differences
TEST(NonlinearityProperty, DerivativesMatchFiniteDifferences) {
  Gen gen(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = gen.integer(1, 4);
    NonlinearitySpec H;
    H.m = m;
    for (int t = gen.integer(1, 5); t > 0; --t) {
      Term term;
      term.coefficient = gen.uniform(-2, 2);
      term.kind = gen.integer(0, 3) == 0 ? TermKind::cosine : TermKind::monomial;
      for (int i = 0; i < m; ++i)
        term.ints.push_back(term.kind == TermKind::cosine ? gen.integer(-2, 2) : gen.integer(0, 3));
      H.add(term);
    }
    const auto u = gen.vector(m, -1.5, 1.5);
    const auto e = eval_nonlinearity(H, u);
    const double h = 1e-5;
    for (int i = 0; i < m; ++i) {
      auto up = u, dn = u;
      up[i] += h;
      dn[i] -= h;
      const auto ep = eval_nonlinearity(H, up), en = eval_nonlinearity(H, dn);
      EXPECT_NEAR((ep.value - en.value) / (2 * h), e.gradient[i], 1e-6 * (1 + std::abs(e.gradient[i])));
      for (int j = 0; j < m; ++j) {
        EXPECT_NEAR((ep.gradient[j] - en.gradient[j]) / (2 * h), e.hessian(i, j),
                    1e-6 * (1 + std::abs(e.hessian(i, j))));
        EXPECT_EQ(e.hessian(i, j), e.hessian(j, i));
      }
    }
  }
}

TEST(Orientability, CooperativeCoupling) {
  const auto H = fraclab::testing::double_well(2, 0.25);
  const auto r = check_orientability(H, {{-1, -1}, {1, 1}});
  EXPECT_TRUE(r.orientable);
  EXPECT_EQ(r.theta, (std::vector<int>{1, 1}));
}

TEST(Orientability, CompetitiveCouplingFlipsSign) {
  const auto H = fraclab::testing::double_well(2, -0.25);
  const auto r = check_orientability(H, {{-1, -1}, {1, 1}});
  EXPECT_TRUE(r.orientable);
  EXPECT_EQ(r.theta, (std::vector<int>{1, -1}));
}

TEST(Orientability, FrustratedTriangle) {
  NonlinearitySpec H;
  H.m = 3;
  H.add({1.0, TermKind::monomial, {1, 1, 0}});
  H.add({1.0, TermKind::monomial, {1, 0, 1}});
  H.add({-1.0, TermKind::monomial, {0, 1, 1}});
  const auto r = check_orientability(H, {{-1, -1, -1}, {1, 1, 1}});
  EXPECT_FALSE(r.orientable);
  EXPECT_LT(r.worst_violation, 0.0);
}

TEST(Orientability, SingleComponentTrivial) {
  EXPECT_TRUE(check_orientability(fraclab::testing::double_well(1), {{-1}, {1}}).orientable);
}

TEST(Orientability, SignChangingCouplingNotOrientable) {
  NonlinearitySpec H;
  H.m = 2;
  H.add({1.0, TermKind::monomial, {2, 1}});  // H_12 = 2 u_1
  EXPECT_FALSE(check_orientability(H, {{-1, -1}, {1, 1}}).orientable);
  EXPECT_TRUE(check_orientability(H, {{0.1, -1}, {1, 1}}).orientable);
}

TEST(Sampling, TensorAndHalton) {
  EXPECT_EQ(sample_box({{0, 0}, {1, 1}}, 5).size(), 25u);
  Box big;
  big.lo.assign(12, 0.0);
  big.hi.assign(12, 1.0);
  const auto pts = sample_box(big, 17);
  EXPECT_EQ(pts.size(), 200000u);
  for (const auto& p : pts)
    for (int i = 0; i < 12; ++i) {
      ASSERT_GE(p[i], 0.0);
      ASSERT_LE(p[i], 1.0);
    }
  EXPECT_THROW(sample_box({{1}, {0}}, 5), Error);
}

TEST(Certificates, SignOfHAndGradient) {
  const auto H = fraclab::testing::double_well(1);
  EXPECT_TRUE(certify_nonpositive(H, {{-1}, {1}}).holds);
  EXPECT_FALSE(certify_nonpositive(fraclab::testing::quadratic({1.0}), {{-1}, {1}}).holds);
  EXPECT_FALSE(certify_gradient_nonnegative(H, {{-1}, {1}}).holds);
  EXPECT_TRUE(certify_gradient_nonnegative(H, {{0}, {1}}).holds);
}
