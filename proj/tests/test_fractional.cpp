#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fraclab/error.hpp"
#include "fraclab/fractional.hpp"
#include "fraclab/orders.hpp"
#include "support.hpp"

using namespace fraclab;
using fraclab::testing::Gen;
using std::numbers::pi;

namespace {

LineFunction arctan_layer(double X, int N) {
  LineFunction u;
  u.x0 = -X;
  u.h = 2 * X / N;
  u.tail = TailKind::decay;
  u.alpha = 1;
  u.beta = -1;
  for (int k = 0; k <= N; ++k) u.u.push_back(2 / pi * std::atan(u.x(k)));
  return u;
}

}  // namespace

TEST(PrincipalValue, ExactHalfLaplacianLayer) {
  const auto u = arctan_layer(100, 4000);
  double err = 0.0;
  for (int k = 0; k < u.size(); ++k) {
    const double x = u.x(k);
    if (std::abs(x) > 10) continue;
    err = std::max(err, std::abs(frac_lap_pv_at(u, 0.5, k) - 2 / pi * x / (1 + x * x)));
  }
  EXPECT_LT(err, 5e-3);
}

TEST(PrincipalValue, ConstantHasZeroOperator) {
  LineFunction u;
  u.x0 = -5;
  u.h = 0.1;
  u.u.assign(101, 2.0);
  for (double s : {0.2, 0.5, 0.8}) {
    const auto r = frac_lap_pv(u, s);
    for (double v : r.values) EXPECT_NEAR(v, 0.0, 1e-14);
  }
}

TEST(PrincipalValue, RefusesEdgeNodes) {
  const auto u = arctan_layer(10, 100);
  try {
    frac_lap_pv_at(u, 0.5, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::unreliable_point);
  }
  EXPECT_THROW(frac_lap_pv_at(u, 1.0, 50), Error);
}

TEST(PrincipalValue, DecayTailBoundReported) {
  const auto r = frac_lap_pv(arctan_layer(20, 400), 0.5);
  EXPECT_GT(r.tail_bound, 0.0);
  EXPECT_EQ(r.first, 40);
}

TEST(Spectral, CosineIsAnEigenfunction) {
  const int n = 64;
  for (double s : {0.25, 0.5, 0.75})
    for (int k : {1, 3}) {
      std::vector<double> u(n);
      for (int j = 0; j < n; ++j) u[j] = std::cos(k * 2 * pi * j / n);
      const auto r = frac_lap_spectral(u, 2 * pi, s);
      for (int j = 0; j < n; ++j) EXPECT_NEAR(r[j], std::pow(k, 2 * s) * u[j], 1e-12);
    }
}

TEST(Spectral, FftRoundTrip) {
  Gen gen(23);
  auto re = gen.vector(128, -1, 1), im = gen.vector(128, -1, 1);
  const auto r0 = re, i0 = im;
  fft_inplace(re, im, false);
  fft_inplace(re, im, true);
  for (int j = 0; j < 128; ++j) {
    EXPECT_NEAR(re[j], r0[j], 1e-13);
    EXPECT_NEAR(im[j], i0[j], 1e-13);
  }
  std::vector<double> bad(6), bad_im(6);
  EXPECT_THROW(fft_inplace(bad, bad_im, false), Error);
}

TEST(Extension, DtnRealizesTheSymbol) {
  const auto g = fraclab::testing::grid(pi, 129, 10, 100);
  ExtensionBC bc;
  bc.lateral = LateralBC::periodic;
  for (double s : {0.25, 0.5, 0.75}) {
    std::vector<double> trace(g->nx);
    for (int i = 0; i < g->nx; ++i) trace[i] = std::cos(2 * g->x[i]);
    const auto flux = dtn(harmonic_extension(trace, s, g, bc))[0];
    const double amp = extension_constant(s) * std::pow(2.0, 2 * s);
    double err = 0;
    for (int i = 0; i < g->nx; ++i) err = std::max(err, std::abs(flux[i] - amp * trace[i]));
    EXPECT_LT(err / amp, 1e-2) << "s = " << s;
  }
}

TEST(Extension, ConstantTraceIsFluxFree) {
  const auto g = fraclab::testing::grid(2, 21, 4, 20);
  const auto v = harmonic_extension(std::vector<double>(21, 1.5), 0.4, g);
  for (double x : v.values[0]) EXPECT_NEAR(x, 1.5, 1e-10);
  const auto flux = dtn(v);
  for (double f : flux[0]) EXPECT_NEAR(f, 0.0, 1e-8);
}

TEST(CrossValidation, PeriodicCosine) {
  const auto g = fraclab::testing::grid(2 * pi, 257, 10, 120);
  ExtensionBC bc;
  bc.lateral = LateralBC::periodic;
  const double X = 31.5 * pi;
  LineFunction u;
  u.x0 = -X;
  u.h = pi / 64;
  u.tail = TailKind::decay;
  for (int j = 0; j <= 4032; ++j) u.u.push_back(std::cos(u.x(j)));
  const auto cv = cross_validate(u, 0.5, g, bc);
  EXPECT_LT(cv.pv_vs_spectral, 1e-2);
  EXPECT_LT(cv.pv_vs_dtn, 1e-2);
  EXPECT_FALSE(cv.x.empty());
}

TEST(LineFunctionIo, CsvRoundTrip) {
  auto u = arctan_layer(5, 20);
  const auto back = LineFunction::from_csv(u.to_csv());
  ASSERT_EQ(back.size(), u.size());
  for (int k = 0; k < u.size(); ++k) EXPECT_EQ(back.u[k], u.u[k]);
  EXPECT_DOUBLE_EQ(back.h, u.h);
  EXPECT_NEAR(u.sample(0.125), 0.5 * (u.u[10] + u.u[10]) + (u.u[11] - u.u[10]) * 0.125 / u.h, 1e-15);
  EXPECT_THROW(u.sample(6.0), Error);
  EXPECT_THROW(LineFunction::from_csv("x,u\n0,1\n"), Error);
}
