#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fraclab/error.hpp"
#include "fraclab/functionals.hpp"
#include "fraclab/solver.hpp"
#include "support.hpp"

using namespace fraclab;
using std::numbers::pi;

namespace {

struct RadialRun {
  FieldSet v;
  NonlinearitySpec H;
};

// n = 2, s = 1/2 bump of -u^2/2 + u^3/3, shifted so that H <= 0 on its range
const RadialRun& radial_run() {
  static const RadialRun run = [] {
    const auto g = std::make_shared<const HalfSpaceGrid>(build_grid(40, 401, 40, 120, 3.0, true, 2));
    const auto o = fraclab::testing::orders({0.5});
    NonlinearitySpec H;
    H.m = 1;
    H.add({-0.5, TermKind::monomial, {2}});
    H.add({1.0 / 3, TermKind::monomial, {3}});
    H.add({-60.0, TermKind::monomial, {0}});
    SolverOptions opt;
    opt.newton_max = 80;
    auto [v, rep] = solve_radial(g, o, H, BoundaryData::prescribed(make_field(g, o, 0.0), TopBC::dirichlet),
                                 bump_profile(g, o, {0.0}, 2.0, 1.5), opt);
    EXPECT_TRUE(rep.converged);
    return RadialRun{v, H};
  }();
  return run;
}

}  // namespace

TEST(Gradients, LinearField) {
  const auto g = fraclab::testing::grid(3, 31, 2, 10);
  auto v = make_field(g, fraclab::testing::orders({0.5}));
  for (int p = 0; p < g->node_count(); ++p) v.values[0][p] = 2 * g->x[p % g->nx] + 3 * g->y[p / g->nx];
  const auto gr = gradients(v);
  for (int p = 0; p < g->node_count(); ++p) {
    EXPECT_NEAR(gr.dx[0][p], 2.0, 1e-12);
    EXPECT_NEAR(gr.q[0][p], 3.0, 1e-10);
  }
}

TEST(Energy, ConstantFieldIsPotentialOnly) {
  const auto g = fraclab::testing::grid(5, 51, 5, 20);
  const auto H = fraclab::testing::double_well(1);
  const auto v = make_field(g, fraclab::testing::orders({0.5}), 0.0);
  EXPECT_NEAR(energy(v, H, 2.0), 0.25 * 4, 1e-12);
  EXPECT_NEAR(energy(make_field(g, v.orders, 1.0), H, 2.0), 0.0, 1e-12);
}

TEST(Energy, ExactLayerGrowsLogarithmically) {
  const auto g = fraclab::testing::grid(100, 2001, 100, 120);
  const auto o = fraclab::testing::orders({0.5});
  const auto v = pn_exact_field(g, o, {1}, {-1});
  std::vector<double> R;
  for (int k = 0; k < 8; ++k) R.push_back(10 * std::pow(9.0, k / 7.0));
  const auto prof = energy_scan(v, fraclab::testing::peierls_nabarro(), R);
  EXPECT_LT(prof.log_ratio_variation, 0.2);
  EXPECT_GT(prof.log_coefficient, 0.0);
  EXPECT_FALSE(prof.excluded_nonpositive);
}

TEST(Hamiltonian, ExactLayerIdentity) {
  const auto g = fraclab::testing::grid(20, 801, 400, 160);
  const auto o = fraclab::testing::orders({0.5});
  const auto v = pn_exact_field(g, o, {1}, {-1});
  const auto hp = hamiltonian_profile(v, fraclab::testing::peierls_nabarro(), {1}, FiberTail::power_law);
  EXPECT_LT(hp.sup_corrected, 1e-3);
  EXPECT_NEAR(hp.sup_printed / hp.sup_w, 2.0, 0.05);
  EXPECT_LT(hp.balance, 1e-3);
}

TEST(Decay, ExactLayerFiberEnergyDecreases) {
  const auto g = fraclab::testing::grid(20, 401, 40, 80);
  const auto v = pn_exact_field(g, fraclab::testing::orders({0.5}), {1}, {-1});
  const auto dr = decay_checks(v);
  EXPECT_TRUE(dr.tail_decreasing);
  EXPECT_GT(dr.grad_x_bound[0], 0.0);
  ASSERT_EQ(dr.fiber_energy.size(), 1u);
}

TEST(Radial, MonotoneQuantityAndIdentity) {
  const auto& run = radial_run();
  const auto rh = radial_hamiltonian(run.v, run.H, FiberTail::none);
  EXPECT_LE(rh.max_upward_slope, 1e-6 * rh.scale);
  EXPECT_LT(rh.identity_imbalance, 2e-2);
}

TEST(Radial, MonotonicityFormulaAndPohozaev) {
  const auto& run = radial_run();
  const auto mc = monotonicity_curve(run.v, run.H, {1, 4, 7, 10, 13, 16, 19});
  EXPECT_TRUE(mc.applicable);
  EXPECT_GE(mc.min_slope, -1e-6 * mc.max_abs_I);
  const auto bal = monotonicity_balance(run.v, run.H, 5.0, 0.1);
  EXPECT_LT(bal.imbalance, 1e-2);
  const auto pz = pohozaev_residual(run.v, run.H, 5.0);
  EXPECT_LT(std::abs(pz.residual), 3e-2 * pz.dominant);
}

TEST(Radial, StructureAtTheOrigin) {
  const auto& run = radial_run();
  const auto rs = radial_structure_checks(run.v, run.H);
  EXPECT_LE(rs.grad_at_zero, 1e-10);
  EXPECT_NEAR(rs.hessian_sum, -1.0, 1e-12);
  EXPECT_TRUE(rs.monotone_decreasing[0]);
  EXPECT_GT(rs.gap_lower_bound, 0.0);
}

TEST(Radial, RejectsSlabFields) {
  const auto g = fraclab::testing::grid(5, 21, 5, 10);
  const auto v = make_field(g, fraclab::testing::orders({0.5}));
  EXPECT_THROW(radial_hamiltonian(v, fraclab::testing::double_well(1), FiberTail::none), Error);
}

TEST(Symmetry, RotatedLayerAtFortyFiveDegrees) {
  const auto o = fraclab::testing::orders({0.75});
  const auto g1 = fraclab::testing::grid(16, 257, 10, 32);
  const auto line = tanh_profile(g1, o, {1}, {-1});
  const auto g2 = std::make_shared<const HalfSpaceGrid>(build_grid(10, 49, 10, 32, 3.0, false, 1, 2));
  const double th = pi / 4;
  const auto sd = symmetry_diagnostic(rotate_layer(line, g2, th));
  ASSERT_TRUE(sd.defined[0]);
  const double cosang = std::abs(sd.direction[0][0] * std::cos(th) + sd.direction[0][1] * std::sin(th));
  EXPECT_LT(std::acos(std::min(1.0, cosang)), 1e-6);
  EXPECT_LT(sd.anisotropy[0], 1e-10);
}

TEST(Symmetry, TwoDirectionsAreIsotropic) {
  const auto o = fraclab::testing::orders({0.5});
  const auto g2 = std::make_shared<const HalfSpaceGrid>(build_grid(4, 41, 4, 8, 3.0, false, 1, 2));
  auto v = make_field(g2, o);
  for (int p = 0; p < g2->node_count(); ++p) {
    const int r = p % g2->row_size();
    v.values[0][p] = std::sin(g2->x[r % 41]) + std::sin(g2->x[r / 41]);
  }
  EXPECT_GT(symmetry_diagnostic(v).anisotropy[0], 0.4);
}
