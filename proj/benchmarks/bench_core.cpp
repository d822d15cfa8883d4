#include <benchmark/benchmark.h>

#include <cmath>
#include <memory>
#include <numbers>

#include "fraclab/fractional.hpp"
#include "fraclab/functionals.hpp"
#include "fraclab/operator.hpp"
#include "fraclab/solver.hpp"
#include "fraclab/stability.hpp"

using namespace fraclab;

namespace {

std::shared_ptr<const HalfSpaceGrid> slab(int nx, int ny) {
  return std::make_shared<const HalfSpaceGrid>(build_grid(20, nx, 20, ny, 3.0));
}

NonlinearitySpec peierls_nabarro() {
  const double c = -1.0 / (std::numbers::pi * std::numbers::pi);
  NonlinearitySpec H;
  H.m = 1;
  H.add({c, TermKind::monomial, {0}});
  H.add({c, TermKind::cosine, {1}});
  return H;
}

void BM_Assemble(benchmark::State& st) {
  const auto g = slab(static_cast<int>(st.range(0)), 80);
  for (auto _ : st) benchmark::DoNotOptimize(assemble_operator(*g, 0.3));
  st.SetItemsProcessed(st.iterations() * g->node_count());
}
BENCHMARK(BM_Assemble)->Arg(201)->Arg(801);

void BM_ApplyOperator(benchmark::State& st) {
  const auto g = slab(801, 80);
  const auto op = assemble_operator(*g, 0.3);
  std::vector<double> v(g->node_count());
  for (int p = 0; p < g->node_count(); ++p) v[p] = std::sin(0.01 * p);
  for (auto _ : st) benchmark::DoNotOptimize(op.apply(v));
  st.SetItemsProcessed(st.iterations() * op.edges.size());
}
BENCHMARK(BM_ApplyOperator);

void BM_PrincipalValue(benchmark::State& st) {
  LineFunction u;
  const int n = static_cast<int>(st.range(0));
  u.x0 = -50;
  u.h = 100.0 / n;
  u.tail = TailKind::decay;
  u.alpha = 1;
  u.beta = -1;
  for (int k = 0; k <= n; ++k) u.u.push_back(2 / std::numbers::pi * std::atan(u.x(k)));
  for (auto _ : st) benchmark::DoNotOptimize(frac_lap_pv(u, 0.4));
}
BENCHMARK(BM_PrincipalValue)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_HarmonicExtension(benchmark::State& st) {
  const auto g = slab(401, 80);
  ExtensionBC bc;
  std::vector<double> trace(g->nx);
  for (int i = 0; i < g->nx; ++i) trace[i] = std::tanh(g->x[i]);
  for (auto _ : st) benchmark::DoNotOptimize(harmonic_extension(trace, 0.3, g, bc));
}
BENCHMARK(BM_HarmonicExtension)->Unit(benchmark::kMillisecond);

void BM_LayerSolve(benchmark::State& st) {
  const auto g = slab(static_cast<int>(st.range(0)), 80);
  const auto o = std::make_shared<const FractionalOrders>(make_orders({0.5}));
  const auto H = peierls_nabarro();
  const auto bc = BoundaryData::prescribed(pn_exact_field(g, o, {1}, {-1}), TopBC::dirichlet);
  const auto init = tanh_profile(g, o, {1}, {-1});
  for (auto _ : st) benchmark::DoNotOptimize(solve_coupled(g, o, H, bc, init));
}
BENCHMARK(BM_LayerSolve)->Arg(201)->Arg(801)->Unit(benchmark::kMillisecond);

void BM_Spectrum(benchmark::State& st) {
  const auto g = slab(401, 80);
  const auto o = std::make_shared<const FractionalOrders>(make_orders({0.5}));
  const auto v = pn_exact_field(g, o, {1}, {-1});
  const auto H = peierls_nabarro();
  for (auto _ : st) benchmark::DoNotOptimize(linearized_spectrum(v, H));
}
BENCHMARK(BM_Spectrum)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
