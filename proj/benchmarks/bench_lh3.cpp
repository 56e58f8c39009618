#include <benchmark/benchmark.h>

#include "lh3/catalog.hpp"
#include "lh3/expr.hpp"
#include "lh3/orthogonal_surfaces.hpp"

namespace {

lh3::CatalogChart catalog(const std::string& name, const std::string& profile = {}) {
  lh3::CatalogRequest req;
  req.name = name;
  req.profile = profile;
  return lh3::make_catalog_chart(req);
}

void BM_ExprParse(benchmark::State& state) {
  const std::string text = "(0.5 + m1)/(1 + 0.5*m1) + 0.1*conj(m1)^2 + exp(0.2i*m1*conj(m1))";
  for (auto _ : state) benchmark::DoNotOptimize(lh3::Expr::parse(text));
}
BENCHMARK(BM_ExprParse);

void BM_ExprSecondDerivatives(benchmark::State& state) {
  const auto e = lh3::Expr::parse("(0.5 + m1)/(1 + 0.5*m1) + 0.1*conj(m1)^2 + exp(0.2i*m1*conj(m1))");
  for (auto _ : state) {
    const auto d = e.diff(lh3::Wirtinger::D);
    benchmark::DoNotOptimize(d.diff(lh3::Wirtinger::Dbar));
  }
}
BENCHMARK(BM_ExprSecondDerivatives);

void BM_SeriesExpansion(benchmark::State& state) {
  const auto c = catalog("cmc1");
  const int order = int(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(c.chart->expand(lh3::cd(0.1, 0.05), order));
}
BENCHMARK(BM_SeriesExpansion)->Arg(2)->Arg(4)->Arg(6);

void BM_OpticalScalars(benchmark::State& state) {
  const auto c = catalog("cmc1");
  const auto jet = lh3::jets(*c.chart, lh3::cd(0.1, 0.05));
  double r = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(lh3::optical_scalars(jet, r));
    r = r > 2.0 ? -2.0 : r + 1e-3;
  }
}
BENCHMARK(BM_OpticalScalars);

void BM_IntegrateR(benchmark::State& state) {
  const auto c = catalog("rotational", "cosh");
  const lh3::Grid grid(c.chart->domain(), int(state.range(0)));
  const auto [i, j] = grid.nearest_active(c.chart->domain().disk_center);
  for (auto _ : state) benchmark::DoNotOptimize(lh3::integrate_r(*c.chart, grid, grid.node(i, j), 0.0));
  state.SetItemsProcessed(state.iterations() * std::int64_t(grid.active_count()));
}
BENCHMARK(BM_IntegrateR)->Arg(21)->Arg(41)->Unit(benchmark::kMillisecond);

void BM_MainTheoremCheck(benchmark::State& state) {
  const auto c = catalog("bumpy");
  const lh3::Grid grid(c.chart->domain(), int(state.range(0)));
  const auto [i, j] = grid.nearest_active(c.chart->domain().disk_center);
  for (auto _ : state)
    benchmark::DoNotOptimize(lh3::main_theorem_check(*c.chart, grid, grid.node(i, j), 0.0));
}
BENCHMARK(BM_MainTheoremCheck)->Arg(21)->Arg(41)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
