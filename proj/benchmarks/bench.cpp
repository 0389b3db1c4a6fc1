#include <benchmark/benchmark.h>

#include <array>

#include "numeraire/analytic.hpp"
#include "numeraire/montecarlo.hpp"
#include "numeraire/pde.hpp"
#include "numeraire/product_pde.hpp"
#include "numeraire/reduction.hpp"

using namespace numeraire;

namespace {

void BM_AnalyticConvertible(benchmark::State& state) {
    const Convertible c;
    for (auto _ : state) benchmark::DoNotOptimize(analytic_price(c));
}
BENCHMARK(BM_AnalyticConvertible);

void BM_Solve1d(benchmark::State& state) {
    const auto p = esop_pde(Esop{});
    const GridSpec grid{.nodes_per_axis = static_cast<std::size_t>(state.range(0)),
                        .time_steps = static_cast<std::size_t>(state.range(0) / 2)};
    for (auto _ : state) benchmark::DoNotOptimize(solve_1d(p.reduced, grid)(1.0, 0.0));
}
BENCHMARK(BM_Solve1d)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_Solve2d(benchmark::State& state) {
    const auto p = savings_pde(Savings{});
    const GridSpec grid{.nodes_per_axis = static_cast<std::size_t>(state.range(0)),
                        .time_steps = static_cast<std::size_t>(state.range(0) / 2)};
    for (auto _ : state) benchmark::DoNotOptimize(solve_2d(p.full, grid)(p.spot[0], p.spot[1]));
}
BENCHMARK(BM_Solve2d)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_Quadrature1d(benchmark::State& state) {
    ReducedProblem r;
    r.b_matrix = Matrix{{0.09}};
    r.payoff_f = [](std::span<const double> z) { return std::max(z[0] - 1.0, 0.0); };
    const double z = 1.1;
    for (auto _ : state) benchmark::DoNotOptimize(quadrature_price(r, std::span<const double>(&z, 1), 0.0));
}
BENCHMARK(BM_Quadrature1d);

void BM_Quadrature2d(benchmark::State& state) {
    ReducedProblem r;
    r.b_matrix = Matrix{{0.08, 0.04}, {0.04, 0.1}};
    r.payoff_f = [](std::span<const double> z) { return std::max({z[0], z[1], 1.0}); };
    const std::array<double, 2> z{1.0, 1.1};
    for (auto _ : state) benchmark::DoNotOptimize(quadrature_price(r, z, 0.0));
}
BENCHMARK(BM_Quadrature2d)->Unit(benchmark::kMillisecond);

void BM_MonteCarlo(benchmark::State& state) {
    const ProductSpec spec = state.range(0) == 0 ? ProductSpec{Esop{}} : ProductSpec{Convertible{}};
    const McSpec mc{.paths = 100'000};
    for (auto _ : state) benchmark::DoNotOptimize(price_mc(spec, mc).estimate);
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(mc.paths));
}
BENCHMARK(BM_MonteCarlo)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
