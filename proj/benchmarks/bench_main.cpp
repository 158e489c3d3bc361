#include "osc/abd.hpp"
#include "osc/adi.hpp"
#include "osc/collocation.hpp"
#include "osc/mesh_basis.hpp"

#include <benchmark/benchmark.h>

#include <memory>
#include <vector>

namespace {

template <int degree>
void BM_HeatStepFactorizeSolve(benchmark::State& state) {
    const auto cells = static_cast<std::size_t>(state.range(0));
    const osc::SplineSpace space(osc::Partition1D::uniform(0.0, 1.0, cells), degree);
    const osc::HeatStep kind{0.5e-3};
    std::vector<double> rhs(space.dim(), 1.0);
    for (auto _ : state) {
        auto f = osc::factorize(osc::assemble(space, kind));
        benchmark::DoNotOptimize(osc::solve(f, rhs));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK_TEMPLATE(BM_HeatStepFactorizeSolve, 3)->RangeMultiplier(2)->Range(64, 512)->Complexity(benchmark::oN);
BENCHMARK_TEMPLATE(BM_HeatStepFactorizeSolve, 5)->RangeMultiplier(2)->Range(64, 512)->Complexity(benchmark::oN);

void BM_AdiStep(benchmark::State& state) {
    const auto cells = static_cast<std::size_t>(state.range(0));
    const int degree = static_cast<int>(state.range(1));
    const auto model = osc::manufactured(osc::brusselator(1.0, 0.5, 1.0, 1.0), osc::CosineModeSolution{});
    const auto mesh = osc::Mesh2D::uniform({}, cells, cells, degree);
    const std::size_t steps = 20;
    const osc::AdiSolver solver(model, mesh, osc::TimeGrid(0.01 * steps, steps));
    for (auto _ : state) benchmark::DoNotOptimize(solver.run());
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * steps));
}
BENCHMARK(BM_AdiStep)->ArgsProduct({{10, 20, 40}, {3, 5}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
