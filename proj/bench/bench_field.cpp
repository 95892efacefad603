// Serial reference vs OpenMP kernel for batch field evaluation.

#include <benchmark/benchmark.h>
#include <omp.h>

#include <vector>

#include "kelvin/field.hpp"
#include "kelvin/geometry.hpp"
#include "kelvin/quadrature.hpp"

namespace {

using namespace kelvin;

const Material kMat = make_material(1.0e7, 0.25);

std::vector<Vec3> plane_points(int n) {
    return rectangle_nodes<3>({{-1.0, -1.0, 0.5}}, {{1.0, 0.0, 0.0}}, {{0.0, 1.0, 0.0}}, n, n)
        .points;
}

template <bool Parallel>
void BM_Evaluate3D(benchmark::State& state) {
    const auto mesh = make_icosphere({{0.0, 0.0, 0.0}}, 0.1, static_cast<int>(state.range(0)), 1e3);
    const auto pts = plane_points(32);
    for (auto _ : state) {
        auto r = Parallel ? evaluate_parallel<3>(mesh.stations(), kMat, pts, 1e-7)
                          : evaluate_serial<3>(mesh.stations(), kMat, pts, 1e-7);
        benchmark::DoNotOptimize(r.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(pts.size() * mesh.size()));
    state.counters["threads"] = Parallel ? omp_get_max_threads() : 1;
}

template <bool Parallel>
void BM_Evaluate2D(benchmark::State& state) {
    const auto mesh = make_circle_boundary({{0.0, 0.0}}, 0.3, static_cast<int>(state.range(0)), 1e3);
    const auto pts = circle_nodes({{0.0, 0.0}}, 0.5, 1024).points;
    for (auto _ : state) {
        auto r = Parallel ? evaluate_parallel<2>(mesh.stations(), kMat, pts, 3e-7)
                          : evaluate_serial<2>(mesh.stations(), kMat, pts, 3e-7);
        benchmark::DoNotOptimize(r.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(pts.size() * mesh.size()));
}

}  // namespace

BENCHMARK(BM_Evaluate3D<false>)->Name("serial_3d")->DenseRange(2, 4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Evaluate3D<true>)->Name("parallel_3d")->DenseRange(2, 4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Evaluate2D<false>)->Name("serial_2d")->RangeMultiplier(4)->Range(80, 1280)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Evaluate2D<true>)->Name("parallel_2d")->RangeMultiplier(4)->Range(80, 1280)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
