#include "rdafem/adapt.hpp"
#include "rdafem/estimator.hpp"
#include "rdafem/stepper.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace rdafem;

namespace {

SystemState interpolated_state(const P1Space& space, double t) {
    SystemState s;
    s.t = t;
    s.mesh_version = space.mesh_version();
    s.u.push_back(interpolant(space, [](const Vec2& xi) {
        return 1.0 + 0.1 * std::sin(6.0 * xi.x()) * std::cos(4.0 * xi.y());
    }));
    s.u.push_back(interpolant(space, [](const Vec2& xi) { return 0.9 + 0.05 * xi.x() * xi.y(); }));
    return s;
}

void BM_AssembleMass(benchmark::State& state) {
    const auto mesh = initial_mesh(static_cast<int>(state.range(0)));
    const P1Space space(mesh);
    const auto map = DomainMap::isotropic_dilation(1.0, 1.0, 1.0);
    for (auto _ : state) {
        auto M = assemble_mass(space, map, 0.4);
        benchmark::DoNotOptimize(M);
    }
    state.SetComplexityN(space.element_count());
}
BENCHMARK(BM_AssembleMass)->Arg(16)->Arg(32)->Arg(64)->Complexity();

void BM_Step(benchmark::State& state) {
    const auto mesh = initial_mesh(static_cast<int>(state.range(0)));
    const P1Space space(mesh);
    const auto map = DomainMap::isotropic_dilation(1.0, 1.0, 1.0);
    const auto kin = schnakenberg(1.0, 0.1, 0.9);
    StepConfig cfg;
    cfg.tau = 1e-3;
    cfg.t_final = 1.0;
    cfg.diffusion = Eigen::Vector2d(1.0, 10.0);
    cfg.solver.method = SolverMethod::cg;
    const auto prev = interpolated_state(space, 0.0);
    for (auto _ : state) {
        auto next = step(prev, space, map, *kin, cfg);
        benchmark::DoNotOptimize(next);
    }
    state.SetComplexityN(space.element_count());
}
BENCHMARK(BM_Step)->Arg(16)->Arg(32)->Arg(64)->Complexity();

void BM_Indicators(benchmark::State& state) {
    const auto mesh = initial_mesh(static_cast<int>(state.range(0)));
    const P1Space space(mesh);
    const auto map = DomainMap::isotropic_dilation(1.0, 1.0, 1.0);
    const auto kin = schnakenberg(1.0, 0.1, 0.9);
    const auto a = interpolated_state(space, 0.101);
    const auto b = interpolated_state(space, 0.1);
    const Eigen::Vector2d D(1.0, 10.0);
    for (auto _ : state) {
        auto f = compute_indicators(mesh, space, a, b, 1e-3, map, *kin, D);
        benchmark::DoNotOptimize(f);
    }
    state.SetComplexityN(space.element_count());
}
BENCHMARK(BM_Indicators)->Arg(16)->Arg(32)->Arg(64)->Complexity();

void BM_RefineCoarsen(benchmark::State& state) {
    const auto base = initial_mesh(static_cast<int>(state.range(0)));
    std::mt19937 rng(7);
    for (auto _ : state) {
        MarkSet marks;
        for (int e = 0; e < base.element_count(); ++e)
            if (rng() % 5 == 0) marks.refine.push_back(e);
        auto fine = base.refined(marks);
        MarkSet undo;
        for (int e = 0; e < fine.element_count(); ++e)
            if (fine.element_birth_version(e) == fine.version()) undo.coarsen.push_back(e);
        auto back = fine.coarsened(undo);
        benchmark::DoNotOptimize(back);
    }
    state.SetComplexityN(base.element_count());
}
BENCHMARK(BM_RefineCoarsen)->Arg(16)->Arg(32)->Arg(64)->Complexity();

}  // namespace

BENCHMARK_MAIN();
