// Serial reference loops against the OpenMP kernels on square grids of growing size.
//   ./bench_kernels --benchmark_filter=laplacian

#include "dca/generators.hpp"
#include "dca/kernels.hpp"
#include "dca/solver.hpp"

#include <benchmark/benchmark.h>

#include <map>
#include <random>

namespace {

struct Fixture {
    dca::QuadLattice q;
    std::vector<double> u;
    dca::ColourSystem system;
};

const Fixture& fixture(int n) {
    static std::map<int, Fixture> cache;
    auto it = cache.find(n);
    if (it == cache.end()) {
        dca::QuadLattice q = dca::gen_square(0, 0, 1, 1, 1.0 / n);
        std::mt19937_64 rng(n);
        std::uniform_real_distribution<double> d(-1, 1);
        std::vector<double> u(q.vertex_count());
        for (double& x : u) x = d(rng);
        auto system = dca::colour_system(q, dca::assemble(q), dca::Color::Black, u);
        it = cache.emplace(n, Fixture{std::move(q), std::move(u), std::move(system)}).first;
    }
    return it->second;
}

template <bool Parallel>
void laplacian(benchmark::State& state) {
    const Fixture& f = fixture(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto l = Parallel ? dca::kernels::laplacian_field(f.q, f.u) : dca::reference::laplacian_field(f.q, f.u);
        benchmark::DoNotOptimize(l.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.q.vertex_count()));
}

template <bool Parallel>
void energy(benchmark::State& state) {
    const Fixture& f = fixture(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        double e = Parallel ? dca::kernels::energy_definition(f.q, f.u) : dca::reference::energy_definition(f.q, f.u);
        benchmark::DoNotOptimize(e);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.q.face_count()));
}

template <bool Parallel>
void spmv(benchmark::State& state) {
    const Fixture& f = fixture(static_cast<int>(state.range(0)));
    const auto& a = f.system.matrix;
    std::vector<double> x(a.rows, 1.0), y(a.rows);
    for (auto _ : state) {
        if (Parallel) dca::kernels::spmv(a, x, y);
        else dca::reference::spmv(a, x, y);
        benchmark::DoNotOptimize(y.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(a.val.size()));
}

template <bool Parallel>
void solve(benchmark::State& state) {
    const Fixture& f = fixture(static_cast<int>(state.range(0)));
    dca::SolverConfig cfg;
    cfg.parallel = Parallel;
    for (auto _ : state) {
        auto s = dca::solve(f.q, [](dca::Point2 z) { return (z * z * z).real(); }, cfg);
        benchmark::DoNotOptimize(s.field.data());
    }
}

} // namespace

BENCHMARK(laplacian<false>)->Name("laplacian/reference")->RangeMultiplier(4)->Range(64, 1024);
BENCHMARK(laplacian<true>)->Name("laplacian/parallel")->RangeMultiplier(4)->Range(64, 1024);
BENCHMARK(energy<false>)->Name("energy/reference")->RangeMultiplier(4)->Range(64, 1024);
BENCHMARK(energy<true>)->Name("energy/parallel")->RangeMultiplier(4)->Range(64, 1024);
BENCHMARK(spmv<false>)->Name("spmv/reference")->RangeMultiplier(4)->Range(64, 1024);
BENCHMARK(spmv<true>)->Name("spmv/parallel")->RangeMultiplier(4)->Range(64, 1024);
BENCHMARK(solve<false>)->Name("solve/reference")->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(solve<true>)->Name("solve/parallel")->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
