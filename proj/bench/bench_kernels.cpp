// Serial reference vs OpenMP kernels on a monodomain space-time system.

#include <benchmark/benchmark.h>

#include <map>
#include <random>

#include "pint/kernels.hpp"
#include "pint/precond.hpp"
#include "pint/problems.hpp"
#include "pint/spacetime.hpp"

using namespace pint;

namespace {

struct Fixture {
    SpaceTimeSystem sys;
    SparseMatrix A;
    std::vector<double> x, b, y;

    explicit Fixture(int nx)
    {
        const auto p = monodomain_problem();
        const auto mesh = SpaceMesh::make(nx, p.length);
        sys = assemble_system(CollocationTableau::make(3), assemble_space(mesh), TimeGrid::make(64, p.final_time),
                              p.gamma, p.initial_values(mesh));
        A = sys.linear_matrix();
        std::mt19937 gen(1);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        x.resize(A.rows());
        b.resize(A.rows());
        y.resize(A.rows());
        for (double& v : x) v = u(gen);
        for (double& v : b) v = u(gen);
    }
};

const Fixture& fixture(int nx)
{
    static std::map<int, Fixture> cache;
    auto it = cache.find(nx);
    if (it == cache.end()) it = cache.emplace(nx, Fixture(nx)).first;
    return it->second;
}

kernels::Exec exec_of(const benchmark::State& s)
{
    return s.range(1) == 0 ? kernels::Exec::serial : kernels::Exec::openmp;
}

void BM_spmv(benchmark::State& state)
{
    const Fixture& f = fixture(static_cast<int>(state.range(0)));
    std::vector<double> y(f.A.rows());
    const auto ex = exec_of(state);
    for (auto _ : state) {
        kernels::spmv(ex, f.A.row_ptr(), f.A.col_idx(), f.A.values(), f.x, y);
        benchmark::DoNotOptimize(y.data());
    }
}

void BM_block_jacobi(benchmark::State& state)
{
    const Fixture& f = fixture(static_cast<int>(state.range(0)));
    const BlockJacobi bj(f.A, 16);
    std::vector<double> z(f.A.rows());
    const auto ex = exec_of(state);
    for (auto _ : state) {
        bj.apply_with(ex, f.b, z);
        benchmark::DoNotOptimize(z.data());
    }
}

void BM_spacetime_residual(benchmark::State& state)
{
    const Fixture& f = fixture(static_cast<int>(state.range(0)));
    const auto ex = exec_of(state);
    for (auto _ : state) {
        auto r = residual(f.sys, f.x, ex);
        benchmark::DoNotOptimize(r.data());
    }
}

void args(benchmark::internal::Benchmark* b)
{
    for (int nx : {128, 512})
        for (int e : {0, 1}) b->Args({nx, e});
    b->ArgNames({"nx", "omp"});
}

}  // namespace

BENCHMARK(BM_spmv)->Apply(args);
BENCHMARK(BM_block_jacobi)->Apply(args);
BENCHMARK(BM_spacetime_residual)->Apply(args);

int main(int argc, char** argv)
{
    kernels::apply_thread_cap();
    benchmark::Initialize(&argc, argv);
    benchmark::RunSpecifiedBenchmarks();
    benchmark::Shutdown();
    return 0;
}
