#include <doctest.h>

#include <omp.h>

#include <random>

#include "pint/kernels.hpp"
#include "pint/precond.hpp"
#include "pint/problems.hpp"
#include "pint/spacetime.hpp"

using namespace pint;

namespace {

std::vector<double> random_vector(int n, unsigned seed)
{
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(n);
    for (double& x : v) x = u(gen);
    return v;
}

SpaceTimeSystem sample_system(double gamma)
{
    const auto mesh = SpaceMesh::make(128, 10.0);
    const auto tab = CollocationTableau::make(3);
    const auto space = assemble_space(mesh);
    const auto p = monodomain_problem();
    return assemble_system(tab, space, TimeGrid::make(32, 2.0), gamma, p.initial_values(mesh));
}

struct ThreadScope {
    int saved = omp_get_max_threads();
    explicit ThreadScope(int n) { omp_set_num_threads(n); }
    ~ThreadScope() { omp_set_num_threads(saved); }
};

}  // namespace

TEST_SUITE("kernels")
{
    TEST_CASE("serial and OpenMP kernels are bitwise identical")
    {
        ThreadScope threads(4);
        const SpaceTimeSystem sys = sample_system(5.0);
        const SparseMatrix A = sys.linear_matrix();
        const int n = A.rows();
        REQUIRE(n > kernels::parallel_threshold);
        const auto x = random_vector(n, 1);
        const auto b = random_vector(n, 2);
        std::vector<double> y1(n), y2(n);

        kernels::serial::spmv(A.row_ptr(), A.col_idx(), A.values(), x, y1);
        kernels::omp::spmv(A.row_ptr(), A.col_idx(), A.values(), x, y2);
        CHECK(y1 == y2);

        kernels::serial::residual(A.row_ptr(), A.col_idx(), A.values(), x, b, y1);
        kernels::omp::residual(A.row_ptr(), A.col_idx(), A.values(), x, b, y2);
        CHECK(y1 == y2);

        BlockJacobi bj(A, 8);
        bj.apply_with(kernels::Exec::serial, b, y1);
        bj.apply_with(kernels::Exec::openmp, b, y2);
        CHECK(y1 == y2);

        CHECK(residual(sys, x, kernels::Exec::serial) == residual(sys, x, kernels::Exec::openmp));
    }

    TEST_CASE("automatic policy falls back to serial for small loops")
    {
        CHECK(kernels::resolve(kernels::Exec::automatic, 10) == kernels::Exec::serial);
        CHECK(kernels::resolve(kernels::Exec::serial, 1 << 20) == kernels::Exec::serial);
        CHECK(kernels::thread_cap() >= 1);
    }
}
