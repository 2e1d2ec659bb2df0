#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pint/errors.hpp"
#include "pint/problems.hpp"

using namespace pint;

TEST_SUITE("problems")
{
    TEST_CASE("heat problem data")
    {
        const ProblemSpec p = heat_problem();
        CHECK(p.has_exact());
        CHECK(p.gamma == 0.0);
        CHECK(p.u0(0.0) == doctest::Approx(6.0));
        CHECK(p.u0(1.0) == doctest::Approx(-1.0 - 2.0 + 3.0));
        for (double x : {0.0, 0.1, 0.5, 0.77, 1.0}) CHECK(p.exact(x, 0.0) == doctest::Approx(p.u0(x)));
        // Slowest mode dominates late.
        const double d = std::exp(-std::numbers::pi * std::numbers::pi * 0.5);
        CHECK(p.exact(0.0, 0.5) == doctest::Approx(d).epsilon(1e-6));
        // Neumann: the even extension is smooth, derivative vanishes at the ends.
        const double h = 1e-6;
        CHECK(std::abs(p.exact(h, 0.1) - p.exact(0.0, 0.1)) < 1e-9);
    }

    TEST_CASE("semi-discrete reference tends to the exact solution")
    {
        const ProblemSpec p = heat_problem();
        double prev = 1e300;
        for (int nx : {16, 32, 64, 128}) {
            const auto mesh = SpaceMesh::make(nx, 1.0);
            const auto sd = heat_semidiscrete_exact(mesh);
            CHECK(sd(0.3, 0.0) == doctest::Approx(p.u0(0.3)));
            const double err = std::abs(sd(0.0, 0.05) - p.exact(0.0, 0.05));
            CHECK(err < prev);
            prev = err;
        }
        CHECK_THROWS_AS(heat_semidiscrete_exact(SpaceMesh::make(8, 2.0)), ConfigError);
    }

    TEST_CASE("monodomain problem data")
    {
        const ProblemSpec p = monodomain_problem();
        CHECK_FALSE(p.has_exact());
        CHECK(p.length == 10.0);
        CHECK(p.final_time == 2.0);
        CHECK(p.gamma == 5.0);
        CHECK(p.u0(5.0) == doctest::Approx(2.0));
        CHECK(p.u0(0.0) < 1e-12);
        CHECK(p.u0(4.9) == doctest::Approx(p.u0(5.1)));
        CHECK(problem_by_name("monodomain").name == "monodomain");
        CHECK_THROWS_AS(problem_by_name("wave"), ConfigError);
    }

    TEST_CASE("error norms")
    {
        const auto mesh = SpaceMesh::make(8, 1.0);
        const auto grid = TimeGrid::make(4, 1.0);
        const int M = 2;
        const auto ref = [](double x, double t) { return x + t; };
        const SpaceTimeLayout L{4, M, mesh.dofs()};
        std::vector<double> u(L.size());
        const std::vector<double> nodes{1.0 / 3.0, 1.0};
        for (int n = 0; n < 4; ++n)
            for (int m = 0; m < M; ++m)
                for (int j = 0; j < mesh.dofs(); ++j)
                    u[L.index(n, m, j)] = ref(mesh.x(j), (n + nodes[m]) * grid.dt());
        ErrorNorms e = error_norms(u, ref, mesh, grid, M);
        CHECK(e.end_error < 1e-15);
        CHECK(e.step_errors.size() == 4);
        u[L.index(2, 1, 3)] += 0.25;
        u[L.index(1, 0, 3)] += 10.0;  // interior node, not measured
        e = error_norms(u, ref, mesh, grid, M);
        CHECK(e.step_errors[2] == doctest::Approx(0.25));
        CHECK(e.step_errors[1] < 1e-15);
        CHECK(e.end_error < 1e-15);
        CHECK_THROWS_AS(error_norms(std::vector<double>(3), ref, mesh, grid, M), ConfigError);
        CHECK(max_difference(std::vector<double>{1, 2}, std::vector<double>{1, 5}) == 3.0);
    }
}
