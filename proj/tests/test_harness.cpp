#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "pint/errors.hpp"
#include "pint/harness.hpp"
#include "pint/problems.hpp"

using namespace pint;

namespace {

ExperimentConfig small(Method m)
{
    ExperimentConfig c;
    c.method = m;
    c.M = 2;
    c.nt = 8;
    c.nx = 32;
    c.levels = 2;
    c.nu = 3;
    c.tol = 1e-11;
    return c;
}

}  // namespace

TEST_SUITE("harness")
{
    TEST_CASE("method and mode names")
    {
        for (Method m : {Method::smg, Method::stmg, Method::smmg, Method::pfasst, Method::direct})
            CHECK(parse_method(to_string(m)) == m);
        CHECK_THROWS_AS(parse_method("sor"), ConfigError);
        CHECK(parse_mode("implicit") == SweepMode::implicit);
        CHECK(to_string(SweepMode::imex) == "imex");
        CHECK_THROWS_AS(parse_mode("explicit"), ConfigError);
    }

    TEST_CASE("validation")
    {
        ExperimentConfig c = small(Method::stmg);
        c.nt = 6;
        c.levels = 3;
        CHECK_THROWS_AS(validate(c), ConfigError);
        c = small(Method::pfasst);
        c.P = 3;
        CHECK_THROWS_AS(validate(c), ConfigError);
        c = small(Method::smg);
        c.problem = "wave";
        CHECK_THROWS_AS(validate(c), ConfigError);
        CHECK_NOTHROW(validate(small(Method::smg)));
    }

    TEST_CASE("CSV schema")
    {
        CHECK(csv_header() ==
              "method,M,Nt,Nx,L,nu,P,iterations,newton_iters,converged,end_error,R,wall_seconds");
        const ExperimentResult r = run_experiment(small(Method::smg));
        const std::string row = csv_row(r);
        CHECK(std::count(row.begin(), row.end(), ',') == 12);
        CHECK(row.rfind("smg,2,8,32,2,3,1,", 0) == 0);

        const auto path = std::filesystem::temp_directory_path() / "pint_harness_test.csv";
        std::filesystem::remove(path);
        append_csv(path.string(), {r});
        append_csv(path.string(), {r, r});
        std::ifstream in(path);
        std::string line;
        int lines = 0, headers = 0;
        while (std::getline(in, line)) {
            ++lines;
            if (line == csv_header()) ++headers;
        }
        CHECK(lines == 4);
        CHECK(headers == 1);
        std::filesystem::remove(path);
    }

    TEST_CASE("default solve converges in a handful of cycles")
    {
        ExperimentConfig c;
        c.method = Method::smg;
        const ExperimentResult r = run_experiment(c);
        CHECK(r.report.converged);
        CHECK(r.report.iterations >= 2);
        CHECK(r.report.iterations <= 10);
        CHECK(r.end_error < 1e-2);
    }

    TEST_CASE("all methods agree with the direct solve")
    {
        const ExperimentResult d = run_experiment(small(Method::direct));
        CHECK(d.report.converged);
        for (Method m : {Method::smg, Method::stmg, Method::smmg, Method::pfasst}) {
            CAPTURE(to_string(m));
            ExperimentConfig c = small(m);
            if (m == Method::smmg) c.levels = 2;
            const ExperimentResult r = run_experiment(c);
            CHECK(r.report.converged);
            CHECK(max_difference(r.solution, d.solution) < 1e-8);
            CHECK(std::abs(r.end_error - d.end_error) < 1e-8);
        }
        const ExperimentResult mono = [] {
            ExperimentConfig c = small(Method::direct);
            c.problem = "monodomain";
            return run_experiment(c);
        }();
        CHECK(std::isnan(mono.end_error));
    }

    TEST_CASE("scaling studies")
    {
        ExperimentConfig base = small(Method::pfasst);
        base.nt = 8;
        base.nu = 1;
        const auto strong = scaling_study(base, {1, 2, 4}, ScalingKind::strong);
        REQUIRE(strong.size() == 3);
        CHECK(strong[0].R == 1.0);
        for (const auto& r : strong) {
            CHECK(r.report.converged);
            CHECK(r.config.nt == 8);
            CHECK(std::abs(r.end_error - strong[0].end_error) < 1e-7);
        }
        base.cm = 2;
        const auto weak = scaling_study(base, {1, 2, 4}, ScalingKind::weak);
        REQUIRE(weak.size() == 3);
        CHECK(weak[0].R == 1.0);
        CHECK(weak[0].config.nt == 2);
        CHECK(weak[2].config.nt == 8);
    }

    TEST_CASE("weak scaling of PFASST stays below R = 3")
    {
        // R is a wall-time ratio; without a core per worker the threads are serialized.
        if (std::thread::hardware_concurrency() < 4) {
            MESSAGE("skipped: fewer than 4 hardware threads");
            return;
        }
        ExperimentConfig base = small(Method::pfasst);
        base.M = 3;
        base.nx = 64;
        base.nu = 1;
        base.cm = 4;
        const auto rows = scaling_study(base, {1, 2, 4}, ScalingKind::weak);
        for (const auto& r : rows) {
            CHECK(r.report.converged);
            CHECK(r.R < 3.0);
        }
    }

    TEST_CASE("compare runs SMG and PFASST on the same discretization")
    {
        ExperimentConfig c = small(Method::pfasst);
        c.P = 2;
        const Comparison cmp = compare(c);
        CHECK(cmp.smg.config.method == Method::smg);
        CHECK(cmp.smg.config.P == 1);
        CHECK(cmp.pfasst.config.P == 2);
        CHECK(cmp.max_difference < 1e-8);
    }

    TEST_CASE("order study and slope fit")
    {
        CHECK(fitted_slope({1, 2, 4, 8}, {3, 12, 48, 192}) == doctest::Approx(2.0));
        CHECK(fitted_slope({0.1, 0.01}, {1e-3, 1e-6}) == doctest::Approx(3.0));
        const OrderStudy s = order_study({{1, {256, 512, 1024}}, {2, {16, 32, 64}}}, 64);
        CHECK(s.rows.size() == 6);
        CHECK(s.slopes.at(1) == doctest::Approx(1.0).epsilon(0.15));
        CHECK(s.slopes.at(2) == doctest::Approx(3.0).epsilon(0.15));
        std::ostringstream out;
        write_order_csv(out, s);
        CHECK(out.str().find('\n') != std::string::npos);
    }
}
