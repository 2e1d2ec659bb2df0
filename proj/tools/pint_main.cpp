// Command-line front end for the experiment harness.
//
// Exit codes: 0 success, 1 a solver did not converge (or compare disagreed), 2 usage error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pint/errors.hpp"
#include "pint/harness.hpp"
#include "pint/kernels.hpp"

namespace {

struct RawConfig {
    std::string problem = "heat";
    std::string method = "smg";
    std::string mode = "imex";
    pint::ExperimentConfig cfg;
};

void add_config_flags(CLI::App* app, RawConfig& raw)
{
    app->add_option("--problem", raw.problem, "heat or monodomain")->capture_default_str();
    app->add_option("--method", raw.method, "smg, stmg, smmg, pfasst or direct")
        ->capture_default_str();
    app->add_option("-M", raw.cfg.M, "Radau nodes per time element")->capture_default_str();
    app->add_option("--nt", raw.cfg.nt, "time elements / steps")->capture_default_str();
    app->add_option("--nx", raw.cfg.nx, "space elements")->capture_default_str();
    app->add_option("-L", raw.cfg.levels, "levels")->capture_default_str();
    app->add_option("--nu", raw.cfg.nu, "smoothing steps / sweeps per level")->capture_default_str();
    app->add_option("-P", raw.cfg.P, "block-Jacobi partitions (multigrid) or workers (pfasst)")
        ->capture_default_str();
    app->add_option("--tol", raw.cfg.tol, "convergence tolerance")->capture_default_str();
    app->add_option("--mode", raw.mode, "PFASST sweeps: implicit or imex")->capture_default_str();
    app->add_option("--restart", raw.cfg.restart, "GMRES restart length")->capture_default_str();
    app->add_option("--max-iters", raw.cfg.max_iters, "outer iteration cap")->capture_default_str();
    app->add_option("--cm", raw.cfg.cm, "weak scaling: Nt = cm * P")->capture_default_str();
    app->add_option("-o,--output", raw.cfg.output, "append CSV rows to this file");
}

pint::ExperimentConfig finish(RawConfig& raw)
{
    raw.cfg.problem = raw.problem;
    raw.cfg.method = pint::parse_method(raw.method);
    raw.cfg.mode = pint::parse_mode(raw.mode);
    pint::validate(raw.cfg);
    return raw.cfg;
}

void emit(const pint::ExperimentConfig& cfg, const std::vector<pint::ExperimentResult>& rows)
{
    std::cout << pint::csv_header() << '\n';
    for (const auto& r : rows) std::cout << pint::csv_row(r) << '\n';
    if (!cfg.output.empty()) pint::append_csv(cfg.output, rows);
}

bool all_converged(const std::vector<pint::ExperimentResult>& rows)
{
    for (const auto& r : rows)
        if (!r.report.converged) return false;
    return true;
}

}  // namespace

int main(int argc, char** argv)
{
    pint::kernels::apply_thread_cap();

    CLI::App app{"Parallel-in-time solvers for 1D (reaction-)diffusion"};
    app.require_subcommand(1);

    RawConfig solve_raw;
    CLI::App* solve = app.add_subcommand("solve", "run one experiment and print a CSV row");
    add_config_flags(solve, solve_raw);

    std::vector<int> Ms{1, 2, 3, 4, 5};
    std::vector<int> nts{4, 8, 16, 32, 64, 128};
    int order_nx = 256;
    double floor = 1e-13;
    std::string order_out, plot_prefix;
    CLI::App* order = app.add_subcommand("order-study", "temporal order on the heat problem");
    order->add_option("--Ms", Ms, "node counts")->capture_default_str();
    order->add_option("--nts", nts, "time-step counts")->capture_default_str();
    order->add_option("--nx", order_nx, "space elements")->capture_default_str();
    order->add_option("--floor", floor, "errors below are excluded from the fit")
        ->capture_default_str();
    order->add_option("-o,--output", order_out, "CSV file (stdout when empty)");
    order->add_option("--plot-prefix", plot_prefix, "write <prefix>_M<k>.dat per M");

    RawConfig strong_raw, weak_raw;
    std::vector<int> strong_P{1, 2, 4}, weak_P{1, 2, 4};
    CLI::App* strong = app.add_subcommand("strong-scaling", "fixed problem, P swept");
    add_config_flags(strong, strong_raw);
    strong->add_option("--workers", strong_P, "P values")->capture_default_str();
    CLI::App* weak = app.add_subcommand("weak-scaling", "Nt = cm * P, P swept; R column");
    add_config_flags(weak, weak_raw);
    weak->add_option("--workers", weak_P, "P values")->capture_default_str();

    RawConfig cmp_raw;
    double agree_tol = 1e-8;
    CLI::App* cmp = app.add_subcommand("compare", "SMG vs PFASST on the same discretization");
    add_config_flags(cmp, cmp_raw);
    cmp->add_option("--agree-tol", agree_tol, "max-norm tolerance on u(T)")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*solve) {
            const auto cfg = finish(solve_raw);
            const std::vector<pint::ExperimentResult> rows{pint::run_experiment(cfg)};
            emit(cfg, rows);
            return all_converged(rows) ? 0 : 1;
        }
        if (*order) {
            const pint::OrderStudy study = pint::order_study(Ms, nts, order_nx, floor);
            if (order_out.empty()) {
                pint::write_order_csv(std::cout, study);
            } else {
                std::ofstream out(order_out);
                if (!out) throw pint::ConfigError("cannot open '" + order_out + "'");
                pint::write_order_csv(out, study);
            }
            if (!plot_prefix.empty()) pint::write_order_plot_data(plot_prefix, study);
            return 0;
        }
        if (*strong || *weak) {
            RawConfig& raw = *strong ? strong_raw : weak_raw;
            const auto cfg = finish(raw);
            const auto rows = pint::scaling_study(cfg, *strong ? strong_P : weak_P,
                                                  *strong ? pint::ScalingKind::strong
                                                          : pint::ScalingKind::weak);
            emit(cfg, rows);
            return all_converged(rows) ? 0 : 1;
        }
        if (*cmp) {
            const auto cfg = finish(cmp_raw);
            const pint::Comparison c = pint::compare(cfg);
            emit(cfg, {c.smg, c.pfasst});
            std::cout << "max |u_smg(T) - u_pfasst(T)| = " << c.max_difference << '\n';
            const bool ok = c.smg.report.converged && c.pfasst.report.converged &&
                            c.max_difference <= agree_tol;
            return ok ? 0 : 1;
        }
    } catch (const pint::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
