#include "pint/harness.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "pint/dense.hpp"
#include "pint/errors.hpp"
#include "pint/gmres.hpp"
#include "pint/multigrid.hpp"
#include "pint/pfasst.hpp"
#include "pint/problems.hpp"
#include "pint/spacetime.hpp"

namespace pint {

namespace {

// The dense oracle is only used below this many unknowns.
constexpr int dense_direct_limit = 3000;

Coarsening coarsening_of(Method m)
{
    switch (m) {
    case Method::stmg: return Coarsening::stmg;
    case Method::smmg: return Coarsening::smmg;
    default: return Coarsening::smg;
    }
}

bool is_multigrid(Method m)
{
    return m == Method::smg || m == Method::stmg || m == Method::smmg;
}

std::string format_double(double v)
{
    if (std::isnan(v)) return "nan";
    std::ostringstream s;
    s << std::setprecision(10) << v;
    return s.str();
}

}  // namespace

Method parse_method(const std::string& name)
{
    if (name == "smg") return Method::smg;
    if (name == "stmg") return Method::stmg;
    if (name == "smmg") return Method::smmg;
    if (name == "pfasst") return Method::pfasst;
    if (name == "direct") return Method::direct;
    throw ConfigError("unknown method '" + name + "' (expected smg, stmg, smmg, pfasst or direct)");
}

std::string to_string(Method m)
{
    switch (m) {
    case Method::smg: return "smg";
    case Method::stmg: return "stmg";
    case Method::smmg: return "smmg";
    case Method::pfasst: return "pfasst";
    case Method::direct: return "direct";
    }
    return "?";
}

SweepMode parse_mode(const std::string& name)
{
    if (name == "implicit") return SweepMode::implicit;
    if (name == "imex") return SweepMode::imex;
    throw ConfigError("unknown mode '" + name + "' (expected implicit or imex)");
}

std::string to_string(SweepMode m) { return m == SweepMode::implicit ? "implicit" : "imex"; }

void validate(const ExperimentConfig& c)
{
    problem_by_name(c.problem);
    if (c.M < 1 || c.M > 9) throw ConfigError("M must be in [1, 9]");
    if (c.nt < 1) throw ConfigError("Nt must be >= 1");
    if (c.nx < 2) throw ConfigError("Nx must be >= 2");
    if (c.levels < 1) throw ConfigError("L must be >= 1");
    if (c.nu < 0) throw ConfigError("nu must be >= 0");
    if (c.P < 1) throw ConfigError("P must be >= 1");
    if (!(c.tol > 0.0)) throw ConfigError("tol must be positive");
    if (c.restart < 1) throw ConfigError("restart must be >= 1");
    const int div = 1 << (c.levels - 1);
    if (is_multigrid(c.method)) {
        if (c.nx % div != 0)
            throw ConfigError("Nx = " + std::to_string(c.nx) + " must be divisible by 2^(L-1) = " +
                              std::to_string(div));
        if (c.method == Method::stmg && c.nt % div != 0)
            throw ConfigError("STMG: Nt = " + std::to_string(c.nt) +
                              " must be divisible by 2^(L-1) = " + std::to_string(div));
        if (c.P > c.nt * c.M * (c.nx + 1))
            throw ConfigError("P exceeds the number of unknowns");
    }
    if (c.method == Method::pfasst) {
        if (c.nu < 1) throw ConfigError("PFASST needs nu >= 1");
        if (c.nx % div != 0 || c.nx / div < 2)
            throw ConfigError("PFASST: Nx = " + std::to_string(c.nx) +
                              " must be divisible by 2^(L-1) = " + std::to_string(div) +
                              " with at least 2 elements on the coarsest level");
        if (c.nt % c.P != 0)
            throw ConfigError("PFASST: P = " + std::to_string(c.P) + " must divide Nt = " +
                              std::to_string(c.nt));
    }
}

ExperimentResult run_experiment(const ExperimentConfig& config)
{
    validate(config);
    const ProblemSpec problem = problem_by_name(config.problem);
    const SpaceMesh mesh = SpaceMesh::make(config.nx, problem.length);
    const TimeGrid grid = TimeGrid::make(config.nt, problem.final_time);
    const std::vector<double> u0 = problem.initial_values(mesh);
    const SpaceTimeLayout layout{config.nt, config.M, mesh.dofs()};

    ExperimentResult res;
    res.config = config;
    const auto start = std::chrono::steady_clock::now();

    if (config.method == Method::pfasst) {
        const PfasstHierarchy h =
            make_pfasst_hierarchy(problem.length, problem.final_time, problem.gamma, config.nx,
                                  config.M, config.nt, config.levels, config.mode);
        PfasstOptions opt;
        opt.workers = config.P;
        opt.nu = config.nu;
        opt.tol = config.tol;
        opt.max_iters = config.max_iters;
        auto [u, report] = pfasst_run(h, u0, opt);
        res.solution = std::move(u);
        res.report = report;
    } else {
        const CollocationTableau tab = CollocationTableau::make(config.M);
        const SpaceOperators space = assemble_space(mesh);
        const SpaceTimeSystem sys = assemble_system(tab, space, grid, problem.gamma, u0);
        const LevelDims dims{config.nt, config.M, config.nx};
        MultigridOptions mg;
        mg.strategy = coarsening_of(config.method);
        mg.levels = config.levels;
        mg.nu = config.nu;
        mg.partitions = config.P;
        mg.restart = config.restart;
        mg.tol_rel = config.tol;
        mg.tol_abs = config.tol;
        mg.max_cycles = config.max_iters;

        if (config.method == Method::direct) {
            if (problem.gamma == 0.0 && layout.size() <= dense_direct_limit) {
                const DenseLU lu(sys.linear_matrix());
                const std::vector<double> b = sys.rhs();
                res.solution.assign(b.size(), 0.0);
                lu.solve(b, res.solution);
            } else {
                res.solution = sequential_solve(sys);
            }
            res.report.iterations = 1;
            res.report.converged = true;
            const std::vector<double> F = residual(sys, res.solution);
            res.report.final_residual = norm2(F);
        } else if (problem.gamma == 0.0) {
            const MultigridSolver solver(sys.linear_matrix(), dims, mg);
            const std::vector<double> b = sys.rhs();
            res.solution.assign(b.size(), 0.0);
            res.report = solver.solve(b, res.solution);
        } else {
            const JacobianSolver inner = [&](const SparseMatrix& J, std::span<const double> rhs,
                                             std::span<double> delta) {
                const MultigridSolver solver(J, dims, mg);
                return solver.solve(rhs, delta);
            };
            std::vector<double> guess(layout.size());
            for (int n = 0; n < layout.nt; ++n)
                for (int m = 0; m < layout.m; ++m)
                    for (int j = 0; j < layout.ndof; ++j) guess[layout.index(n, m, j)] = u0[j];
            NewtonOptions nopt;
            nopt.tol = config.tol;
            auto [u, report] = newton_solve(sys, inner, guess, nopt);
            res.solution = std::move(u);
            res.report = report;
        }
    }
    res.report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    res.final_state = final_values(layout, res.solution);
    if (problem.has_exact()) {
        double err = 0.0;
        for (int j = 0; j < mesh.dofs(); ++j)
            err = std::max(err, std::abs(res.final_state[j] -
                                         problem.exact(mesh.x(j), problem.final_time)));
        res.end_error = err;
    } else {
        res.end_error = std::numeric_limits<double>::quiet_NaN();
    }
    return res;
}

std::string csv_header()
{
    return "method,M,Nt,Nx,L,nu,P,iterations,newton_iters,converged,end_error,R,wall_seconds";
}

std::string csv_row(const ExperimentResult& r)
{
    const ExperimentConfig& c = r.config;
    std::ostringstream s;
    s << to_string(c.method) << ',' << c.M << ',' << c.nt << ',' << c.nx << ',' << c.levels << ','
      << c.nu << ',' << c.P << ',' << r.report.iterations << ',' << r.report.newton_iterations << ','
      << (r.report.converged ? "true" : "false") << ',' << format_double(r.end_error) << ','
      << format_double(r.R) << ',' << format_double(r.report.wall_seconds);
    return s.str();
}

void append_csv(const std::string& path, const std::vector<ExperimentResult>& results)
{
    bool fresh = true;
    {
        std::ifstream in(path);
        fresh = !in || in.peek() == std::ifstream::traits_type::eof();
    }
    std::ofstream out(path, std::ios::app);
    if (!out) throw ConfigError("cannot open '" + path + "' for writing");
    if (fresh) out << csv_header() << '\n';
    for (const ExperimentResult& r : results) out << csv_row(r) << '\n';
}

double fitted_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 2) return std::numeric_limits<double>::quiet_NaN();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

OrderStudy order_study(const std::map<int, std::vector<int>>& nts_per_M, int nx, double floor)
{
    const ProblemSpec problem = heat_problem();
    const SpaceMesh mesh = SpaceMesh::make(nx, problem.length);
    const SpaceOperators space = assemble_space(mesh);
    const auto semi = heat_semidiscrete_exact(mesh);
    const std::vector<double> u0 = problem.initial_values(mesh);

    OrderStudy study;
    for (const auto& [M, nts] : nts_per_M) {
        const CollocationTableau tab = CollocationTableau::make(M);
        std::vector<double> dts, errs;
        for (int nt : nts) {
            const TimeGrid grid = TimeGrid::make(nt, problem.final_time);
            const SpaceTimeSystem sys = assemble_system(tab, space, grid, 0.0, u0);
            const std::vector<double> u = sequential_solve(sys);
            OrderRow row;
            row.M = M;
            row.nt = nt;
            row.dt = grid.dt();
            row.error_semidiscrete = error_norms(u, semi, mesh, grid, M).end_error;
            row.error_exact = error_norms(u, problem.exact, mesh, grid, M).end_error;
            study.rows.push_back(row);
            if (row.error_semidiscrete > floor) {
                dts.push_back(row.dt);
                errs.push_back(row.error_semidiscrete);
            }
        }
        study.slopes[M] = fitted_slope(dts, errs);
    }
    return study;
}

OrderStudy order_study(const std::vector<int>& Ms, const std::vector<int>& nts, int nx,
                       double floor)
{
    std::map<int, std::vector<int>> plan;
    for (int M : Ms) plan[M] = nts;
    return order_study(plan, nx, floor);
}

void write_order_csv(std::ostream& out, const OrderStudy& study)
{
    out << "M,Nt,dt,error_semidiscrete,error_exact\n";
    for (const OrderRow& r : study.rows)
        out << r.M << ',' << r.nt << ',' << format_double(r.dt) << ','
            << format_double(r.error_semidiscrete) << ',' << format_double(r.error_exact) << '\n';
    out << "\nM,slope\n";
    for (const auto& [M, s] : study.slopes) out << M << ',' << format_double(s) << '\n';
}

void write_order_plot_data(const std::string& prefix, const OrderStudy& study)
{
    for (const auto& [M, slope] : study.slopes) {
        const std::string path = prefix + "_M" + std::to_string(M) + ".dat";
        std::ofstream out(path);
        if (!out) throw ConfigError("cannot open '" + path + "' for writing");
        out << "# dt error_semidiscrete  (slope " << format_double(slope) << ")\n";
        for (const OrderRow& r : study.rows)
            if (r.M == M) out << format_double(r.dt) << ' ' << format_double(r.error_semidiscrete) << '\n';
    }
}

std::vector<ExperimentResult> scaling_study(const ExperimentConfig& base,
                                            const std::vector<int>& Ps, ScalingKind kind)
{
    if (Ps.empty()) throw ConfigError("scaling study needs at least one P");
    std::vector<ExperimentConfig> configs;
    for (int P : Ps) {
        ExperimentConfig c = base;
        c.P = P;
        if (kind == ScalingKind::weak) {
            if (base.cm < 1) throw ConfigError("weak scaling needs C_M >= 1");
            c.nt = base.cm * P;
        } else if (base.method == Method::pfasst && base.nt % P != 0) {
            throw ConfigError("strong scaling: P = " + std::to_string(P) + " must divide Nt = " +
                              std::to_string(base.nt));
        }
        validate(c);
        configs.push_back(c);
    }
    std::vector<ExperimentResult> out;
    for (const ExperimentConfig& c : configs) {
        out.push_back(run_experiment(c));
        const double t0 = out.front().report.wall_seconds;
        out.back().R = out.size() == 1 ? 1.0 : out.back().report.wall_seconds / t0;
    }
    return out;
}

Comparison compare(const ExperimentConfig& config)
{
    ExperimentConfig a = config;
    a.method = Method::smg;
    a.P = 1;
    ExperimentConfig b = config;
    b.method = Method::pfasst;
    Comparison c;
    c.smg = run_experiment(a);
    c.pfasst = run_experiment(b);
    double d = 0.0;
    for (std::size_t j = 0; j < c.smg.final_state.size(); ++j)
        d = std::max(d, std::abs(c.smg.final_state[j] - c.pfasst.final_state[j]));
    c.max_difference = d;
    return c;
}

}  // namespace pint
