// Acceptance checks. Prints one PASS/FAIL line per criterion; an optional list of
// criterion numbers on the command line restricts the run.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pint/collocation.hpp"
#include "pint/dense.hpp"
#include "pint/gmres.hpp"
#include "pint/harness.hpp"
#include "pint/kernels.hpp"
#include "pint/problems.hpp"
#include "pint/sdc.hpp"
#include "pint/spacetime.hpp"

using namespace pint;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

ExperimentConfig heat_config(Method m, int nx, int nt, int M, int L, int nu, double tol)
{
    ExperimentConfig c;
    c.problem = "heat";
    c.method = m;
    c.nx = nx;
    c.nt = nt;
    c.M = M;
    c.levels = L;
    c.nu = nu;
    c.tol = tol;
    return c;
}

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

// 1. Temporal order against the semi-discrete solution.
void order(Outcome& o)
{
    const std::map<int, std::vector<int>> ranges{{1, {512, 1024, 2048, 4096}},
                                                 {2, {32, 64, 128, 256, 512}},
                                                 {3, {16, 32, 64}},
                                                 {4, {10, 12, 16, 20, 24}},
                                                 {5, {8, 9, 10, 11, 12}}};
    const auto t0 = std::chrono::steady_clock::now();
    const OrderStudy s = order_study(ranges, 256, 1e-13);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (const auto& [M, slope] : s.slopes) {
        const double target = 2.0 * M - 1.0;
        const double band = M <= 3 ? 0.10 : 0.15;
        o.detail << " M=" << M << ":" << fmt(slope);
        o.require(std::abs(slope - target) <= band * target, "slope M=" + std::to_string(M));
    }
    o.require(s.slopes.size() == 5, "all M fitted");
    o.require(secs < 120.0, "runtime");
    o.detail << " (" << fmt(secs) << " s)";
}

// 2. PFASST and SMG give the same discrete solution.
void equivalence(Outcome& o)
{
    const int cases[3][3] = {{64, 16, 2}, {64, 8, 3}, {32, 8, 4}};
    for (const auto& c : cases) {
        ExperimentConfig cfg = heat_config(Method::pfasst, c[0], c[1], c[2], 3, 3, 1e-11);
        cfg.P = 2;
        const Comparison cmp = compare(cfg);
        o.detail << " (" << c[0] << "," << c[1] << "," << c[2] << "):" << fmt(cmp.max_difference);
        o.require(cmp.smg.report.converged && cmp.pfasst.report.converged, "convergence");
        o.require(cmp.max_difference <= 1e-8, "difference");
    }
}

// 3. Every method against a dense LU of the assembled system.
void direct_oracle(Outcome& o)
{
    const int cases[][4] = {{32, 8, 2, 3}, {64, 16, 2, 3}, {64, 8, 3, 3}, {32, 8, 4, 3}, {128, 8, 4, 3}};
    double worst = 0.0;
    int runs = 0;
    for (const auto& c : cases) {
        const int nx = c[0], nt = c[1], M = c[2], L = c[3];
        const auto p = heat_problem();
        const auto mesh = SpaceMesh::make(nx, 1.0);
        const SpaceTimeSystem sys = assemble_system(CollocationTableau::make(M), assemble_space(mesh),
                                                    TimeGrid::make(nt, 1.0), 0.0, p.initial_values(mesh));
        if (sys.layout.size() > 5000) continue;
        const auto b = sys.rhs();
        std::vector<double> ref(b.size());
        DenseLU(sys.linear_matrix()).solve(b, ref);
        for (Method m : {Method::smg, Method::stmg, Method::smmg, Method::pfasst}) {
            ExperimentConfig cfg = heat_config(m, nx, nt, M, L, 3, 1e-11);
            if (m == Method::pfasst) cfg.P = 2;
            const ExperimentResult r = run_experiment(cfg);
            const double d = max_difference(r.solution, ref);
            worst = std::max(worst, d);
            ++runs;
            o.require(r.report.converged, to_string(m) + " convergence");
            o.require(d <= 1e-8, to_string(m) + " at (" + std::to_string(nx) + "," + std::to_string(nt) +
                                     "," + std::to_string(M) + ")");
        }
    }
    o.detail << " " << runs << " runs, max difference " << fmt(worst);
}

// 4. SMG <= SMMG <= STMG in V-cycles.
void ordering(Outcome& o)
{
    const int cases[2][3] = {{64, 16, 3}, {64, 8, 3}};
    for (const auto& c : cases) {
        int it[3];
        int k = 0;
        for (Method m : {Method::smg, Method::smmg, Method::stmg}) {
            const ExperimentResult r = run_experiment(heat_config(m, c[0], c[1], c[2], 3, 3, 1e-9));
            o.require(r.report.converged, to_string(m) + " convergence");
            it[k++] = r.report.iterations;
        }
        o.detail << " mu=" << c[0] * c[0] / c[1] << ": " << it[0] << " <= " << it[1] << " <= " << it[2];
        o.require(it[0] <= it[1] && it[1] <= it[2], "ordering");
    }
}

// 5. Partition and worker invariance.
void invariance(Outcome& o)
{
    const std::vector<int> Ps{1, 2, 4, 8};
    std::vector<double> ref;
    std::vector<int> iters;
    double worst = 0.0;
    for (int P : Ps) {
        ExperimentConfig cfg = heat_config(Method::pfasst, 64, 16, 2, 2, 1, 1e-11);
        cfg.P = P;
        const ExperimentResult r = run_experiment(cfg);
        o.require(r.report.converged, "PFASST convergence");
        if (ref.empty()) ref = r.solution;
        worst = std::max(worst, max_difference(r.solution, ref));
        iters.push_back(r.report.iterations);
    }
    o.detail << " PFASST iterations";
    for (int i : iters) o.detail << " " << i;
    o.require(std::is_sorted(iters.begin(), iters.end()), "PFASST iterations non-decreasing");

    std::vector<double> ref_smg;
    o.detail << "; SMG cycles";
    for (int P : Ps) {
        ExperimentConfig cfg = heat_config(Method::smg, 64, 32, 2, 3, 3, 1e-11);
        cfg.P = P;
        const ExperimentResult r = run_experiment(cfg);
        o.require(r.report.converged, "SMG convergence");
        if (ref_smg.empty()) ref_smg = r.solution;
        worst = std::max(worst, max_difference(r.solution, ref_smg));
        o.detail << " " << r.report.iterations;
    }
    o.detail << "; max difference " << fmt(worst);
    o.require(worst <= 1e-8, "solutions agree");
}

// 6. Monodomain: Newton + SMG and the IMEX PFASST stability pattern.
void monodomain(Outcome& o)
{
    ExperimentConfig cfg;
    cfg.problem = "monodomain";
    cfg.method = Method::smg;
    cfg.nx = 128;
    cfg.nt = 64;
    cfg.M = 2;
    cfg.levels = 6;
    cfg.nu = 3;
    cfg.tol = 1e-9;
    const ExperimentResult r = run_experiment(cfg);
    double dist = 0.0;
    for (double v : r.final_state) dist = std::max(dist, std::abs(v - 1.0));
    o.detail << " Newton " << r.report.newton_iterations << " its, |u(T)-1|=" << fmt(dist);
    o.require(r.report.converged, "Newton convergence");
    o.require(r.report.newton_iterations <= 30, "Newton iterations");
    o.require(dist <= 1e-2, "stationary final state");

    ExperimentConfig p = cfg;
    p.method = Method::pfasst;
    p.mode = SweepMode::imex;
    p.levels = 2;
    p.nu = 1;
    p.nt = 256;
    p.M = 2;
    p.P = 8;
    const ExperimentResult small_dt = run_experiment(p);
    o.detail << "; PFASST Nt=256 M=2: " << (small_dt.report.converged ? "converged" : "n.c.") << " in "
             << small_dt.report.iterations;
    o.require(small_dt.report.converged, "PFASST small dt converges");

    p.nt = 4;
    p.M = 4;
    p.P = 4;
    const ExperimentResult large_dt = run_experiment(p);
    o.detail << "; Nt=4 M=4: " << (large_dt.report.converged ? "converged" : "n.c.");
    o.require(!large_dt.report.converged, "PFASST large dt flagged n.c.");
}

double legendre(int n, double x)
{
    double p0 = 1.0, p1 = x;
    if (n == 0) return p0;
    for (int k = 1; k < n; ++k) {
        const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

// 7. Tableau and fixed-point checks.
void tableau(Outcome& o)
{
    double node_err = 0.0, qsum_err = 0.0, dg_err = 0.0;
    for (int M = 1; M <= 9; ++M) {
        const auto nodes = radau_nodes(M);
        // Roots of P_M - P_{M-1} on (-1, 1) by bisection, in increasing order.
        auto f = [M](double x) { return legendre(M, x) - legendre(M - 1, x); };
        std::vector<double> roots;
        const int samples = 40000;
        for (int i = 0; i < samples; ++i) {
            double a = -1.0 + 2.0 * i / samples, b = -1.0 + 2.0 * (i + 1) / samples;
            if (b >= 1.0) b = 1.0 - 1e-9;
            if (f(a) * f(b) > 0.0) continue;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (a + b);
                (f(a) * f(mid) <= 0.0 ? b : a) = mid;
            }
            const double r = 0.5 * (1.0 + 0.5 * (a + b));
            if (roots.empty() || r - roots.back() > 1e-8) roots.push_back(r);
        }
        roots.push_back(1.0);
        if (roots.size() != nodes.size()) {
            o.require(false, "node count M=" + std::to_string(M));
            continue;
        }
        for (int m = 0; m < M; ++m) node_err = std::max(node_err, std::abs(roots[m] - nodes[m]));
        const Eigen::MatrixXd Q = build_q(nodes);
        for (int m = 0; m < M; ++m) qsum_err = std::max(qsum_err, std::abs(Q.row(m).sum() - nodes[m]));
    }
    for (int M = 1; M <= 5; ++M) {
        const auto tab = CollocationTableau::make(M);
        for (double z : {-100.0, -10.0, -1.0, -0.01, 0.5}) {
            const Eigen::VectorXd a = scalar_dg_step(tab, 1.0, z, 1.0);
            const Eigen::VectorXd b = scalar_collocation_step(tab, 1.0, z, 1.0);
            dg_err = std::max(dg_err, (a - b).cwiseAbs().maxCoeff());
        }
    }
    double fixed = 0.0;
    const auto p = heat_problem();
    const auto mesh = SpaceMesh::make(64, 1.0);
    for (int M = 1; M <= 5; ++M) {
        const SdcLevel level = make_sdc_level(mesh, M, 1.0 / 16.0, 0.0, SweepMode::implicit);
        auto [s, rep] = sdc_solve_step(level, p.initial_values(mesh), 1e-14);
        const auto before = s.U;
        sweep(level, s);
        fixed = std::max(fixed, max_difference(before, s.U));
        fixed = std::max(fixed, collocation_residual(level, s));
    }
    o.detail << " nodes " << fmt(node_err) << ", Q row sums " << fmt(qsum_err) << ", DG/collocation "
             << fmt(dg_err) << ", SDC fixed point " << fmt(fixed);
    o.require(node_err <= 1e-14, "Radau nodes");
    o.require(qsum_err <= 1e-14, "Q row sums");
    o.require(dg_err <= 1e-12, "DG/collocation");
    o.require(fixed <= 1e-12, "SDC fixed point");
}

// 8. Jacobian against central differences of the residual.
void jacobian_check(Outcome& o)
{
    const auto p = monodomain_problem();
    const auto mesh = SpaceMesh::make(32, p.length);
    const SpaceTimeSystem sys = assemble_system(CollocationTableau::make(3), assemble_space(mesh),
                                                TimeGrid::make(8, p.final_time), p.gamma,
                                                p.initial_values(mesh));
    const int n = sys.layout.size();
    std::mt19937 gen(2024);
    std::uniform_real_distribution<double> unif(-1.5, 1.5);
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> u(n), v(n);
        for (double& x : u) x = unif(gen);
        for (double& x : v) x = unif(gen);
        const SparseMatrix J = jacobian(sys, u);
        const auto Jv = J * std::span<const double>(v);
        const double h = 1e-5;
        std::vector<double> up(u), um(u);
        for (int i = 0; i < n; ++i) {
            up[i] += h * v[i];
            um[i] -= h * v[i];
        }
        const auto fp = residual(sys, up), fm = residual(sys, um);
        std::vector<double> diff(n);
        for (int i = 0; i < n; ++i) diff[i] = (fp[i] - fm[i]) / (2.0 * h) - Jv[i];
        worst = std::max(worst, norm2(diff) / norm2(Jv));
    }
    o.detail << " max relative error " << fmt(worst);
    o.require(worst <= 1e-6, "finite differences");
}

}  // namespace

int main(int argc, char** argv)
{
    kernels::apply_thread_cap();
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::stoi(argv[i]));

    const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
        {"temporal order", order},
        {"PFASST/SMG equivalence", equivalence},
        {"dense LU oracle", direct_oracle},
        {"coarsening ordering", ordering},
        {"partition and worker invariance", invariance},
        {"monodomain", monodomain},
        {"tableau and fixed point", tableau},
        {"Jacobian", jacobian_check},
    };
    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const int id = static_cast<int>(k) + 1;
        if (!only.empty() && !only.count(id)) continue;
        Outcome o;
        try {
            criteria[k].second(o);
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        if (!o.pass) ++failures;
        std::printf("%s %d %s:%s\n", o.pass ? "PASS" : "FAIL", id, criteria[k].first.c_str(),
                    o.detail.str().c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
