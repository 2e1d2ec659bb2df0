#include "pint/multigrid.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "pint/collocation.hpp"
#include "pint/errors.hpp"
#include "pint/gmres.hpp"
#include "pint/kernels.hpp"
#include "pint/transfer.hpp"

namespace pint {

Coarsening parse_coarsening(const std::string& name)
{
    if (name == "smg") return Coarsening::smg;
    if (name == "stmg") return Coarsening::stmg;
    if (name == "smmg") return Coarsening::smmg;
    throw ConfigError("unknown coarsening strategy '" + name + "'");
}

std::string to_string(Coarsening c)
{
    switch (c) {
    case Coarsening::smg: return "smg";
    case Coarsening::stmg: return "stmg";
    case Coarsening::smmg: return "smmg";
    }
    return "?";
}

std::vector<LevelDims> plan_levels(const LevelDims& fine, Coarsening strategy, int levels)
{
    if (levels < 1) throw ConfigError("multigrid: need at least one level");
    if (fine.nt < 1 || fine.m < 1 || fine.nx < 2)
        throw ConfigError("multigrid: invalid fine-level dimensions");
    std::vector<LevelDims> dims{fine};
    for (int l = 1; l < levels; ++l) {
        LevelDims next = dims.back();
        if (next.nx % 2 != 0)
            throw ConfigError("multigrid: Nx = " + std::to_string(next.nx) + " on level " +
                              std::to_string(l) + " cannot be halved for level " +
                              std::to_string(l + 1) + " (Nx must be divisible by 2^(L-1))");
        next.nx /= 2;
        if (strategy == Coarsening::stmg) {
            if (next.nt % 2 != 0)
                throw ConfigError("multigrid: Nt = " + std::to_string(next.nt) + " on level " +
                                  std::to_string(l) + " cannot be halved for level " +
                                  std::to_string(l + 1) + " (Nt must be divisible by 2^(L-1))");
            next.nt /= 2;
        }
        if (strategy == Coarsening::smmg) next.m = std::max(next.m - 1, 1);
        dims.push_back(next);
    }
    return dims;
}

MultigridSolver::MultigridSolver(const SparseMatrix& A, const LevelDims& fine,
                                 const MultigridOptions& options)
    : options_(options)
{
    if (A.rows() != fine.size() || A.cols() != fine.size())
        throw ConfigError("multigrid: matrix size " + std::to_string(A.rows()) +
                          " does not match Nt*M*(Nx+1) = " + std::to_string(fine.size()));
    if (options.nu < 0) throw ConfigError("multigrid: nu must be >= 0");
    const std::vector<LevelDims> dims = plan_levels(fine, options.strategy, options.levels);
    const LevelDims& coarsest = dims.back();
    if (coarsest.size() > options.max_coarse_size)
        throw ConfigError("multigrid: coarsest level has " + std::to_string(coarsest.size()) +
                          " unknowns, above the dense LU limit; use more levels");

    levels_.resize(dims.size());
    levels_[0].A = A;
    for (std::size_t l = 0; l < dims.size(); ++l) {
        levels_[l].dims = dims[l];
        levels_[l].nodes = radau_nodes(dims[l].m);
    }
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        MultigridLevel& f = levels_[l];
        const LevelDims& c = dims[l + 1];
        const SparseMatrix Rs = space_restriction(f.dims.nx);
        const SparseMatrix Ps = space_prolongation(f.dims.nx);
        const bool time_coarse = c.nt != f.dims.nt;
        const bool node_coarse = c.m != f.dims.m;
        const SparseMatrix Rm = node_coarse ? node_restriction(f.nodes, levels_[l + 1].nodes)
                                            : SparseMatrix::identity(f.dims.m);
        const SparseMatrix Pm = node_coarse ? node_prolongation(f.nodes, levels_[l + 1].nodes)
                                            : SparseMatrix::identity(f.dims.m);
        SparseMatrix Rtm, Ptm;
        if (!time_coarse) {
            Rtm = kron(SparseMatrix::identity(f.dims.nt), Rm);
            Ptm = kron(SparseMatrix::identity(f.dims.nt), Pm);
        } else if (options.time_transfer == TimeTransfer::linear) {
            Rtm = linear_time_restriction(f.dims.nt, f.nodes);
            Ptm = linear_time_prolongation(f.dims.nt, f.nodes);
        } else if (options.time_transfer == TimeTransfer::polynomial) {
            Rtm = dg_time_restriction(f.dims.nt, f.nodes);
            Ptm = dg_time_prolongation(f.dims.nt, f.nodes);
        } else {
            Rtm = kron(time_restriction(f.dims.nt), Rm);
            Ptm = kron(time_prolongation(f.dims.nt), Pm);
        }
        f.restriction = kron(Rtm, Rs);
        f.prolongation = kron(Ptm, Ps);
        levels_[l + 1].A = multiply(multiply(f.restriction, f.A), f.prolongation);
    }
    for (std::size_t l = 0; l + 1 < levels_.size(); ++l) {
        const int parts = std::min(options.partitions, levels_[l].A.rows());
        levels_[l].smoother = make_ilu_preconditioner(levels_[l].A, parts);
    }
    coarse_lu_ = DenseLU(levels_.back().A);
}

void MultigridSolver::smooth(int l, std::span<const double> b, std::span<double> x) const
{
    if (options_.nu == 0) return;
    const MultigridLevel& lev = levels_[l];
    GmresOptions g;
    g.tol_rel = 0.0;
    g.tol_abs = 0.0;
    g.divergence_factor = std::numeric_limits<double>::infinity();
    if (options_.smoother_mode == SmootherMode::krylov_iterations) {
        g.restart = std::min(options_.nu, std::max(1, options_.restart));
        g.max_iterations = options_.nu;
    } else {
        g.restart = std::max(1, options_.restart);
        g.max_iterations = options_.nu * g.restart;
    }
    gmres(lev.A, b, x, lev.smoother.get(), g);
}

void MultigridSolver::cycle(int l, std::span<const double> b, std::span<double> x) const
{
    const MultigridLevel& lev = levels_[l];
    if (l + 1 == num_levels()) {
        coarse_lu_.solve(b, x);
        return;
    }
    smooth(l, b, x);

    std::vector<double> r(b.size());
    kernels::residual(kernels::Exec::automatic, lev.A.row_ptr(), lev.A.col_idx(), lev.A.values(),
                      x, b, r);
    const std::vector<double> rc = lev.restriction * std::span<const double>(r);
    std::vector<double> ec(rc.size(), 0.0);
    cycle(l + 1, rc, ec);
    const std::vector<double> e = lev.prolongation * std::span<const double>(ec);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += e[i];

    smooth(l, b, x);
}

void MultigridSolver::vcycle(std::span<const double> b, std::span<double> x) const
{
    const int n = levels_[0].A.rows();
    if (static_cast<int>(b.size()) != n || static_cast<int>(x.size()) != n)
        throw ConfigError("vcycle: vector size does not match the hierarchy");
    cycle(0, b, x);
    for (double v : x)
        if (!std::isfinite(v)) throw SolverError("vcycle: non-finite value in iterate");
}

SolveReport MultigridSolver::solve(std::span<const double> b, std::span<double> x) const
{
    const auto start = std::chrono::steady_clock::now();
    const SparseMatrix& A = levels_[0].A;
    std::vector<double> r(b.size());
    auto resnorm = [&] {
        kernels::residual(kernels::Exec::automatic, A.row_ptr(), A.col_idx(), A.values(), x, b, r);
        return norm2(r);
    };
    SolveReport report;
    ConvergenceMonitor monitor(options_.tol_rel, options_.tol_abs, options_.max_cycles,
                               options_.divergence_factor);
    auto status = monitor.start(resnorm(), report);
    while (status == ConvergenceMonitor::Status::running) {
        try {
            vcycle(b, x);
        } catch (const SolverError&) {
            report.diverged = true;
            break;
        }
        ++report.iterations;
        status = monitor.update(resnorm(), report);
    }
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

MultigridSolver build_hierarchy(const SparseMatrix& A, const LevelDims& fine,
                                Coarsening strategy, int levels, int nu, int partitions)
{
    MultigridOptions opt;
    opt.strategy = strategy;
    opt.levels = levels;
    opt.nu = nu;
    opt.partitions = partitions;
    return MultigridSolver(A, fine, opt);
}

}  // namespace pint
