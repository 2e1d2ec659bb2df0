#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "pint/dense.hpp"
#include "pint/precond.hpp"
#include "pint/report.hpp"
#include "pint/sparse.hpp"

namespace pint {

/// SMG: space only. STMG: space and time elements. SMMG: space and node count M.
enum class Coarsening { smg, stmg, smmg };

Coarsening parse_coarsening(const std::string& name);
std::string to_string(Coarsening c);

/// How `nu` is interpreted by the smoother.
enum class SmootherMode {
    krylov_iterations,  ///< nu right-preconditioned GMRES iterations per pass
    gmres_cycles        ///< nu GMRES restart cycles of `restart` iterations each
};

/// Time coarsening used by STMG.
enum class TimeTransfer {
    linear,          ///< linear interpolation over the node times
    polynomial,      ///< coarse element polynomial evaluated at the fine nodes
    element_stencil  ///< [1 2 1]/4 over the element index, identity over nodes
};

struct MultigridOptions {
    Coarsening strategy = Coarsening::smg;
    int levels = 3;
    int nu = 3;
    int partitions = 1;
    int restart = 30;
    double tol_rel = 1e-9;
    double tol_abs = 1e-9;
    int max_cycles = 1000;
    double divergence_factor = 10.0;
    SmootherMode smoother_mode = SmootherMode::krylov_iterations;
    TimeTransfer time_transfer = TimeTransfer::linear;
    /// Largest coarsest-level size accepted for the dense LU.
    int max_coarse_size = 12000;
};

/// Discretization sizes of one level: Nt elements, M nodes, Nx space elements.
struct LevelDims {
    int nt = 1;
    int m = 1;
    int nx = 2;
    int size() const { return nt * m * (nx + 1); }
};

/// Level sizes from finest (index 0) to coarsest; throws naming the first level
/// whose coarsening violates a divisibility rule.
std::vector<LevelDims> plan_levels(const LevelDims& fine, Coarsening strategy, int levels);

struct MultigridLevel {
    LevelDims dims;
    std::vector<double> nodes;
    SparseMatrix A;
    SparseMatrix restriction;   ///< to the next coarser level (empty on the coarsest)
    SparseMatrix prolongation;  ///< from the next coarser level
    std::unique_ptr<Preconditioner> smoother;
};

/// Geometric space-time multigrid on the DG system with Galerkin coarse operators,
/// ILU(0)/block-Jacobi preconditioned GMRES smoothing and a dense LU on the coarsest level.
class MultigridSolver {
public:
    MultigridSolver(const SparseMatrix& A, const LevelDims& fine, const MultigridOptions& options);

    int num_levels() const { return static_cast<int>(levels_.size()); }
    const MultigridLevel& level(int l) const { return levels_[l]; }
    const MultigridOptions& options() const { return options_; }

    /// One V(nu, nu) cycle updating x in place.
    void vcycle(std::span<const double> b, std::span<double> x) const;

    /// V-cycles from the guess in x until the residual 2-norm is <= max(tol_abs, tol_rel ||r0||).
    SolveReport solve(std::span<const double> b, std::span<double> x) const;

private:
    void cycle(int l, std::span<const double> b, std::span<double> x) const;
    void smooth(int l, std::span<const double> b, std::span<double> x) const;

    MultigridOptions options_;
    std::vector<MultigridLevel> levels_;
    DenseLU coarse_lu_;
};

/// Convenience overload building the hierarchy from a named strategy.
MultigridSolver build_hierarchy(const SparseMatrix& A, const LevelDims& fine,
                                Coarsening strategy, int levels, int nu, int partitions);

}  // namespace pint
