#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "pint/collocation.hpp"
#include "pint/fem1d.hpp"
#include "pint/kernels.hpp"
#include "pint/report.hpp"
#include "pint/sparse.hpp"

namespace pint {

/// Uniform partition of (0, T) into Nt elements.
struct TimeGrid {
    int nt = 1;
    double final_time = 1.0;

    static TimeGrid make(int nt, double final_time);
    double dt() const { return final_time / nt; }
};

/// Flat indexing of space-time coefficients: (n, m, j) -> (n*M + m)*(Nx+1) + j.
struct SpaceTimeLayout {
    int nt = 0;
    int m = 0;
    int ndof = 0;

    int block() const { return m * ndof; }
    int size() const { return nt * block(); }
    int index(int n, int node, int j) const { return (n * m + node) * ndof + j; }
};

/// Block lower-bidiagonal DG space-time system
///   A u_n + B u_{n-1} + gamma * Mr * r(u_n) = rhs_n,   r(u) = u^3 - u,
/// with A = Kq x Mh + dt Mq x Kh, B = -Jq x Mh, Mr = dt Mq x Mh, and the initial
/// condition entering only rhs_0 = -B u_0 (u_0 padded with zeros on the first M-1 nodes).
struct SpaceTimeSystem {
    SpaceTimeLayout layout;
    double dt = 0.0;
    double gamma = 0.0;
    SparseMatrix diag_block;
    SparseMatrix sub_block;
    SparseMatrix reaction_block;
    std::vector<double> first_rhs;

    std::vector<double> rhs() const;
    /// Global assembled linear part L = I x A + S x B.
    SparseMatrix linear_matrix() const;
};

SpaceTimeSystem assemble_system(const CollocationTableau& tableau, const SpaceOperators& space,
                                const TimeGrid& grid, double gamma,
                                std::span<const double> u0_nodal);

/// F(u) = L u + gamma (I x Mr) r(u) - rhs, evaluated block by block without the global matrix.
std::vector<double> residual(const SpaceTimeSystem& sys, std::span<const double> u,
                             kernels::Exec exec = kernels::Exec::automatic);

/// F(u) through the assembled global matrix (reference route).
std::vector<double> residual_assembled(const SpaceTimeSystem& sys, std::span<const double> u);

/// J(u) = L + gamma (I x Mr) diag(3u^2 - 1)
SparseMatrix jacobian(const SpaceTimeSystem& sys, std::span<const double> u);

/// Element-by-element forward solve of the block triangular system (Newton per
/// element when gamma > 0), each block factored by a sparse direct LU.
std::vector<double> sequential_solve(const SpaceTimeSystem& sys, double newton_tol = 1e-12,
                                     int max_newton = 50);

struct NewtonOptions {
    double tol = 1e-9;
    int max_newton = 50;
    bool step_halving = true;
    int max_halvings = 10;
};

/// Solves J delta = rhs for delta, starting from the value in `delta`.
using JacobianSolver =
    std::function<SolveReport(const SparseMatrix& J, std::span<const double> rhs,
                              std::span<double> delta)>;

/// Full-step Newton on F(u) = 0 with a step-halving fallback that triggers only when
/// the residual 2-norm increases. Stops when ||F(u)|| <= max(tol, tol ||F(u_init)||).
std::pair<std::vector<double>, SolveReport> newton_solve(const SpaceTimeSystem& sys,
                                                         const JacobianSolver& solver,
                                                         std::span<const double> u_init,
                                                         const NewtonOptions& options = {});

/// Values at the last node of the last element (the solution at t = T).
std::vector<double> final_values(const SpaceTimeLayout& layout, std::span<const double> u);

}  // namespace pint
