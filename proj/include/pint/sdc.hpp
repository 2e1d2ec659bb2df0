#pragma once

#include <span>
#include <utility>
#include <vector>

#include "pint/collocation.hpp"
#include "pint/fem1d.hpp"
#include "pint/precond.hpp"
#include "pint/report.hpp"
#include "pint/sparse.hpp"

namespace pint {

/// implicit: diffusion and reaction both in the implicit part (Newton per node
/// when gamma > 0). imex: diffusion implicit, reaction explicit.
enum class SweepMode { implicit, imex };

/// One SDC level: a spatial mesh, a collocation tableau and a fixed step size.
///
/// The semi-discrete right-hand side is f(u) = -Mh^{-1} Kh u - gamma r(u), r(u) = u^3 - u,
/// with Mh the lumped mass. The node matrices Mh + dt q~_mm Kh and their ILU(0)
/// factors are built once so a level can be shared by concurrent workers.
struct SdcLevel {
    SpaceMesh mesh;
    SpaceOperators space;
    CollocationTableau tableau;
    double dt = 0.0;
    double gamma = 0.0;
    SweepMode mode = SweepMode::imex;
    std::vector<SparseMatrix> node_matrices;
    std::vector<Ilu0> node_factors;

    int ndof() const { return mesh.dofs(); }
    int nodes() const { return tableau.M; }
    int size() const { return nodes() * ndof(); }
};

SdcLevel make_sdc_level(const SpaceMesh& mesh, int M, double dt, double gamma, SweepMode mode,
                        QDeltaKind implicit_kind = QDeltaKind::implicit_euler);

/// Node values of one time step, stored node-major: U[m * ndof + j].
struct SweeperState {
    std::vector<double> U0;
    std::vector<double> U;
    std::vector<double> F_impl;
    std::vector<double> F_expl;  ///< empty in implicit mode
    std::vector<double> tau;     ///< FAS correction, zero on the finest level

    static SweeperState make(const SdcLevel& level);
};

/// Recomputes F_impl (and F_expl) from U.
void evaluate(const SdcLevel& level, SweeperState& state);

/// U_m = U0 for every node, then evaluate.
void spread(const SdcLevel& level, SweeperState& state);

/// One sweep U^{k+1} = U0 + tau + dt Q_D F(U^{k+1}) + dt (Q - Q_D) F(U^k), node by node.
/// Throws SolverError naming the node when an inner solve fails.
void sweep(const SdcLevel& level, SweeperState& state);

/// max | U0 + dt Q F(U) + tau - U |
double collocation_residual(const SdcLevel& level, const SweeperState& state);

/// Sweeps one step from U_m = U0 until the collocation residual is
/// <= max(tol, tol * initial residual).
std::pair<SweeperState, SolveReport> sdc_solve_step(const SdcLevel& level,
                                                    std::span<const double> U0,
                                                    double tol = 1e-9, int max_sweeps = 1000);

/// Transfer between two SDC levels. Node restriction is interpolation to the
/// coarse nodes so that the end node is carried over exactly.
struct LevelTransfer {
    SparseMatrix space_restriction;  ///< coarse ndof x fine ndof
    SparseMatrix restriction;        ///< nodes x space, coarse size x fine size
    SparseMatrix prolongation;       ///< fine size x coarse size
};

LevelTransfer make_level_transfer(const SdcLevel& fine, const SdcLevel& coarse);

/// Sets coarse.U = R fine.U, evaluates coarse F and stores
/// coarse.tau = dt (R Q_f F_f - Q_c F_c(R U_f)) + R tau_f.
void fas_restrict(const SdcLevel& fine, const SdcLevel& coarse, const LevelTransfer& transfer,
                  const SweeperState& fine_state, SweeperState& coarse_state);

/// The FAS correction alone, tau_c = A_c(R u_f) - R A_f(u_f) with A(U) = U - dt Q F(U) - tau.
std::vector<double> fas_correction(const SdcLevel& fine, const SdcLevel& coarse,
                                   const LevelTransfer& transfer, const SweeperState& fine_state);

/// fine.U += P (coarse.U - restricted), then evaluate fine F.
void interpolate_correction(const SdcLevel& fine, const LevelTransfer& transfer,
                            std::span<const double> restricted, const SweeperState& coarse_state,
                            SweeperState& fine_state);

}  // namespace pint
