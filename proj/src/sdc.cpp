#include "pint/sdc.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pint/errors.hpp"
#include "pint/gmres.hpp"
#include "pint/transfer.hpp"

namespace pint {

namespace {

double reaction(double u) { return u * u * u - u; }

// y += a * (Q x I) x on node-major vectors.
void add_q_apply(const Eigen::MatrixXd& Q, double a, std::span<const double> x, int ndof,
                 std::span<double> y)
{
    const int M = static_cast<int>(Q.rows());
    for (int m = 0; m < M; ++m)
        for (int j = 0; j < M; ++j) {
            const double c = a * Q(m, j);
            if (c == 0.0) continue;
            const double* xs = x.data() + static_cast<std::size_t>(j) * ndof;
            double* ys = y.data() + static_cast<std::size_t>(m) * ndof;
            for (int i = 0; i < ndof; ++i) ys[i] += c * xs[i];
        }
}

void solve_spatial(const SparseMatrix& A, const Preconditioner& P, std::span<const double> b,
                   std::span<double> x, int node)
{
    GmresOptions g;
    g.tol_rel = 1e-14;
    const double bnorm = std::max(norm2(b), 1e-300);
    g.tol_abs = 1e-13 * bnorm;
    g.restart = 20;
    g.max_iterations = 60;
    g.divergence_factor = std::numeric_limits<double>::infinity();
    const SolveReport rep = gmres(A, b, x, &P, g);
    // Breakdown near the rounding floor ends GMRES without the flag set.
    const double scale = std::max(bnorm, rep.residual_history.front());
    if (!rep.converged && !(rep.final_residual <= 1e-10 * scale))
        throw SolverError("sdc: spatial solve failed at node " + std::to_string(node + 1) +
                          " (residual " + std::to_string(rep.final_residual) + ")");
}

}  // namespace

SdcLevel make_sdc_level(const SpaceMesh& mesh, int M, double dt, double gamma, SweepMode mode,
                        QDeltaKind implicit_kind)
{
    if (!(dt > 0.0)) throw ConfigError("sdc: dt must be positive");
    if (gamma < 0.0) throw ConfigError("sdc: gamma must be >= 0");
    SdcLevel level;
    level.mesh = mesh;
    level.space = assemble_space(mesh);
    level.tableau = CollocationTableau::make(M, implicit_kind);
    level.dt = dt;
    level.gamma = gamma;
    level.mode = mode;
    const SparseMatrix Mh = level.space.lumped_mass_matrix();
    for (int m = 0; m < M; ++m) {
        const double q = level.tableau.QDeltaImplicit(m, m);
        if (!(q > 0.0)) throw ConfigError("sdc: implicit preconditioner needs a positive diagonal");
        level.node_matrices.push_back(add(Mh, level.space.stiffness, 1.0, dt * q));
        level.node_factors.emplace_back(level.node_matrices.back());
    }
    return level;
}

SweeperState SweeperState::make(const SdcLevel& level)
{
    SweeperState s;
    s.U0.assign(level.ndof(), 0.0);
    s.U.assign(level.size(), 0.0);
    s.F_impl.assign(level.size(), 0.0);
    if (level.mode == SweepMode::imex) s.F_expl.assign(level.size(), 0.0);
    s.tau.assign(level.size(), 0.0);
    return s;
}

namespace {

void evaluate_node(const SdcLevel& level, SweeperState& s, int m)
{
    const int n = level.ndof();
    const std::size_t off = static_cast<std::size_t>(m) * n;
    std::span<const double> u(s.U.data() + off, n);
    std::span<double> fi(s.F_impl.data() + off, n);
    level.space.stiffness.multiply(u, fi);
    const std::vector<double>& mh = level.space.lumped_mass;
    for (int j = 0; j < n; ++j) fi[j] = -fi[j] / mh[j];
    if (level.mode == SweepMode::imex) {
        for (int j = 0; j < n; ++j) s.F_expl[off + j] = -level.gamma * reaction(u[j]);
    } else if (level.gamma != 0.0) {
        for (int j = 0; j < n; ++j) fi[j] -= level.gamma * reaction(u[j]);
    }
}

// Solves U - dt q f_impl(U) = rhs for node m, starting from the current U_m.
void node_solve(const SdcLevel& level, SweeperState& s, int m, std::span<const double> rhs)
{
    const int n = level.ndof();
    const std::vector<double>& mh = level.space.lumped_mass;
    std::span<double> u(s.U.data() + static_cast<std::size_t>(m) * n, n);
    std::vector<double> b(n);
    for (int j = 0; j < n; ++j) b[j] = mh[j] * rhs[j];

    const bool nonlinear = level.mode == SweepMode::implicit && level.gamma != 0.0;
    if (!nonlinear) {
        solve_spatial(level.node_matrices[m], level.node_factors[m], b, u, m);
        return;
    }

    const double c = level.dt * level.tableau.QDeltaImplicit(m, m) * level.gamma;
    const double bnorm = std::max(norm2(b), 1e-300);
    std::vector<double> g(n), d(n), delta(n);
    for (int it = 0; it < 50; ++it) {
        level.node_matrices[m].multiply(u, g);
        for (int j = 0; j < n; ++j) g[j] += c * mh[j] * reaction(u[j]) - b[j];
        if (norm2(g) <= 1e-13 * bnorm) return;
        for (int j = 0; j < n; ++j) d[j] = c * mh[j] * (3.0 * u[j] * u[j] - 1.0);
        const SparseMatrix J = add(level.node_matrices[m], SparseMatrix::diagonal(d));
        Ilu0 P(J);
        for (int j = 0; j < n; ++j) g[j] = -g[j];
        std::fill(delta.begin(), delta.end(), 0.0);
        solve_spatial(J, P, g, delta, m);
        double umax = 1.0;
        for (int j = 0; j < n; ++j) {
            u[j] += delta[j];
            umax = std::max(umax, std::abs(u[j]));
        }
        if (!std::isfinite(umax))
            throw SolverError("sdc: Newton diverged at node " + std::to_string(m + 1));
        if (norm_inf(delta) <= 1e-15 * umax) return;
    }
    throw SolverError("sdc: Newton did not converge at node " + std::to_string(m + 1));
}

}  // namespace

void evaluate(const SdcLevel& level, SweeperState& state)
{
    for (int m = 0; m < level.nodes(); ++m) evaluate_node(level, state, m);
}

void spread(const SdcLevel& level, SweeperState& state)
{
    const int n = level.ndof();
    for (int m = 0; m < level.nodes(); ++m)
        std::copy(state.U0.begin(), state.U0.end(), state.U.begin() + static_cast<std::ptrdiff_t>(m) * n);
    evaluate(level, state);
}

void sweep(const SdcLevel& level, SweeperState& s)
{
    const int M = level.nodes();
    const int n = level.ndof();
    const double dt = level.dt;
    const CollocationTableau& tab = level.tableau;
    const bool imex = level.mode == SweepMode::imex;

    // Terms built from the previous iterate.
    std::vector<double> base(s.tau);
    for (int m = 0; m < M; ++m)
        for (int j = 0; j < n; ++j) base[static_cast<std::size_t>(m) * n + j] += s.U0[j];
    add_q_apply(tab.Q, dt, s.F_impl, n, base);
    add_q_apply(tab.QDeltaImplicit, -dt, s.F_impl, n, base);
    if (imex) {
        add_q_apply(tab.Q, dt, s.F_expl, n, base);
        add_q_apply(tab.QDeltaExplicit, -dt, s.F_expl, n, base);
    }

    std::vector<double> rhs(n);
    for (int m = 0; m < M; ++m) {
        std::copy_n(base.begin() + static_cast<std::ptrdiff_t>(m) * n, n, rhs.begin());
        for (int j = 0; j < m; ++j) {
            const double ci = dt * tab.QDeltaImplicit(m, j);
            const double ce = imex ? dt * tab.QDeltaExplicit(m, j) : 0.0;
            const std::size_t off = static_cast<std::size_t>(j) * n;
            for (int i = 0; i < n; ++i) {
                rhs[i] += ci * s.F_impl[off + i];
                if (imex) rhs[i] += ce * s.F_expl[off + i];
            }
        }
        if (imex) {
            const double ce = dt * tab.QDeltaExplicit(m, m);
            if (ce != 0.0)
                throw ConfigError("sdc: explicit preconditioner must be strictly lower triangular");
        }
        node_solve(level, s, m, rhs);
        evaluate_node(level, s, m);
    }
}

double collocation_residual(const SdcLevel& level, const SweeperState& s)
{
    const int M = level.nodes();
    const int n = level.ndof();
    std::vector<double> r(s.tau);
    for (int m = 0; m < M; ++m)
        for (int j = 0; j < n; ++j) {
            const std::size_t k = static_cast<std::size_t>(m) * n + j;
            r[k] += s.U0[j] - s.U[k];
        }
    add_q_apply(level.tableau.Q, level.dt, s.F_impl, n, r);
    if (!s.F_expl.empty()) add_q_apply(level.tableau.Q, level.dt, s.F_expl, n, r);
    return norm_inf(r);
}

std::pair<SweeperState, SolveReport> sdc_solve_step(const SdcLevel& level,
                                                    std::span<const double> U0, double tol,
                                                    int max_sweeps)
{
    if (static_cast<int>(U0.size()) != level.ndof())
        throw ConfigError("sdc_solve_step: initial value has the wrong size");
    SweeperState s = SweeperState::make(level);
    std::copy(U0.begin(), U0.end(), s.U0.begin());
    spread(level, s);

    SolveReport report;
    ConvergenceMonitor monitor(tol, tol, max_sweeps);
    auto status = monitor.start(collocation_residual(level, s), report);
    while (status == ConvergenceMonitor::Status::running) {
        try {
            sweep(level, s);
        } catch (const SolverError&) {
            report.diverged = true;
            break;
        }
        ++report.iterations;
        status = monitor.update(collocation_residual(level, s), report);
    }
    return {std::move(s), report};
}

LevelTransfer make_level_transfer(const SdcLevel& fine, const SdcLevel& coarse)
{
    if (fine.mesh.nx != 2 * coarse.mesh.nx)
        throw ConfigError("sdc: coarse level must halve the spatial mesh");
    if (fine.dt != coarse.dt) throw ConfigError("sdc: levels must share the time step");
    LevelTransfer t;
    t.space_restriction = space_restriction(fine.mesh.nx);
    const SparseMatrix Ps = space_prolongation(fine.mesh.nx);
    const std::vector<double>& nf = fine.tableau.nodes;
    const std::vector<double>& nc = coarse.tableau.nodes;
    const SparseMatrix Rn = SparseMatrix::from_dense(interpolation_matrix(nf, nc), 1e-15);
    const SparseMatrix Pn = SparseMatrix::from_dense(interpolation_matrix(nc, nf), 1e-15);
    t.restriction = kron(Rn, t.space_restriction);
    t.prolongation = kron(Pn, Ps);
    return t;
}

namespace {

std::vector<double> total_f(const SweeperState& s)
{
    std::vector<double> f(s.F_impl);
    if (!s.F_expl.empty())
        for (std::size_t i = 0; i < f.size(); ++i) f[i] += s.F_expl[i];
    return f;
}

std::vector<double> compute_tau(const SdcLevel& fine, const SdcLevel& coarse,
                                const LevelTransfer& transfer, const SweeperState& fs,
                                const SweeperState& cs)
{
    std::vector<double> qf(fine.size(), 0.0);
    add_q_apply(fine.tableau.Q, fine.dt, total_f(fs), fine.ndof(), qf);
    for (std::size_t i = 0; i < qf.size(); ++i) qf[i] += fs.tau[i];
    std::vector<double> tau = transfer.restriction * std::span<const double>(qf);
    add_q_apply(coarse.tableau.Q, -coarse.dt, total_f(cs), coarse.ndof(), tau);
    return tau;
}

}  // namespace

void fas_restrict(const SdcLevel& fine, const SdcLevel& coarse, const LevelTransfer& transfer,
                  const SweeperState& fine_state, SweeperState& coarse_state)
{
    transfer.restriction.multiply(fine_state.U, coarse_state.U);
    evaluate(coarse, coarse_state);
    coarse_state.tau = compute_tau(fine, coarse, transfer, fine_state, coarse_state);
}

std::vector<double> fas_correction(const SdcLevel& fine, const SdcLevel& coarse,
                                   const LevelTransfer& transfer, const SweeperState& fine_state)
{
    SweeperState cs = SweeperState::make(coarse);
    fas_restrict(fine, coarse, transfer, fine_state, cs);
    return cs.tau;
}

void interpolate_correction(const SdcLevel& fine, const LevelTransfer& transfer,
                            std::span<const double> restricted, const SweeperState& coarse_state,
                            SweeperState& fine_state)
{
    std::vector<double> diff(coarse_state.U);
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= restricted[i];
    const std::vector<double> e = transfer.prolongation * std::span<const double>(diff);
    for (std::size_t i = 0; i < e.size(); ++i) fine_state.U[i] += e[i];
    evaluate(fine, fine_state);
}

}  // namespace pint
