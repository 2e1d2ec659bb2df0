#include "pint/spacetime.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "pint/errors.hpp"
#include "pint/gmres.hpp"

namespace pint {

TimeGrid TimeGrid::make(int nt, double final_time)
{
    if (nt < 1) throw ConfigError("TimeGrid: need Nt >= 1, got " + std::to_string(nt));
    if (!(final_time > 0.0)) throw ConfigError("TimeGrid: final time must be positive");
    return TimeGrid{nt, final_time};
}

SpaceTimeSystem assemble_system(const CollocationTableau& tableau, const SpaceOperators& space,
                                const TimeGrid& grid, double gamma,
                                std::span<const double> u0_nodal)
{
    const int ndof = space.stiffness.rows();
    if (static_cast<int>(u0_nodal.size()) != ndof)
        throw ConfigError("assemble_system: initial condition has " +
                          std::to_string(u0_nodal.size()) + " values, mesh has " +
                          std::to_string(ndof) + " dofs");
    if (gamma < 0.0) throw ConfigError("assemble_system: gamma must be >= 0");

    SpaceTimeSystem sys;
    sys.layout = SpaceTimeLayout{grid.nt, tableau.M, ndof};
    sys.dt = grid.dt();
    sys.gamma = gamma;

    const SparseMatrix Kq = SparseMatrix::from_dense(tableau.Kq);
    const SparseMatrix Mq = SparseMatrix::from_dense(tableau.Mq, 1e-15);
    const SparseMatrix Jq = SparseMatrix::from_dense(tableau.Jq, 1e-15);
    const SparseMatrix Mh = space.lumped_mass_matrix();

    sys.diag_block = add(kron(Kq, Mh), kron(Mq, space.stiffness), 1.0, sys.dt);
    sys.sub_block = kron(Jq, Mh).scaled(-1.0);
    sys.reaction_block = kron(Mq, Mh).scaled(sys.dt);

    std::vector<double> padded(sys.layout.block(), 0.0);
    std::copy(u0_nodal.begin(), u0_nodal.end(), padded.begin() + (tableau.M - 1) * ndof);
    sys.first_rhs = sys.sub_block * padded;
    for (double& v : sys.first_rhs) v = -v;
    return sys;
}

std::vector<double> SpaceTimeSystem::rhs() const
{
    std::vector<double> b(layout.size(), 0.0);
    std::copy(first_rhs.begin(), first_rhs.end(), b.begin());
    return b;
}

SparseMatrix SpaceTimeSystem::linear_matrix() const
{
    const SparseMatrix I = SparseMatrix::identity(layout.nt);
    return add(kron(I, diag_block), kron(shift_matrix(layout.nt), sub_block));
}

namespace {

void residual_block(const SpaceTimeSystem& sys, std::span<const double> u, std::span<double> f,
                    int n)
{
    const int bs = sys.layout.block();
    const auto un = u.subspan(n * bs, bs);
    auto fn = f.subspan(n * bs, bs);
    std::vector<double> tmp(bs);
    kernels::serial::spmv(sys.diag_block.row_ptr(), sys.diag_block.col_idx(),
                          sys.diag_block.values(), un, fn);
    if (n > 0) {
        kernels::serial::spmv(sys.sub_block.row_ptr(), sys.sub_block.col_idx(),
                              sys.sub_block.values(), u.subspan((n - 1) * bs, bs), tmp);
        for (int i = 0; i < bs; ++i) fn[i] += tmp[i];
    } else {
        for (int i = 0; i < bs; ++i) fn[i] -= sys.first_rhs[i];
    }
    if (sys.gamma != 0.0) {
        std::vector<double> r(bs);
        for (int i = 0; i < bs; ++i) r[i] = un[i] * un[i] * un[i] - un[i];
        kernels::serial::spmv(sys.reaction_block.row_ptr(), sys.reaction_block.col_idx(),
                              sys.reaction_block.values(), r, tmp);
        for (int i = 0; i < bs; ++i) fn[i] += sys.gamma * tmp[i];
    }
}

}  // namespace

std::vector<double> residual(const SpaceTimeSystem& sys, std::span<const double> u,
                             kernels::Exec exec)
{
    if (static_cast<int>(u.size()) != sys.layout.size())
        throw ConfigError("residual: vector size does not match the system");
    std::vector<double> f(u.size());
    const int nt = sys.layout.nt;
    const bool parallel = kernels::resolve(exec, exec == kernels::Exec::automatic
                                                     ? sys.layout.size()
                                                     : nt) == kernels::Exec::openmp;
    // time elements write disjoint slices of f
#pragma omp parallel for schedule(static) if (parallel && nt > 1)
    for (int n = 0; n < nt; ++n) residual_block(sys, u, f, n);
    return f;
}

std::vector<double> residual_assembled(const SpaceTimeSystem& sys, std::span<const double> u)
{
    const SparseMatrix L = sys.linear_matrix();
    std::vector<double> f = L * u;
    if (sys.gamma != 0.0) {
        const SparseMatrix R =
            kron(SparseMatrix::identity(sys.layout.nt), sys.reaction_block);
        std::vector<double> r(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) r[i] = u[i] * u[i] * u[i] - u[i];
        const std::vector<double> mr = R * r;
        for (std::size_t i = 0; i < u.size(); ++i) f[i] += sys.gamma * mr[i];
    }
    for (std::size_t i = 0; i < sys.first_rhs.size(); ++i) f[i] -= sys.first_rhs[i];
    return f;
}

SparseMatrix jacobian(const SpaceTimeSystem& sys, std::span<const double> u)
{
    if (static_cast<int>(u.size()) != sys.layout.size())
        throw ConfigError("jacobian: vector size does not match the system");
    const SparseMatrix L = sys.linear_matrix();
    if (sys.gamma == 0.0) return L;
    std::vector<double> d(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) d[i] = 3.0 * u[i] * u[i] - 1.0;
    const SparseMatrix R = kron(SparseMatrix::identity(sys.layout.nt), sys.reaction_block);
    return add(L, R.scale_columns(d), 1.0, sys.gamma);
}

namespace {

Eigen::SparseMatrix<double> to_eigen(const SparseMatrix& A)
{
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(A.nnz());
    const auto rp = A.row_ptr();
    const auto ci = A.col_idx();
    const auto v = A.values();
    for (int i = 0; i < A.rows(); ++i)
        for (int k = rp[i]; k < rp[i + 1]; ++k) t.emplace_back(i, ci[k], v[k]);
    Eigen::SparseMatrix<double> E(A.rows(), A.cols());
    E.setFromTriplets(t.begin(), t.end());
    E.makeCompressed();
    return E;
}

class BlockFactor {
public:
    void factor(const SparseMatrix& A)
    {
        matrix_ = to_eigen(A);
        lu_.analyzePattern(matrix_);
        lu_.factorize(matrix_);
        if (lu_.info() != Eigen::Success) throw SolverError("sequential_solve: singular block");
    }
    Eigen::VectorXd solve(const Eigen::VectorXd& b) { return lu_.solve(b); }

private:
    Eigen::SparseMatrix<double> matrix_;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
};

}  // namespace

std::vector<double> sequential_solve(const SpaceTimeSystem& sys, double newton_tol, int max_newton)
{
    const int bs = sys.layout.block();
    const int nt = sys.layout.nt;
    std::vector<double> u(sys.layout.size(), 0.0);
    Eigen::VectorXd rhs(bs);

    BlockFactor linear;
    if (sys.gamma == 0.0) linear.factor(sys.diag_block);

    for (int n = 0; n < nt; ++n) {
        // rhs_n = -B u_{n-1}, or the initial-condition term for n = 0
        if (n == 0) {
            for (int i = 0; i < bs; ++i) rhs[i] = sys.first_rhs[i];
        } else {
            const std::span<const double> prev(u.data() + (n - 1) * bs, bs);
            const std::vector<double> bu = sys.sub_block * prev;
            for (int i = 0; i < bs; ++i) rhs[i] = -bu[i];
        }
        std::span<double> un(u.data() + n * bs, bs);
        if (sys.gamma == 0.0) {
            const Eigen::VectorXd x = linear.solve(rhs);
            for (int i = 0; i < bs; ++i) un[i] = x[i];
            continue;
        }

        // Newton on A u + gamma Mr r(u) = rhs, initial guess = previous element
        if (n > 0)
            std::copy(u.begin() + (n - 1) * bs, u.begin() + n * bs, un.begin());
        const double scale = std::max(1.0, rhs.norm());
        std::vector<double> r(bs), d(bs);
        bool done = false;
        for (int it = 0; it < max_newton && !done; ++it) {
            const std::vector<double> au = sys.diag_block * std::span<const double>(un);
            for (int i = 0; i < bs; ++i) r[i] = un[i] * un[i] * un[i] - un[i];
            const std::vector<double> mr = sys.reaction_block * std::span<const double>(r);
            Eigen::VectorXd f(bs);
            for (int i = 0; i < bs; ++i) f[i] = au[i] + sys.gamma * mr[i] - rhs[i];
            if (!std::isfinite(f.norm())) throw SolverError("sequential_solve: Newton produced NaN");
            if (f.norm() <= newton_tol * scale) {
                done = true;
                break;
            }
            for (int i = 0; i < bs; ++i) d[i] = 3.0 * un[i] * un[i] - 1.0;
            BlockFactor jac;
            jac.factor(add(sys.diag_block, sys.reaction_block.scale_columns(d), 1.0, sys.gamma));
            const Eigen::VectorXd delta = jac.solve(f);
            for (int i = 0; i < bs; ++i) un[i] -= delta[i];
            if (delta.norm() <= 1e-15 * std::max(1.0, Eigen::Map<const Eigen::VectorXd>(un.data(), bs).norm()))
                done = true;
        }
        if (!done)
            throw SolverError("sequential_solve: Newton did not converge on element " +
                              std::to_string(n));
    }
    return u;
}

std::pair<std::vector<double>, SolveReport> newton_solve(const SpaceTimeSystem& sys,
                                                         const JacobianSolver& solver,
                                                         std::span<const double> u_init,
                                                         const NewtonOptions& options)
{
    const auto start = std::chrono::steady_clock::now();
    std::vector<double> u(u_init.begin(), u_init.end());
    SolveReport report;
    std::vector<double> f = residual(sys, u);
    double fnorm = norm2(f);
    report.residual_history.push_back(fnorm);
    report.final_residual = fnorm;
    const double threshold = std::max(options.tol, options.tol * fnorm);

    std::vector<double> delta(u.size()), rhs(u.size()), trial(u.size());
    while (fnorm > threshold) {
        if (report.iterations >= options.max_newton || !std::isfinite(fnorm)) {
            report.diverged = true;
            break;
        }
        const SparseMatrix J = jacobian(sys, u);
        for (std::size_t i = 0; i < f.size(); ++i) rhs[i] = -f[i];
        std::fill(delta.begin(), delta.end(), 0.0);
        const SolveReport inner = solver(J, rhs, delta);
        report.inner_iterations.push_back(inner.iterations);
        ++report.iterations;
        if (inner.diverged) {
            report.diverged = true;
            break;
        }

        double step = 1.0;
        std::vector<double> ftrial;
        double tnorm = 0.0;
        for (int h = 0;; ++h) {
            for (std::size_t i = 0; i < u.size(); ++i) trial[i] = u[i] + step * delta[i];
            ftrial = residual(sys, trial);
            tnorm = norm2(ftrial);
            if (!options.step_halving || tnorm <= fnorm || h >= options.max_halvings) break;
            step *= 0.5;
            report.damping_used = true;
        }
        u.swap(trial);
        f = std::move(ftrial);
        fnorm = tnorm;
        report.residual_history.push_back(fnorm);
        report.final_residual = fnorm;
    }
    report.converged = !report.diverged && fnorm <= threshold;
    report.newton_iterations = report.iterations;
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {std::move(u), report};
}

std::vector<double> final_values(const SpaceTimeLayout& layout, std::span<const double> u)
{
    const int begin = layout.index(layout.nt - 1, layout.m - 1, 0);
    return std::vector<double>(u.begin() + begin, u.begin() + begin + layout.ndof);
}

}  // namespace pint
