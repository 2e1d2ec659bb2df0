#include "pint/gmres.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "pint/errors.hpp"

namespace pint {

double norm2(std::span<const double> v)
{
    double s = 0.0;
    for (double a : v) s += a * a;
    return std::sqrt(s);
}

double norm_inf(std::span<const double> v)
{
    double s = 0.0;
    for (double a : v) s = std::max(s, std::abs(a));
    if (std::any_of(v.begin(), v.end(), [](double a) { return std::isnan(a); }))
        return std::numeric_limits<double>::quiet_NaN();
    return s;
}

LinearOperator as_operator(const SparseMatrix& A)
{
    return [&A](std::span<const double> x, std::span<double> y) { A.multiply(x, y); };
}

namespace {

double dot(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void true_residual(const LinearOperator& A, std::span<const double> b, std::span<const double> x,
                   std::vector<double>& r)
{
    A(x, r);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
}

}  // namespace

SolveReport gmres(const LinearOperator& A, std::span<const double> b, std::span<double> x,
                  const Preconditioner* precond, const GmresOptions& options)
{
    const int n = static_cast<int>(b.size());
    if (static_cast<int>(x.size()) != n) throw ConfigError("gmres: x and b differ in size");
    if (precond && precond->size() != n)
        throw ConfigError("gmres: preconditioner size does not match the system");
    const int restart = std::max(1, options.restart);

    SolveReport report;
    std::vector<double> r(n);
    true_residual(A, b, x, r);
    double beta = norm2(r);
    if (!std::isfinite(beta)) throw SolverError("gmres: non-finite initial residual");
    report.residual_history.push_back(beta);
    report.final_residual = beta;
    const double threshold = std::max(options.tol_abs, options.tol_rel * beta);
    if (beta <= threshold) {
        report.converged = true;
        return report;
    }

    std::vector<std::vector<double>> V(restart + 1, std::vector<double>(n));
    std::vector<std::vector<double>> Z(restart, std::vector<double>(n));
    std::vector<double> H((restart + 1) * restart, 0.0);
    auto h = [&H, restart](int i, int j) -> double& { return H[i * restart + j]; };
    std::vector<double> cs(restart), sn(restart), g(restart + 1), y(restart);
    double min_beta = beta;

    while (report.iterations < options.max_iterations) {
        for (int i = 0; i < n; ++i) V[0][i] = r[i] / beta;
        std::fill(g.begin(), g.end(), 0.0);
        g[0] = beta;
        int inner = 0;
        bool breakdown = false;
        bool small = false;
        for (int j = 0; j < restart && report.iterations < options.max_iterations; ++j) {
            if (precond)
                precond->apply(V[j], Z[j]);
            else
                Z[j] = V[j];
            A(Z[j], V[j + 1]);
            for (int i = 0; i <= j; ++i) {
                h(i, j) = dot(V[j + 1], V[i]);
                for (int k = 0; k < n; ++k) V[j + 1][k] -= h(i, j) * V[i][k];
            }
            const double hn = norm2(V[j + 1]);
            h(j + 1, j) = hn;
            if (!std::isfinite(hn)) throw SolverError("gmres: NaN in Arnoldi process");

            for (int i = 0; i < j; ++i) {
                const double t = cs[i] * h(i, j) + sn[i] * h(i + 1, j);
                h(i + 1, j) = -sn[i] * h(i, j) + cs[i] * h(i + 1, j);
                h(i, j) = t;
            }
            const double denom = std::hypot(h(j, j), h(j + 1, j));
            if (denom == 0.0) throw SolverError("gmres: singular Hessenberg matrix");
            cs[j] = h(j, j) / denom;
            sn[j] = h(j + 1, j) / denom;
            h(j, j) = denom;
            h(j + 1, j) = 0.0;
            g[j + 1] = -sn[j] * g[j];
            g[j] = cs[j] * g[j];

            ++report.iterations;
            ++inner;
            const double est = std::abs(g[j + 1]);
            report.residual_history.push_back(est);
            if (hn <= 1e-14 * beta) {
                breakdown = true;
                break;
            }
            if (est <= threshold) {
                small = true;
                break;
            }
            for (int k = 0; k < n; ++k) V[j + 1][k] /= hn;
        }

        for (int i = inner - 1; i >= 0; --i) {
            double s = g[i];
            for (int k = i + 1; k < inner; ++k) s -= h(i, k) * y[k];
            y[i] = s / h(i, i);
        }
        for (int i = 0; i < inner; ++i)
            for (int k = 0; k < n; ++k) x[k] += y[i] * Z[i][k];

        true_residual(A, b, x, r);
        beta = norm2(r);
        report.final_residual = beta;
        if (!std::isfinite(beta)) throw SolverError("gmres: non-finite residual");
        if (beta <= threshold || (small && options.tol_abs == 0.0 && options.tol_rel == 0.0)) {
            report.converged = beta <= threshold;
            break;
        }
        if (beta > options.divergence_factor * min_beta) {
            report.diverged = true;
            break;
        }
        min_beta = std::min(min_beta, beta);
        if (breakdown) break;  // Krylov space exhausted without reaching the tolerance
    }
    if (!report.converged && !report.diverged && report.iterations >= options.max_iterations &&
        options.tol_abs + options.tol_rel > 0.0)
        report.diverged = true;
    return report;
}

SolveReport gmres(const SparseMatrix& A, std::span<const double> b, std::span<double> x,
                  const Preconditioner* precond, const GmresOptions& options)
{
    if (A.rows() != A.cols() || A.rows() != static_cast<int>(b.size()))
        throw ConfigError("gmres: matrix and right-hand side dimensions differ");
    return gmres(as_operator(A), b, x, precond, options);
}

}  // namespace pint
