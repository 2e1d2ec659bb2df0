#include "pint/collocation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "pint/errors.hpp"

namespace pint {

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> legendre(int n, double x)
{
    if (n == 0) return {1.0, 0.0};
    double p_prev = 1.0, p = x;
    double d_prev = 0.0, d = 1.0;
    for (int k = 1; k < n; ++k) {
        const double p_next = ((2.0 * k + 1.0) * x * p - k * p_prev) / (k + 1.0);
        const double d_next = d_prev + (2.0 * k + 1.0) * p;
        p_prev = p;
        p = p_next;
        d_prev = d;
        d = d_next;
    }
    return {p, d};
}

// Monomial coefficients (ascending) of P_n.
std::vector<double> legendre_coefficients(int n)
{
    std::vector<double> prev{1.0};
    if (n == 0) return prev;
    std::vector<double> cur{0.0, 1.0};
    for (int k = 1; k < n; ++k) {
        std::vector<double> next(k + 2, 0.0);
        for (int i = 0; i <= k; ++i) next[i + 1] += (2.0 * k + 1.0) * cur[i];
        for (int i = 0; i < k; ++i) next[i] -= k * prev[i];
        for (double& c : next) c /= (k + 1.0);
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

}  // namespace

QuadratureRule gauss_legendre(int n)
{
    if (n < 1) throw ConfigError("gauss_legendre: need n >= 1, got " + std::to_string(n));
    QuadratureRule rule;
    rule.points.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            const auto [p, d] = legendre(n, x);
            const double dx = p / d;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const auto [p, d] = legendre(n, x);
        (void)p;
        // map x in [-1,1] to t = (1 - x)/2 so that points come out ascending
        rule.points[i] = 0.5 * (1.0 - x);
        rule.weights[i] = 1.0 / ((1.0 - x * x) * d * d);
    }
    return rule;
}

std::vector<double> radau_nodes(int M)
{
    if (M < 1 || M > 9)
        throw ConfigError("radau_nodes: M must be in [1, 9], got " + std::to_string(M));
    if (M == 1) return {1.0};

    // R(x) = P_M(x) - P_{M-1}(x) vanishes at x = 1 and the interior right-Radau points.
    std::vector<double> coeff = legendre_coefficients(M);
    const std::vector<double> lower = legendre_coefficients(M - 1);
    for (std::size_t i = 0; i < lower.size(); ++i) coeff[i] -= lower[i];

    const double lead = coeff[M];
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(M, M);
    for (int i = 1; i < M; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < M; ++i) companion(i, M - 1) = -coeff[i] / lead;

    const Eigen::EigenSolver<Eigen::MatrixXd> eig(companion, false);
    std::vector<double> roots(M);
    for (int i = 0; i < M; ++i) roots[i] = eig.eigenvalues()[i].real();
    std::sort(roots.begin(), roots.end());

    auto radau_poly = [M](double x) {
        const auto [p, d] = legendre(M, x);
        const auto [q, e] = legendre(M - 1, x);
        return std::pair{p - q, d - e};
    };

    std::vector<double> nodes(M);
    for (int i = 0; i < M - 1; ++i) {
        double x = roots[i];
        const auto [r, dr] = radau_poly(x);
        x -= r / dr;
        nodes[i] = 0.5 * (x + 1.0);
    }
    nodes[M - 1] = 1.0;
    return nodes;
}

LagrangeBasis::LagrangeBasis(std::vector<double> nodes) : nodes_(std::move(nodes))
{
    const int n = size();
    if (n < 1) throw ConfigError("LagrangeBasis: empty node set");
    denominators_.assign(n, 1.0);
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            if (k == j) continue;
            const double diff = nodes_[j] - nodes_[k];
            if (diff == 0.0)
                throw ConfigError("LagrangeBasis: duplicate node " + std::to_string(nodes_[j]));
            denominators_[j] *= diff;
        }
    }
}

double LagrangeBasis::value(int j, double t) const
{
    double num = 1.0;
    for (int k = 0; k < size(); ++k)
        if (k != j) num *= t - nodes_[k];
    return num / denominators_[j];
}

double LagrangeBasis::derivative(int j, double t) const
{
    double sum = 0.0;
    for (int i = 0; i < size(); ++i) {
        if (i == j) continue;
        double prod = 1.0;
        for (int k = 0; k < size(); ++k)
            if (k != j && k != i) prod *= t - nodes_[k];
        sum += prod;
    }
    return sum / denominators_[j];
}

Eigen::MatrixXd build_q(const std::vector<double>& nodes)
{
    const LagrangeBasis basis(nodes);
    const int M = basis.size();
    const QuadratureRule rule = gauss_legendre(M + 1);
    Eigen::MatrixXd Q(M, M);
    for (int m = 0; m < M; ++m) {
        const double tm = nodes[m];
        for (int j = 0; j < M; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < rule.points.size(); ++k)
                s += rule.weights[k] * basis.value(j, tm * rule.points[k]);
            Q(m, j) = tm * s;
        }
    }
    return Q;
}

Eigen::MatrixXd build_qdelta(const std::vector<double>& nodes, QDeltaKind kind)
{
    const int M = static_cast<int>(nodes.size());
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(M, M);
    switch (kind) {
    case QDeltaKind::implicit_euler:
        for (int m = 0; m < M; ++m)
            for (int j = 0; j <= m; ++j) D(m, j) = nodes[j] - (j == 0 ? 0.0 : nodes[j - 1]);
        break;
    case QDeltaKind::explicit_euler:
        for (int m = 1; m < M; ++m)
            for (int j = 0; j < m; ++j) D(m, j) = nodes[j] - (j == 0 ? 0.0 : nodes[j - 1]);
        break;
    case QDeltaKind::lu_trick: {
        // Q^T = L U without pivoting; Q_delta = U^T.
        Eigen::MatrixXd A = build_q(nodes).transpose();
        for (int k = 0; k < M; ++k) {
            if (A(k, k) == 0.0) throw SolverError("build_qdelta: zero pivot in LU trick");
            for (int i = k + 1; i < M; ++i) {
                const double l = A(i, k) / A(k, k);
                for (int j = k; j < M; ++j) A(i, j) -= l * A(k, j);
            }
        }
        D = A.triangularView<Eigen::Upper>().toDenseMatrix().transpose();
        break;
    }
    default:
        throw ConfigError("build_qdelta: unknown kind");
    }
    return D;
}

DgMatrices build_dg_matrices(const std::vector<double>& nodes)
{
    const LagrangeBasis basis(nodes);
    const int M = basis.size();
    const QuadratureRule rule = gauss_legendre(M + 1);
    DgMatrices dg{Eigen::MatrixXd::Zero(M, M), Eigen::MatrixXd::Zero(M, M),
                  Eigen::MatrixXd::Zero(M, M)};
    for (int i = 0; i < M; ++i) {
        for (int j = 0; j < M; ++j) {
            double grad = 0.0, mass = 0.0;
            for (std::size_t k = 0; k < rule.points.size(); ++k) {
                const double t = rule.points[k];
                const double w = rule.weights[k];
                grad += w * basis.derivative(i, t) * basis.value(j, t);
                mass += w * basis.value(i, t) * basis.value(j, t);
            }
            dg.K(i, j) = -grad + basis.value(i, 1.0) * basis.value(j, 1.0);
            dg.M(i, j) = mass;
            dg.J(i, j) = basis.value(i, 0.0) * basis.value(j, 1.0);
        }
    }
    return dg;
}

CollocationTableau CollocationTableau::make(int M, QDeltaKind implicit_kind)
{
    if (implicit_kind == QDeltaKind::explicit_euler)
        throw ConfigError("CollocationTableau: explicit Euler cannot be the implicit preconditioner");
    CollocationTableau tab;
    tab.M = M;
    tab.nodes = radau_nodes(M);
    tab.Q = build_q(tab.nodes);
    tab.QDeltaImplicit = build_qdelta(tab.nodes, implicit_kind);
    tab.QDeltaExplicit = build_qdelta(tab.nodes, QDeltaKind::explicit_euler);
    DgMatrices dg = build_dg_matrices(tab.nodes);
    tab.Kq = std::move(dg.K);
    tab.Mq = std::move(dg.M);
    tab.Jq = std::move(dg.J);
    return tab;
}

Eigen::MatrixXd interpolation_matrix(const std::vector<double>& from_nodes,
                                     const std::vector<double>& to_nodes)
{
    const LagrangeBasis basis(from_nodes);
    Eigen::MatrixXd P(to_nodes.size(), from_nodes.size());
    for (std::size_t i = 0; i < to_nodes.size(); ++i)
        for (int j = 0; j < basis.size(); ++j) P(i, j) = basis.value(j, to_nodes[i]);
    return P;
}

namespace {

Eigen::VectorXd solve_small(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const char* who)
{
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    const auto& U = lu.matrixLU();
    const double scale = A.cwiseAbs().maxCoeff();
    for (int i = 0; i < U.rows(); ++i)
        if (std::abs(U(i, i)) <= 1e-14 * scale)
            throw SolverError(std::string(who) + ": singular system");
    return lu.solve(b);
}

}  // namespace

Eigen::VectorXd scalar_dg_step(const CollocationTableau& tableau, double dt, double lambda,
                               double u0)
{
    if (!(dt > 0.0)) throw ConfigError("scalar_dg_step: dt must be positive");
    const Eigen::MatrixXd A = tableau.Kq - dt * lambda * tableau.Mq;
    const Eigen::VectorXd rhs = tableau.Jq * Eigen::VectorXd::Constant(tableau.M, u0);
    return solve_small(A, rhs, "scalar_dg_step");
}

Eigen::VectorXd scalar_collocation_step(const CollocationTableau& tableau, double dt,
                                        double lambda, double u0)
{
    if (!(dt > 0.0)) throw ConfigError("scalar_collocation_step: dt must be positive");
    const Eigen::MatrixXd A =
        Eigen::MatrixXd::Identity(tableau.M, tableau.M) - dt * lambda * tableau.Q;
    return solve_small(A, Eigen::VectorXd::Constant(tableau.M, u0), "scalar_collocation_step");
}

}  // namespace pint
