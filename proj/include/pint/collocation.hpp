#pragma once

#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace pint {

/// Gauss-Legendre rule mapped to [0, 1].
struct QuadratureRule {
    std::vector<double> points;
    std::vector<double> weights;
};

QuadratureRule gauss_legendre(int n);

/// Right Gauss-Radau nodes on (0, 1]; the last node is exactly 1.
///
/// Computed from the eigenvalues of the companion matrix of P_M - P_{M-1}
/// followed by one Newton polish per interior root. Supports 1 <= M <= 9.
std::vector<double> radau_nodes(int M);

/// Lagrange cardinal polynomials on a set of distinct nodes.
class LagrangeBasis {
public:
    explicit LagrangeBasis(std::vector<double> nodes);

    int size() const { return static_cast<int>(nodes_.size()); }
    const std::vector<double>& nodes() const { return nodes_; }

    double value(int j, double t) const;
    double derivative(int j, double t) const;

private:
    std::vector<double> nodes_;
    std::vector<double> denominators_;
};

enum class QDeltaKind { implicit_euler, explicit_euler, lu_trick };

/// q_{m,j} = integral of l_j over [0, t_m], unit interval.
Eigen::MatrixXd build_q(const std::vector<double>& nodes);

/// Lower-triangular SDC preconditioners. `explicit_euler` is strictly lower.
Eigen::MatrixXd build_qdelta(const std::vector<double>& nodes, QDeltaKind kind);

struct DgMatrices {
    Eigen::MatrixXd K;  ///< -int l_i' l_j + l_i(1) l_j(1)
    Eigen::MatrixXd M;  ///< int l_i l_j
    Eigen::MatrixXd J;  ///< l_i(0) l_j(1)
};

DgMatrices build_dg_matrices(const std::vector<double>& nodes);

/// All single-element temporal objects on the unit interval. Scale by dt at use sites.
struct CollocationTableau {
    int M = 0;
    std::vector<double> nodes;
    Eigen::MatrixXd Q;
    Eigen::MatrixXd QDeltaImplicit;
    Eigen::MatrixXd QDeltaExplicit;
    Eigen::MatrixXd Kq;
    Eigen::MatrixXd Mq;
    Eigen::MatrixXd Jq;

    static CollocationTableau make(int M, QDeltaKind implicit_kind = QDeltaKind::implicit_euler);
};

/// Values of the polynomial through (from_nodes, .) evaluated at to_nodes:
/// a (to.size() x from.size()) matrix.
Eigen::MatrixXd interpolation_matrix(const std::vector<double>& from_nodes,
                                     const std::vector<double>& to_nodes);

/// Solves (Kq - dt*lambda*Mq) U = Jq [u0,...,u0] for u' = lambda u on one element.
Eigen::VectorXd scalar_dg_step(const CollocationTableau& tableau, double dt, double lambda,
                               double u0);

/// Solves (I - dt*lambda*Q) U = [u0,...,u0], the collocation form of the same step.
Eigen::VectorXd scalar_collocation_step(const CollocationTableau& tableau, double dt,
                                        double lambda, double u0);

}  // namespace pint
