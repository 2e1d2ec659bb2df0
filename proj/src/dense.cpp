#include "pint/dense.hpp"

#include <cmath>
#include <string>

#include "pint/errors.hpp"

namespace pint {

DenseLU::DenseLU(const Eigen::MatrixXd& A)
{
    if (A.rows() != A.cols()) throw ConfigError("DenseLU: matrix must be square");
    if (A.rows() == 0) return;
    lu_.compute(A);
    const auto& U = lu_.matrixLU();
    const double scale = A.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < U.rows(); ++i) {
        if (!(std::abs(U(i, i)) > 1e-14 * scale))
            throw SolverError("DenseLU: singular matrix (pivot " + std::to_string(i) + ")");
    }
}

void DenseLU::solve(std::span<const double> b, std::span<double> x) const
{
    if (static_cast<int>(b.size()) != size() || static_cast<int>(x.size()) != size())
        throw ConfigError("DenseLU::solve: dimension mismatch");
    const Eigen::Map<const Eigen::VectorXd> bv(b.data(), size());
    Eigen::Map<Eigen::VectorXd> xv(x.data(), size());
    xv = lu_.solve(bv);
}

}  // namespace pint
