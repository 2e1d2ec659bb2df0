#pragma once

#include <span>

#include <Eigen/Dense>

#include "pint/sparse.hpp"

namespace pint {

/// Dense LU with partial pivoting; used on the coarsest multigrid level and as
/// the verification oracle for small space-time systems.
class DenseLU {
public:
    DenseLU() = default;
    explicit DenseLU(const Eigen::MatrixXd& A);
    explicit DenseLU(const SparseMatrix& A) : DenseLU(A.to_dense()) {}

    int size() const { return static_cast<int>(lu_.rows()); }
    void solve(std::span<const double> b, std::span<double> x) const;

private:
    Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

}  // namespace pint
