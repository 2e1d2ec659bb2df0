#pragma once

#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "pint/kernels.hpp"
#include "pint/sparse.hpp"

namespace pint {

/// z = P^{-1} r
class Preconditioner {
public:
    virtual ~Preconditioner() = default;
    virtual void apply(std::span<const double> r, std::span<double> z) const = 0;
    virtual int size() const = 0;
};

class IdentityPreconditioner final : public Preconditioner {
public:
    explicit IdentityPreconditioner(int n) : n_(n) {}
    void apply(std::span<const double> r, std::span<double> z) const override;
    int size() const override { return n_; }

private:
    int n_;
};

/// Incomplete LU with zero fill. L (unit diagonal) and U share the storage
/// and sparsity pattern of A.
class Ilu0 final : public Preconditioner {
public:
    explicit Ilu0(const SparseMatrix& A);

    void apply(std::span<const double> r, std::span<double> z) const override;
    int size() const override { return factors_.rows(); }

    const SparseMatrix& factors() const { return factors_; }

private:
    SparseMatrix factors_;
    std::vector<int> diag_;
};

/// Block-Jacobi over contiguous index ranges with an ILU(0) per diagonal block.
/// The last block absorbs the remainder when `num_blocks` does not divide the size.
class BlockJacobi final : public Preconditioner {
public:
    BlockJacobi(const SparseMatrix& A, int num_blocks,
                kernels::Exec exec = kernels::Exec::automatic);

    void apply(std::span<const double> r, std::span<double> z) const override;
    int size() const override { return n_; }

    const std::vector<std::pair<int, int>>& ranges() const { return ranges_; }

    /// Same result as `apply`, forcing one execution policy (kept for testing).
    void apply_with(kernels::Exec exec, std::span<const double> r, std::span<double> z) const;

private:
    int n_;
    kernels::Exec exec_;
    std::vector<std::pair<int, int>> ranges_;
    std::vector<Ilu0> blocks_;
};

/// Contiguous partition of [0, n) into `num_blocks` ranges of size n / num_blocks,
/// the last taking the remainder.
std::vector<std::pair<int, int>> partition_ranges(int n, int num_blocks);

/// ILU(0) for one block, block-Jacobi otherwise.
std::unique_ptr<Preconditioner> make_ilu_preconditioner(const SparseMatrix& A, int partitions);

}  // namespace pint
