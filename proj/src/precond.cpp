#include "pint/precond.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pint/errors.hpp"

namespace pint {

void IdentityPreconditioner::apply(std::span<const double> r, std::span<double> z) const
{
    std::copy(r.begin(), r.end(), z.begin());
}

Ilu0::Ilu0(const SparseMatrix& A) : factors_(A)
{
    if (A.rows() != A.cols()) throw ConfigError("ilu0: matrix must be square");
    const int n = A.rows();
    const auto rp = factors_.row_ptr();
    const auto ci = factors_.col_idx();
    auto v = factors_.values();
    diag_.assign(n, -1);
    for (int i = 0; i < n; ++i)
        for (int k = rp[i]; k < rp[i + 1]; ++k)
            if (ci[k] == i) diag_[i] = k;

    std::vector<int> pos(n, -1);
    for (int i = 0; i < n; ++i) {
        if (diag_[i] < 0) throw SolverError("ilu0: missing diagonal in row " + std::to_string(i));
        for (int k = rp[i]; k < rp[i + 1]; ++k) pos[ci[k]] = k;
        for (int k = rp[i]; k < rp[i + 1] && ci[k] < i; ++k) {
            const int p = ci[k];
            const double pivot = v[diag_[p]];
            if (pivot == 0.0 || !std::isfinite(pivot))
                throw SolverError("ilu0: zero pivot in row " + std::to_string(p));
            const double l = v[k] / pivot;
            v[k] = l;
            for (int kk = diag_[p] + 1; kk < rp[p + 1]; ++kk) {
                const int j = ci[kk];
                if (pos[j] >= 0) v[pos[j]] -= l * v[kk];
            }
        }
        for (int k = rp[i]; k < rp[i + 1]; ++k) pos[ci[k]] = -1;
        if (v[diag_[i]] == 0.0 || !std::isfinite(v[diag_[i]]))
            throw SolverError("ilu0: zero pivot in row " + std::to_string(i));
    }
}

void Ilu0::apply(std::span<const double> r, std::span<double> z) const
{
    const int n = factors_.rows();
    const auto rp = factors_.row_ptr();
    const auto ci = factors_.col_idx();
    const auto v = factors_.values();
    for (int i = 0; i < n; ++i) {
        double s = r[i];
        for (int k = rp[i]; k < diag_[i]; ++k) s -= v[k] * z[ci[k]];
        z[i] = s;
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = z[i];
        for (int k = diag_[i] + 1; k < rp[i + 1]; ++k) s -= v[k] * z[ci[k]];
        z[i] = s / v[diag_[i]];
    }
}

std::vector<std::pair<int, int>> partition_ranges(int n, int num_blocks)
{
    if (num_blocks < 1 || num_blocks > n)
        throw ConfigError("partition: need 1 <= blocks <= size, got " + std::to_string(num_blocks) +
                          " blocks for size " + std::to_string(n));
    const int base = n / num_blocks;
    std::vector<std::pair<int, int>> ranges;
    ranges.reserve(num_blocks);
    for (int b = 0; b < num_blocks; ++b) {
        const int begin = b * base;
        const int end = (b == num_blocks - 1) ? n : begin + base;
        ranges.emplace_back(begin, end);
    }
    return ranges;
}

BlockJacobi::BlockJacobi(const SparseMatrix& A, int num_blocks, kernels::Exec exec)
    : n_(A.rows()), exec_(exec), ranges_(partition_ranges(A.rows(), num_blocks))
{
    if (A.rows() != A.cols()) throw ConfigError("block_jacobi: matrix must be square");
    blocks_.reserve(ranges_.size());
    for (const auto& [begin, end] : ranges_) {
        try {
            blocks_.emplace_back(extract_block(A, begin, end));
        } catch (const SolverError& e) {
            throw SolverError("block_jacobi: block [" + std::to_string(begin) + ", " +
                              std::to_string(end) + "): " + e.what());
        }
    }
}

void BlockJacobi::apply(std::span<const double> r, std::span<double> z) const
{
    apply_with(exec_, r, z);
}

void BlockJacobi::apply_with(kernels::Exec exec, std::span<const double> r,
                             std::span<double> z) const
{
    const int nb = static_cast<int>(blocks_.size());
    const bool parallel =
        nb > 1 && kernels::resolve(exec, exec == kernels::Exec::automatic ? n_ : nb) ==
                      kernels::Exec::openmp;
    // Each block writes a disjoint range of z.
#pragma omp parallel for schedule(static) if (parallel)
    for (int b = 0; b < nb; ++b) {
        const auto [begin, end] = ranges_[b];
        blocks_[b].apply(r.subspan(begin, end - begin), z.subspan(begin, end - begin));
    }
}

std::unique_ptr<Preconditioner> make_ilu_preconditioner(const SparseMatrix& A, int partitions)
{
    if (partitions <= 1) return std::make_unique<Ilu0>(A);
    return std::make_unique<BlockJacobi>(A, partitions);
}

}  // namespace pint
