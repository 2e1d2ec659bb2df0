#include "pint/sparse.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <string>

#include "pint/errors.hpp"
#include "pint/kernels.hpp"

namespace pint {

SparseMatrix::SparseMatrix(int rows, int cols, std::vector<int> row_ptr, std::vector<int> col_idx,
                           std::vector<double> values)
    : rows_(rows),
      cols_(cols),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)),
      values_(std::move(values))
{
    if (rows_ < 0 || cols_ < 0) throw ConfigError("SparseMatrix: negative dimension");
    if (static_cast<int>(row_ptr_.size()) != rows_ + 1 || row_ptr_.front() != 0 ||
        row_ptr_.back() != static_cast<int>(col_idx_.size()) ||
        col_idx_.size() != values_.size())
        throw ConfigError("SparseMatrix: inconsistent CSR arrays");
    for (int i = 0; i < rows_; ++i) {
        if (row_ptr_[i] > row_ptr_[i + 1]) throw ConfigError("SparseMatrix: row_ptr not monotone");
        for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
            if (col_idx_[k] < 0 || col_idx_[k] >= cols_)
                throw ConfigError("SparseMatrix: column index out of range in row " +
                                  std::to_string(i));
            if (k > row_ptr_[i] && col_idx_[k] <= col_idx_[k - 1])
                throw ConfigError("SparseMatrix: unsorted or duplicate column in row " +
                                  std::to_string(i));
        }
    }
}

SparseMatrix SparseMatrix::from_triplets(int rows, int cols, std::vector<Triplet> triplets)
{
    std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    std::vector<int> row_ptr(rows + 1, 0);
    std::vector<int> col_idx;
    std::vector<double> values;
    col_idx.reserve(triplets.size());
    values.reserve(triplets.size());
    for (std::size_t k = 0; k < triplets.size(); ++k) {
        const Triplet& t = triplets[k];
        if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
            throw ConfigError("from_triplets: entry out of range");
        if (k > 0 && triplets[k - 1].row == t.row && triplets[k - 1].col == t.col) {
            values.back() += t.value;
        } else {
            col_idx.push_back(t.col);
            values.push_back(t.value);
            ++row_ptr[t.row + 1];
        }
    }
    for (int i = 0; i < rows; ++i) row_ptr[i + 1] += row_ptr[i];
    return SparseMatrix(rows, cols, std::move(row_ptr), std::move(col_idx), std::move(values));
}

SparseMatrix SparseMatrix::identity(int n)
{
    std::vector<double> ones(n, 1.0);
    return diagonal(ones);
}

SparseMatrix SparseMatrix::diagonal(std::span<const double> d)
{
    const int n = static_cast<int>(d.size());
    std::vector<int> row_ptr(n + 1), col_idx(n);
    for (int i = 0; i < n; ++i) {
        row_ptr[i + 1] = i + 1;
        col_idx[i] = i;
    }
    return SparseMatrix(n, n, std::move(row_ptr), std::move(col_idx),
                        std::vector<double>(d.begin(), d.end()));
}

SparseMatrix SparseMatrix::from_dense(const Eigen::MatrixXd& A, double drop_tol)
{
    const int rows = static_cast<int>(A.rows()), cols = static_cast<int>(A.cols());
    std::vector<int> row_ptr(rows + 1, 0), col_idx;
    std::vector<double> values;
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            if (std::abs(A(i, j)) > drop_tol) {
                col_idx.push_back(j);
                values.push_back(A(i, j));
            }
        }
        row_ptr[i + 1] = static_cast<int>(col_idx.size());
    }
    return SparseMatrix(rows, cols, std::move(row_ptr), std::move(col_idx), std::move(values));
}

double SparseMatrix::at(int i, int j) const
{
    const auto begin = col_idx_.begin() + row_ptr_[i];
    const auto end = col_idx_.begin() + row_ptr_[i + 1];
    const auto it = std::lower_bound(begin, end, j);
    if (it == end || *it != j) return 0.0;
    return values_[it - col_idx_.begin()];
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const
{
    kernels::spmv(kernels::Exec::automatic, row_ptr_, col_idx_, values_, x, y);
}

std::vector<double> SparseMatrix::operator*(std::span<const double> x) const
{
    std::vector<double> y(rows_);
    multiply(x, y);
    return y;
}

SparseMatrix SparseMatrix::transpose() const
{
    std::vector<int> row_ptr(cols_ + 1, 0);
    for (int c : col_idx_) ++row_ptr[c + 1];
    for (int j = 0; j < cols_; ++j) row_ptr[j + 1] += row_ptr[j];
    std::vector<int> next(row_ptr.begin(), row_ptr.end() - 1);
    std::vector<int> col_idx(values_.size());
    std::vector<double> values(values_.size());
    for (int i = 0; i < rows_; ++i) {
        for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
            const int dst = next[col_idx_[k]]++;
            col_idx[dst] = i;
            values[dst] = values_[k];
        }
    }
    return SparseMatrix(cols_, rows_, std::move(row_ptr), std::move(col_idx), std::move(values));
}

SparseMatrix SparseMatrix::scaled(double s) const
{
    SparseMatrix out = *this;
    for (double& v : out.values_) v *= s;
    return out;
}

SparseMatrix SparseMatrix::scale_columns(std::span<const double> d) const
{
    if (static_cast<int>(d.size()) != cols_) throw ConfigError("scale_columns: size mismatch");
    SparseMatrix out = *this;
    for (std::size_t k = 0; k < out.values_.size(); ++k) out.values_[k] *= d[out.col_idx_[k]];
    return out;
}

std::vector<double> SparseMatrix::diagonal() const
{
    std::vector<double> d(std::min(rows_, cols_), 0.0);
    for (int i = 0; i < static_cast<int>(d.size()); ++i) d[i] = at(i, i);
    return d;
}

Eigen::MatrixXd SparseMatrix::to_dense() const
{
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) A(i, col_idx_[k]) = values_[k];
    return A;
}

SparseMatrix kron(const SparseMatrix& A, const SparseMatrix& B)
{
    const long long rows = static_cast<long long>(A.rows()) * B.rows();
    const long long cols = static_cast<long long>(A.cols()) * B.cols();
    const long long nnz = static_cast<long long>(A.nnz()) * B.nnz();
    if (rows > INT_MAX || cols > INT_MAX || nnz > INT_MAX)
        throw ConfigError("kron: result too large for 32-bit CSR indices");

    const int p = B.rows(), q = B.cols();
    std::vector<int> row_ptr(rows + 1, 0);
    std::vector<int> col_idx(nnz);
    std::vector<double> values(nnz);
    const auto arp = A.row_ptr(), aci = A.col_idx();
    const auto brp = B.row_ptr(), bci = B.col_idx();
    const auto av = A.values(), bv = B.values();

    for (int i = 0; i < A.rows(); ++i)
        for (int k = 0; k < p; ++k)
            row_ptr[i * p + k + 1] = (arp[i + 1] - arp[i]) * (brp[k + 1] - brp[k]);
    for (long long r = 0; r < rows; ++r) row_ptr[r + 1] += row_ptr[r];

    // rows of the product are independent
#pragma omp parallel for schedule(static) if (rows >= kernels::parallel_threshold)
    for (int i = 0; i < A.rows(); ++i) {
        for (int k = 0; k < p; ++k) {
            int dst = row_ptr[i * p + k];
            for (int a = arp[i]; a < arp[i + 1]; ++a) {
                for (int b = brp[k]; b < brp[k + 1]; ++b) {
                    col_idx[dst] = aci[a] * q + bci[b];
                    values[dst] = av[a] * bv[b];
                    ++dst;
                }
            }
        }
    }
    return SparseMatrix(static_cast<int>(rows), static_cast<int>(cols), std::move(row_ptr),
                        std::move(col_idx), std::move(values));
}

SparseMatrix add(const SparseMatrix& A, const SparseMatrix& B, double a, double b)
{
    if (A.rows() != B.rows() || A.cols() != B.cols()) throw ConfigError("add: shape mismatch");
    std::vector<int> row_ptr(A.rows() + 1, 0), col_idx;
    std::vector<double> values;
    col_idx.reserve(A.nnz() + B.nnz());
    values.reserve(A.nnz() + B.nnz());
    const auto arp = A.row_ptr(), aci = A.col_idx(), brp = B.row_ptr(), bci = B.col_idx();
    const auto av = A.values(), bv = B.values();
    for (int i = 0; i < A.rows(); ++i) {
        int ka = arp[i], kb = brp[i];
        while (ka < arp[i + 1] || kb < brp[i + 1]) {
            const int ca = ka < arp[i + 1] ? aci[ka] : INT_MAX;
            const int cb = kb < brp[i + 1] ? bci[kb] : INT_MAX;
            if (ca == cb) {
                col_idx.push_back(ca);
                values.push_back(a * av[ka++] + b * bv[kb++]);
            } else if (ca < cb) {
                col_idx.push_back(ca);
                values.push_back(a * av[ka++]);
            } else {
                col_idx.push_back(cb);
                values.push_back(b * bv[kb++]);
            }
        }
        row_ptr[i + 1] = static_cast<int>(col_idx.size());
    }
    return SparseMatrix(A.rows(), A.cols(), std::move(row_ptr), std::move(col_idx),
                        std::move(values));
}

SparseMatrix multiply(const SparseMatrix& A, const SparseMatrix& B)
{
    if (A.cols() != B.rows()) throw ConfigError("multiply: inner dimension mismatch");
    const auto arp = A.row_ptr(), aci = A.col_idx(), brp = B.row_ptr(), bci = B.col_idx();
    const auto av = A.values(), bv = B.values();
    std::vector<int> row_ptr(A.rows() + 1, 0), col_idx;
    std::vector<double> values;
    std::vector<int> marker(B.cols(), -1);
    std::vector<double> accum(B.cols(), 0.0);
    std::vector<int> cols_in_row;
    for (int i = 0; i < A.rows(); ++i) {
        cols_in_row.clear();
        for (int ka = arp[i]; ka < arp[i + 1]; ++ka) {
            const int k = aci[ka];
            for (int kb = brp[k]; kb < brp[k + 1]; ++kb) {
                const int j = bci[kb];
                if (marker[j] != i) {
                    marker[j] = i;
                    accum[j] = 0.0;
                    cols_in_row.push_back(j);
                }
                accum[j] += av[ka] * bv[kb];
            }
        }
        std::sort(cols_in_row.begin(), cols_in_row.end());
        for (int j : cols_in_row) {
            col_idx.push_back(j);
            values.push_back(accum[j]);
        }
        row_ptr[i + 1] = static_cast<int>(col_idx.size());
    }
    return SparseMatrix(A.rows(), B.cols(), std::move(row_ptr), std::move(col_idx),
                        std::move(values));
}

SparseMatrix extract_block(const SparseMatrix& A, int begin, int end)
{
    if (begin < 0 || end > A.rows() || end > A.cols() || begin >= end)
        throw ConfigError("extract_block: invalid range");
    const auto rp = A.row_ptr(), ci = A.col_idx();
    const auto v = A.values();
    std::vector<int> row_ptr(end - begin + 1, 0), col_idx;
    std::vector<double> values;
    for (int i = begin; i < end; ++i) {
        for (int k = rp[i]; k < rp[i + 1]; ++k) {
            if (ci[k] >= begin && ci[k] < end) {
                col_idx.push_back(ci[k] - begin);
                values.push_back(v[k]);
            }
        }
        row_ptr[i - begin + 1] = static_cast<int>(col_idx.size());
    }
    return SparseMatrix(end - begin, end - begin, std::move(row_ptr), std::move(col_idx),
                        std::move(values));
}

SparseMatrix shift_matrix(int n)
{
    std::vector<Triplet> t;
    for (int i = 1; i < n; ++i) t.push_back({i, i - 1, 1.0});
    return SparseMatrix::from_triplets(n, n, std::move(t));
}

}  // namespace pint
