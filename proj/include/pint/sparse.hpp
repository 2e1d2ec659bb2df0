#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace pint {

struct Triplet {
    int row;
    int col;
    double value;
};

/// Compressed sparse row matrix. Column indices are sorted within each row
/// and free of duplicates.
class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(int rows, int cols, std::vector<int> row_ptr, std::vector<int> col_idx,
                 std::vector<double> values);

    /// Duplicates are summed; explicit zeros are kept so structure is deterministic.
    static SparseMatrix from_triplets(int rows, int cols, std::vector<Triplet> triplets);
    static SparseMatrix identity(int n);
    static SparseMatrix diagonal(std::span<const double> d);
    static SparseMatrix from_dense(const Eigen::MatrixXd& A, double drop_tol = 0.0);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int nnz() const { return static_cast<int>(values_.size()); }

    std::span<const int> row_ptr() const { return row_ptr_; }
    std::span<const int> col_idx() const { return col_idx_; }
    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }

    /// Entry (i, j), zero if not stored.
    double at(int i, int j) const;

    /// y = A x
    void multiply(std::span<const double> x, std::span<double> y) const;
    std::vector<double> operator*(std::span<const double> x) const;

    SparseMatrix transpose() const;
    SparseMatrix scaled(double s) const;
    /// A * diag(d)
    SparseMatrix scale_columns(std::span<const double> d) const;
    std::vector<double> diagonal() const;
    Eigen::MatrixXd to_dense() const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<int> row_ptr_{0};
    std::vector<int> col_idx_;
    std::vector<double> values_;
};

/// (A kron B)[i*p + k, j*q + l] = A[i,j] * B[k,l] for B of shape p x q.
SparseMatrix kron(const SparseMatrix& A, const SparseMatrix& B);

/// a*A + b*B (union pattern).
SparseMatrix add(const SparseMatrix& A, const SparseMatrix& B, double a = 1.0, double b = 1.0);

/// Sparse product A*B (row-wise Gustavson).
SparseMatrix multiply(const SparseMatrix& A, const SparseMatrix& B);

/// Square diagonal sub-block A[begin:end, begin:end].
SparseMatrix extract_block(const SparseMatrix& A, int begin, int end);

/// Subdiagonal shift matrix S with S[i, i-1] = 1.
SparseMatrix shift_matrix(int n);

}  // namespace pint
