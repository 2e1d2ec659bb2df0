#include <doctest.h>

#include <random>

#include "pint/errors.hpp"
#include "pint/sparse.hpp"

using namespace pint;

namespace {

Eigen::MatrixXd random_dense(int r, int c, double fill, unsigned seed)
{
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::bernoulli_distribution keep(fill);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j)
            if (keep(gen)) A(i, j) = u(gen);
    return A;
}

double max_abs(const Eigen::MatrixXd& A) { return A.size() ? A.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

TEST_SUITE("sparse")
{
    TEST_CASE("triplets sum duplicates and keep sorted rows")
    {
        const SparseMatrix A =
            SparseMatrix::from_triplets(2, 3, {{1, 2, 1.0}, {0, 1, 2.0}, {1, 0, 3.0}, {1, 2, 4.0}});
        CHECK(A.nnz() == 3);
        CHECK(A.at(1, 2) == 5.0);
        CHECK(A.at(0, 1) == 2.0);
        CHECK(A.at(0, 0) == 0.0);
        CHECK(A.col_idx()[1] == 0);
        CHECK_THROWS_AS(SparseMatrix(1, 2, {0, 2}, {1, 0}, {1.0, 1.0}), ConfigError);
    }

    TEST_CASE("products, transpose and sums agree with dense arithmetic")
    {
        const Eigen::MatrixXd A = random_dense(7, 5, 0.4, 1);
        const Eigen::MatrixXd B = random_dense(5, 6, 0.4, 2);
        const Eigen::MatrixXd C = random_dense(7, 5, 0.4, 3);
        const SparseMatrix a = SparseMatrix::from_dense(A), b = SparseMatrix::from_dense(B),
                           c = SparseMatrix::from_dense(C);
        CHECK(max_abs(multiply(a, b).to_dense() - A * B) < 1e-14);
        CHECK(max_abs(a.transpose().to_dense() - A.transpose()) == 0.0);
        CHECK(max_abs(add(a, c, 2.0, -3.0).to_dense() - (2.0 * A - 3.0 * C)) < 1e-14);
        std::vector<double> x{1, -2, 3, 0.5, 4};
        const auto y = a * std::span<const double>(x);
        const Eigen::VectorXd ye = A * Eigen::Map<const Eigen::VectorXd>(x.data(), 5);
        for (int i = 0; i < 7; ++i) CHECK(y[i] == doctest::Approx(ye(i)));
        const std::vector<double> d{1, 2, 3, 4, 5};
        CHECK(max_abs(a.scale_columns(d).to_dense() -
                      A * Eigen::Map<const Eigen::VectorXd>(d.data(), 5).asDiagonal()) < 1e-15);
    }

    TEST_CASE("kron matches the index definition")
    {
        const Eigen::MatrixXd A = random_dense(3, 4, 0.6, 4);
        const Eigen::MatrixXd B = random_dense(2, 3, 0.6, 5);
        const Eigen::MatrixXd K = kron(SparseMatrix::from_dense(A), SparseMatrix::from_dense(B)).to_dense();
        REQUIRE(K.rows() == 6);
        REQUIRE(K.cols() == 12);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 4; ++j)
                for (int k = 0; k < 2; ++k)
                    for (int l = 0; l < 3; ++l) CHECK(K(i * 2 + k, j * 3 + l) == A(i, j) * B(k, l));
        // Mixed-product identity (A x B)(C x D) = AC x BD.
        const Eigen::MatrixXd C = random_dense(4, 2, 0.6, 6);
        const Eigen::MatrixXd D = random_dense(3, 3, 0.6, 7);
        const SparseMatrix lhs = multiply(kron(SparseMatrix::from_dense(A), SparseMatrix::from_dense(B)),
                                          kron(SparseMatrix::from_dense(C), SparseMatrix::from_dense(D)));
        const SparseMatrix rhs = kron(SparseMatrix::from_dense(A * C), SparseMatrix::from_dense(B * D));
        CHECK(max_abs(lhs.to_dense() - rhs.to_dense()) < 1e-14);
    }

    TEST_CASE("identity, diagonal, shift and block extraction")
    {
        const SparseMatrix S = shift_matrix(4);
        CHECK(S.at(1, 0) == 1.0);
        CHECK(S.at(3, 2) == 1.0);
        CHECK(S.at(0, 0) == 0.0);
        CHECK(S.nnz() == 3);
        const std::vector<double> d{1, 2, 3};
        const SparseMatrix D = SparseMatrix::diagonal(d);
        CHECK(D.diagonal() == d);
        const Eigen::MatrixXd A = random_dense(6, 6, 0.7, 8);
        const SparseMatrix blk = extract_block(SparseMatrix::from_dense(A), 2, 5);
        CHECK(max_abs(blk.to_dense() - A.block(2, 2, 3, 3)) == 0.0);
        CHECK(max_abs(SparseMatrix::identity(3).to_dense() - Eigen::MatrixXd::Identity(3, 3)) == 0.0);
    }
}
