#include <doctest.h>

#include <cmath>

#include "pint/collocation.hpp"
#include "pint/transfer.hpp"

using namespace pint;

namespace {

void check_row_sums(const SparseMatrix& A, double expected)
{
    for (int i = 0; i < A.rows(); ++i) {
        double s = 0.0;
        for (int k = A.row_ptr()[i]; k < A.row_ptr()[i + 1]; ++k) s += A.values()[k];
        CHECK(s == doctest::Approx(expected).epsilon(1e-13));
    }
}

double max_abs_diff(const SparseMatrix& A, const SparseMatrix& B)
{
    return (A.to_dense() - B.to_dense()).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_SUITE("transfer")
{
    TEST_CASE("space transfers")
    {
        const SparseMatrix R = space_restriction(8);
        const SparseMatrix P = space_prolongation(8);
        CHECK(R.rows() == 5);
        CHECK(R.cols() == 9);
        CHECK(P.rows() == 9);
        CHECK(P.cols() == 5);
        check_row_sums(R, 1.0);
        check_row_sums(P, 1.0);
        CHECK(R.at(2, 3) == doctest::Approx(0.25));
        CHECK(R.at(2, 4) == doctest::Approx(0.5));
        CHECK(R.at(0, 0) == doctest::Approx(2.0 / 3.0));
        // Linear functions are interpolated exactly.
        std::vector<double> coarse(5), fine(9);
        for (int j = 0; j < 5; ++j) coarse[j] = 3.0 * j / 4.0 - 1.0;
        P.multiply(coarse, fine);
        for (int j = 0; j < 9; ++j) CHECK(fine[j] == doctest::Approx(3.0 * j / 8.0 - 1.0));
        // Interior rows are the transpose of the prolongation scaled by 1/2.
        for (int i = 1; i < 4; ++i)
            for (int j = 0; j < 9; ++j) CHECK(R.at(i, j) == doctest::Approx(0.5 * P.at(j, i)));
    }

    TEST_CASE("element-index time transfers")
    {
        const SparseMatrix R = time_restriction(8);
        const SparseMatrix P = time_prolongation(8);
        CHECK(R.rows() == 4);
        CHECK(P.rows() == 8);
        check_row_sums(R, 1.0);
        check_row_sums(P, 1.0);
        CHECK(R.at(1, 3) == doctest::Approx(0.5));
        CHECK(R.at(1, 2) == doctest::Approx(0.25));
        CHECK(R.at(1, 4) == doctest::Approx(0.25));
    }

    TEST_CASE("linear node-time transfer reduces to the element stencil for one node")
    {
        const std::vector<double> one{1.0};
        for (int nt : {2, 4, 8, 16}) {
            CHECK(max_abs_diff(linear_time_prolongation(nt, one), time_prolongation(nt)) < 1e-14);
            // Restriction rows agree except the first, where the constant extrapolation
            // of the prolongation puts extra weight on fine elements 0 and 1.
            const Eigen::MatrixXd a = linear_time_restriction(nt, one).to_dense();
            const Eigen::MatrixXd b = time_restriction(nt).to_dense();
            for (int k = 1; k < nt / 2; ++k) CHECK((a.row(k) - b.row(k)).cwiseAbs().maxCoeff() < 1e-14);
            CHECK(a(0, 0) == doctest::Approx(nt == 2 ? 0.5 : 0.4));
        }
    }

    TEST_CASE("time transfers preserve constants and linear functions")
    {
        for (int M = 1; M <= 4; ++M) {
            const auto nodes = radau_nodes(M);
            const int nt = 8;
            for (const SparseMatrix& P : {linear_time_prolongation(nt, nodes), dg_time_prolongation(nt, nodes)}) {
                CHECK(P.rows() == nt * M);
                CHECK(P.cols() == nt / 2 * M);
                check_row_sums(P, 1.0);
            }
            check_row_sums(linear_time_restriction(nt, nodes), 1.0);
            check_row_sums(dg_time_restriction(nt, nodes), 1.0);

            // t(n, m) = (n + tau_m) on the fine grid with unit steps, coarse steps of 2.
            std::vector<double> tc(nt / 2 * M), tf(nt * M), out(nt * M);
            for (int n = 0; n < nt / 2; ++n)
                for (int m = 0; m < M; ++m) tc[n * M + m] = 2.0 * (n + nodes[m]);
            for (int n = 0; n < nt; ++n)
                for (int m = 0; m < M; ++m) tf[n * M + m] = n + nodes[m];
            // The element polynomial has degree M - 1.
            dg_time_prolongation(nt, nodes).multiply(tc, out);
            if (M >= 2)
                for (int i = 0; i < nt * M; ++i) CHECK(out[i] == doctest::Approx(tf[i]).epsilon(1e-12));
            // Linear interpolation is exact except before the first coarse node.
            linear_time_prolongation(nt, nodes).multiply(tc, out);
            for (int i = 0; i < nt * M; ++i)
                if (tf[i] >= tc[0]) CHECK(out[i] == doctest::Approx(tf[i]).epsilon(1e-12));
        }
    }

    TEST_CASE("node transfers")
    {
        const auto f = radau_nodes(3), c = radau_nodes(2);
        const SparseMatrix P = node_prolongation(f, c);
        const SparseMatrix R = node_restriction(f, c);
        CHECK(P.rows() == 3);
        CHECK(P.cols() == 2);
        CHECK(R.rows() == 2);
        check_row_sums(P, 1.0);
        check_row_sums(R, 1.0);
        std::vector<double> in{c[0], c[1]}, out(3);
        P.multiply(in, out);
        for (int i = 0; i < 3; ++i) CHECK(out[i] == doctest::Approx(f[i]).epsilon(1e-13));
        const Eigen::MatrixXd Rd = R.to_dense(), Pd = P.to_dense();
        for (int i = 0; i < 2; ++i) {
            const double scale = Pd.col(i).sum();
            for (int j = 0; j < 3; ++j) CHECK(Rd(i, j) == doctest::Approx(Pd(j, i) / scale));
        }
    }
}
