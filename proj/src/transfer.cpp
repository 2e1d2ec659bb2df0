#include "pint/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pint/collocation.hpp"
#include "pint/errors.hpp"

namespace pint {

namespace {

void require_even(int n, const char* who)
{
    if (n < 2 || n % 2 != 0)
        throw ConfigError(std::string(who) + ": fine size must be even and >= 2, got " +
                          std::to_string(n));
}

}  // namespace

SparseMatrix space_restriction(int nx_fine)
{
    require_even(nx_fine, "space_restriction");
    const int nc = nx_fine / 2;
    std::vector<Triplet> t;
    for (int i = 0; i <= nc; ++i) {
        const int f = 2 * i;
        if (i == 0) {
            t.push_back({i, 0, 2.0 / 3.0});
            t.push_back({i, 1, 1.0 / 3.0});
        } else if (i == nc) {
            t.push_back({i, f - 1, 1.0 / 3.0});
            t.push_back({i, f, 2.0 / 3.0});
        } else {
            t.push_back({i, f - 1, 0.25});
            t.push_back({i, f, 0.5});
            t.push_back({i, f + 1, 0.25});
        }
    }
    return SparseMatrix::from_triplets(nc + 1, nx_fine + 1, std::move(t));
}

SparseMatrix space_prolongation(int nx_fine)
{
    require_even(nx_fine, "space_prolongation");
    const int nc = nx_fine / 2;
    std::vector<Triplet> t;
    for (int f = 0; f <= nx_fine; ++f) {
        if (f % 2 == 0) {
            t.push_back({f, f / 2, 1.0});
        } else {
            t.push_back({f, f / 2, 0.5});
            t.push_back({f, f / 2 + 1, 0.5});
        }
    }
    return SparseMatrix::from_triplets(nx_fine + 1, nc + 1, std::move(t));
}

SparseMatrix time_restriction(int nt_fine)
{
    require_even(nt_fine, "time_restriction");
    const int nc = nt_fine / 2;
    std::vector<Triplet> t;
    for (int k = 0; k < nc; ++k) {
        const int centre = 2 * k + 1;
        if (centre + 1 < nt_fine) {
            t.push_back({k, centre - 1, 0.25});
            t.push_back({k, centre, 0.5});
            t.push_back({k, centre + 1, 0.25});
        } else {
            t.push_back({k, centre - 1, 1.0 / 3.0});
            t.push_back({k, centre, 2.0 / 3.0});
        }
    }
    return SparseMatrix::from_triplets(nc, nt_fine, std::move(t));
}

SparseMatrix time_prolongation(int nt_fine)
{
    require_even(nt_fine, "time_prolongation");
    const int nc = nt_fine / 2;
    std::vector<Triplet> t;
    for (int k = 0; k < nc; ++k) {
        t.push_back({2 * k + 1, k, 1.0});
        if (k == 0) {
            t.push_back({0, 0, 1.0});
        } else {
            t.push_back({2 * k, k - 1, 0.5});
            t.push_back({2 * k, k, 0.5});
        }
    }
    return SparseMatrix::from_triplets(nt_fine, nc, std::move(t));
}

namespace {

// Fine-node values of the coarse element's Lagrange basis, stacked for the two
// fine elements: (2M) x M.
Eigen::MatrixXd dg_time_block(const std::vector<double>& nodes)
{
    const int M = static_cast<int>(nodes.size());
    std::vector<double> fine(2 * M);
    for (int m = 0; m < M; ++m) {
        fine[m] = 0.5 * nodes[m];
        fine[M + m] = 0.5 * (1.0 + nodes[m]);
    }
    return interpolation_matrix(nodes, fine);
}

}  // namespace

SparseMatrix dg_time_prolongation(int nt_fine, const std::vector<double>& nodes)
{
    require_even(nt_fine, "dg_time_prolongation");
    const SparseMatrix block = SparseMatrix::from_dense(dg_time_block(nodes), 1e-15);
    return kron(SparseMatrix::identity(nt_fine / 2), block);
}

SparseMatrix dg_time_restriction(int nt_fine, const std::vector<double>& nodes)
{
    require_even(nt_fine, "dg_time_restriction");
    Eigen::MatrixXd R = dg_time_block(nodes).transpose();
    for (Eigen::Index i = 0; i < R.rows(); ++i) {
        const double s = R.row(i).sum();
        if (!(s > 0.0)) throw ConfigError("dg_time_restriction: non-positive row sum");
        R.row(i) /= s;
    }
    return kron(SparseMatrix::identity(nt_fine / 2), SparseMatrix::from_dense(R, 1e-15));
}

SparseMatrix linear_time_prolongation(int nt_fine, const std::vector<double>& nodes)
{
    require_even(nt_fine, "linear_time_prolongation");
    const int M = static_cast<int>(nodes.size());
    const int nc = nt_fine / 2;
    // Times in units of the fine step.
    std::vector<double> tc(static_cast<std::size_t>(nc) * M);
    for (int k = 0; k < nc; ++k)
        for (int j = 0; j < M; ++j) tc[k * M + j] = 2.0 * (k + nodes[j]);
    std::vector<Triplet> t;
    for (int n = 0; n < nt_fine; ++n)
        for (int m = 0; m < M; ++m) {
            const int row = n * M + m;
            const double tf = n + nodes[m];
            const auto it = std::lower_bound(tc.begin(), tc.end(), tf - 1e-12);
            const int hi = static_cast<int>(it - tc.begin());
            if (hi == 0) {
                t.push_back({row, 0, 1.0});
            } else if (std::abs(tc[hi] - tf) <= 1e-12) {
                t.push_back({row, hi, 1.0});
            } else {
                const double w = (tf - tc[hi - 1]) / (tc[hi] - tc[hi - 1]);
                t.push_back({row, hi - 1, 1.0 - w});
                t.push_back({row, hi, w});
            }
        }
    return SparseMatrix::from_triplets(nt_fine * M, nc * M, std::move(t));
}

SparseMatrix linear_time_restriction(int nt_fine, const std::vector<double>& nodes)
{
    const SparseMatrix P = linear_time_prolongation(nt_fine, nodes);
    const SparseMatrix Rt = P.transpose();
    std::vector<double> scale(Rt.rows(), 0.0);
    for (int i = 0; i < Rt.rows(); ++i) {
        for (int k = Rt.row_ptr()[i]; k < Rt.row_ptr()[i + 1]; ++k) scale[i] += Rt.values()[k];
        scale[i] = 1.0 / scale[i];
    }
    return multiply(SparseMatrix::diagonal(scale), Rt);
}

SparseMatrix node_prolongation(const std::vector<double>& fine_nodes,
                               const std::vector<double>& coarse_nodes)
{
    return SparseMatrix::from_dense(interpolation_matrix(coarse_nodes, fine_nodes), 1e-15);
}

SparseMatrix node_restriction(const std::vector<double>& fine_nodes,
                              const std::vector<double>& coarse_nodes)
{
    Eigen::MatrixXd R = interpolation_matrix(coarse_nodes, fine_nodes).transpose();
    for (Eigen::Index i = 0; i < R.rows(); ++i) {
        const double s = R.row(i).sum();
        if (!(s > 0.0)) throw ConfigError("node_restriction: non-positive row sum");
        R.row(i) /= s;
    }
    return SparseMatrix::from_dense(R, 1e-15);
}

}  // namespace pint
