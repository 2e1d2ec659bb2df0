#pragma once

#include <functional>
#include <span>

#include "pint/precond.hpp"
#include "pint/report.hpp"
#include "pint/sparse.hpp"

namespace pint {

/// y = A x
using LinearOperator = std::function<void(std::span<const double>, std::span<double>)>;

LinearOperator as_operator(const SparseMatrix& A);

struct GmresOptions {
    double tol_rel = 1e-9;
    double tol_abs = 1e-9;
    int restart = 30;
    int max_iterations = 1000;
    /// Divergence when a restart residual exceeds this multiple of the minimum seen.
    double divergence_factor = 10.0;
};

/// Restarted GMRES with right preconditioning, solving A x = b from the initial
/// guess in `x`. With right preconditioning the monitored residual is the true
/// residual b - A x. `precond == nullptr` means no preconditioner.
///
/// Converged when ||r|| <= max(tol_abs, tol_rel * ||r_0||). Setting both
/// tolerances to zero runs exactly `max_iterations` Krylov steps unless the
/// Krylov space breaks down, which is how the multigrid smoother uses it.
SolveReport gmres(const LinearOperator& A, std::span<const double> b, std::span<double> x,
                  const Preconditioner* precond, const GmresOptions& options = {});

SolveReport gmres(const SparseMatrix& A, std::span<const double> b, std::span<double> x,
                  const Preconditioner* precond, const GmresOptions& options = {});

double norm2(std::span<const double> v);
double norm_inf(std::span<const double> v);

}  // namespace pint
