#pragma once

#include <limits>
#include <vector>

namespace pint {

/// Outcome of an iterative solve.
///
/// `iterations` counts outer iterations (V-cycles, PFASST iterations, GMRES
/// steps or Newton steps depending on the producer). `inner_iterations` holds
/// one entry per outer iteration when the producer nests another solver.
struct SolveReport {
    int iterations = 0;
    bool converged = false;
    bool diverged = false;
    std::vector<double> residual_history;
    std::vector<int> inner_iterations;
    int newton_iterations = 0;
    bool damping_used = false;
    double final_residual = std::numeric_limits<double>::quiet_NaN();
    double wall_seconds = 0.0;
};

/// Termination rule shared by the outer solvers.
///
/// Converged when r <= max(tol_abs, tol_rel * r0). Diverged when r is not
/// finite, exceeds `growth_factor` times the smallest residual seen so far,
/// or the iteration cap is hit.
class ConvergenceMonitor {
public:
    enum class Status { running, converged, diverged };

    ConvergenceMonitor(double tol_rel, double tol_abs, int max_iterations,
                       double growth_factor = 10.0);

    /// Records the residual before the first iteration.
    Status start(double r0, SolveReport& report);
    /// Records the residual after iteration `report.iterations` (already incremented).
    Status update(double r, SolveReport& report);

    double threshold() const { return threshold_; }

private:
    Status classify(double r, const SolveReport& report);

    double tol_rel_;
    double tol_abs_;
    int max_iterations_;
    double growth_factor_;
    double threshold_ = 0.0;
    double min_residual_ = std::numeric_limits<double>::infinity();
};

}  // namespace pint
