#include "pint/report.hpp"

#include <algorithm>
#include <cmath>

namespace pint {

ConvergenceMonitor::ConvergenceMonitor(double tol_rel, double tol_abs, int max_iterations,
                                       double growth_factor)
    : tol_rel_(tol_rel),
      tol_abs_(tol_abs),
      max_iterations_(max_iterations),
      growth_factor_(growth_factor)
{}

ConvergenceMonitor::Status ConvergenceMonitor::start(double r0, SolveReport& report)
{
    report.residual_history.assign(1, r0);
    report.final_residual = r0;
    report.converged = false;
    report.diverged = false;
    if (!std::isfinite(r0)) {
        report.diverged = true;
        return Status::diverged;
    }
    threshold_ = std::max(tol_abs_, tol_rel_ * r0);
    min_residual_ = r0;
    if (r0 <= threshold_) {
        report.converged = true;
        return Status::converged;
    }
    return Status::running;
}

ConvergenceMonitor::Status ConvergenceMonitor::update(double r, SolveReport& report)
{
    report.residual_history.push_back(r);
    report.final_residual = r;
    const Status s = classify(r, report);
    report.converged = (s == Status::converged);
    report.diverged = (s == Status::diverged);
    return s;
}

ConvergenceMonitor::Status ConvergenceMonitor::classify(double r, const SolveReport& report)
{
    if (!std::isfinite(r)) return Status::diverged;
    if (r <= threshold_) return Status::converged;
    if (r > growth_factor_ * min_residual_) return Status::diverged;
    min_residual_ = std::min(min_residual_, r);
    if (report.iterations >= max_iterations_) return Status::diverged;
    return Status::running;
}

}  // namespace pint
