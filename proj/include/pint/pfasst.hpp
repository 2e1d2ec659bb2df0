#pragma once

#include <span>
#include <utility>
#include <vector>

#include "pint/report.hpp"
#include "pint/sdc.hpp"

namespace pint {

/// Level 0 carries the full node count; every coarser level uses one node and
/// halves the spatial mesh of the level above.
struct PfasstHierarchy {
    int nt = 1;
    double dt = 0.0;
    std::vector<SdcLevel> levels;
    std::vector<LevelTransfer> transfers;  ///< transfers[l] links level l and l + 1

    int num_levels() const { return static_cast<int>(levels.size()); }
};

PfasstHierarchy make_pfasst_hierarchy(double length, double final_time, double gamma, int nx,
                                      int M, int nt, int levels, SweepMode mode,
                                      QDeltaKind qdelta = QDeltaKind::implicit_euler);

enum class PfasstExecutor { serial, threaded };

struct PfasstOptions {
    int workers = 1;
    int nu = 1;  ///< sweeps per level and iteration
    double tol = 1e-9;
    int max_iters = 1000;
    double divergence_factor = 10.0;
    PfasstExecutor executor = PfasstExecutor::threaded;
    int threads = 0;  ///< 0: min(workers, thread cap)
};

/// Runs PFASST on Nt steps from the nodal initial value `u0`.
///
/// Each of the P workers owns Nt/P consecutive steps and visits them in order.
/// Per iteration and step: nu fine sweeps, FAS restriction down the hierarchy
/// with nu sweeps per level, the coarsest sweeps using the coarse end value just
/// computed for the preceding step (a blocking receive across workers), and
/// coarse corrections back up. The end value of a worker's last fine step is sent
/// forward and becomes the next worker's fine U0 in the following iteration.
/// Converged when the largest collocation residual over all steps is <= tol.
///
/// Returns the fine node values in space-time layout, (n*M + m)*(Nx+1) + j.
std::pair<std::vector<double>, SolveReport> pfasst_run(const PfasstHierarchy& hierarchy,
                                                       std::span<const double> u0,
                                                       const PfasstOptions& options = {});

}  // namespace pint
