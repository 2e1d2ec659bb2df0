#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "pint/fem1d.hpp"
#include "pint/spacetime.hpp"

namespace pint {

struct ProblemSpec {
    std::string name;
    double length = 1.0;      ///< X
    double final_time = 1.0;  ///< T
    double gamma = 0.0;
    std::function<double(double)> u0;
    std::function<double(double, double)> exact;  ///< empty when no closed form exists

    bool has_exact() const { return static_cast<bool>(exact); }
    /// u0 sampled at the mesh nodes.
    std::vector<double> initial_values(const SpaceMesh& mesh) const;
};

/// u_t = u_xx on (0, 1) x (0, 1], Neumann, u0 = cos(pi x) + 2 cos(3 pi x) + 3 cos(4 pi x).
ProblemSpec heat_problem();

/// Exact solution of the spatially discrete heat problem on `mesh`: each cosine
/// mode decays with the discrete rate of the lumped-mass operator.
std::function<double(double, double)> heat_semidiscrete_exact(const SpaceMesh& mesh);

/// u_t = u_xx - gamma (u^3 - u) on (0, 10) x (0, 2], gamma = 5, with a narrow
/// Gaussian stimulus of height 2 in the middle of the domain.
ProblemSpec monodomain_problem();

/// Looks up "heat" or "monodomain"; throws ConfigError otherwise.
ProblemSpec problem_by_name(const std::string& name);

struct ErrorNorms {
    double end_error = 0.0;           ///< max over dofs at t = T, last node of the last step
    std::vector<double> step_errors;  ///< max over dofs at the end node of every step
};

/// Errors of space-time node values `u` against reference(x, t).
ErrorNorms error_norms(std::span<const double> u,
                       const std::function<double(double, double)>& reference,
                       const SpaceMesh& mesh, const TimeGrid& grid, int M);

/// max_j |a_j - b_j|
double max_difference(std::span<const double> a, std::span<const double> b);

}  // namespace pint
