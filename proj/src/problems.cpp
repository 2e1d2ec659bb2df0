#include "pint/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pint/errors.hpp"

namespace pint {

std::vector<double> ProblemSpec::initial_values(const SpaceMesh& mesh) const
{
    std::vector<double> v(mesh.dofs());
    for (int j = 0; j < mesh.dofs(); ++j) v[j] = u0(mesh.x(j));
    return v;
}

ProblemSpec heat_problem()
{
    using std::numbers::pi;
    ProblemSpec p;
    p.name = "heat";
    p.length = 1.0;
    p.final_time = 1.0;
    p.gamma = 0.0;
    p.u0 = [](double x) {
        return std::cos(pi * x) + 2.0 * std::cos(3.0 * pi * x) + 3.0 * std::cos(4.0 * pi * x);
    };
    p.exact = [](double x, double t) {
        return std::cos(pi * x) * std::exp(-pi * pi * t) +
               2.0 * std::cos(3.0 * pi * x) * std::exp(-9.0 * pi * pi * t) +
               3.0 * std::cos(4.0 * pi * x) * std::exp(-16.0 * pi * pi * t);
    };
    return p;
}

std::function<double(double, double)> heat_semidiscrete_exact(const SpaceMesh& mesh)
{
    using std::numbers::pi;
    if (mesh.length != 1.0)
        throw ConfigError("heat_semidiscrete_exact: the heat problem lives on (0, 1)");
    const double r1 = semidiscrete_rate(mesh, 1.0);
    const double r3 = semidiscrete_rate(mesh, 3.0);
    const double r4 = semidiscrete_rate(mesh, 4.0);
    return [=](double x, double t) {
        return std::cos(pi * x) * std::exp(r1 * t) + 2.0 * std::cos(3.0 * pi * x) * std::exp(r3 * t) +
               3.0 * std::cos(4.0 * pi * x) * std::exp(r4 * t);
    };
}

ProblemSpec monodomain_problem()
{
    ProblemSpec p;
    p.name = "monodomain";
    p.length = 10.0;
    p.final_time = 2.0;
    p.gamma = 5.0;
    const double centre = p.length / 2.0;
    p.u0 = [centre](double x) {
        const double s = (x - centre) / 0.1;
        return 2.0 * std::exp(-s * s);
    };
    return p;
}

ProblemSpec problem_by_name(const std::string& name)
{
    if (name == "heat") return heat_problem();
    if (name == "monodomain") return monodomain_problem();
    throw ConfigError("unknown problem '" + name + "' (expected heat or monodomain)");
}

ErrorNorms error_norms(std::span<const double> u,
                       const std::function<double(double, double)>& reference,
                       const SpaceMesh& mesh, const TimeGrid& grid, int M)
{
    const SpaceTimeLayout layout{grid.nt, M, mesh.dofs()};
    if (static_cast<int>(u.size()) != layout.size())
        throw ConfigError("error_norms: vector size does not match the grid");
    ErrorNorms e;
    e.step_errors.resize(grid.nt);
    for (int n = 0; n < grid.nt; ++n) {
        const double t = (n + 1) * grid.dt();
        double err = 0.0;
        for (int j = 0; j < mesh.dofs(); ++j)
            err = std::max(err, std::abs(u[layout.index(n, M - 1, j)] - reference(mesh.x(j), t)));
        e.step_errors[n] = err;
    }
    e.end_error = e.step_errors.back();
    return e;
}

double max_difference(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size()) throw ConfigError("max_difference: size mismatch");
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

}  // namespace pint
