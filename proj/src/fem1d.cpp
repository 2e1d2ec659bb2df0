#include "pint/fem1d.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "pint/errors.hpp"

namespace pint {

SpaceMesh SpaceMesh::make(int nx, double length)
{
    if (nx < 2) throw ConfigError("SpaceMesh: need Nx >= 2, got " + std::to_string(nx));
    if (!(length > 0.0)) throw ConfigError("SpaceMesh: domain length must be positive");
    return SpaceMesh{nx, length};
}

SpaceOperators assemble_space(const SpaceMesh& mesh)
{
    const int n = mesh.dofs();
    const double h = mesh.h();
    std::vector<Triplet> k, m;
    k.reserve(4 * mesh.nx);
    m.reserve(4 * mesh.nx);
    for (int e = 0; e < mesh.nx; ++e) {
        const int a = e, b = e + 1;
        k.push_back({a, a, 1.0 / h});
        k.push_back({a, b, -1.0 / h});
        k.push_back({b, a, -1.0 / h});
        k.push_back({b, b, 1.0 / h});
        m.push_back({a, a, h / 3.0});
        m.push_back({a, b, h / 6.0});
        m.push_back({b, a, h / 6.0});
        m.push_back({b, b, h / 3.0});
    }
    SpaceOperators ops;
    ops.stiffness = SparseMatrix::from_triplets(n, n, std::move(k));
    ops.consistent_mass = SparseMatrix::from_triplets(n, n, std::move(m));
    ops.lumped_mass.assign(n, 0.0);
    const auto rp = ops.consistent_mass.row_ptr();
    const auto v = ops.consistent_mass.values();
    for (int i = 0; i < n; ++i)
        for (int p = rp[i]; p < rp[i + 1]; ++p) ops.lumped_mass[i] += v[p];
    return ops;
}

double semidiscrete_rate(const SpaceMesh& mesh, double k)
{
    const double h = mesh.h();
    return (2.0 * std::cos(k * std::numbers::pi * h) - 2.0) / (h * h);
}

}  // namespace pint
