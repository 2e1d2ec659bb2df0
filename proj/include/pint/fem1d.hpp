#pragma once

#include <vector>

#include "pint/sparse.hpp"

namespace pint {

/// Uniform mesh of (0, X) with Nx linear elements.
struct SpaceMesh {
    int nx = 0;
    double length = 1.0;

    static SpaceMesh make(int nx, double length);

    double h() const { return length / nx; }
    int dofs() const { return nx + 1; }
    double x(int j) const { return j * h(); }
};

/// Linear-FEM operators with natural (homogeneous Neumann) boundary conditions.
struct SpaceOperators {
    SparseMatrix stiffness;
    SparseMatrix consistent_mass;
    std::vector<double> lumped_mass;  ///< diagonal of the row-sum lumped mass

    SparseMatrix lumped_mass_matrix() const { return SparseMatrix::diagonal(lumped_mass); }
};

SpaceOperators assemble_space(const SpaceMesh& mesh);

/// (2 cos(k*pi*h) - 2) / h^2: eigenvalue of -M^{-1}K on the cosine mode cos(k*pi*x_j / X)
/// when X = 1.
double semidiscrete_rate(const SpaceMesh& mesh, double k);

}  // namespace pint
