#pragma once

#include <vector>

#include "pint/sparse.hpp"

namespace pint {

/// Full-weighting restriction [1 2 1]/4 from Nx to Nx/2 elements, shape
/// (Nx/2 + 1) x (Nx + 1). Boundary rows [2 1]/3 so every row sums to one.
SparseMatrix space_restriction(int nx_fine);

/// Linear interpolation from Nx/2 to Nx elements, shape (Nx + 1) x (Nx/2 + 1).
SparseMatrix space_prolongation(int nx_fine);

/// Restriction over the time-element index, shape (Nt/2) x Nt. Coarse element k
/// shares its end time with fine element 2k+1, which gets weight 1/2; its
/// neighbours 2k and 2k+2 get 1/4. The truncated last row is renormalized.
SparseMatrix time_restriction(int nt_fine);

/// Linear interpolation in time of element values, shape Nt x (Nt/2). The first
/// fine element copies coarse element 0 so constants are reproduced.
SparseMatrix time_prolongation(int nt_fine);

/// Time prolongation acting on (element, node) pairs: the polynomial of coarse
/// element k, which spans fine elements 2k and 2k+1, is evaluated at their nodes.
/// Shape (Nt*M) x (Nt/2*M).
SparseMatrix dg_time_prolongation(int nt_fine, const std::vector<double>& nodes);

/// Transpose of dg_time_prolongation with rows scaled to sum to one.
SparseMatrix dg_time_restriction(int nt_fine, const std::vector<double>& nodes);

/// Piecewise-linear interpolation in the time coordinate between the node times
/// of the coarse grid (Nt/2 elements) and those of the fine grid (Nt elements),
/// constant before the first coarse node. Shape (Nt*M) x (Nt/2*M). For M = 1 this
/// is time_prolongation.
SparseMatrix linear_time_prolongation(int nt_fine, const std::vector<double>& nodes);

/// Transpose of linear_time_prolongation with rows scaled to sum to one. For
/// M = 1 this is time_restriction except in the first row.
SparseMatrix linear_time_restriction(int nt_fine, const std::vector<double>& nodes);

/// Lagrange interpolation from coarse to fine Radau nodes, shape Mf x Mc.
SparseMatrix node_prolongation(const std::vector<double>& fine_nodes,
                               const std::vector<double>& coarse_nodes);

/// Transpose of node_prolongation with rows scaled to sum to one, shape Mc x Mf.
SparseMatrix node_restriction(const std::vector<double>& fine_nodes,
                              const std::vector<double>& coarse_nodes);

}  // namespace pint
