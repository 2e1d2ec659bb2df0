#pragma once

#include <span>

namespace pint::kernels {

/// Execution policy for the data-parallel kernels. Both variants produce
/// bitwise identical results: parallelism is over independent rows or
/// blocks only, never over a reduction.
enum class Exec { serial, openmp, automatic };

/// Rows below this count run serially under `Exec::automatic`.
inline constexpr int parallel_threshold = 4096;

namespace serial {
void spmv(std::span<const int> row_ptr, std::span<const int> col_idx,
          std::span<const double> values, std::span<const double> x, std::span<double> y);
/// r = b - A x
void residual(std::span<const int> row_ptr, std::span<const int> col_idx,
              std::span<const double> values, std::span<const double> x,
              std::span<const double> b, std::span<double> r);
}  // namespace serial

namespace omp {
void spmv(std::span<const int> row_ptr, std::span<const int> col_idx,
          std::span<const double> values, std::span<const double> x, std::span<double> y);
void residual(std::span<const int> row_ptr, std::span<const int> col_idx,
              std::span<const double> values, std::span<const double> x,
              std::span<const double> b, std::span<double> r);
}  // namespace omp

void spmv(Exec exec, std::span<const int> row_ptr, std::span<const int> col_idx,
          std::span<const double> values, std::span<const double> x, std::span<double> y);
void residual(Exec exec, std::span<const int> row_ptr, std::span<const int> col_idx,
              std::span<const double> values, std::span<const double> x,
              std::span<const double> b, std::span<double> r);

/// Resolves `automatic` to a concrete policy for a loop of `n` independent items.
Exec resolve(Exec exec, int n);

/// Caps the OpenMP team size from PINT_NUM_THREADS (if set). Returns the cap in effect.
int apply_thread_cap();
/// Thread cap from PINT_NUM_THREADS, defaulting to 16.
int thread_cap();

}  // namespace pint::kernels
