#include "pint/kernels.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#include <omp.h>

namespace pint::kernels {

namespace serial {

void spmv(std::span<const int> row_ptr, std::span<const int> col_idx,
          std::span<const double> values, std::span<const double> x, std::span<double> y)
{
    const int n = static_cast<int>(row_ptr.size()) - 1;
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += values[k] * x[col_idx[k]];
        y[i] = s;
    }
}

void residual(std::span<const int> row_ptr, std::span<const int> col_idx,
              std::span<const double> values, std::span<const double> x,
              std::span<const double> b, std::span<double> r)
{
    const int n = static_cast<int>(row_ptr.size()) - 1;
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += values[k] * x[col_idx[k]];
        r[i] = b[i] - s;
    }
}

}  // namespace serial

namespace omp {

void spmv(std::span<const int> row_ptr, std::span<const int> col_idx,
          std::span<const double> values, std::span<const double> x, std::span<double> y)
{
    const int n = static_cast<int>(row_ptr.size()) - 1;
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += values[k] * x[col_idx[k]];
        y[i] = s;
    }
}

void residual(std::span<const int> row_ptr, std::span<const int> col_idx,
              std::span<const double> values, std::span<const double> x,
              std::span<const double> b, std::span<double> r)
{
    const int n = static_cast<int>(row_ptr.size()) - 1;
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += values[k] * x[col_idx[k]];
        r[i] = b[i] - s;
    }
}

}  // namespace omp

Exec resolve(Exec exec, int n)
{
    if (exec != Exec::automatic) return exec;
    if (n < parallel_threshold || omp_in_parallel() || omp_get_max_threads() == 1)
        return Exec::serial;
    return Exec::openmp;
}

void spmv(Exec exec, std::span<const int> row_ptr, std::span<const int> col_idx,
          std::span<const double> values, std::span<const double> x, std::span<double> y)
{
    if (resolve(exec, static_cast<int>(row_ptr.size()) - 1) == Exec::openmp)
        omp::spmv(row_ptr, col_idx, values, x, y);
    else
        serial::spmv(row_ptr, col_idx, values, x, y);
}

void residual(Exec exec, std::span<const int> row_ptr, std::span<const int> col_idx,
              std::span<const double> values, std::span<const double> x,
              std::span<const double> b, std::span<double> r)
{
    if (resolve(exec, static_cast<int>(row_ptr.size()) - 1) == Exec::openmp)
        omp::residual(row_ptr, col_idx, values, x, b, r);
    else
        serial::residual(row_ptr, col_idx, values, x, b, r);
}

int thread_cap()
{
    int cap = 16;
    if (const char* env = std::getenv("PINT_NUM_THREADS")) {
        try {
            cap = std::max(1, std::stoi(env));
        } catch (...) {
            // ignore malformed values
        }
    }
    return cap;
}

int apply_thread_cap()
{
    const int cap = thread_cap();
    omp_set_num_threads(std::min(cap, omp_get_num_procs()));
    return cap;
}

}  // namespace pint::kernels
