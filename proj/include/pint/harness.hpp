#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "pint/report.hpp"
#include "pint/sdc.hpp"

namespace pint {

enum class Method { smg, stmg, smmg, pfasst, direct };

Method parse_method(const std::string& name);
std::string to_string(Method m);
SweepMode parse_mode(const std::string& name);
std::string to_string(SweepMode m);

struct ExperimentConfig {
    std::string problem = "heat";
    Method method = Method::smg;
    int M = 2;
    int nt = 32;
    int nx = 64;
    int levels = 3;
    int nu = 3;
    int P = 1;  ///< block-Jacobi partitions for multigrid, workers for PFASST
    double tol = 1e-9;
    SweepMode mode = SweepMode::imex;  ///< PFASST sweeps; multigrid is always fully implicit
    int cm = 4;             ///< weak scaling: Nt = cm * P
    int restart = 30;       ///< GMRES restart for the multigrid smoother
    int max_iters = 1000;
    std::string output;     ///< CSV path, empty for none
};

/// Throws ConfigError naming the first violated rule (sizes, divisibility, method limits).
void validate(const ExperimentConfig& config);

struct ExperimentResult {
    ExperimentConfig config;
    SolveReport report;
    std::vector<double> solution;     ///< space-time node values
    std::vector<double> final_state;  ///< u(., T)
    double end_error = 0.0;           ///< vs the analytic solution, NaN when none exists
    double R = 1.0;
};

ExperimentResult run_experiment(const ExperimentConfig& config);

/// CSV columns: method,M,Nt,Nx,L,nu,P,iterations,newton_iters,converged,end_error,R,wall_seconds
std::string csv_header();
std::string csv_row(const ExperimentResult& result);
/// Appends rows to `path`, writing the header when the file is new or empty.
void append_csv(const std::string& path, const std::vector<ExperimentResult>& results);

struct OrderRow {
    int M = 0;
    int nt = 0;
    double dt = 0.0;
    double error_semidiscrete = 0.0;
    double error_exact = 0.0;
};

struct OrderStudy {
    std::vector<OrderRow> rows;
    std::map<int, double> slopes;  ///< least-squares slope of log error vs log dt, per M
};

/// Heat problem solved by the sequential DG stepper for every (M, Nt); slopes use
/// the errors against the semi-discrete solution that lie above `floor`.
OrderStudy order_study(const std::vector<int>& Ms, const std::vector<int>& nts, int nx,
                       double floor = 1e-13);

/// Same, with an Nt range chosen per M.
OrderStudy order_study(const std::map<int, std::vector<int>>& nts_per_M, int nx,
                       double floor = 1e-13);

void write_order_csv(std::ostream& out, const OrderStudy& study);
/// One "(dt error)" file per M: <prefix>_M<k>.dat
void write_order_plot_data(const std::string& prefix, const OrderStudy& study);

/// Least-squares slope of log(y) against log(x).
double fitted_slope(const std::vector<double>& x, const std::vector<double>& y);

enum class ScalingKind { strong, weak };

/// Strong: fixed problem, P swept. Weak: Nt = cm * P. R is each row's wall time
/// divided by the first row's.
std::vector<ExperimentResult> scaling_study(const ExperimentConfig& base,
                                            const std::vector<int>& Ps, ScalingKind kind);

struct Comparison {
    ExperimentResult smg;
    ExperimentResult pfasst;
    double max_difference = 0.0;  ///< final-time solutions, max norm
};

/// Runs SMG and PFASST on the same discretization.
Comparison compare(const ExperimentConfig& config);

}  // namespace pint
