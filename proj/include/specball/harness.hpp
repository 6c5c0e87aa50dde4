#pragma once

// Study drivers: a single solve with error-over-time tracking, degree sweeps for spectral
// convergence, and condition-number scaling of G^{-1} B.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "specball/problems.hpp"
#include "specball/timestepper.hpp"
#include "specball/types.hpp"

namespace specball {

/// Arithmetic used by the time integration. Extended runs the integrator and the right-hand side
/// in long double, which keeps the time error below ~1e-14 when rtol is pushed past 1e-14.
enum class Precision { standard, extended };

struct StudyConfig {
    std::string problem = "disk";
    /// Polynomial mapping file; used when problem == "custom".
    std::string mapping_file;
    int custom_dim = 2;
    SourceKind custom_source = SourceKind::exp_cos;
    /// Drop the forcing term (f = 0).
    bool unforced = false;

    std::vector<int> degrees = {8};
    /// Defaults to default_quadrature_order(dim, n).
    std::optional<int> quadrature_order;
    /// Defaults to 20 in 2D and 2 in 3D.
    std::optional<double> t_end;
    int output_times = 200;
    double rtol = 1e-8;
    double atol = 1e-10;
    SolverOptions solver;
    Precision precision = Precision::standard;
    int sample_count = 801;
    std::string output_dir = ".";
    /// Run the degrees of a sweep on separate threads.
    bool parallel = false;
};

/// Throws InvalidArgument when the config breaks an invariant.
void validate(const StudyConfig& config);

/// One-line summary used in diagnostics.
std::string describe(const StudyConfig& config);

AnyProblem resolve_problem(const StudyConfig& config);
int problem_dimension(const AnyProblem& problem);
double effective_t_end(const StudyConfig& config, int dim);

/// Deterministic interior points of the unit disk: the center plus concentric rings at radii
/// 0.999 i / R. 801 points give 20 rings of 40.
std::vector<Point<2>> disk_sample_points(int count);
/// Deterministic interior points of the unit ball: the center plus R spherical shells, each a
/// polar x azimuth product grid. 801 points give 10 shells of 8 x 10.
std::vector<Point<3>> ball_sample_points(int count);

struct ErrorReport {
    std::vector<double> times;
    /// max over sample points of |u - u_n| at each time.
    std::vector<double> max_error;
    double max_over_time = 0.0;
};

struct SolveOutcome {
    int degree = 0;
    int basis_size = 0;
    int quadrature_order = 0;
    Trajectory trajectory;
    /// u_n at the sample points, one vector per output time.
    std::vector<Vector> samples;
    /// a^T G a at each output time.
    std::vector<double> energy;
    /// Present when the problem has an exact solution.
    std::optional<ErrorReport> errors;
};

/// Solves at a single degree without writing any files.
SolveOutcome solve_problem(const StudyConfig& config, int degree);

/// solve_problem at config.degrees.front(); writes errors_over_time.csv/.svg (when an exact
/// solution exists), trajectory.csv, solution_final.csv and stats.json into output_dir.
SolveOutcome run_solve(const StudyConfig& config);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

/// Least-squares line through (x, y); needs at least two points.
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct ConvergenceReport {
    std::vector<int> degrees;
    std::vector<int> sizes;
    std::vector<double> errors;
    /// Errors are measured against the largest degree instead of an exact solution.
    bool self_convergence = false;
    /// Fit of log10(error) against n over the strictly positive errors.
    LinearFit fit;
};

ConvergenceReport run_convergence(const StudyConfig& config, bool write_files = true);

struct ConditioningRow {
    int degree = 0;
    int size = 0;
    double condition = 0.0;
    /// Empty when the condition number was computed.
    std::string failure;
};

struct ConditioningReport {
    std::vector<ConditioningRow> rows;
    /// Fit of log cond against log N^2 over the finite rows.
    LinearFit fit;
};

ConditioningReport run_conditioning(const StudyConfig& config, bool write_files = true);

void write_errors_csv(std::ostream& out, const ErrorReport& report);
void write_convergence_csv(std::ostream& out, const ConvergenceReport& report);
void write_conditioning_csv(std::ostream& out, const ConditioningReport& report);

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
};

/// Line plot with point markers; non-positive values are dropped on log axes.
void write_svg_plot(std::ostream& out, const PlotSpec& spec, const std::vector<PlotSeries>& series);

}  // namespace specball
