#include "specball/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <thread>

#include "specball/galerkin.hpp"

namespace specball {

namespace fs = std::filesystem;

namespace {

std::string method_name(OdeMethod m)
{
    switch (m) {
    case OdeMethod::bdf:
        return "bdf";
    case OdeMethod::bdf2_fixed:
        return "bdf2";
    case OdeMethod::rk4:
        return "rk4";
    }
    return "?";
}

std::ofstream open_output(const StudyConfig& config, const std::string& file)
{
    fs::create_directories(config.output_dir);
    const fs::path path = fs::path(config.output_dir) / file;
    std::ofstream out(path);
    if (!out) {
        throw InvalidArgument("cannot open output file " + path.string());
    }
    return out;
}

template <int Dim>
std::vector<Point<Dim>> sample_points(int count)
{
    if constexpr (Dim == 2) {
        return disk_sample_points(count);
    } else {
        return ball_sample_points(count);
    }
}

template <int Dim>
SolveOutcome solve_typed(const StudyConfig& config, const ParabolicProblem<Dim>& problem, int degree)
{
    const GalerkinSystem<Dim> system(problem, degree, config.quadrature_order);
    const double t_end = effective_t_end(config, Dim);
    const Vector a0 = project_initial(system).values;

    SolveOutcome out;
    out.degree = degree;
    out.basis_size = system.size();
    out.quadrature_order = system.quadrature_order();
    try {
        const std::vector<double> times = linspace_times(0.0, t_end, config.output_times);
        if (config.precision == Precision::extended) {
            const auto ivp = make_ivp<long double>(system, a0, t_end, config.rtol, config.atol);
            out.trajectory = to_double(solve_ivp(ivp, std::vector<long double>(times.begin(), times.end()), config.solver));
        } else {
            out.trajectory = solve_ivp(make_ivp(system, a0, t_end, config.rtol, config.atol), times, config.solver);
        }
    } catch (const SolverError& e) {
        throw SolverError(std::string(e.what()) + " [" + describe(config) + ", n = " + std::to_string(degree) + "]");
    }

    const auto points = sample_points<Dim>(config.sample_count);
    Matrix basis_at_points(Eigen::Index(points.size()), system.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        basis_at_points.row(Eigen::Index(i)) = system.basis().bubble_values(points[i]).transpose();
    }
    std::vector<Point<Dim>> physical(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        physical[i] = problem.domain->phi(points[i]);
    }

    const auto& traj = out.trajectory;
    ErrorReport errors;
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const Vector& a = traj.states[k];
        out.samples.push_back(basis_at_points * a);
        out.energy.push_back(a.dot(system.mass() * a));
        if (problem.exact) {
            double worst = 0.0;
            for (std::size_t i = 0; i < points.size(); ++i) {
                const double diff = problem.exact->u(physical[i], traj.times[k]) - out.samples.back()[Eigen::Index(i)];
                worst = std::max(worst, std::abs(diff));
            }
            errors.times.push_back(traj.times[k]);
            errors.max_error.push_back(worst);
            errors.max_over_time = std::max(errors.max_over_time, worst);
        }
    }
    if (problem.exact) {
        out.errors = std::move(errors);
    }
    return out;
}

template <int Dim>
void write_final_samples(std::ostream& os, const StudyConfig& config, const ParabolicProblem<Dim>& problem,
                         const SolveOutcome& outcome)
{
    const auto points = sample_points<Dim>(config.sample_count);
    const char* ref[] = {"x1", "x2", "x3"};
    const char* phys[] = {"s1", "s2", "s3"};
    for (int d = 0; d < Dim; ++d) {
        os << ref[d] << ',';
    }
    for (int d = 0; d < Dim; ++d) {
        os << phys[d] << ',';
    }
    os << "u_n" << (problem.exact ? ",u_exact" : "") << '\n' << std::setprecision(17);
    const double t = outcome.trajectory.times.back();
    const Vector& u = outcome.samples.back();
    for (std::size_t i = 0; i < points.size(); ++i) {
        const Point<Dim> s = problem.domain->phi(points[i]);
        for (int d = 0; d < Dim; ++d) {
            os << points[i][d] << ',';
        }
        for (int d = 0; d < Dim; ++d) {
            os << s[d] << ',';
        }
        os << u[Eigen::Index(i)];
        if (problem.exact) {
            os << ',' << problem.exact->u(s, t);
        }
        os << '\n';
    }
}

std::vector<SolveOutcome> solve_sweep(const StudyConfig& config)
{
    std::vector<SolveOutcome> out(config.degrees.size());
    if (!config.parallel) {
        for (std::size_t i = 0; i < config.degrees.size(); ++i) {
            out[i] = solve_problem(config, config.degrees[i]);
        }
        return out;
    }
    const std::size_t width = std::max(1u, std::thread::hardware_concurrency());
    for (std::size_t start = 0; start < config.degrees.size(); start += width) {
        std::vector<std::future<SolveOutcome>> batch;
        for (std::size_t i = start; i < std::min(config.degrees.size(), start + width); ++i) {
            batch.push_back(std::async(std::launch::async, [&config, n = config.degrees[i]] {
                return solve_problem(config, n);
            }));
        }
        for (std::size_t i = 0; i < batch.size(); ++i) {
            out[start + i] = batch[i].get();
        }
    }
    return out;
}

void require_sweep(const StudyConfig& config, const char* what)
{
    if (config.degrees.size() < 4) {
        throw InvalidArgument(std::string(what) + " needs at least 4 degrees");
    }
}

std::string fmt(double v)
{
    std::ostringstream os;
    os << std::setprecision(6) << v;
    return os.str();
}

}  // namespace

void validate(const StudyConfig& config)
{
    if (config.degrees.empty()) {
        throw InvalidArgument("config: at least one degree is required");
    }
    for (std::size_t i = 0; i < config.degrees.size(); ++i) {
        if (config.degrees[i] < 0) {
            throw InvalidArgument("config: degrees must be non-negative");
        }
        if (i > 0 && config.degrees[i] <= config.degrees[i - 1]) {
            throw InvalidArgument("config: degrees must be strictly ascending");
        }
    }
    if (config.quadrature_order && *config.quadrature_order < 1) {
        throw InvalidArgument("config: quadrature order must be >= 1");
    }
    if (config.t_end && !(*config.t_end > 0.0)) {
        throw InvalidArgument("config: T must be positive");
    }
    if (config.output_times < 2) {
        throw InvalidArgument("config: need at least 2 output times");
    }
    if (!(config.rtol > 0.0) || !(config.atol > 0.0)) {
        throw InvalidArgument("config: rtol and atol must be positive");
    }
    if (config.sample_count < 1) {
        throw InvalidArgument("config: sample count must be >= 1");
    }
    if (config.problem == "custom") {
        if (config.mapping_file.empty()) {
            throw InvalidArgument("config: problem 'custom' needs a mapping file");
        }
        if (config.custom_dim != 2 && config.custom_dim != 3) {
            throw InvalidArgument("config: custom dimension must be 2 or 3");
        }
    }
}

std::string describe(const StudyConfig& config)
{
    std::ostringstream os;
    os << "problem=" << config.problem;
    if (config.problem == "custom") {
        os << " mapping=" << config.mapping_file << " dim=" << config.custom_dim;
    }
    os << (config.unforced ? " unforced" : "") << " degrees=";
    for (std::size_t i = 0; i < config.degrees.size(); ++i) {
        os << (i ? "," : "") << config.degrees[i];
    }
    os << " q=" << (config.quadrature_order ? std::to_string(*config.quadrature_order) : std::string("default"))
       << " T=" << (config.t_end ? fmt(*config.t_end) : std::string("default"))
       << " outputs=" << config.output_times << " rtol=" << config.rtol << " atol=" << config.atol
       << " method=" << method_name(config.solver.method)
       << (config.precision == Precision::extended ? " precision=extended" : "") << " samples=" << config.sample_count;
    return os.str();
}

AnyProblem resolve_problem(const StudyConfig& config)
{
    AnyProblem problem = [&]() -> AnyProblem {
        if (config.problem != "custom") {
            return problem_by_name(config.problem);
        }
        if (config.custom_dim == 2) {
            auto domain = std::make_shared<const MappedDomain<2>>(
                polynomial_domain<2>(load_polynomial_map<2>(config.mapping_file), config.mapping_file));
            return custom_problem<2>("custom", domain, config.custom_source);
        }
        auto domain = std::make_shared<const MappedDomain<3>>(
            polynomial_domain<3>(load_polynomial_map<3>(config.mapping_file), config.mapping_file));
        return custom_problem<3>("custom", domain, config.custom_source);
    }();
    if (config.unforced) {
        std::visit([](auto& p) { p = without_forcing(std::move(p)); }, problem);
    }
    return problem;
}

int problem_dimension(const AnyProblem& problem)
{
    return problem.index() == 0 ? 2 : 3;
}

double effective_t_end(const StudyConfig& config, int dim)
{
    return config.t_end.value_or(dim == 2 ? 20.0 : 2.0);
}

std::vector<Point<2>> disk_sample_points(int count)
{
    if (count < 1) {
        throw InvalidArgument("disk_sample_points: count must be >= 1");
    }
    std::vector<Point<2>> out{Point<2>::Zero()};
    const int remaining = count - 1;
    if (remaining == 0) {
        return out;
    }
    const int rings = std::clamp(int(std::lround(std::sqrt(remaining / 2.0))), 1, remaining);
    for (int i = 1; i <= rings; ++i) {
        // Leftover points go to the outer rings.
        const int m = remaining / rings + (i > rings - remaining % rings ? 1 : 0);
        const double r = 0.999 * double(i) / double(rings);
        for (int j = 0; j < m; ++j) {
            const double theta = 2.0 * std::numbers::pi * double(j) / double(m);
            out.emplace_back(r * std::cos(theta), r * std::sin(theta));
        }
    }
    return out;
}

std::vector<Point<3>> ball_sample_points(int count)
{
    if (count < 1) {
        throw InvalidArgument("ball_sample_points: count must be >= 1");
    }
    std::vector<Point<3>> out{Point<3>::Zero()};
    const int remaining = count - 1;
    if (remaining == 0) {
        return out;
    }
    const int shells = std::clamp(int(std::lround(std::cbrt(remaining / 0.8))), 1, remaining);
    for (int i = 1; i <= shells; ++i) {
        const int m = remaining / shells + (i > shells - remaining % shells ? 1 : 0);
        const double r = 0.999 * double(i) / double(shells);
        const int rows = std::clamp(int(std::lround(std::sqrt(0.8 * m))), 1, m);
        for (int j = 0; j < rows; ++j) {
            const int per_row = m / rows + (j >= rows - m % rows ? 1 : 0);
            const double polar = (double(j) + 0.5) * std::numbers::pi / double(rows);
            for (int k = 0; k < per_row; ++k) {
                const double azimuth = 2.0 * std::numbers::pi * double(k) / double(per_row);
                out.emplace_back(r * std::sin(polar) * std::cos(azimuth), r * std::sin(polar) * std::sin(azimuth),
                                 r * std::cos(polar));
            }
        }
    }
    return out;
}

SolveOutcome solve_problem(const StudyConfig& config, int degree)
{
    validate(config);
    const AnyProblem problem = resolve_problem(config);
    return std::visit([&](const auto& p) { return solve_typed(config, p, degree); }, problem);
}

SolveOutcome run_solve(const StudyConfig& config)
{
    validate(config);
    const AnyProblem problem = resolve_problem(config);
    SolveOutcome outcome =
        std::visit([&](const auto& p) { return solve_typed(config, p, config.degrees.front()); }, problem);

    if (outcome.errors) {
        auto csv = open_output(config, "errors_over_time.csv");
        write_errors_csv(csv, *outcome.errors);
        auto svg = open_output(config, "errors_over_time.svg");
        write_svg_plot(svg,
                       {"max error over sample points, n = " + std::to_string(outcome.degree), "t", "max |u - u_n|",
                        false, true},
                       {{"n = " + std::to_string(outcome.degree), outcome.errors->times, outcome.errors->max_error}});
    }
    {
        auto csv = open_output(config, "trajectory.csv");
        write_trajectory_csv(csv, outcome.trajectory);
    }
    {
        auto csv = open_output(config, "solution_final.csv");
        std::visit([&](const auto& p) { write_final_samples(csv, config, p, outcome); }, problem);
    }
    {
        auto json = open_output(config, "stats.json");
        json << stats_json(outcome.trajectory.stats) << '\n';
    }
    return outcome;
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 2) {
        throw InvalidArgument("fit_line: need at least two (x, y) pairs");
    }
    const double n = double(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i] / n;
        my += y[i] / n;
    }
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) {
        throw InvalidArgument("fit_line: x values are all equal");
    }
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = syy == 0.0 ? 1.0 : sxy * sxy / (sxx * syy);
    return fit;
}

ConvergenceReport run_convergence(const StudyConfig& config, bool write_files)
{
    validate(config);
    require_sweep(config, "convergence study");
    const auto outcomes = solve_sweep(config);

    ConvergenceReport report;
    report.self_convergence = !outcomes.front().errors.has_value();
    const SolveOutcome& reference = outcomes.back();
    for (const auto& o : outcomes) {
        report.degrees.push_back(o.degree);
        report.sizes.push_back(o.basis_size);
        if (!report.self_convergence) {
            report.errors.push_back(o.errors->max_over_time);
            continue;
        }
        double worst = 0.0;
        for (std::size_t k = 0; k < o.samples.size(); ++k) {
            worst = std::max(worst, (o.samples[k] - reference.samples[k]).cwiseAbs().maxCoeff());
        }
        report.errors.push_back(worst);
    }

    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t i = 0; i < report.errors.size(); ++i) {
        if (report.errors[i] > 0.0 && std::isfinite(report.errors[i])) {
            xs.push_back(report.degrees[i]);
            ys.push_back(std::log10(report.errors[i]));
        }
    }
    if (xs.size() >= 2) {
        report.fit = fit_line(xs, ys);
    }

    if (write_files) {
        auto csv = open_output(config, "convergence.csv");
        write_convergence_csv(csv, report);
        std::vector<double> n(report.degrees.begin(), report.degrees.end());
        auto svg = open_output(config, "convergence.svg");
        write_svg_plot(svg,
                       {report.self_convergence ? "self-convergence (reference n = " +
                                                      std::to_string(report.degrees.back()) + ")"
                                                : "spectral convergence",
                        "n", "max over t of max |u - u_n|", false, true},
                       {{config.problem, n, report.errors}});
    }
    return report;
}

ConditioningReport run_conditioning(const StudyConfig& config, bool write_files)
{
    validate(config);
    require_sweep(config, "conditioning study");
    const AnyProblem problem = resolve_problem(config);

    ConditioningReport report;
    for (const int n : config.degrees) {
        ConditioningRow row;
        row.degree = n;
        try {
            std::visit(
                [&](const auto& p) {
                    using P = std::decay_t<decltype(p)>;
                    const GalerkinSystem<P::dim> system(p, n, config.quadrature_order);
                    row.size = system.size();
                    const Vector a0 = project_initial(system).values;
                    const Matrix op = system.mass_factor().solve(assemble_stiffness(system, 0.0, a0));
                    row.condition = condition_number(op);
                    if (!std::isfinite(row.condition)) {
                        row.failure = "numerically singular";
                    }
                },
                problem);
        } catch (const std::exception& e) {
            row.condition = std::numeric_limits<double>::quiet_NaN();
            row.failure = e.what();
        }
        report.rows.push_back(row);
    }

    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& row : report.rows) {
        if (row.failure.empty()) {
            xs.push_back(std::log(double(row.size) * double(row.size)));
            ys.push_back(std::log(row.condition));
        }
    }
    if (xs.size() >= 2) {
        report.fit = fit_line(xs, ys);
    }

    if (write_files) {
        auto csv = open_output(config, "conditioning.csv");
        write_conditioning_csv(csv, report);
        PlotSeries series{config.problem, {}, {}};
        for (const auto& row : report.rows) {
            if (row.failure.empty()) {
                series.x.push_back(double(row.size) * double(row.size));
                series.y.push_back(row.condition);
            }
        }
        auto svg = open_output(config, "conditioning.svg");
        write_svg_plot(svg, {"condition number of G^-1 B", "N^2", "cond", true, true}, {series});
    }
    return report;
}

void write_errors_csv(std::ostream& out, const ErrorReport& report)
{
    out << "time,max_abs_error\n" << std::setprecision(17);
    for (std::size_t k = 0; k < report.times.size(); ++k) {
        out << report.times[k] << ',' << report.max_error[k] << '\n';
    }
}

void write_convergence_csv(std::ostream& out, const ConvergenceReport& report)
{
    out << std::setprecision(17);
    if (report.self_convergence) {
        out << "# mode=self-convergence reference_degree=" << report.degrees.back() << '\n';
    } else {
        out << "# mode=exact\n";
    }
    out << "# fit log10(error) = slope * n + intercept: slope=" << report.fit.slope
        << " intercept=" << report.fit.intercept << " r_squared=" << report.fit.r_squared << '\n';
    out << "n,N,max_error\n";
    for (std::size_t i = 0; i < report.degrees.size(); ++i) {
        out << report.degrees[i] << ',' << report.sizes[i] << ',' << report.errors[i] << '\n';
    }
}

void write_conditioning_csv(std::ostream& out, const ConditioningReport& report)
{
    out << std::setprecision(17);
    out << "# fit log(cond) = slope * log(N^2) + intercept: slope=" << report.fit.slope
        << " intercept=" << report.fit.intercept << " r_squared=" << report.fit.r_squared << '\n';
    for (const auto& row : report.rows) {
        if (!row.failure.empty()) {
            out << "# n=" << row.degree << " excluded from fit: " << row.failure << '\n';
        }
    }
    out << "n,N,N2,cond\n";
    for (const auto& row : report.rows) {
        out << row.degree << ',' << row.size << ',' << long(row.size) * row.size << ',' << row.condition << '\n';
    }
}

namespace {

std::string xml_escape(const std::string& s)
{
    std::string out;
    for (const char c : s) {
        switch (c) {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        default:
            out += c;
        }
    }
    return out;
}

struct Axis {
    bool log = false;
    double lo = 0.0;
    double hi = 1.0;

    [[nodiscard]] double transform(double v) const { return log ? std::log10(v) : v; }
    [[nodiscard]] double unit(double v) const { return (transform(v) - lo) / (hi - lo); }

    [[nodiscard]] std::vector<double> ticks() const
    {
        std::vector<double> out;
        if (log) {
            for (double e = std::ceil(lo); e <= std::floor(hi) + 1e-9; e += 1.0) {
                out.push_back(std::pow(10.0, e));
            }
            if (out.size() > 8) {
                std::vector<double> thinned;
                const std::size_t stride = (out.size() + 7) / 8;
                for (std::size_t i = 0; i < out.size(); i += stride) {
                    thinned.push_back(out[i]);
                }
                out = thinned;
            }
            return out;
        }
        const double raw = (hi - lo) / 5.0;
        const double mag = std::pow(10.0, std::floor(std::log10(raw)));
        double step = mag;
        for (const double m : {1.0, 2.0, 5.0, 10.0}) {
            if (m * mag >= raw) {
                step = m * mag;
                break;
            }
        }
        for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * step; v += step) {
            out.push_back(v);
        }
        return out;
    }
};

Axis make_axis(bool log, const std::vector<double>& values)
{
    Axis a;
    a.log = log;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const double v : values) {
        const double t = a.transform(v);
        lo = std::min(lo, t);
        hi = std::max(hi, t);
    }
    if (!std::isfinite(lo)) {
        lo = 0.0;
        hi = 1.0;
    }
    if (hi - lo < 1e-12) {
        lo -= 0.5;
        hi += 0.5;
    }
    if (log) {
        lo = std::floor(lo);
        hi = std::ceil(hi);
    } else {
        const double pad = 0.05 * (hi - lo);
        lo -= pad;
        hi += pad;
    }
    a.lo = lo;
    a.hi = hi;
    return a;
}

std::string tick_label(double v, bool log)
{
    std::ostringstream os;
    if (log) {
        os << "1e" << int(std::lround(std::log10(v)));
    } else {
        os << std::setprecision(4) << v;
    }
    return os.str();
}

}  // namespace

void write_svg_plot(std::ostream& out, const PlotSpec& spec, const std::vector<PlotSeries>& series)
{
    constexpr double width = 640.0;
    constexpr double height = 420.0;
    constexpr double left = 80.0;
    constexpr double right = 20.0;
    constexpr double top = 40.0;
    constexpr double bottom = 60.0;
    constexpr double pw = width - left - right;
    constexpr double ph = height - top - bottom;
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

    auto keep = [&](double x, double y) {
        return std::isfinite(x) && std::isfinite(y) && (!spec.log_x || x > 0.0) && (!spec.log_y || y > 0.0);
    };
    std::vector<double> all_x;
    std::vector<double> all_y;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (keep(s.x[i], s.y[i])) {
                all_x.push_back(s.x[i]);
                all_y.push_back(s.y[i]);
            }
        }
    }
    const Axis ax = make_axis(spec.log_x, all_x);
    const Axis ay = make_axis(spec.log_y, all_y);
    auto px = [&](double x) { return left + pw * ax.unit(x); };
    auto py = [&](double y) { return top + ph * (1.0 - ay.unit(y)); };

    out << std::fixed << std::setprecision(2);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
        << xml_escape(spec.title) << "</text>\n";
    out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (const double t : ax.ticks()) {
        const double x = px(t);
        out << "<line x1=\"" << x << "\" y1=\"" << top + ph << "\" x2=\"" << x << "\" y2=\"" << top + ph + 5
            << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << x << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">"
            << tick_label(t, ax.log) << "</text>\n";
    }
    for (const double t : ay.ticks()) {
        const double y = py(t);
        out << "<line x1=\"" << left - 5 << "\" y1=\"" << y << "\" x2=\"" << left << "\" y2=\"" << y
            << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << left - 8 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">" << tick_label(t, ay.log)
            << "</text>\n";
    }
    out << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 15 << "\" text-anchor=\"middle\">"
        << xml_escape(spec.x_label) << "</text>\n";
    out << "<text x=\"18\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << top + ph / 2 << ")\">" << xml_escape(spec.y_label) << "</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = colors[s % std::size(colors)];
        std::ostringstream pts;
        pts << std::fixed << std::setprecision(2);
        std::size_t kept = 0;
        for (std::size_t i = 0; i < series[s].x.size(); ++i) {
            if (keep(series[s].x[i], series[s].y[i])) {
                pts << (kept++ ? " " : "") << px(series[s].x[i]) << ',' << py(series[s].y[i]);
            }
        }
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"" << pts.str()
            << "\"/>\n";
        if (series[s].x.size() <= 50) {
            for (std::size_t i = 0; i < series[s].x.size(); ++i) {
                if (keep(series[s].x[i], series[s].y[i])) {
                    out << "<circle cx=\"" << px(series[s].x[i]) << "\" cy=\"" << py(series[s].y[i])
                        << "\" r=\"3\" fill=\"" << color << "\"/>\n";
                }
            }
        }
        out << "<text x=\"" << left + pw - 10 << "\" y=\"" << top + 18 + 16 * double(s)
            << "\" text-anchor=\"end\" fill=\"" << color << "\">" << xml_escape(series[s].label) << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace specball
