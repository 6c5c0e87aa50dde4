// Command-line front end: solve, study convergence|conditioning, dump-rule, project-initial.
//
// Study options live on the top-level app so that a flat TOML file given with --config
// supplies defaults for every subcommand; flags on the command line override it.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "specball/galerkin.hpp"
#include "specball/harness.hpp"
#include "specball/quadrature.hpp"

using namespace specball;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 1;
constexpr int exit_solver = 2;

void print_solve(const SolveOutcome& o)
{
    const auto& s = o.trajectory.stats;
    std::cout << "n = " << o.degree << "  N = " << o.basis_size << "  q = " << o.quadrature_order << '\n'
              << "steps = " << s.steps << "  rejected = " << s.rejected_steps << "  rhs = " << s.rhs_evaluations
              << "  jacobians = " << s.jacobian_evaluations << '\n';
    if (o.errors) {
        std::cout << "max error over time = " << std::setprecision(6) << o.errors->max_over_time << '\n';
    } else {
        std::cout << "no exact solution; errors not computed\n";
    }
}

void print_convergence(const ConvergenceReport& r)
{
    std::cout << (r.self_convergence ? "self-convergence against n = " + std::to_string(r.degrees.back())
                                     : std::string("errors against the exact solution"))
              << '\n';
    std::cout << std::setw(4) << "n" << std::setw(8) << "N" << std::setw(16) << "max error" << '\n';
    for (std::size_t i = 0; i < r.degrees.size(); ++i) {
        std::cout << std::setw(4) << r.degrees[i] << std::setw(8) << r.sizes[i] << std::setw(16) << std::scientific
                  << std::setprecision(4) << r.errors[i] << std::defaultfloat << '\n';
    }
    std::cout << "semilog fit: slope = " << r.fit.slope << " per degree, R^2 = " << r.fit.r_squared << '\n';
}

void print_conditioning(const ConditioningReport& r)
{
    std::cout << std::setw(4) << "n" << std::setw(8) << "N" << std::setw(16) << "cond" << '\n';
    for (const auto& row : r.rows) {
        std::cout << std::setw(4) << row.degree << std::setw(8) << row.size << std::setw(16) << std::scientific
                  << std::setprecision(4) << row.condition << std::defaultfloat;
        if (!row.failure.empty()) {
            std::cout << "  (" << row.failure << ")";
        }
        std::cout << '\n';
    }
    std::cout << "log cond vs log N^2: slope = " << r.fit.slope << ", R^2 = " << r.fit.r_squared << '\n';
}

struct RuleArgs {
    std::string kind = "ball";
    int dim = 2;
    int order = 4;
    double alpha = 0.0;
    double beta = 0.0;
    std::string file;
};

void dump_rule(const RuleArgs& args)
{
    std::ofstream file;
    if (!args.file.empty()) {
        file.open(args.file);
        if (!file) {
            throw InvalidArgument("cannot open " + args.file);
        }
    }
    std::ostream& out = args.file.empty() ? std::cout : file;
    if (args.kind == "ball") {
        write_rule_csv(out, unit_ball_rule<double>(args.dim, args.order));
    } else if (args.kind == "gauss-legendre") {
        write_rule_csv(out, gauss_legendre<double>(args.order));
    } else if (args.kind == "gauss-jacobi") {
        write_rule_csv(out, gauss_jacobi<double>(args.order, args.alpha, args.beta));
    } else {
        write_rule_csv(out, radial_r2_rule<double>(args.order));
    }
}

template <int Dim>
void project_to_file(const StudyConfig& config, const ParabolicProblem<Dim>& problem, ProjectionInnerProduct inner)
{
    const GalerkinSystem<Dim> system(problem, config.degrees.front(), config.quadrature_order);
    const CoefficientVector coeffs = project_initial(system, inner);
    std::filesystem::create_directories(config.output_dir);
    const auto path = std::filesystem::path(config.output_dir) / "initial_coefficients.csv";
    std::ofstream out(path);
    if (!out) {
        throw InvalidArgument("cannot open " + path.string());
    }
    write_coefficients_csv(out, coeffs, Dim);
    std::cout << "wrote " << coeffs.values.size() << " coefficients to " << path.string() << '\n';
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Spectral Galerkin solver for parabolic problems on mapped disks and balls"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "TOML file with study options (command-line flags override it)");

    StudyConfig config;
    std::string method = "bdf";
    std::string source = "exp-cos";
    std::string inner = "reference";
    double t_end = 0.0;
    int q = 0;
    bool extended = false;

    std::vector<std::string> problems = builtin_problem_names();
    problems.push_back("custom");
    const std::string group = "Study options";
    app.add_option("--problem", config.problem, "Problem name")->check(CLI::IsMember(problems))->group(group);
    app.add_option("--mapping", config.mapping_file, "Polynomial mapping file for --problem custom")
        ->check(CLI::ExistingFile)
        ->group(group);
    app.add_option("--dim", config.custom_dim, "Dimension of a custom mapping")->check(CLI::IsMember({2, 3}))->group(group);
    app.add_option("--source", source, "Source term f1 for custom problems")
        ->check(CLI::IsMember({"zero", "exp-cos"}))
        ->group(group);
    app.add_flag("--unforced", config.unforced, "Replace the forcing by zero")->group(group);
    app.add_option("-n,--degree,--degrees", config.degrees, "Degree or comma-separated ascending degree list")
        ->delimiter(',')
        ->group(group);
    app.add_option("--q", q, "Quadrature order (default max(2n, n+2) in 2D, max(2n, n+3) in 3D)")->group(group);
    app.add_option("-T,--t-end", t_end, "Final time (default 20 in 2D, 2 in 3D)")->group(group);
    app.add_option("--outputs", config.output_times, "Number of evenly spaced output times")->group(group);
    app.add_option("--rtol", config.rtol, "Relative tolerance")->group(group);
    app.add_option("--atol", config.atol, "Absolute tolerance")->group(group);
    app.add_option("--method", method, "Time integrator")->check(CLI::IsMember({"bdf", "bdf2", "rk4"}))->group(group);
    app.add_flag("--extended", extended, "Integrate in long double (for rtol below ~1e-14)")->group(group);
    app.add_option("--step", config.solver.fixed_step, "Step size for bdf2 and rk4")->group(group);
    app.add_option("--max-step", config.solver.max_step, "Largest step for bdf")->group(group);
    app.add_option("--samples", config.sample_count, "Number of error sample points")->group(group);
    app.add_option("-o,--out", config.output_dir, "Output directory")->group(group);
    app.add_flag("--parallel", config.parallel, "Run the degrees of a sweep concurrently")->group(group);

    auto* solve = app.add_subcommand("solve", "Solve at the first degree and report errors over time");
    auto* study = app.add_subcommand("study", "Degree sweeps");
    study->require_subcommand(1);
    study->fallthrough();
    auto* convergence = study->add_subcommand("convergence", "Max-over-time error against degree");
    auto* conditioning = study->add_subcommand("conditioning", "cond(G^-1 B) against N^2");
    auto* rule = app.add_subcommand("dump-rule", "Write quadrature nodes and weights as CSV");
    auto* project = app.add_subcommand("project-initial", "Write the projected initial coefficients");
    for (auto* sub : {solve, study, convergence, conditioning, rule, project}) {
        sub->fallthrough();
    }

    RuleArgs rule_args;
    rule->add_option("--kind", rule_args.kind, "Rule type")
        ->check(CLI::IsMember({"ball", "gauss-legendre", "gauss-jacobi", "r2"}));
    rule->add_option("--rule-dim", rule_args.dim, "Ball dimension")->check(CLI::IsMember({2, 3}));
    rule->add_option("--order", rule_args.order, "q for ball and r2 rules, point count otherwise")->required();
    rule->add_option("--alpha", rule_args.alpha, "Jacobi alpha");
    rule->add_option("--beta", rule_args.beta, "Jacobi beta");
    rule->add_option("--file", rule_args.file, "Output file (default stdout)");
    project->add_option("--inner", inner, "Projection inner product")
        ->check(CLI::IsMember({"reference", "physical"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config;
    }

    if (q != 0) {
        config.quadrature_order = q;
    }
    if (t_end != 0.0) {
        config.t_end = t_end;
    }
    config.custom_source = source == "zero" ? SourceKind::zero : SourceKind::exp_cos;
    static const std::map<std::string, OdeMethod> methods = {
        {"bdf", OdeMethod::bdf}, {"bdf2", OdeMethod::bdf2_fixed}, {"rk4", OdeMethod::rk4}};
    config.solver.method = methods.at(method);
    config.precision = extended ? Precision::extended : Precision::standard;

    try {
        if (*solve) {
            print_solve(run_solve(config));
        } else if (*convergence) {
            print_convergence(run_convergence(config));
        } else if (*conditioning) {
            print_conditioning(run_conditioning(config));
        } else if (*rule) {
            dump_rule(rule_args);
        } else if (*project) {
            validate(config);
            const auto mode = inner == "physical" ? ProjectionInnerProduct::physical : ProjectionInnerProduct::reference;
            std::visit([&](const auto& p) { project_to_file(config, p, mode); }, resolve_problem(config));
        }
    } catch (const InvalidArgument& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return exit_config;
    } catch (const SolverError& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return exit_solver;
    } catch (const std::exception& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return exit_solver;
    }
    return exit_ok;
}
