#pragma once

// Integration of the semi-discrete system a' = G^{-1} B(t, a) a + G^{-1} f(t, a).

#include <functional>
#include <iosfwd>
#include <limits>
#include <memory>
#include <string>
#include <type_traits>
#include <vector>

#include "specball/galerkin.hpp"
#include "specball/types.hpp"

namespace specball {

template <typename Scalar>
struct BasicIvpProblem {
    using Vec = VectorX<Scalar>;
    using Mat = MatrixX<Scalar>;
    std::function<Vec(Scalar, const Vec&)> rhs;
    std::function<Mat(Scalar, const Vec&)> jac;
    Vec a0;
    Scalar t0 = 0;
    Scalar t_end = 1;
    Scalar rtol = Scalar(1e-8);
    Scalar atol = Scalar(1e-10);
};

struct SolverStats {
    long steps = 0;
    long rejected_steps = 0;
    long rhs_evaluations = 0;
    long jacobian_evaluations = 0;
    long lu_decompositions = 0;
    std::string method;
};

template <typename Scalar>
struct BasicTrajectory {
    std::vector<Scalar> times;
    std::vector<VectorX<Scalar>> states;
    SolverStats stats;
};

using IvpProblem = BasicIvpProblem<double>;
using Trajectory = BasicTrajectory<double>;

enum class OdeMethod {
    /// Variable-step, variable-order BDF (orders 1-5), quasi-constant step size.
    bdf,
    /// Fixed-step BDF2 (first step implicit Euler).
    bdf2_fixed,
    /// Fixed-step classical Runge-Kutta.
    rk4,
};

struct SolverOptions {
    OdeMethod method = OdeMethod::bdf;
    /// Step for the fixed-step methods; ignored by bdf.
    double fixed_step = 1e-3;
    double max_step = std::numeric_limits<double>::infinity();
};

/// Integrates over [t0, t_end] and samples at output_times (strictly increasing, inside the span).
/// Instantiated for double and long double.
template <typename Scalar>
BasicTrajectory<Scalar> solve_ivp(const BasicIvpProblem<Scalar>& problem, const std::vector<Scalar>& output_times,
                                  const SolverOptions& options = {});

/// n evenly spaced times covering [t0, t_end] inclusive (n >= 2).
std::vector<double> linspace_times(double t0, double t_end, int n);

/// The semi-discrete system as an IVP. The callables refer to `system`, which must outlive the
/// returned problem. For Scalar other than double the right-hand side runs in Scalar arithmetic
/// and the Jacobian (used only by Newton) in double.
template <typename Scalar = double, int Dim>
BasicIvpProblem<Scalar> make_ivp(const GalerkinSystem<Dim>& system, const Vector& a0, double t_end,
                                 double rtol = 1e-8, double atol = 1e-10)
{
    BasicIvpProblem<Scalar> p;
    if constexpr (std::is_same_v<Scalar, double>) {
        p.rhs = [&system](double t, const Vector& a) { return system.rhs(t, a); };
        p.jac = [&system](double t, const Vector& a) { return jacobian_estimate(system, t, a); };
    } else {
        auto eval = std::make_shared<const RhsEvaluator<Dim, Scalar>>(system);
        p.rhs = [eval](Scalar t, const VectorX<Scalar>& a) { return (*eval)(double(t), a); };
        p.jac = [&system](Scalar t, const VectorX<Scalar>& a) {
            return MatrixX<Scalar>(jacobian_estimate(system, double(t), a.template cast<double>()).template cast<Scalar>());
        };
    }
    p.a0 = a0.cast<Scalar>();
    p.t_end = Scalar(t_end);
    p.rtol = Scalar(rtol);
    p.atol = Scalar(atol);
    return p;
}

/// 2-norm condition number from a full SVD; +infinity when numerically singular.
double condition_number(const Matrix& m);

/// Narrows a trajectory to double.
template <typename Scalar>
Trajectory to_double(const BasicTrajectory<Scalar>& trajectory)
{
    Trajectory out;
    out.stats = trajectory.stats;
    for (std::size_t i = 0; i < trajectory.times.size(); ++i) {
        out.times.push_back(double(trajectory.times[i]));
        out.states.push_back(trajectory.states[i].template cast<double>());
    }
    return out;
}

/// `time,a1,...,aN` rows at 17 significant digits.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);

/// Solver statistics as a JSON object.
std::string stats_json(const SolverStats& stats);

}  // namespace specball
