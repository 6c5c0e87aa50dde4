#pragma once

// Parabolic problem definitions: u_t = div(A grad u) + f(s, t, u) on Omega = Phi(B_d),
// u = 0 on the boundary, u(., 0) = u0.

#include <cmath>
#include <functional>
#include <numbers>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "specball/geometry.hpp"
#include "specball/types.hpp"

namespace specball {

template <int Dim>
using ForcingFn = std::function<double(const Point<Dim>& s, double t, double z)>;
template <int Dim>
using SpaceTimeFn = std::function<double(const Point<Dim>& s, double t)>;
template <int Dim>
using SpatialFn = std::function<double(const Point<Dim>& p)>;

template <int Dim>
struct Diffusion {
    DiffusionFn<Dim> eval = identity_diffusion<Dim>();
    bool identity = true;
    bool depends_on_t = false;
    bool depends_on_z = false;
};

/// Exact solution fields needed to manufacture a forcing term.
template <int Dim>
struct ExactSolution {
    SpaceTimeFn<Dim> u;
    SpaceTimeFn<Dim> u_t;
    SpaceTimeFn<Dim> div_a_grad_u;  // Laplacian when A = I
};

template <int Dim>
struct ParabolicProblem {
    static constexpr int dim = Dim;

    std::string name;
    std::shared_ptr<const MappedDomain<Dim>> domain;
    Diffusion<Dim> diffusion;
    ForcingFn<Dim> forcing;
    bool forcing_depends_on_z = false;
    SpatialFn<Dim> u0;
    /// u0 o Phi given directly on the ball; preferred over u0 when set.
    SpatialFn<Dim> u0_reference;
    std::optional<ExactSolution<Dim>> exact;

    /// u0(Phi(x)).
    [[nodiscard]] double initial_on_ball(const Point<Dim>& x) const
    {
        return u0_reference ? u0_reference(x) : u0(domain->phi(x));
    }
};

/// Nonlinear source term menu f1(s, t, z).
enum class SourceKind { zero, exp_cos };

template <int Dim>
ForcingFn<Dim> source_term(SourceKind kind)
{
    if (kind == SourceKind::exp_cos) {
        return [](const Point<Dim>&, double t, double z) { return std::exp(-z) * std::cos(std::numbers::pi * t); };
    }
    return [](const Point<Dim>&, double, double) { return 0.0; };
}

/// f = f1(s, t, z) + f2(s, t) with f2 = u_t - div(A grad u) - f1(s, t, u); u0 = u(., 0).
template <int Dim>
ParabolicProblem<Dim> make_manufactured(std::string name, std::shared_ptr<const MappedDomain<Dim>> domain,
                                        ExactSolution<Dim> exact, ForcingFn<Dim> f1, bool f1_depends_on_z,
                                        Diffusion<Dim> diffusion = {})
{
    ParabolicProblem<Dim> p;
    p.name = std::move(name);
    p.domain = std::move(domain);
    p.diffusion = std::move(diffusion);
    p.forcing = [exact, f1](const Point<Dim>& s, double t, double z) {
        const double f2 = exact.u_t(s, t) - exact.div_a_grad_u(s, t) - f1(s, t, exact.u(s, t));
        return f1(s, t, z) + f2;
    };
    p.forcing_depends_on_z = f1_depends_on_z;
    p.u0 = [u = exact.u](const Point<Dim>& s) { return u(s, 0.0); };
    p.exact = std::move(exact);
    return p;
}

/// Heat equation on the unit disk with u = (1 - |s|^2) e^{-t}, f1 = 0.
ParabolicProblem<2> example_disk_heat();

/// u = (1 - |s|^2) cos(t + 0.05 pi s1 s2) on the unit disk, f1 = e^{-z} cos(pi t).
ParabolicProblem<2> example_disk2d();

/// u = (1 - |x|^2) cos(t + 0.05 pi s1 s2 s3), x = Psi(s), on mapped3d_example(0.7, 0.9),
/// f1 = e^{-z} cos(pi t).
ParabolicProblem<3> example_mapped3d();

/// Exact solution used by example_mapped3d for general map parameters.
ExactSolution<3> mapped3d_solution(double a, double b);

/// Limacon or amoeba domain, f = e^{-z} cos(pi t), u0 o Phi = 1 - |x|^2; no exact solution.
ParabolicProblem<2> example_starlike(const std::string& name);

/// Problem on an arbitrary mapped domain with f = f1 and u0 o Phi = 1 - |x|^2; no exact solution.
template <int Dim>
ParabolicProblem<Dim> custom_problem(std::string name, std::shared_ptr<const MappedDomain<Dim>> domain,
                                     SourceKind source)
{
    ParabolicProblem<Dim> p;
    p.name = std::move(name);
    p.domain = std::move(domain);
    p.forcing = source_term<Dim>(source);
    p.forcing_depends_on_z = (source == SourceKind::exp_cos);
    p.u0_reference = [](const Point<Dim>& x) { return 1.0 - x.squaredNorm(); };
    p.u0 = {};
    return p;
}

/// Same domain and initial data with f replaced by zero; the exact solution is dropped.
template <int Dim>
ParabolicProblem<Dim> without_forcing(ParabolicProblem<Dim> p)
{
    p.name += "-unforced";
    p.forcing = source_term<Dim>(SourceKind::zero);
    p.forcing_depends_on_z = false;
    p.exact.reset();
    return p;
}

using AnyProblem = std::variant<ParabolicProblem<2>, ParabolicProblem<3>>;

/// Built-in names: disk-heat, disk, limacon, amoeba, mapped3d.
AnyProblem problem_by_name(const std::string& name);
std::vector<std::string> builtin_problem_names();

}  // namespace specball
