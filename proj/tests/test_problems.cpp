#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "specball/problems.hpp"

using namespace specball;
using std::numbers::pi;

namespace {

/// Checks u_t and div(A grad u) = Laplacian against finite differences in physical space, and
/// that the forcing reproduces the residual: f(s, t, u) = u_t - Lap u.
template <int Dim>
void expect_manufactured_consistent(const ParabolicProblem<Dim>& p, unsigned seed)
{
    ASSERT_TRUE(p.exact.has_value());
    const auto& ex = *p.exact;
    for (const auto& x : oracle::random_ball_points<Dim>(15, seed, 0.9)) {
        const Point<Dim> s = p.domain->phi(x);
        for (const double t : {0.0, 0.6, 1.7}) {
            const double ut_fd = (ex.u(s, t + 1e-6) - ex.u(s, t - 1e-6)) / 2e-6;
            EXPECT_NEAR(ex.u_t(s, t), ut_fd, 1e-7);
            const double lap_fd = oracle::fd_laplacian4<Dim>([&](const Point<Dim>& y) { return ex.u(y, t); }, s);
            EXPECT_NEAR(ex.div_a_grad_u(s, t), lap_fd, 1e-5);
            EXPECT_NEAR(p.forcing(s, t, ex.u(s, t)), ex.u_t(s, t) - ex.div_a_grad_u(s, t), 1e-12);
        }
    }
}

template <int Dim>
void expect_zero_on_boundary(const ParabolicProblem<Dim>& p, int samples)
{
    for (int i = 0; i < samples; ++i) {
        Point<Dim> x;
        if constexpr (Dim == 2) {
            const double th = 2.0 * pi * i / samples;
            x << std::cos(th), std::sin(th);
        } else {
            const double z = -1.0 + (2.0 * i + 1.0) / samples;
            const double th = 2.399963 * i;
            const double r = std::sqrt(1.0 - z * z);
            x << r * std::cos(th), r * std::sin(th), z;
        }
        EXPECT_NEAR(p.initial_on_ball(x), 0.0, 1e-12) << p.name << " i=" << i;
        if (p.exact) {
            for (const double t : {0.3, 1.1}) {
                EXPECT_NEAR(p.exact->u(p.domain->phi(x), t), 0.0, 1e-12) << p.name;
            }
        }
    }
}

}  // namespace

TEST(DiskHeat, ForcingClosedForm)
{
    const auto p = example_disk_heat();
    for (const auto& s : oracle::random_ball_points<2>(10, 1u)) {
        for (const double t : {0.0, 0.5, 2.0}) {
            EXPECT_NEAR(p.forcing(s, t, 123.0), std::exp(-t) * (3.0 + s.squaredNorm()), 1e-14);
        }
    }
    EXPECT_FALSE(p.forcing_depends_on_z);
}

TEST(DiskHeat, ManufacturedResidual) { expect_manufactured_consistent(example_disk_heat(), 2u); }

TEST(Disk2d, CenterValues)
{
    const auto p = example_disk2d();
    EXPECT_NEAR(p.exact->u(Point<2>::Zero(), 0.0), 1.0, 1e-15);
    EXPECT_NEAR(p.exact->u_t(Point<2>::Zero(), 0.0), 0.0, 1e-15);
    EXPECT_NEAR(p.u0(Point<2>::Zero()), 1.0, 1e-15);
    EXPECT_TRUE(p.forcing_depends_on_z);
}

TEST(Disk2d, ManufacturedResidual) { expect_manufactured_consistent(example_disk2d(), 3u); }

TEST(Disk2d, NonlinearSourceTerm)
{
    const auto p = example_disk2d();
    const Point<2> s(0.2, 0.3);
    const double t = 0.4;
    // f(s, t, z) - f(s, t, u) = e^{-z} cos(pi t) - e^{-u} cos(pi t).
    const double u = p.exact->u(s, t);
    EXPECT_NEAR(p.forcing(s, t, 0.7) - p.forcing(s, t, u), (std::exp(-0.7) - std::exp(-u)) * std::cos(pi * t), 1e-14);
}

TEST(Mapped3d, CenterValueAndBoundary)
{
    const auto p = example_mapped3d();
    EXPECT_NEAR(p.exact->u(p.domain->phi(Point<3>::Zero()), 0.0), 1.0, 1e-15);
    expect_zero_on_boundary(p, 500);
}

TEST(Mapped3d, ManufacturedResidual) { expect_manufactured_consistent(example_mapped3d(), 4u); }

TEST(Mapped3d, LaplacianAgainstSecondOrderDifferences)
{
    // Plain second-order differences with step 1e-4 at 100 random interior points of Omega.
    // Their truncation error grows like 1/q^7 with q = sqrt(1 + a (s1 + s2)), so points are kept
    // to |x| <= 0.8; the fourth-order comparison above covers the outer shell.
    const auto p = example_mapped3d();
    for (const auto& x : oracle::random_ball_points<3>(100, 40u, 0.8)) {
        const Point<3> s = p.domain->phi(x);
        const double lap = oracle::fd_laplacian<3>([&](const Point<3>& y) { return p.exact->u(y, 0.4); }, s, 1e-4);
        EXPECT_NEAR(p.exact->div_a_grad_u(s, 0.4), lap, 1e-5);
    }
}

TEST(Mapped3d, OtherParameters) {
    const auto dom = std::make_shared<const MappedDomain<3>>(mapped3d_example(0.3, 0.2));
    const auto p = make_manufactured<3>("m", dom, mapped3d_solution(0.3, 0.2), source_term<3>(SourceKind::zero), false);
    expect_manufactured_consistent(p, 5u);
    expect_zero_on_boundary(p, 200);
}

TEST(Starlike, InitialDataCompatibleWithBoundary)
{
    const auto limacon = example_starlike("limacon");
    const auto amoeba = example_starlike("amoeba");
    expect_zero_on_boundary(limacon, 360);
    expect_zero_on_boundary(amoeba, 1000);
    EXPECT_NEAR(limacon.initial_on_ball(Point<2>::Zero()), 1.0, 1e-15);
    EXPECT_FALSE(limacon.exact.has_value());
}

TEST(Starlike, BoundaryRadii)
{
    EXPECT_NEAR(limacon_boundary().rho(0.0), 4.0, 1e-15);
    double rho_min = 1e300;
    for (int i = 0; i < 10000; ++i) {
        rho_min = std::min(rho_min, amoeba_boundary().rho(2.0 * pi * i / 10000.0));
    }
    EXPECT_GT(rho_min, 0.0);
}

TEST(Problems, Registry)
{
    for (const auto& name : builtin_problem_names()) {
        const auto p = problem_by_name(name);
        const int dim = std::visit([](const auto& q) { return std::decay_t<decltype(q)>::dim; }, p);
        EXPECT_EQ(dim, name == "mapped3d" ? 3 : 2);
    }
    EXPECT_THROW(problem_by_name("torus"), InvalidArgument);
    EXPECT_THROW(example_starlike("square"), InvalidArgument);
}

TEST(Problems, WithoutForcingDropsExactSolution)
{
    const auto p = without_forcing(example_disk2d());
    EXPECT_FALSE(p.exact.has_value());
    EXPECT_EQ(p.forcing(Point<2>(0.1, 0.1), 0.3, 2.0), 0.0);
    EXPECT_NEAR(p.initial_on_ball(Point<2>::Zero()), 1.0, 1e-15);
}

TEST(Problems, AnisotropicDiffusionManufacturedPath)
{
    // A = diag(1 + s1^2/4, 1, 1), u = (1 - |s|^2) e^{-t}:
    // div(A grad u) = -2 e^{-t} (1 + 3 s1^2 / 4 + 2).
    using P = Point<3>;
    Diffusion<3> a;
    a.eval = [](const P& s, double, double) {
        return SquareMatrix<3>(P(1.0 + s[0] * s[0] / 4.0, 1.0, 1.0).asDiagonal());
    };
    a.identity = false;
    ExactSolution<3> ex;
    ex.u = [](const P& s, double t) { return (1.0 - s.squaredNorm()) * std::exp(-t); };
    ex.u_t = [](const P& s, double t) { return -(1.0 - s.squaredNorm()) * std::exp(-t); };
    ex.div_a_grad_u = [](const P& s, double t) { return -2.0 * std::exp(-t) * (3.0 + 0.75 * s[0] * s[0]); };
    const auto dom = std::make_shared<const MappedDomain<3>>(identity_ball<3>());
    const auto p = make_manufactured<3>("aniso", dom, ex, source_term<3>(SourceKind::exp_cos), true, a);
    // Independent check of div(A grad u) by differencing the flux.
    for (const auto& s : oracle::random_ball_points<3>(8, 6u)) {
        const double h = 1e-4;
        double div = 0.0;
        for (int d = 0; d < 3; ++d) {
            auto flux = [&](const P& y) {
                const auto g = oracle::fd_gradient<3>([&](const P& w) { return ex.u(w, 0.5); }, y, 1e-5);
                return (a.eval(y, 0.5, 0.0) * g)[d];
            };
            P sp = s;
            P sm = s;
            sp[d] += h;
            sm[d] -= h;
            div += (flux(sp) - flux(sm)) / (2 * h);
        }
        EXPECT_NEAR(ex.div_a_grad_u(s, 0.5), div, 1e-5);
        EXPECT_NEAR(p.forcing(s, 0.5, ex.u(s, 0.5)), ex.u_t(s, 0.5) - ex.div_a_grad_u(s, 0.5), 1e-12);
    }
}
