#include "specball/problems.hpp"

#include <cmath>
#include <numbers>

namespace specball {

namespace {

constexpr double kPhase = 0.05 * std::numbers::pi;

}  // namespace

ParabolicProblem<2> example_disk_heat()
{
    using P = Point<2>;
    ExactSolution<2> exact;
    exact.u = [](const P& s, double t) { return (1.0 - s.squaredNorm()) * std::exp(-t); };
    exact.u_t = [](const P& s, double t) { return -(1.0 - s.squaredNorm()) * std::exp(-t); };
    exact.div_a_grad_u = [](const P&, double t) { return -4.0 * std::exp(-t); };
    auto domain = std::make_shared<const MappedDomain<2>>(identity_ball<2>());
    return make_manufactured<2>("disk-heat", domain, exact, source_term<2>(SourceKind::zero), false);
}

ParabolicProblem<2> example_disk2d()
{
    using P = Point<2>;
    // u = B cos w, B = 1 - |s|^2, w = t + c s1 s2.
    ExactSolution<2> exact;
    exact.u = [](const P& s, double t) { return (1.0 - s.squaredNorm()) * std::cos(t + kPhase * s[0] * s[1]); };
    exact.u_t = [](const P& s, double t) { return -(1.0 - s.squaredNorm()) * std::sin(t + kPhase * s[0] * s[1]); };
    exact.div_a_grad_u = [](const P& s, double t) {
        const double w = t + kPhase * s[0] * s[1];
        const double r2 = s.squaredNorm();
        return -4.0 * std::cos(w) + 8.0 * kPhase * s[0] * s[1] * std::sin(w) -
               (1.0 - r2) * kPhase * kPhase * r2 * std::cos(w);
    };
    auto domain = std::make_shared<const MappedDomain<2>>(identity_ball<2>());
    return make_manufactured<2>("disk", domain, exact, source_term<2>(SourceKind::exp_cos), true);
}

ExactSolution<3> mapped3d_solution(double a, double b)
{
    using P = Point<3>;
    struct Fields {
        double u, u_t, lap;
    };
    auto fields = [a, b](const P& s, double t) {
        const double q = std::sqrt(1.0 + a * (s[0] + s[1]));
        const double p = std::sqrt(1.0 + b * s[2]);
        const P x((q - 1.0) / a, s[1] - (q - 1.0) / a, (p - 1.0) / b);
        const P g1(0.5 / q, 0.5 / q, 0.0);
        const P g2(-0.5 / q, 1.0 - 0.5 / q, 0.0);
        const P g3(0.0, 0.0, 0.5 / p);
        const double l1 = -a / (2.0 * q * q * q);
        const double l2 = a / (2.0 * q * q * q);
        const double l3 = -b / (4.0 * p * p * p);
        const double bubble = 1.0 - x.squaredNorm();
        const P grad_bubble = -2.0 * (x[0] * g1 + x[1] * g2 + x[2] * g3);
        const double lap_bubble = -2.0 * (g1.squaredNorm() + x[0] * l1 + g2.squaredNorm() + x[1] * l2 +
                                          g3.squaredNorm() + x[2] * l3);
        const double w = t + kPhase * s[0] * s[1] * s[2];
        const P grad_w = kPhase * P(s[1] * s[2], s[0] * s[2], s[0] * s[1]);
        const double cw = std::cos(w);
        const double sw = std::sin(w);
        const double lap = lap_bubble * cw - 2.0 * sw * grad_bubble.dot(grad_w) - bubble * cw * grad_w.squaredNorm();
        return Fields{bubble * cw, -bubble * sw, lap};
    };
    ExactSolution<3> exact;
    exact.u = [fields](const P& s, double t) { return fields(s, t).u; };
    exact.u_t = [fields](const P& s, double t) { return fields(s, t).u_t; };
    exact.div_a_grad_u = [fields](const P& s, double t) { return fields(s, t).lap; };
    return exact;
}

ParabolicProblem<3> example_mapped3d()
{
    constexpr double a = 0.7;
    constexpr double b = 0.9;
    auto domain = std::make_shared<const MappedDomain<3>>(mapped3d_example(a, b));
    return make_manufactured<3>("mapped3d", domain, mapped3d_solution(a, b), source_term<3>(SourceKind::exp_cos),
                                true);
}

ParabolicProblem<2> example_starlike(const std::string& name)
{
    StarlikeBoundary boundary;
    if (name == "limacon") {
        boundary = limacon_boundary();
    } else if (name == "amoeba") {
        boundary = amoeba_boundary();
    } else {
        throw InvalidArgument("unknown star-like domain '" + name + "' (expected limacon or amoeba)");
    }
    auto domain = std::make_shared<const MappedDomain<2>>(starlike2d(boundary));
    return custom_problem<2>(name, domain, SourceKind::exp_cos);
}

std::vector<std::string> builtin_problem_names()
{
    return {"disk-heat", "disk", "limacon", "amoeba", "mapped3d"};
}

AnyProblem problem_by_name(const std::string& name)
{
    if (name == "disk-heat") {
        return example_disk_heat();
    }
    if (name == "disk") {
        return example_disk2d();
    }
    if (name == "limacon" || name == "amoeba") {
        return example_starlike(name);
    }
    if (name == "mapped3d") {
        return example_mapped3d();
    }
    throw InvalidArgument("unknown problem '" + name + "'");
}

}  // namespace specball
