#include "specball/geometry.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>
#include <system_error>
#include <vector>

namespace specball {

MappedDomain<3> mapped3d_example(double a, double b)
{
    if (!(a > 0.0 && a < 1.0) || !(b > 0.0 && b < 1.0)) {
        throw InvalidArgument("mapped3d_example: parameters must satisfy 0 < a, b < 1");
    }
    using P = Point<3>;
    auto phi = [a, b](const P& x) {
        return P(x[0] - x[1] + a * x[0] * x[0], x[0] + x[1], 2.0 * x[2] + b * x[2] * x[2]);
    };
    auto jac = [a, b](const P& x) {
        SquareMatrix<3> j;
        j << 1.0 + 2.0 * a * x[0], -1.0, 0.0,
             1.0, 1.0, 0.0,
             0.0, 0.0, 2.0 + 2.0 * b * x[2];
        return j;
    };
    auto inverse = [a, b](const P& s) {
        const double root_a = std::sqrt(1.0 + a * (s[0] + s[1]));
        return P((root_a - 1.0) / a, (a * s[1] + 1.0 - root_a) / a, (std::sqrt(1.0 + b * s[2]) - 1.0) / b);
    };
    auto det = [a, b](const P& x) { return 4.0 * (1.0 + a * x[0]) * (1.0 + b * x[2]); };
    return MappedDomain<3>("mapped3d", phi, jac, MappedDomain<3>::MapFn(inverse), det, Smoothness::polynomial);
}

StarlikeBoundary limacon_boundary()
{
    return {"limacon", [](double t) { return 3.0 + std::cos(t) + 2.0 * std::sin(t); },
            [](double t) { return -std::sin(t) + 2.0 * std::cos(t); }};
}

StarlikeBoundary amoeba_boundary()
{
    return {"amoeba", [](double t) { return 5.0 + std::sin(t) + std::sin(3.0 * t) - std::cos(5.0 * t); },
            [](double t) { return std::cos(t) + 3.0 * std::cos(3.0 * t) + 5.0 * std::sin(5.0 * t); }};
}

namespace {

constexpr int kRadiusSamples = 4096;

struct RadiusStats {
    double min;
    double mean;
};

RadiusStats scan_radius(const StarlikeBoundary& boundary)
{
    double lo = std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (int i = 0; i < kRadiusSamples; ++i) {
        const double rho = boundary.rho(2.0 * std::numbers::pi * i / kRadiusSamples);
        if (!std::isfinite(rho)) {
            throw InvalidArgument("starlike2d: boundary radius is not finite");
        }
        lo = std::min(lo, rho);
        sum += rho;
    }
    return {lo, sum / kRadiusSamples};
}

}  // namespace

double starlike_reference_radius(const StarlikeBoundary& boundary)
{
    const auto stats = scan_radius(boundary);
    return std::min(stats.mean, 2.0 * stats.min);
}

MappedDomain<2> starlike2d(const StarlikeBoundary& boundary, ExtensionMode mode)
{
    if (!boundary.rho || !boundary.drho) {
        throw InvalidArgument("starlike2d: boundary radius and its derivative are required");
    }
    const auto stats = scan_radius(boundary);
    if (!(stats.min > 0.0)) {
        throw InvalidArgument("starlike2d: boundary radius must be positive");
    }
    using P = Point<2>;
    const auto rho = boundary.rho;
    const auto drho = boundary.drho;

    if (mode == ExtensionMode::radial) {
        const double center = stats.mean;
        auto phi = [rho](const P& x) {
            const double r = x.norm();
            return r == 0.0 ? P::Zero().eval() : (rho(std::atan2(x[1], x[0])) * x).eval();
        };
        auto jac = [rho, drho, center](const P& x) {
            const double r2 = x.squaredNorm();
            if (r2 < 1e-28) {
                return (center * SquareMatrix<2>::Identity()).eval();
            }
            const double theta = std::atan2(x[1], x[0]);
            const P grad_g = drho(theta) * P(-x[1], x[0]) / r2;
            return (rho(theta) * SquareMatrix<2>::Identity() + x * grad_g.transpose()).eval();
        };
        return MappedDomain<2>(boundary.name, phi, jac, std::nullopt, {}, Smoothness::c2);
    }

    const double ref = std::min(stats.mean, 2.0 * stats.min);
    // sigma(r) = 3r^2 - 2r^3; sigma'(r)/r = 6(1-r), sigma(r)/r^2 = 3 - 2r.
    auto phi = [rho, ref](const P& x) {
        const double r = x.norm();
        if (r == 0.0) {
            return P::Zero().eval();
        }
        const double sigma = r * r * (3.0 - 2.0 * r);
        const double g = ref + (rho(std::atan2(x[1], x[0])) - ref) * sigma;
        return (g * x).eval();
    };
    auto jac = [rho, drho, ref](const P& x) {
        const double r = x.norm();
        if (r == 0.0) {
            return (ref * SquareMatrix<2>::Identity()).eval();
        }
        const double theta = std::atan2(x[1], x[0]);
        const double sigma = r * r * (3.0 - 2.0 * r);
        const double excess = rho(theta) - ref;
        const double g = ref + excess * sigma;
        const P grad_g = 6.0 * (1.0 - r) * excess * x + (3.0 - 2.0 * r) * drho(theta) * P(-x[1], x[0]);
        return (g * SquareMatrix<2>::Identity() + x * grad_g.transpose()).eval();
    };
    return MappedDomain<2>(boundary.name, phi, jac, std::nullopt, {}, Smoothness::c2);
}

namespace {

/// Whole-token numeric parse.
template <typename T>
bool parse_exact(const std::string& token, T& value)
{
    const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    return ec == std::errc() && end == token.data() + token.size();
}

}  // namespace

template <int Dim>
PolynomialMap<Dim> parse_polynomial_map(std::istream& in)
{
    PolynomialMap<Dim> map;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        std::istringstream fields(line);
        std::vector<std::string> tokens;
        for (std::string tok; fields >> tok;) {
            tokens.push_back(tok);
        }
        if (tokens.size() != std::size_t(Dim + 2)) {
            throw InvalidArgument("polynomial map line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(Dim + 2) + " fields");
        }
        typename PolynomialMap<Dim>::Term term;
        int component = 0;
        if (!parse_exact(tokens[0], component)) {
            throw InvalidArgument("polynomial map line " + std::to_string(line_no) + ": component must be an integer");
        }
        for (int d = 0; d < Dim; ++d) {
            if (!parse_exact(tokens[d + 1], term.powers[d])) {
                throw InvalidArgument("polynomial map line " + std::to_string(line_no) + ": exponents must be integers");
            }
        }
        if (!parse_exact(tokens[Dim + 1], term.coefficient)) {
            throw InvalidArgument("polynomial map line " + std::to_string(line_no) + ": bad coefficient");
        }
        if (component < 1 || component > Dim) {
            throw InvalidArgument("polynomial map line " + std::to_string(line_no) + ": component out of range");
        }
        for (int d = 0; d < Dim; ++d) {
            if (term.powers[d] < 0) {
                throw InvalidArgument("polynomial map line " + std::to_string(line_no) + ": negative exponent");
            }
        }
        term.component = component - 1;
        map.terms.push_back(term);
    }
    return map;
}

template <int Dim>
PolynomialMap<Dim> load_polynomial_map(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw InvalidArgument("cannot open polynomial map file '" + path + "'");
    }
    return parse_polynomial_map<Dim>(in);
}

namespace {

template <int Dim>
double monomial(const Point<Dim>& x, const std::array<int, Dim>& powers, int skip = -1)
{
    double v = 1.0;
    for (int d = 0; d < Dim; ++d) {
        int p = powers[d];
        if (d == skip) {
            if (p == 0) {
                return 0.0;
            }
            v *= p;
            --p;
        }
        for (int k = 0; k < p; ++k) {
            v *= x[d];
        }
    }
    return v;
}

}  // namespace

template <int Dim>
MappedDomain<Dim> polynomial_domain(PolynomialMap<Dim> map, std::string name)
{
    using P = Point<Dim>;
    auto terms = std::make_shared<const PolynomialMap<Dim>>(std::move(map));
    auto phi = [terms](const P& x) {
        P s = P::Zero();
        for (const auto& t : terms->terms) {
            s[t.component] += t.coefficient * monomial<Dim>(x, t.powers);
        }
        return s;
    };
    auto jac = [terms](const P& x) {
        SquareMatrix<Dim> j = SquareMatrix<Dim>::Zero();
        for (const auto& t : terms->terms) {
            for (int d = 0; d < Dim; ++d) {
                j(t.component, d) += t.coefficient * monomial<Dim>(x, t.powers, d);
            }
        }
        return j;
    };
    return MappedDomain<Dim>(std::move(name), phi, jac, std::nullopt, {}, Smoothness::polynomial);
}

template PolynomialMap<2> parse_polynomial_map<2>(std::istream&);
template PolynomialMap<3> parse_polynomial_map<3>(std::istream&);
template PolynomialMap<2> load_polynomial_map<2>(const std::string&);
template PolynomialMap<3> load_polynomial_map<3>(const std::string&);
template MappedDomain<2> polynomial_domain<2>(PolynomialMap<2>, std::string);
template MappedDomain<3> polynomial_domain<3>(PolynomialMap<3>, std::string);

}  // namespace specball
