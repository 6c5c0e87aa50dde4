#pragma once

// Maps Phi from the closed unit ball onto the physical domain, their Jacobians, and the
// diffusion matrix pulled back to the ball.

#include <array>
#include <cmath>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/LU>

#include "specball/errors.hpp"
#include "specball/types.hpp"

namespace specball {

enum class Smoothness { analytic, polynomial, c2 };

template <int Dim>
class MappedDomain {
public:
    using PointT = Point<Dim>;
    using MatrixT = SquareMatrix<Dim>;
    using MapFn = std::function<PointT(const PointT&)>;
    using JacobianFn = std::function<MatrixT(const PointT&)>;
    using DetFn = std::function<double(const PointT&)>;

    MappedDomain(std::string name, MapFn phi, JacobianFn jacobian, std::optional<MapFn> inverse = std::nullopt,
                 DetFn det = {}, Smoothness smoothness = Smoothness::analytic)
        : name_(std::move(name)),
          phi_(std::move(phi)),
          jacobian_(std::move(jacobian)),
          inverse_(std::move(inverse)),
          det_(std::move(det)),
          smoothness_(smoothness)
    {
    }

    static constexpr int dim = Dim;

    [[nodiscard]] const std::string& name() const { return name_; }
    [[nodiscard]] Smoothness smoothness() const { return smoothness_; }

    [[nodiscard]] PointT phi(const PointT& x) const { return phi_(x); }
    [[nodiscard]] MatrixT jacobian(const PointT& x) const { return jacobian_(x); }
    [[nodiscard]] double det_j(const PointT& x) const { return det_ ? det_(x) : jacobian_(x).determinant(); }

    [[nodiscard]] bool has_inverse() const { return inverse_.has_value(); }
    /// Psi = Phi^{-1}; throws when the domain carries no closed-form inverse.
    [[nodiscard]] PointT inverse(const PointT& s) const
    {
        if (!inverse_) {
            throw InvalidArgument("domain '" + name_ + "' has no closed-form inverse");
        }
        return (*inverse_)(s);
    }

private:
    std::string name_;
    MapFn phi_;
    JacobianFn jacobian_;
    std::optional<MapFn> inverse_;
    DetFn det_;
    Smoothness smoothness_;
};

/// A(s, t, z): diffusion matrix of the physical problem.
template <int Dim>
using DiffusionFn = std::function<SquareMatrix<Dim>(const Point<Dim>& s, double t, double z)>;

/// J^{-1} A J^{-T} from an LU factorization of J (two solves, no explicit inverse).
template <int Dim>
SquareMatrix<Dim> pull_back_diffusion(const SquareMatrix<Dim>& jac, const SquareMatrix<Dim>& a)
{
    const double det = jac.determinant();
    if (!(std::abs(det) >= 1e-12)) {
        throw SingularJacobian("Jacobian determinant " + std::to_string(det) + " is below 1e-12 in magnitude");
    }
    const Eigen::PartialPivLU<SquareMatrix<Dim>> lu(jac);
    const SquareMatrix<Dim> left = lu.solve(a);                         // J^{-1} A
    const SquareMatrix<Dim> right = lu.solve(left.transpose());         // J^{-1} (J^{-1} A)^T
    return right.transpose();
}

/// Transformed diffusion x, t, z -> J(x)^{-1} A(Phi(x), t, z) J(x)^{-T}.
template <int Dim>
class TransformedDiffusion {
public:
    TransformedDiffusion(const MappedDomain<Dim>& domain, DiffusionFn<Dim> a) : domain_(domain), a_(std::move(a)) {}

    [[nodiscard]] SquareMatrix<Dim> operator()(const Point<Dim>& x, double t, double z) const
    {
        return pull_back_diffusion<Dim>(domain_.jacobian(x), a_(domain_.phi(x), t, z));
    }

private:
    const MappedDomain<Dim>& domain_;
    DiffusionFn<Dim> a_;
};

template <int Dim>
TransformedDiffusion<Dim> a_tilde(const MappedDomain<Dim>& domain, DiffusionFn<Dim> a)
{
    return TransformedDiffusion<Dim>(domain, std::move(a));
}

template <int Dim>
DiffusionFn<Dim> identity_diffusion()
{
    return [](const Point<Dim>&, double, double) { return SquareMatrix<Dim>::Identity().eval(); };
}

template <int Dim>
MappedDomain<Dim> identity_ball()
{
    static_assert(Dim == 2 || Dim == 3, "identity_ball: dimension must be 2 or 3");
    using P = Point<Dim>;
    return MappedDomain<Dim>(
        Dim == 2 ? "disk" : "ball", [](const P& x) { return x; },
        [](const P&) { return SquareMatrix<Dim>::Identity().eval(); }, [](const P& s) { return s; },
        [](const P&) { return 1.0; }, Smoothness::analytic);
}

/// Phi(x) = (x1 - x2 + a x1^2, x1 + x2, 2 x3 + b x3^2), 0 < a, b < 1, with closed-form inverse.
MappedDomain<3> mapped3d_example(double a, double b);

/// Boundary radius rho(theta) of a star-like planar domain and its derivative.
struct StarlikeBoundary {
    std::string name;
    std::function<double(double)> rho;
    std::function<double(double)> drho;
};

/// rho = 3 + cos(theta) + 2 sin(theta)
StarlikeBoundary limacon_boundary();
/// rho = 5 + sin(theta) + sin(3 theta) - cos(5 theta)
StarlikeBoundary amoeba_boundary();

enum class ExtensionMode {
    /// Phi(x) = [sigma(r) rho(theta) + (1 - sigma(r)) rho_ref] x with sigma(r) = 3r^2 - 2r^3.
    smoothed,
    /// Phi(x) = rho(theta) x; only continuous at the origin.
    radial,
};

/// Reference radius used by the smoothed extension: min(mean rho, 2 min rho).
double starlike_reference_radius(const StarlikeBoundary& boundary);

MappedDomain<2> starlike2d(const StarlikeBoundary& boundary, ExtensionMode mode = ExtensionMode::smoothed);

/// Phi_t = sum of c * x1^i1 x2^i2 (x3^i3) over the terms with component t (0-based).
template <int Dim>
struct PolynomialMap {
    struct Term {
        int component = 0;
        std::array<int, Dim> powers{};
        double coefficient = 0.0;
    };
    std::vector<Term> terms;
};

/// Reads `target_component i1 i2 [i3] coefficient` lines; components are 1-based in the
/// file. Blank lines and lines starting with '#' are ignored.
template <int Dim>
PolynomialMap<Dim> parse_polynomial_map(std::istream& in);

template <int Dim>
PolynomialMap<Dim> load_polynomial_map(const std::string& path);

template <int Dim>
MappedDomain<Dim> polynomial_domain(PolynomialMap<Dim> map, std::string name = "polynomial");

}  // namespace specball
