#pragma once

// Ridge-polynomial orthonormal basis of Pi_n(B_2) and the bubble basis (1-|x|^2) phi.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "specball/errors.hpp"
#include "specball/types.hpp"

namespace specball {

template <typename Scalar = double>
struct ChebyshevEval {
    VectorX<Scalar> values;       // U_0(t) .. U_n(t)
    VectorX<Scalar> derivatives;  // U_0'(t) .. U_n'(t)
};

/// Chebyshev polynomials of the second kind and their derivatives by the three-term recurrence.
/// Arguments within 1e-12 outside [-1,1] are clamped.
template <typename Scalar = double>
ChebyshevEval<Scalar> chebyshev_u(int n, Scalar t)
{
    if (n < 0) {
        throw InvalidArgument("chebyshev_u: degree must be >= 0");
    }
    using std::abs;
    if (abs(t) > Scalar(1) && abs(t) <= Scalar(1) + Scalar(1e-12)) {
        t = std::clamp(t, Scalar(-1), Scalar(1));
    }
    ChebyshevEval<Scalar> out;
    out.values.resize(n + 1);
    out.derivatives.resize(n + 1);
    out.values[0] = Scalar(1);
    out.derivatives[0] = Scalar(0);
    if (n >= 1) {
        out.values[1] = Scalar(2) * t;
        out.derivatives[1] = Scalar(2);
    }
    for (int k = 1; k < n; ++k) {
        out.values[k + 1] = Scalar(2) * t * out.values[k] - out.values[k - 1];
        out.derivatives[k + 1] =
            Scalar(2) * out.values[k] + Scalar(2) * t * out.derivatives[k] - out.derivatives[k - 1];
    }
    return out;
}

/// Index bookkeeping for the degree-n ridge basis. Functions phi_{m,k}, 0 <= k <= m <= n,
/// are listed lexicographically: (0,0), (1,0), (1,1), (2,0), ...
struct BasisSet2D {
    int degree = 0;

    [[nodiscard]] static constexpr int dimension(int n) { return (n + 1) * (n + 2) / 2; }
    [[nodiscard]] int size() const { return dimension(degree); }

    [[nodiscard]] static constexpr int flat_index(int m, int k) { return m * (m + 1) / 2 + k; }

    /// Inverse of flat_index: returns (m, k).
    [[nodiscard]] static std::pair<int, int> degree_index(int flat)
    {
        int m = 0;
        while (dimension(m) <= flat) {
            ++m;
        }
        return {m, flat - flat_index(m, 0)};
    }
};

/// phi_{m,k}(x) = U_m(x1 cos(kh) + x2 sin(kh)) / sqrt(pi), h = pi/(m+1).
template <typename Scalar = double>
VectorX<Scalar> ridge_basis(int n, const Point<2, Scalar>& x)
{
    if (n < 0) {
        throw InvalidArgument("ridge_basis: degree must be >= 0");
    }
    using std::cos;
    using std::sin;
    const Scalar pi = std::numbers::pi_v<Scalar>;
    const Scalar scale = Scalar(1) / std::sqrt(pi);
    VectorX<Scalar> values(BasisSet2D::dimension(n));
    for (int m = 0; m <= n; ++m) {
        const Scalar h = pi / Scalar(m + 1);
        for (int k = 0; k <= m; ++k) {
            const Scalar t = x[0] * cos(Scalar(k) * h) + x[1] * sin(Scalar(k) * h);
            values[BasisSet2D::flat_index(m, k)] = scale * chebyshev_u<Scalar>(m, t).values[m];
        }
    }
    return values;
}

template <int Dim, typename Scalar = double>
struct BubbleEval {
    VectorX<Scalar> values;
    GradientMatrix<Dim, Scalar> gradients;
};

/// psi_{m,k} = (1 - |x|^2) phi_{m,k} with Cartesian gradients.
template <typename Scalar = double>
BubbleEval<2, Scalar> bubble_basis(int n, const Point<2, Scalar>& x)
{
    if (n < 0) {
        throw InvalidArgument("bubble_basis: degree must be >= 0");
    }
    using std::cos;
    using std::sin;
    const Scalar pi = std::numbers::pi_v<Scalar>;
    const Scalar scale = Scalar(1) / std::sqrt(pi);
    const Scalar bubble = Scalar(1) - x.squaredNorm();
    const int size = BasisSet2D::dimension(n);
    BubbleEval<2, Scalar> out;
    out.values.resize(size);
    out.gradients.resize(size, 2);
    for (int m = 0; m <= n; ++m) {
        const Scalar h = pi / Scalar(m + 1);
        for (int k = 0; k <= m; ++k) {
            const Point<2, Scalar> dir(cos(Scalar(k) * h), sin(Scalar(k) * h));
            const auto u = chebyshev_u<Scalar>(m, dir.dot(x));
            const Scalar phi = scale * u.values[m];
            const Point<2, Scalar> grad_phi = scale * u.derivatives[m] * dir;
            const int idx = BasisSet2D::flat_index(m, k);
            out.values[idx] = bubble * phi;
            out.gradients.row(idx) = (bubble * grad_phi - Scalar(2) * phi * x).transpose();
        }
    }
    return out;
}

}  // namespace specball
