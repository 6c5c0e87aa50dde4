#pragma once

// Orthonormal basis of Pi_n(B_3): c_{m,j} |x|^{m-2j} p_j(2|x|^2-1) S_{beta,m-2j}(x/|x|),
// with p_j orthonormal for the weight (1+t)^{m-2j+1/2} on [-1,1] and S real spherical
// harmonics orthonormal on the unit sphere.
//
// The factor |x|^l S_{beta,l}(x/|x|) is a homogeneous harmonic polynomial (a solid harmonic)
// and is evaluated directly in Cartesian coordinates, so values and gradients are
// regular everywhere including the origin and the poles.

#include <array>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "specball/basis2d.hpp"
#include "specball/errors.hpp"
#include "specball/quadrature.hpp"
#include "specball/types.hpp"

namespace specball {

/// Normalized Jacobi polynomials p_0..p_jmax, orthonormal for (1+t)^alpha on [-1,1].
template <typename Scalar = double>
std::pair<VectorX<Scalar>, VectorX<Scalar>> jacobi_normalized(int jmax, Scalar alpha, Scalar t)
{
    using std::abs;
    if (jmax < 0) {
        throw InvalidArgument("jacobi_normalized: jmax must be >= 0");
    }
    if (alpha < Scalar(0)) {
        throw InvalidArgument("jacobi_normalized: alpha must be >= 0");
    }
    if (abs(t) > Scalar(1) + Scalar(1e-12)) {
        throw InvalidArgument("jacobi_normalized: t must lie in [-1,1]");
    }
    const auto rec = jacobi_recurrence<Scalar>(jmax, Scalar(0), alpha);
    return orthonormal_values(rec, jmax, t);
}

/// Position of S_{beta,k} in a flat harmonic table ordered by k then beta.
constexpr int harmonic_index(int k, int beta) { return k * k + beta; }

/// beta -> azimuthal order and parity: beta = 0 is the zonal term, odd beta = 2l-1 is
/// sin(l phi), even beta = 2l is cos(l phi).
constexpr int harmonic_order(int beta) { return (beta + 1) / 2; }

/// Solid harmonics R_{beta,k}(x) = |x|^k S_{beta,k}(x/|x|) for k <= kmax with gradients.
template <typename Scalar = double>
struct SolidHarmonics {
    VectorX<Scalar> values;
    GradientMatrix<3, Scalar> gradients;
};

template <typename Scalar = double>
SolidHarmonics<Scalar> solid_harmonics(int kmax, const Point<3, Scalar>& x)
{
    if (kmax < 0) {
        throw InvalidArgument("solid_harmonics: kmax must be >= 0");
    }
    using std::sqrt;
    const int total = (kmax + 1) * (kmax + 1);
    SolidHarmonics<Scalar> out;
    out.values.setZero(total);
    out.gradients.setZero(total, 3);
    const Scalar r2 = x.squaredNorm();
    using Row = Eigen::Matrix<Scalar, 1, 3>;
    const Row ex(1, 0, 0);
    const Row ey(0, 1, 0);
    const Row ez(0, 0, 1);

    // Sectoral pair (cos, sin) for the current order m.
    Scalar c = Scalar(1) / sqrt(Scalar(4) * std::numbers::pi_v<Scalar>);
    Scalar s = Scalar(0);
    Row gc = Row::Zero();
    Row gs = Row::Zero();
    for (int m = 0; m <= kmax; ++m) {
        if (m > 0) {
            Scalar f = sqrt(Scalar(2 * m + 1) / Scalar(2 * m));
            if (m == 1) {
                f *= sqrt(Scalar(2));
            }
            const Scalar cn = f * (x[0] * c - x[1] * s);
            const Scalar sn = f * (x[0] * s + x[1] * c);
            const Row gcn = f * (ex * c + x[0] * gc - ey * s - x[1] * gs);
            const Row gsn = f * (ex * s + x[0] * gs + ey * c + x[1] * gc);
            c = cn;
            s = sn;
            gc = gcn;
            gs = gsn;
        }
        const int parts = (m == 0) ? 1 : 2;
        for (int part = 0; part < parts; ++part) {
            // part 0: cos term (beta = 2m), part 1: sin term (beta = 2m-1)
            const int beta = (part == 0) ? 2 * m : 2 * m - 1;
            Scalar prev2 = Scalar(0);
            Row gprev2 = Row::Zero();
            Scalar prev1 = (part == 0) ? c : s;
            Row gprev1 = (part == 0) ? gc : gs;
            out.values[harmonic_index(m, beta)] = prev1;
            out.gradients.row(harmonic_index(m, beta)) = gprev1;
            for (int l = m + 1; l <= kmax; ++l) {
                const Scalar ll = Scalar(l);
                const Scalar mm = Scalar(m);
                const Scalar a = sqrt((Scalar(4) * ll * ll - Scalar(1)) / (ll * ll - mm * mm));
                const Scalar b = sqrt(((ll - 1) * (ll - 1) - mm * mm) / (Scalar(4) * (ll - 1) * (ll - 1) - Scalar(1)));
                const Scalar cur = a * (x[2] * prev1 - b * r2 * prev2);
                const Row gcur =
                    a * (ez * prev1 + x[2] * gprev1 - b * (Scalar(2) * x.transpose() * prev2 + r2 * gprev2));
                out.values[harmonic_index(l, beta)] = cur;
                out.gradients.row(harmonic_index(l, beta)) = gcur;
                prev2 = prev1;
                gprev2 = gprev1;
                prev1 = cur;
                gprev1 = gcur;
            }
        }
    }
    return out;
}

template <typename Scalar = double>
struct SphericalHarmonicEval {
    VectorX<Scalar> values;  // S_{beta,k}, flat index harmonic_index(k, beta)
    VectorX<Scalar> d_phi;   // derivative in azimuth
    VectorX<Scalar> d_theta; // derivative in polar angle
};

/// Real spherical harmonics S_{beta,k}(phi, theta), phi azimuth, theta polar angle.
template <typename Scalar = double>
SphericalHarmonicEval<Scalar> spherical_harmonics(int kmax, Scalar phi, Scalar theta)
{
    using std::cos;
    using std::sin;
    const Point<3, Scalar> u(sin(theta) * cos(phi), sin(theta) * sin(phi), cos(theta));
    const Point<3, Scalar> du_dphi(-sin(theta) * sin(phi), sin(theta) * cos(phi), Scalar(0));
    const Point<3, Scalar> du_dtheta(cos(theta) * cos(phi), cos(theta) * sin(phi), -sin(theta));
    const auto solid = solid_harmonics<Scalar>(kmax, u);
    SphericalHarmonicEval<Scalar> out;
    out.values = solid.values;
    out.d_phi = solid.gradients * du_dphi;
    out.d_theta = solid.gradients * du_dtheta;
    return out;
}

/// Index bookkeeping for the degree-n ball basis: triples (m, j, beta) with m = 0..n,
/// j = 0..floor(m/2), beta = 0..2(m-2j), in lexicographic order.
struct BasisSet3D {
    int degree = 0;

    [[nodiscard]] static constexpr int dimension(int n) { return (n + 1) * (n + 2) * (n + 3) / 6; }
    [[nodiscard]] int size() const { return dimension(degree); }

    [[nodiscard]] static constexpr int flat_index(int m, int j, int beta)
    {
        int idx = (m == 0) ? 0 : dimension(m - 1);
        for (int jj = 0; jj < j; ++jj) {
            idx += 2 * (m - 2 * jj) + 1;
        }
        return idx + beta;
    }

    [[nodiscard]] std::vector<std::array<int, 3>> triples() const
    {
        std::vector<std::array<int, 3>> out;
        out.reserve(size());
        for (int m = 0; m <= degree; ++m) {
            for (int j = 0; j <= m / 2; ++j) {
                for (int beta = 0; beta <= 2 * (m - 2 * j); ++beta) {
                    out.push_back({m, j, beta});
                }
            }
        }
        return out;
    }
};

/// Closed-form normalization 2^{5/4 + m/2 - j}.
template <typename Scalar = double>
Scalar ball3_normalization(int m, int j)
{
    return std::pow(Scalar(2), Scalar(1.25) + Scalar(m) / Scalar(2) - Scalar(j));
}

/// Precomputed evaluator for the degree-n ball basis and its bubble counterpart.
template <typename Scalar = double>
class BallBasis3 {
public:
    explicit BallBasis3(int n) : set_{n}, triples_(set_.triples())
    {
        if (n < 0) {
            throw InvalidArgument("BallBasis3: degree must be >= 0");
        }
        recurrences_.reserve(n + 1);
        for (int l = 0; l <= n; ++l) {
            recurrences_.push_back(jacobi_recurrence<Scalar>((n - l) / 2, Scalar(0), Scalar(l) + Scalar(0.5)));
        }
        norms_.resize(static_cast<int>(triples_.size()));
        for (std::size_t i = 0; i < triples_.size(); ++i) {
            norms_[static_cast<int>(i)] = ball3_normalization<Scalar>(triples_[i][0], triples_[i][1]);
        }
    }

    [[nodiscard]] int degree() const { return set_.degree; }
    [[nodiscard]] int size() const { return set_.size(); }
    [[nodiscard]] const std::vector<std::array<int, 3>>& triples() const { return triples_; }

    [[nodiscard]] VectorX<Scalar> values(const Point<3, Scalar>& x) const
    {
        return evaluate(x, false).values;
    }

    /// Bubble values (1-|x|^2) phi and their Cartesian gradients.
    [[nodiscard]] BubbleEval<3, Scalar> bubble(const Point<3, Scalar>& x) const
    {
        const auto plain = evaluate(x, true);
        const Scalar factor = Scalar(1) - x.squaredNorm();
        BubbleEval<3, Scalar> out;
        out.values = factor * plain.values;
        out.gradients = factor * plain.gradients - Scalar(2) * plain.values * x.transpose();
        return out;
    }

private:
    [[nodiscard]] BubbleEval<3, Scalar> evaluate(const Point<3, Scalar>& x, bool with_gradient) const
    {
        const int n = set_.degree;
        const Scalar r2 = x.squaredNorm();
        Scalar t = Scalar(2) * r2 - Scalar(1);
        if (t > Scalar(1)) {
            t = Scalar(1);
        }
        const auto solid = solid_harmonics<Scalar>(n, x);
        std::vector<std::pair<VectorX<Scalar>, VectorX<Scalar>>> radial;
        radial.reserve(n + 1);
        for (int l = 0; l <= n; ++l) {
            radial.push_back(orthonormal_values(recurrences_[l], (n - l) / 2, t));
        }
        BubbleEval<3, Scalar> out;
        out.values.resize(size());
        if (with_gradient) {
            out.gradients.resize(size(), 3);
        }
        for (std::size_t i = 0; i < triples_.size(); ++i) {
            const auto [m, j, beta] = triples_[i];
            const int l = m - 2 * j;
            const int h = harmonic_index(l, beta);
            const Scalar c = norms_[static_cast<int>(i)];
            const Scalar p = radial[l].first[j];
            out.values[static_cast<int>(i)] = c * p * solid.values[h];
            if (with_gradient) {
                const Scalar dp = radial[l].second[j];
                out.gradients.row(static_cast<int>(i)) =
                    c * (Scalar(4) * dp * solid.values[h] * x.transpose() + p * solid.gradients.row(h));
            }
        }
        return out;
    }

    BasisSet3D set_;
    std::vector<std::array<int, 3>> triples_;
    std::vector<Recurrence<Scalar>> recurrences_;
    VectorX<Scalar> norms_;
};

template <typename Scalar = double>
VectorX<Scalar> ball3_basis(int n, const Point<3, Scalar>& x)
{
    return BallBasis3<Scalar>(n).values(x);
}

template <typename Scalar = double>
BubbleEval<3, Scalar> bubble_basis3(int n, const Point<3, Scalar>& x)
{
    return BallBasis3<Scalar>(n).bubble(x);
}

/// Largest deviation of the quadrature Gram diagonal from one for the closed-form
/// normalization at degree n. Computed once per degree; writes a warning to stderr if it
/// exceeds 1e-10.
double ball3_normalization_check(int n);

}  // namespace specball
