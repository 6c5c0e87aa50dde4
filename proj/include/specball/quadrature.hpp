#pragma once

// Gauss rules on intervals and product rules on the unit disk and unit ball.

#include <cmath>
#include <iosfwd>
#include <memory>
#include <numbers>
#include <string>
#include <utility>

#include <Eigen/Eigenvalues>

#include "specball/errors.hpp"
#include "specball/types.hpp"

namespace specball {

template <typename Scalar = double>
struct Rule1D {
    VectorX<Scalar> nodes;
    VectorX<Scalar> weights;

    [[nodiscard]] Eigen::Index size() const { return nodes.size(); }

    template <typename F>
    [[nodiscard]] Scalar integrate(F&& f) const
    {
        Scalar sum(0);
        for (Eigen::Index i = 0; i < nodes.size(); ++i) {
            sum += weights[i] * f(nodes[i]);
        }
        return sum;
    }
};

/// Node/weight set on the open unit ball B_d; nodes are stored column-wise (dim x M).
template <typename Scalar = double>
struct BallRule {
    int dim = 2;
    int q = 1;
    MatrixX<Scalar> nodes;
    VectorX<Scalar> weights;

    [[nodiscard]] Eigen::Index size() const { return weights.size(); }

    template <typename F>
    [[nodiscard]] Scalar integrate(F&& f) const
    {
        Scalar sum(0);
        for (Eigen::Index i = 0; i < weights.size(); ++i) {
            sum += weights[i] * f(nodes.col(i));
        }
        return sum;
    }
};

/// Three-term recurrence of the orthonormal polynomials for a weight on [-1,1]:
/// t p_j = b_{j+1} p_{j+1} + a_j p_j + b_j p_{j-1},  p_0 = 1/sqrt(mu0).
template <typename Scalar = double>
struct Recurrence {
    VectorX<Scalar> a;  // a_0 .. a_{n-1}
    VectorX<Scalar> b;  // b_0 (unused, 0) .. b_n
    Scalar mu0;         // total mass of the weight
};

/// Recurrence coefficients for the Jacobi weight (1-t)^alpha (1+t)^beta, alpha, beta > -1.
template <typename Scalar = double>
Recurrence<Scalar> jacobi_recurrence(int n, Scalar alpha, Scalar beta)
{
    if (n < 0) {
        throw InvalidArgument("jacobi_recurrence: n must be >= 0");
    }
    if (!(alpha > Scalar(-1)) || !(beta > Scalar(-1))) {
        throw InvalidArgument("jacobi_recurrence: exponents must exceed -1");
    }
    using std::exp;
    using std::lgamma;
    using std::log;
    using std::sqrt;
    Recurrence<Scalar> rec;
    rec.a.resize(n);
    rec.b.resize(n + 1);
    rec.b[0] = Scalar(0);
    const Scalar ab = alpha + beta;
    rec.mu0 = exp((ab + 1) * log(Scalar(2)) + lgamma(alpha + 1) + lgamma(beta + 1) - lgamma(ab + 2));
    for (int j = 0; j < n; ++j) {
        const Scalar s = Scalar(2 * j) + ab;
        if (j == 0) {
            rec.a[0] = (beta - alpha) / (ab + 2);
        } else {
            rec.a[j] = (beta * beta - alpha * alpha) / (s * (s + 2));
        }
    }
    for (int j = 1; j <= n; ++j) {
        const Scalar s = Scalar(2 * j) + ab;
        const Scalar num = Scalar(4 * j) * (j + alpha) * (j + beta) * (j + ab);
        const Scalar den = s * s * (s + 1) * (s - 1);
        rec.b[j] = sqrt(num / den);
    }
    return rec;
}

/// Values of the orthonormal polynomials p_0..p_n (and derivatives) at t.
template <typename Scalar>
std::pair<VectorX<Scalar>, VectorX<Scalar>> orthonormal_values(const Recurrence<Scalar>& rec, int n, Scalar t)
{
    VectorX<Scalar> p(n + 1);
    VectorX<Scalar> dp(n + 1);
    using std::sqrt;
    p[0] = Scalar(1) / sqrt(rec.mu0);
    dp[0] = Scalar(0);
    if (n >= 1) {
        p[1] = (t - rec.a[0]) * p[0] / rec.b[1];
        dp[1] = p[0] / rec.b[1];
    }
    for (int j = 1; j < n; ++j) {
        p[j + 1] = ((t - rec.a[j]) * p[j] - rec.b[j] * p[j - 1]) / rec.b[j + 1];
        dp[j + 1] = ((t - rec.a[j]) * dp[j] + p[j] - rec.b[j] * dp[j - 1]) / rec.b[j + 1];
    }
    return {p, dp};
}

/// m-point Gauss-Legendre rule on [lo, hi].
template <typename Scalar = double>
Rule1D<Scalar> gauss_legendre(int m, Scalar lo = Scalar(-1), Scalar hi = Scalar(1))
{
    if (m < 1) {
        throw InvalidArgument("gauss_legendre: number of points must be >= 1");
    }
    if (!(hi > lo)) {
        throw InvalidArgument("gauss_legendre: interval must satisfy lo < hi");
    }
    using std::abs;
    using std::cos;
    const Scalar pi = std::numbers::pi_v<Scalar>;
    const Scalar eps = Scalar(1e-15);
    VectorX<Scalar> x(m);
    VectorX<Scalar> w(m);
    // Roots are symmetric; solve for the upper half and mirror.
    for (int i = 0; i < (m + 1) / 2; ++i) {
        Scalar z = cos(pi * (Scalar(i) + Scalar(0.75)) / (Scalar(m) + Scalar(0.5)));
        Scalar dp = Scalar(1);
        for (int iter = 0; iter < 100; ++iter) {
            Scalar p0 = Scalar(1);
            Scalar p1 = z;
            for (int k = 2; k <= m; ++k) {
                const Scalar pk = (Scalar(2 * k - 1) * z * p1 - Scalar(k - 1) * p0) / Scalar(k);
                p0 = p1;
                p1 = pk;
            }
            dp = Scalar(m) * (z * p1 - p0) / (z * z - Scalar(1));
            const Scalar dz = p1 / dp;
            z -= dz;
            if (abs(dz) <= eps * (Scalar(1) + abs(z))) {
                break;
            }
        }
        // Re-evaluate P_m' at the converged root for the weight.
        Scalar p0 = Scalar(1);
        Scalar p1 = z;
        for (int k = 2; k <= m; ++k) {
            const Scalar pk = (Scalar(2 * k - 1) * z * p1 - Scalar(k - 1) * p0) / Scalar(k);
            p0 = p1;
            p1 = pk;
        }
        dp = Scalar(m) * (z * p1 - p0) / (z * z - Scalar(1));
        const Scalar wi = Scalar(2) / ((Scalar(1) - z * z) * dp * dp);
        x[i] = -z;
        x[m - 1 - i] = z;
        w[i] = wi;
        w[m - 1 - i] = wi;
    }
    if (m % 2 == 1) {
        x[m / 2] = Scalar(0);
    }
    const Scalar half = (hi - lo) / Scalar(2);
    const Scalar mid = (hi + lo) / Scalar(2);
    return {(mid + half * x.array()).matrix(), (half * w.array()).matrix()};
}

/// m-point Gauss-Jacobi rule on [-1,1] for the weight (1-t)^alpha (1+t)^beta.
/// Golub-Welsch eigen-decomposition, then Newton polish of each node on the
/// orthonormal recurrence with Christoffel-number weights.
template <typename Scalar = double>
Rule1D<Scalar> gauss_jacobi(int m, Scalar alpha, Scalar beta)
{
    if (m < 1) {
        throw InvalidArgument("gauss_jacobi: number of points must be >= 1");
    }
    const auto rec = jacobi_recurrence<Scalar>(m, alpha, beta);
    MatrixX<Scalar> jac = MatrixX<Scalar>::Zero(m, m);
    for (int j = 0; j < m; ++j) {
        jac(j, j) = rec.a[j];
        if (j + 1 < m) {
            jac(j, j + 1) = rec.b[j + 1];
            jac(j + 1, j) = rec.b[j + 1];
        }
    }
    Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> eig(jac);
    Rule1D<Scalar> rule;
    rule.nodes = eig.eigenvalues();
    rule.weights.resize(m);
    for (int i = 0; i < m; ++i) {
        Scalar t = rule.nodes[i];
        for (int iter = 0; iter < 3; ++iter) {
            const auto [p, dp] = orthonormal_values(rec, m, t);
            if (dp[m] == Scalar(0)) {
                break;
            }
            t -= p[m] / dp[m];
        }
        rule.nodes[i] = t;
        const auto [p, dp] = orthonormal_values(rec, m - 1, t);
        rule.weights[i] = Scalar(1) / p.squaredNorm();
    }
    return rule;
}

/// Gauss rule for the weight r^2 on [0,1]: nodes (zeta_k + 1)/2 from Gauss-Jacobi(0,2).
template <typename Scalar = double>
Rule1D<Scalar> radial_r2_rule(int q)
{
    if (q < 1) {
        throw InvalidArgument("radial_r2_rule: q must be >= 1");
    }
    auto rule = gauss_jacobi<Scalar>(q, Scalar(0), Scalar(2));
    rule.nodes = ((rule.nodes.array() + Scalar(1)) / Scalar(2)).matrix();
    rule.weights /= Scalar(8);
    return rule;
}

/// (q+1)-point radial Gauss-Legendre x (2q+1)-point trapezoid in angle; exact on Pi_{2q}(B_2).
template <typename Scalar = double>
BallRule<Scalar> disk_rule(int q)
{
    if (q < 1) {
        throw InvalidArgument("disk_rule: q must be >= 1");
    }
    using std::cos;
    using std::sin;
    const Scalar pi = std::numbers::pi_v<Scalar>;
    const auto radial = gauss_legendre<Scalar>(q + 1, Scalar(0), Scalar(1));
    const int n_angle = 2 * q + 1;
    const Scalar dtheta = Scalar(2) * pi / Scalar(n_angle);
    BallRule<Scalar> rule;
    rule.dim = 2;
    rule.q = q;
    rule.nodes.resize(2, (q + 1) * n_angle);
    rule.weights.resize((q + 1) * n_angle);
    Eigen::Index idx = 0;
    for (int l = 0; l <= q; ++l) {
        const Scalar r = radial.nodes[l];
        for (int m = 0; m < n_angle; ++m) {
            const Scalar theta = dtheta * Scalar(m);
            rule.nodes(0, idx) = r * cos(theta);
            rule.nodes(1, idx) = r * sin(theta);
            rule.weights[idx] = radial.weights[l] * dtheta * r;
            ++idx;
        }
    }
    return rule;
}

/// 2q azimuthal trapezoid points x q Gauss-Legendre points in cos(polar) x q r^2-weighted
/// radial points; 2q^3 nodes.
template <typename Scalar = double>
BallRule<Scalar> ball_rule(int q)
{
    if (q < 1) {
        throw InvalidArgument("ball_rule: q must be >= 1");
    }
    using std::cos;
    using std::sin;
    using std::sqrt;
    const Scalar pi = std::numbers::pi_v<Scalar>;
    const auto polar = gauss_legendre<Scalar>(q);
    const auto radial = radial_r2_rule<Scalar>(q);
    BallRule<Scalar> rule;
    rule.dim = 3;
    rule.q = q;
    const Eigen::Index total = 2 * Eigen::Index(q) * q * q;
    rule.nodes.resize(3, total);
    rule.weights.resize(total);
    Eigen::Index idx = 0;
    for (int i = 1; i <= 2 * q; ++i) {
        const Scalar theta = pi * Scalar(i) / Scalar(q);
        const Scalar ct = cos(theta);
        const Scalar st = sin(theta);
        for (int j = 0; j < q; ++j) {
            const Scalar xi = polar.nodes[j];
            const Scalar sphi = sqrt(Scalar(1) - xi * xi);
            for (int k = 0; k < q; ++k) {
                const Scalar r = radial.nodes[k];
                rule.nodes(0, idx) = r * sphi * ct;
                rule.nodes(1, idx) = r * sphi * st;
                rule.nodes(2, idx) = r * xi;
                rule.weights[idx] = pi / Scalar(q) * polar.weights[j] * radial.weights[k];
                ++idx;
            }
        }
    }
    return rule;
}

/// disk_rule (dim 2) or ball_rule (dim 3).
template <typename Scalar = double>
BallRule<Scalar> unit_ball_rule(int dim, int q)
{
    if (dim == 2) {
        return disk_rule<Scalar>(q);
    }
    if (dim == 3) {
        return ball_rule<Scalar>(q);
    }
    throw InvalidArgument("unit_ball_rule: dimension must be 2 or 3");
}

/// Shared immutable rule for (dim, q); generated on first request.
std::shared_ptr<const BallRule<double>> cached_ball_rule(int dim, int q);

/// CSV with columns x1[,x2[,x3]],weight at 17 significant digits.
void write_rule_csv(std::ostream& out, const BallRule<double>& rule);
void write_rule_csv(std::ostream& out, const Rule1D<double>& rule);

}  // namespace specball
