#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "specball/basis.hpp"
#include "specball/quadrature.hpp"

using namespace specball;
using std::numbers::pi;

TEST(JacobiNormalized, ConstantTerm)
{
    // p_0 = 1 / sqrt(int_{-1}^{1} (1+t)^alpha dt) = sqrt((alpha+1) / 2^{alpha+1}).
    for (const double alpha : {0.5, 1.5, 2.5, 4.5}) {
        const auto [p, dp] = jacobi_normalized(0, alpha, 0.3);
        EXPECT_NEAR(p[0], std::sqrt((alpha + 1.0) / std::pow(2.0, alpha + 1.0)), 1e-14);
        EXPECT_EQ(dp[0], 0.0);
    }
}

TEST(JacobiNormalized, OrthonormalUnderGaussJacobi)
{
    for (const double alpha : {0.5, 2.5, 5.5}) {
        const int jmax = 6;
        const auto rule = gauss_jacobi(jmax + 1, 0.0, alpha);
        Matrix gram = Matrix::Zero(jmax + 1, jmax + 1);
        for (Eigen::Index i = 0; i < rule.size(); ++i) {
            const auto [p, dp] = jacobi_normalized(jmax, alpha, rule.nodes[i]);
            gram.noalias() += rule.weights[i] * p * p.transpose();
        }
        EXPECT_LT((gram - Matrix::Identity(jmax + 1, jmax + 1)).cwiseAbs().maxCoeff(), 1e-12) << alpha;
    }
}

TEST(JacobiNormalized, DerivativeMatchesFiniteDifference)
{
    const double h = 1e-6;
    for (const double t : {-0.8, -0.1, 0.45, 0.9}) {
        const auto [p, dp] = jacobi_normalized(6, 1.5, t);
        const auto plus = jacobi_normalized(6, 1.5, t + h).first;
        const auto minus = jacobi_normalized(6, 1.5, t - h).first;
        for (int j = 0; j <= 6; ++j) {
            EXPECT_NEAR(dp[j], (plus[j] - minus[j]) / (2 * h), 1e-6 * (1.0 + std::abs(dp[j])));
        }
    }
}

TEST(JacobiNormalized, RejectsBadArguments)
{
    EXPECT_THROW(jacobi_normalized(-1, 0.5, 0.0), InvalidArgument);
    EXPECT_THROW(jacobi_normalized(2, -0.5, 0.0), InvalidArgument);
    EXPECT_THROW(jacobi_normalized(2, 0.5, 1.1), InvalidArgument);
}

TEST(SphericalHarmonics, ZonalConstant)
{
    const auto s = spherical_harmonics(0, 0.4, 1.1);
    EXPECT_NEAR(s.values[0], 1.0 / std::sqrt(4.0 * pi), 1e-15);
}

TEST(SphericalHarmonics, CountPerDegree)
{
    const auto s = spherical_harmonics(6, 0.2, 0.3);
    EXPECT_EQ(s.values.size(), 49);
    for (int k = 0; k <= 6; ++k) {
        EXPECT_EQ(harmonic_index(k + 1, 0) - harmonic_index(k, 0), 2 * k + 1);
    }
}

TEST(SphericalHarmonics, OrthonormalOnSphere)
{
    // Product rule on the sphere: 2q trapezoid points in phi x q Gauss-Legendre in cos(theta);
    // exact for harmonics up to degree 2q - 1.
    const int kmax = 6;
    const int q = kmax + 1;
    const auto polar = gauss_legendre(q);
    const int count = (kmax + 1) * (kmax + 1);
    Matrix gram = Matrix::Zero(count, count);
    for (int i = 0; i < 2 * q; ++i) {
        const double phi = pi * i / q;
        for (int j = 0; j < q; ++j) {
            const auto s = spherical_harmonics(kmax, phi, std::acos(polar.nodes[j]));
            gram.noalias() += (pi / q) * polar.weights[j] * s.values * s.values.transpose();
        }
    }
    EXPECT_LT((gram - Matrix::Identity(count, count)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(SphericalHarmonics, AngularDerivativesMatchFiniteDifferences)
{
    const double h = 1e-6;
    const double phi = 0.9;
    const double theta = 1.2;
    const auto s = spherical_harmonics(5, phi, theta);
    const auto sp = spherical_harmonics(5, phi + h, theta);
    const auto sm = spherical_harmonics(5, phi - h, theta);
    const auto tp = spherical_harmonics(5, phi, theta + h);
    const auto tm = spherical_harmonics(5, phi, theta - h);
    for (int k = 0; k < s.values.size(); ++k) {
        EXPECT_NEAR(s.d_phi[k], (sp.values[k] - sm.values[k]) / (2 * h), 1e-7);
        EXPECT_NEAR(s.d_theta[k], (tp.values[k] - tm.values[k]) / (2 * h), 1e-7);
    }
}

TEST(SolidHarmonics, AreHarmonic)
{
    for (const auto& x : oracle::random_ball_points<3>(5, 3u)) {
        for (int h = 0; h < 36; ++h) {
            const double lap =
                oracle::fd_laplacian<3>([&](const Point<3>& y) { return solid_harmonics(5, y).values[h]; }, x, 1e-3);
            EXPECT_NEAR(lap, 0.0, 1e-5) << h;
        }
    }
}

TEST(BallBasis3, DimensionAndCount)
{
    EXPECT_EQ(ball3_basis(2, Point<3>(0.1, 0.2, 0.3)).size(), 10);
    for (int n = 0; n <= 8; ++n) {
        EXPECT_EQ(BasisSet3D::dimension(n), (n + 1) * (n + 2) * (n + 3) / 6);
        EXPECT_EQ(int(BasisSet3D{n}.triples().size()), BasisSet3D::dimension(n));
    }
    const BasisSet3D set{5};
    const auto triples = set.triples();
    for (std::size_t i = 0; i < triples.size(); ++i) {
        EXPECT_EQ(BasisSet3D::flat_index(triples[i][0], triples[i][1], triples[i][2]), int(i));
    }
}

TEST(BallBasis3, OrthonormalOnBall)
{
    for (int n = 0; n <= 6; ++n) {
        const auto rule = ball_rule(n + 2);
        const BallBasis3<double> basis(n);
        Matrix gram = Matrix::Zero(basis.size(), basis.size());
        for (Eigen::Index i = 0; i < rule.size(); ++i) {
            const Vector v = basis.values(Point<3>(rule.nodes.col(i)));
            gram.noalias() += rule.weights[i] * v * v.transpose();
        }
        EXPECT_LT((gram - Matrix::Identity(basis.size(), basis.size())).cwiseAbs().maxCoeff(), 1e-12) << "n=" << n;
    }
}

TEST(BallBasis3, NormalizationCheckIsSmall)
{
    for (int n = 0; n <= 8; ++n) {
        EXPECT_LT(ball3_normalization_check(n), 1e-10);
    }
}

TEST(BallBasis3, ConstantFunctionAndOrigin)
{
    const BallBasis3<double> basis(4);
    const Vector at_origin = basis.values(Point<3>::Zero());
    // The (0,0,0) function is the constant sqrt(3 / (4 pi)).
    EXPECT_NEAR(at_origin[0], std::sqrt(3.0 / (4.0 * pi)), 1e-14);
    EXPECT_NEAR(basis.values(Point<3>(0.2, -0.5, 0.6))[0], std::sqrt(3.0 / (4.0 * pi)), 1e-14);
    // Every function with a nonconstant angular factor vanishes at the origin.
    for (std::size_t i = 0; i < basis.triples().size(); ++i) {
        const auto [m, j, beta] = basis.triples()[i];
        if (m - 2 * j > 0) {
            EXPECT_NEAR(at_origin[int(i)], 0.0, 1e-15);
        }
    }
}

TEST(BallBasis3, PolynomialAlongLines)
{
    // Restricted to a line the degree-n basis is a polynomial of degree <= n in the line
    // parameter, so its (n+1)-th finite difference on equispaced samples vanishes.
    const int n = 5;
    const BallBasis3<double> basis(n);
    const Point<3> origin(0.1, -0.2, 0.05);
    const Point<3> dir = Point<3>(0.3, 0.5, -0.8).normalized();
    const double h = 0.1;
    Matrix samples(basis.size(), n + 2);
    for (int i = 0; i <= n + 1; ++i) {
        samples.col(i) = basis.values(Point<3>(origin + (i - 3) * h * dir));
    }
    for (int order = 0; order <= n; ++order) {
        for (int i = 0; i + 1 < samples.cols() - order; ++i) {
            samples.col(i) = samples.col(i + 1) - samples.col(i);
        }
    }
    EXPECT_LT(samples.col(0).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(BallBasis3, PassesThroughPoles)
{
    const BallBasis3<double> basis(6);
    const Point<3> pole(0.0, 0.0, 0.7);
    const Vector v = basis.values(pole);
    const Vector near = basis.values(Point<3>(1e-9, 0.0, 0.7));
    EXPECT_TRUE(v.allFinite());
    EXPECT_LT((v - near).cwiseAbs().maxCoeff(), 1e-7);
}

TEST(BubbleBasis3D, VanishesOnBoundaryAndGradientsMatchFiniteDifferences)
{
    const int n = 4;
    const BallBasis3<double> basis(n);
    EXPECT_LT(basis.bubble(Point<3>(0.6, 0.0, 0.8)).values.cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LT(basis.bubble(Point<3>(0.0, 0.0, -1.0)).values.cwiseAbs().maxCoeff(), 1e-14);
    for (const auto& x : oracle::random_ball_points<3>(12, 5u)) {
        const auto b = basis.bubble(x);
        for (int k = 0; k < basis.size(); ++k) {
            const auto g =
                oracle::fd_gradient<3>([&](const Point<3>& y) { return basis.bubble(y).values[k]; }, x);
            for (int d = 0; d < 3; ++d) {
                EXPECT_NEAR(b.gradients(k, d), g[d], 1e-6 * (1.0 + g.norm()));
            }
        }
    }
}

TEST(BubbleBasis3D, GradientAtOrigin)
{
    const BallBasis3<double> basis(3);
    const auto b = basis.bubble(Point<3>::Zero());
    EXPECT_TRUE(b.gradients.allFinite());
    const auto g = oracle::fd_gradient<3>([&](const Point<3>& y) { return basis.bubble(y).values[2]; },
                                          Point<3>::Zero());
    EXPECT_NEAR(b.gradients.row(2).norm(), g.norm(), 1e-7);
}
