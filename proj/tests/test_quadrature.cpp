#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "oracles.hpp"
#include "specball/quadrature.hpp"

using namespace specball;
using std::numbers::pi;

TEST(GaussLegendre, OnePointIsMidpoint)
{
    const auto r = gauss_legendre(1, 0.0, 1.0);
    ASSERT_EQ(r.size(), 1);
    EXPECT_NEAR(r.nodes[0], 0.5, 1e-15);
    EXPECT_NEAR(r.weights[0], 1.0, 1e-15);
}

TEST(GaussLegendre, TwoPointNodesFromMomentEquations)
{
    const auto r = gauss_legendre(2, 0.0, 1.0);
    const double off = 1.0 / (2.0 * std::sqrt(3.0));
    EXPECT_NEAR(r.nodes.minCoeff(), 0.5 - off, 1e-15);
    EXPECT_NEAR(r.nodes.maxCoeff(), 0.5 + off, 1e-15);
    EXPECT_NEAR(r.weights[0], 0.5, 1e-15);
    EXPECT_NEAR(r.weights[1], 0.5, 1e-15);
}

TEST(GaussLegendre, FivePointsIntegrateDegreeNine)
{
    const auto r = gauss_legendre(5, 0.0, 1.0);
    EXPECT_NEAR(r.integrate([](double t) { return std::pow(t, 9); }), 0.1, 1e-14);
}

TEST(GaussLegendre, ExactThroughDegree2mMinus1)
{
    for (int m = 1; m <= 30; ++m) {
        const auto r = gauss_legendre(m);
        for (int k = 0; k <= 2 * m - 1; ++k) {
            const double exact = (k % 2 == 1) ? 0.0 : 2.0 / (k + 1);
            EXPECT_NEAR(r.integrate([k](double t) { return std::pow(t, k); }), exact, 1e-13) << "m=" << m << " k=" << k;
        }
    }
}

TEST(GaussLegendre, RejectsNonPositiveCount)
{
    EXPECT_THROW(gauss_legendre(0), InvalidArgument);
    EXPECT_THROW(gauss_legendre(-3), InvalidArgument);
}

TEST(GaussJacobi, IntegratesWeightedMonomials)
{
    // Integer exponents make the weighted integrand a polynomial, so Gauss-Legendre is an exact
    // reference.
    const auto reference = gauss_legendre(20);
    for (const auto& [a, b] : std::vector<std::pair<int, int>>{{0, 0}, {0, 2}, {1, 3}, {2, 0}}) {
        const auto r = gauss_jacobi(6, double(a), double(b));
        for (int k = 0; k <= 11; ++k) {
            const double want = reference.integrate(
                [&](double t) { return std::pow(1 - t, a) * std::pow(1 + t, b) * std::pow(t, k); });
            EXPECT_NEAR(r.integrate([k](double t) { return std::pow(t, k); }), want, 1e-12)
                << "a=" << a << " b=" << b << " k=" << k;
        }
    }
}

TEST(RadialR2Rule, OnePoint)
{
    const auto r = radial_r2_rule(1);
    EXPECT_NEAR(r.nodes[0], 0.75, 1e-15);
    EXPECT_NEAR(r.weights[0], 1.0 / 3.0, 1e-15);
}

TEST(RadialR2Rule, WeightsSumToOneThird)
{
    for (int q = 1; q <= 20; ++q) {
        EXPECT_NEAR(radial_r2_rule(q).weights.sum(), 1.0 / 3.0, 1e-15) << q;
    }
}

TEST(RadialR2Rule, ThreePointsIntegrateR4)
{
    EXPECT_NEAR(radial_r2_rule(3).integrate([](double r) { return std::pow(r, 4); }), 1.0 / 7.0, 1e-14);
}

TEST(RadialR2Rule, ExactForR2TimesPolynomial)
{
    for (int q = 1; q <= 12; ++q) {
        const auto r = radial_r2_rule(q);
        for (int k = 0; k <= 2 * q - 1; ++k) {
            EXPECT_NEAR(r.integrate([k](double x) { return std::pow(x, k); }), 1.0 / (k + 3), 1e-14);
        }
        EXPECT_TRUE((r.nodes.array() > 0.0).all() && (r.nodes.array() < 1.0).all());
    }
}

TEST(DiskRule, AreaAndLowMoments)
{
    for (int q = 1; q <= 10; ++q) {
        const auto r = disk_rule(q);
        EXPECT_NEAR(r.integrate([](const auto&) { return 1.0; }), pi, 1e-14);
        EXPECT_NEAR(r.integrate([](const auto& x) { return x[0]; }), 0.0, 1e-14);
        EXPECT_NEAR(r.integrate([](const auto& x) { return x[0] * x[0]; }), pi / 4.0, 1e-13);
    }
}

TEST(DiskRule, PositiveWeightsAndInteriorNodes)
{
    for (int q = 1; q <= 12; ++q) {
        const auto r = disk_rule(q);
        EXPECT_EQ(r.size(), (q + 1) * (2 * q + 1));
        EXPECT_TRUE((r.weights.array() > 0.0).all());
        for (Eigen::Index k = 0; k < r.size(); ++k) {
            EXPECT_LT(r.nodes.col(k).norm(), 1.0);
        }
    }
}

TEST(DiskRule, ExactForAllMonomialsThrough2q)
{
    for (int q = 1; q <= 8; ++q) {
        const auto r = disk_rule(q);
        for (int i = 0; i <= 2 * q; ++i) {
            for (int j = 0; i + j <= 2 * q; ++j) {
                const double got = r.integrate([&](const auto& x) { return std::pow(x[0], i) * std::pow(x[1], j); });
                EXPECT_NEAR(got, oracle::ball_monomial({i, j}), 1e-12) << "q=" << q << " i=" << i << " j=" << j;
            }
        }
    }
}

TEST(BallRule, VolumeAndLowMoments)
{
    for (int q = 1; q <= 8; ++q) {
        const auto r = ball_rule(q);
        EXPECT_NEAR(r.integrate([](const auto&) { return 1.0; }), 4.0 * pi / 3.0, 1e-13);
        EXPECT_NEAR(r.integrate([](const auto& x) { return x[2]; }), 0.0, 1e-13);
        if (q >= 2) {
            EXPECT_NEAR(r.integrate([](const auto& x) { return x[2] * x[2]; }), 4.0 * pi / 15.0, 1e-12);
        }
    }
}

TEST(BallRule, ExactForAllMonomialsThrough2qMinus1)
{
    for (int q = 1; q <= 8; ++q) {
        const auto r = ball_rule(q);
        EXPECT_TRUE((r.weights.array() > 0.0).all());
        for (int i = 0; i <= 2 * q - 1; ++i) {
            for (int j = 0; i + j <= 2 * q - 1; ++j) {
                for (int k = 0; i + j + k <= 2 * q - 1; ++k) {
                    const double got = r.integrate(
                        [&](const auto& x) { return std::pow(x[0], i) * std::pow(x[1], j) * std::pow(x[2], k); });
                    EXPECT_NEAR(got, oracle::ball_monomial({i, j, k}), 1e-11)
                        << "q=" << q << " (" << i << "," << j << "," << k << ")";
                }
            }
        }
    }
}

TEST(UnitBallRule, DispatchesAndRejectsBadInput)
{
    EXPECT_EQ(unit_ball_rule(2, 3).dim, 2);
    EXPECT_EQ(unit_ball_rule(3, 3).dim, 3);
    EXPECT_THROW(unit_ball_rule(4, 3), InvalidArgument);
    EXPECT_THROW(disk_rule(0), InvalidArgument);
    EXPECT_THROW(ball_rule(0), InvalidArgument);
    EXPECT_THROW(radial_r2_rule(0), InvalidArgument);
}

TEST(CachedBallRule, ReturnsSameInstance)
{
    const auto a = cached_ball_rule(2, 5);
    const auto b = cached_ball_rule(2, 5);
    EXPECT_EQ(a.get(), b.get());
    EXPECT_NE(a.get(), cached_ball_rule(3, 5).get());
}

TEST(RuleCsv, HeaderAndRowCount)
{
    std::ostringstream os;
    write_rule_csv(os, disk_rule(2));
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "x1,x2,weight");
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
    }
    EXPECT_EQ(rows, 15);
}
