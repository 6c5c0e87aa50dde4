#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "oracles.hpp"
#include "specball/geometry.hpp"

using namespace specball;
using std::numbers::pi;

namespace {

template <int Dim>
void expect_jacobian_matches_fd(const MappedDomain<Dim>& domain, unsigned seed, double tol = 1e-6)
{
    for (const auto& x : oracle::random_ball_points<Dim>(25, seed)) {
        const auto fd = oracle::fd_jacobian<Dim>([&](const Point<Dim>& y) { return domain.phi(y); }, x);
        EXPECT_LT((domain.jacobian(x) - fd).cwiseAbs().maxCoeff(), tol) << domain.name();
        EXPECT_NEAR(domain.det_j(x), domain.jacobian(x).determinant(), 1e-12);
    }
}

template <int Dim>
void expect_orientation_constant(const MappedDomain<Dim>& domain, unsigned seed)
{
    const auto pts = oracle::random_ball_points<Dim>(400, seed, 1.0);
    const double sign0 = std::copysign(1.0, domain.det_j(pts.front()));
    for (const auto& x : pts) {
        EXPECT_GT(sign0 * domain.det_j(x), 0.0) << domain.name();
    }
}

}  // namespace

TEST(IdentityBall, MapsAndDeterminant)
{
    const auto disk = identity_ball<2>();
    const Point<2> x(0.3, -0.1);
    EXPECT_EQ(disk.phi(x), x);
    EXPECT_EQ(disk.det_j(x), 1.0);
    EXPECT_EQ(disk.inverse(x), x);
    const auto ball = identity_ball<3>();
    EXPECT_EQ(ball.jacobian(Point<3>(0.1, 0.2, 0.3)), SquareMatrix<3>::Identity());
}

TEST(Mapped3d, JacobianAtOrigin)
{
    const auto dom = mapped3d_example(0.7, 0.9);
    SquareMatrix<3> want;
    want << 1, -1, 0, 1, 1, 0, 0, 0, 2;
    EXPECT_LT((dom.jacobian(Point<3>::Zero()) - want).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_NEAR(dom.det_j(Point<3>::Zero()), 4.0, 1e-14);
    EXPECT_EQ(dom.phi(Point<3>::Zero()), Point<3>::Zero());
}

TEST(Mapped3d, TransformedDiffusionAtOrigin)
{
    const auto dom = mapped3d_example(0.7, 0.9);
    const auto at = a_tilde<3>(dom, identity_diffusion<3>());
    const SquareMatrix<3> got = at(Point<3>::Zero(), 0.0, 0.0);
    const SquareMatrix<3> want = Point<3>(0.5, 0.5, 0.25).asDiagonal();
    EXPECT_LT((got - want).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Mapped3d, InverseRoundTrip)
{
    const auto dom = mapped3d_example(0.7, 0.9);
    for (const auto& x : oracle::random_ball_points<3>(50, 21u, 1.0)) {
        EXPECT_LT((dom.inverse(dom.phi(x)) - x).norm(), 1e-13);
    }
}

TEST(Mapped3d, RejectsParametersOutsideRange)
{
    EXPECT_THROW(mapped3d_example(0.0, 0.5), InvalidArgument);
    EXPECT_THROW(mapped3d_example(0.5, 1.0), InvalidArgument);
}

TEST(Starlike, LimaconBoundaryPoint)
{
    const auto dom = starlike2d(limacon_boundary());
    EXPECT_LT((dom.phi(Point<2>(1.0, 0.0)) - Point<2>(4.0, 0.0)).norm(), 1e-14);
    EXPECT_EQ(dom.phi(Point<2>::Zero()), Point<2>::Zero());
    EXPECT_FALSE(dom.has_inverse());
    EXPECT_THROW(dom.inverse(Point<2>::Zero()), InvalidArgument);
}

TEST(Starlike, AmoebaBoundaryPoint)
{
    // rho(pi/2) = 5 + 1 + sin(3 pi / 2) - cos(5 pi / 2) = 5.
    const auto dom = starlike2d(amoeba_boundary());
    EXPECT_LT((dom.phi(Point<2>(0.0, 1.0)) - Point<2>(0.0, 5.0)).norm(), 1e-13);
    EXPECT_EQ(dom.phi(Point<2>::Zero()), Point<2>::Zero());
}

TEST(Starlike, BoundaryTracesRho)
{
    for (const auto& boundary : {limacon_boundary(), amoeba_boundary()}) {
        const auto dom = starlike2d(boundary);
        for (int i = 0; i < 360; ++i) {
            const double th = 2.0 * pi * i / 360.0;
            const Point<2> u(std::cos(th), std::sin(th));
            EXPECT_LT((dom.phi(u) - boundary.rho(th) * u).norm(), 1e-12);
        }
    }
}

TEST(Starlike, ReferenceRadius)
{
    // Limacon: mean 3 and minimum 3 - sqrt(5), so the reference is 2 (3 - sqrt(5)).
    EXPECT_NEAR(starlike_reference_radius(limacon_boundary()), 2.0 * (3.0 - std::sqrt(5.0)), 1e-5);
    // Amoeba: the mean is 5 and stays below twice the minimum.
    double rho_min = 1e300;
    for (int i = 0; i < 100000; ++i) {
        rho_min = std::min(rho_min, amoeba_boundary().rho(2.0 * pi * i / 100000.0));
    }
    EXPECT_GT(rho_min, 0.0);
    EXPECT_NEAR(starlike_reference_radius(amoeba_boundary()), std::min(5.0, 2.0 * rho_min), 1e-4);
}

TEST(Starlike, DerivativeOfRho)
{
    for (const auto& boundary : {limacon_boundary(), amoeba_boundary()}) {
        for (const double th : {0.1, 1.7, 3.3, 5.9}) {
            EXPECT_NEAR(boundary.drho(th), (boundary.rho(th + 1e-6) - boundary.rho(th - 1e-6)) / 2e-6, 1e-6);
        }
    }
}

TEST(Jacobians, MatchFiniteDifferences)
{
    expect_jacobian_matches_fd(identity_ball<2>(), 1u);
    expect_jacobian_matches_fd(identity_ball<3>(), 2u);
    expect_jacobian_matches_fd(mapped3d_example(0.7, 0.9), 3u);
    expect_jacobian_matches_fd(starlike2d(limacon_boundary()), 4u, 1e-5);
    expect_jacobian_matches_fd(starlike2d(amoeba_boundary()), 5u, 1e-5);
}

TEST(Jacobians, DeterminantSignIsConstant)
{
    expect_orientation_constant(mapped3d_example(0.7, 0.9), 6u);
    expect_orientation_constant(starlike2d(limacon_boundary()), 7u);
    expect_orientation_constant(starlike2d(amoeba_boundary()), 8u);
}

TEST(TransformedDiffusion, SymmetricPositiveDefinite)
{
    const auto dom3 = mapped3d_example(0.7, 0.9);
    const auto a3 = a_tilde<3>(dom3, identity_diffusion<3>());
    for (const auto& x : oracle::random_ball_points<3>(50, 9u, 1.0)) {
        const SquareMatrix<3> m = a3(x, 0.0, 0.0);
        EXPECT_LT((m - m.transpose()).cwiseAbs().maxCoeff(), 1e-14);
        EXPECT_GT(Eigen::SelfAdjointEigenSolver<SquareMatrix<3>>(m).eigenvalues().minCoeff(), 0.0);
        // J A~ J^T recovers A.
        const SquareMatrix<3> j = dom3.jacobian(x);
        EXPECT_LT((j * m * j.transpose() - SquareMatrix<3>::Identity()).cwiseAbs().maxCoeff(), 1e-13);
    }
    const auto dom2 = starlike2d(amoeba_boundary());
    const auto a2 = a_tilde<2>(dom2, identity_diffusion<2>());
    for (const auto& x : oracle::random_ball_points<2>(50, 10u, 1.0)) {
        const SquareMatrix<2> m = a2(x, 0.0, 0.0);
        EXPECT_LT((m - m.transpose()).cwiseAbs().maxCoeff(), 1e-13);
        EXPECT_GT(Eigen::SelfAdjointEigenSolver<SquareMatrix<2>>(m).eigenvalues().minCoeff(), 0.0);
    }
}

TEST(TransformedDiffusion, SingularJacobianIsReported)
{
    EXPECT_THROW(pull_back_diffusion<2>(SquareMatrix<2>::Zero(), SquareMatrix<2>::Identity()), SingularJacobian);
}

TEST(PolynomialMap, ParsesAndEvaluates)
{
    std::istringstream in(
        "# shear plus quadratic bend\n"
        "1 1 0 1.0\n"
        "1 0 1 0.5\n"
        "\n"
        "2 0 1 1.0\n"
        "2 2 0 0.25\n");
    auto map = parse_polynomial_map<2>(in);
    ASSERT_EQ(map.terms.size(), 4u);
    EXPECT_EQ(map.terms[3].component, 1);
    const auto dom = polynomial_domain<2>(map);
    const Point<2> x(0.4, -0.3);
    EXPECT_NEAR(dom.phi(x)[0], 0.4 + 0.5 * -0.3, 1e-15);
    EXPECT_NEAR(dom.phi(x)[1], -0.3 + 0.25 * 0.16, 1e-15);
    expect_jacobian_matches_fd(dom, 12u);
}

TEST(PolynomialMap, ThreeDimensional)
{
    std::istringstream in("1 1 0 0 2\n2 0 1 0 1\n3 0 0 1 1\n3 2 0 0 0.1\n");
    const auto dom = polynomial_domain<3>(parse_polynomial_map<3>(in));
    EXPECT_NEAR(dom.det_j(Point<3>(0.1, 0.2, 0.3)), 2.0, 1e-15);
    expect_jacobian_matches_fd(dom, 13u);
}

TEST(PolynomialMap, RejectsMalformedLines)
{
    std::istringstream few("1 1 0.5\n");
    EXPECT_THROW(parse_polynomial_map<2>(few), InvalidArgument);
    std::istringstream component("3 1 0 1.0\n");
    EXPECT_THROW(parse_polynomial_map<2>(component), InvalidArgument);
    std::istringstream negative("1 -1 0 1.0\n");
    EXPECT_THROW(parse_polynomial_map<2>(negative), InvalidArgument);
    std::istringstream fractional("1 1.5 0 1.0\n");
    EXPECT_THROW(parse_polynomial_map<2>(fractional), InvalidArgument);
    std::istringstream extra("1 1 0 1.0 7\n");
    EXPECT_THROW(parse_polynomial_map<2>(extra), InvalidArgument);
    EXPECT_THROW(load_polynomial_map<2>("/nonexistent/map.txt"), InvalidArgument);
}
