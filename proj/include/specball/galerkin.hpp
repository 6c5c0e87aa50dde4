#pragma once

// Galerkin system on the mapped ball: mass matrix G, stiffness operator B(t, a), load f(t, a),
// initial projection and solution evaluation.
//
// All integrals are pulled back to the ball,
//   (psi_k, psi_l)  = int_B psi~_k psi~_l |det J| dx
//   B_{k,l}(t, a)   = -int_B grad psi~_k^T A~(x, t, u_n) grad psi~_l |det J| dx
//   f_l(t, a)       = int_B f(Phi(x), t, u_n(x)) psi~_l |det J| dx
// with A~ = J^{-1} A J^{-T}, and evaluated with the product rule on B_d.

#include <array>
#include <cmath>
#include <string>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Cholesky>

#include "specball/basis.hpp"
#include "specball/problems.hpp"
#include "specball/quadrature.hpp"
#include "specball/types.hpp"

namespace specball {

/// Quadrature order used when none is given: q = 2n, raised to the smallest order that
/// integrates the bubble-basis Gram matrix exactly (n + 2 on the disk, n + 3 on the ball).
int default_quadrature_order(int dim, int degree);

enum class ProjectionInnerProduct {
    /// L2(B_d) without the Jacobian weight.
    reference,
    /// L2(Omega), i.e. weighted by |det J| on the ball.
    physical,
};

struct CoefficientVector {
    Vector values;
    int degree = 0;
    double time = 0.0;
};

template <int Dim>
class GalerkinSystem {
public:
    GalerkinSystem(ParabolicProblem<Dim> problem, int degree, std::optional<int> quadrature_order = std::nullopt);

    [[nodiscard]] int degree() const { return basis_.degree(); }
    [[nodiscard]] int size() const { return basis_.size(); }
    [[nodiscard]] int quadrature_order() const { return rule_->q; }
    [[nodiscard]] const ParabolicProblem<Dim>& problem() const { return problem_; }
    [[nodiscard]] const BubbleBasis<Dim>& basis() const { return basis_; }
    [[nodiscard]] const BallRule<double>& rule() const { return *rule_; }

    /// Cached G and its Cholesky factor.
    [[nodiscard]] const Matrix& mass() const { return mass_; }
    [[nodiscard]] const Eigen::LLT<Matrix>& mass_factor() const { return mass_llt_; }

    // Per-node tabulation, M = number of quadrature nodes.
    [[nodiscard]] const Matrix& node_values() const { return values_; }                  // M x N
    [[nodiscard]] const Matrix& node_gradients(int d) const { return gradients_[d]; }    // M x N
    [[nodiscard]] const Vector& node_weights() const { return rule_->weights; }          // w
    [[nodiscard]] const Vector& node_measure() const { return measure_; }                // w |det J|
    [[nodiscard]] const std::vector<Point<Dim>>& physical_nodes() const { return physical_; }
    [[nodiscard]] const std::vector<SquareMatrix<Dim>>& node_jacobians() const { return jacobians_; }

    /// True when B does not depend on (t, a) and is assembled once.
    [[nodiscard]] bool constant_stiffness() const { return constant_stiffness_.has_value(); }
    [[nodiscard]] const Matrix& cached_stiffness() const { return *constant_stiffness_; }

    /// a' = G^{-1} (B(t, a) a + f(t, a)).
    [[nodiscard]] Vector rhs(double t, const Vector& a) const;

private:
    ParabolicProblem<Dim> problem_;
    BubbleBasis<Dim> basis_;
    std::shared_ptr<const BallRule<double>> rule_;
    Matrix values_;
    std::array<Matrix, Dim> gradients_;
    Vector measure_;
    std::vector<Point<Dim>> physical_;
    std::vector<SquareMatrix<Dim>> jacobians_;
    Matrix mass_;
    Eigen::LLT<Matrix> mass_llt_;
    std::optional<Matrix> constant_stiffness_;
};

/// G_{k,l} = int psi~_k psi~_l |det J|; throws AssemblyFailure when not SPD.
template <int Dim>
Matrix assemble_mass(const GalerkinSystem<Dim>& system);

template <int Dim>
Matrix assemble_stiffness(const GalerkinSystem<Dim>& system, double t, const Vector& coeffs);

template <int Dim>
Vector assemble_load(const GalerkinSystem<Dim>& system, double t, const Vector& coeffs);

/// Coefficients of the orthogonal projection of u0 o Phi onto the bubble space.
template <int Dim>
CoefficientVector project_initial(const GalerkinSystem<Dim>& system,
                                  ProjectionInnerProduct inner = ProjectionInnerProduct::reference);

/// Same, for an arbitrary function given on the ball.
template <int Dim>
CoefficientVector project_function(const GalerkinSystem<Dim>& system, const SpatialFn<Dim>& on_ball,
                                   ProjectionInnerProduct inner = ProjectionInnerProduct::reference);

/// u_n(Phi(x)) = sum_k a_k psi~_k(x) at each ball point x.
template <int Dim>
Vector evaluate_solution(const Vector& coeffs, const BubbleBasis<Dim>& basis, const std::vector<Point<Dim>>& points);

/// G^{-1} (B + d f / d a); the derivative of f (and of B(a) a when A depends on u) is a
/// forward difference with step step_scale * sqrt(eps) * (1 + |a_k|).
template <int Dim>
Matrix jacobian_estimate(const GalerkinSystem<Dim>& system, double t, const Vector& a, double step_scale = 1.0);

/// G^{-1} (B(t, a) a + f(t, a)) carried out in Scalar arithmetic on the double tabulation of
/// `system`, which must outlive the evaluator. Callables (forcing, diffusion) still run in double.
template <int Dim, typename Scalar>
class RhsEvaluator {
public:
    using Vec = VectorX<Scalar>;
    using Mat = MatrixX<Scalar>;

    explicit RhsEvaluator(const GalerkinSystem<Dim>& system)
        : system_(system),
          values_(system.node_values().template cast<Scalar>()),
          measure_(system.node_measure().template cast<Scalar>()),
          mass_llt_(Mat(system.mass().template cast<Scalar>()))
    {
        if (system.constant_stiffness()) {
            stiffness_ = system.cached_stiffness().template cast<Scalar>();
        }
    }

    Vec operator()(double t, const Vec& a) const
    {
        const Vec z = values_ * a;
        const auto& forcing = system_.problem().forcing;
        const auto& nodes = system_.physical_nodes();
        Vec weighted(z.size());
        for (Eigen::Index k = 0; k < z.size(); ++k) {
            const double f = forcing(nodes[k], t, double(z[k]));
            if (!std::isfinite(f)) {
                throw EvaluationError("non-finite forcing value at t = " + std::to_string(t));
            }
            weighted[k] = measure_[k] * Scalar(f);
        }
        Vec r = values_.transpose() * weighted;
        if (stiffness_) {
            r.noalias() += *stiffness_ * a;
        } else {
            r.noalias() += Mat(assemble_stiffness(system_, t, Vector(a.template cast<double>())).template cast<Scalar>()) * a;
        }
        return mass_llt_.solve(r);
    }

private:
    const GalerkinSystem<Dim>& system_;
    Mat values_;
    Vec measure_;
    Eigen::LLT<Mat> mass_llt_;
    std::optional<Mat> stiffness_;
};

/// `# basis=... index=...` comment, then `index,value` rows at 17 significant digits.
void write_coefficients_csv(std::ostream& out, const CoefficientVector& coeffs, int dim);

}  // namespace specball
