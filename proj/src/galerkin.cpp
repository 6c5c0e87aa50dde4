#include "specball/galerkin.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

namespace specball {

int default_quadrature_order(int dim, int degree)
{
    const int exact_gram = degree + (dim == 2 ? 2 : 3);
    return std::max({2 * degree, exact_gram, 1});
}

namespace {

template <int Dim>
std::string describe(const Point<Dim>& p)
{
    std::ostringstream os;
    os << std::setprecision(17) << '(';
    for (int d = 0; d < Dim; ++d) {
        os << (d ? ", " : "") << p[d];
    }
    os << ')';
    return os.str();
}

/// B = -sum_{i,j} G_i^T diag(c_ij) G_j, c_ij = w |det J| A~_ij at each node.
template <int Dim>
Matrix stiffness_from_coefficients(const GalerkinSystem<Dim>& system,
                                   const std::vector<SquareMatrix<Dim>>& a_tilde)
{
    const Eigen::Index nodes = system.node_measure().size();
    Matrix b = Matrix::Zero(system.size(), system.size());
    Vector c(nodes);
    for (int i = 0; i < Dim; ++i) {
        for (int j = 0; j < Dim; ++j) {
            for (Eigen::Index k = 0; k < nodes; ++k) {
                c[k] = system.node_measure()[k] * a_tilde[k](i, j);
            }
            b.noalias() -= system.node_gradients(i).transpose() * c.asDiagonal() * system.node_gradients(j);
        }
    }
    return b;
}

template <int Dim>
std::vector<SquareMatrix<Dim>> transformed_diffusion_at_nodes(const GalerkinSystem<Dim>& system, double t,
                                                              const Vector& z)
{
    const auto& problem = system.problem();
    const auto& jac = system.node_jacobians();
    std::vector<SquareMatrix<Dim>> out(jac.size());
    for (std::size_t k = 0; k < jac.size(); ++k) {
        const SquareMatrix<Dim> a = problem.diffusion.identity
                                        ? SquareMatrix<Dim>::Identity().eval()
                                        : problem.diffusion.eval(system.physical_nodes()[k], t, z[Eigen::Index(k)]);
        out[k] = pull_back_diffusion<Dim>(jac[k], a);
    }
    return out;
}

}  // namespace

template <int Dim>
GalerkinSystem<Dim>::GalerkinSystem(ParabolicProblem<Dim> problem, int degree, std::optional<int> quadrature_order)
    : problem_(std::move(problem)), basis_(degree)
{
    if (!problem_.domain) {
        throw InvalidArgument("GalerkinSystem: problem has no domain");
    }
    const int q = quadrature_order.value_or(default_quadrature_order(Dim, degree));
    if (q < 1) {
        throw InvalidArgument("GalerkinSystem: quadrature order must be >= 1");
    }
    if constexpr (Dim == 3) {
        ball3_normalization_check(degree);
    }
    rule_ = cached_ball_rule(Dim, q);
    const Eigen::Index nodes = rule_->size();
    const int n = basis_.size();
    values_.resize(nodes, n);
    for (auto& g : gradients_) {
        g.resize(nodes, n);
    }
    measure_.resize(nodes);
    physical_.resize(nodes);
    jacobians_.resize(nodes);
    const auto& domain = *problem_.domain;
    for (Eigen::Index k = 0; k < nodes; ++k) {
        const Point<Dim> x = rule_->nodes.col(k);
        const auto eval = basis_.bubble(x);
        values_.row(k) = eval.values.transpose();
        for (int d = 0; d < Dim; ++d) {
            gradients_[d].row(k) = eval.gradients.col(d).transpose();
        }
        jacobians_[k] = domain.jacobian(x);
        const double det = domain.det_j(x);
        if (!(std::abs(det) >= 1e-12)) {
            throw SingularJacobian("Jacobian determinant " + std::to_string(det) + " at quadrature node " +
                                   describe<Dim>(x));
        }
        measure_[k] = rule_->weights[k] * std::abs(det);
        physical_[k] = domain.phi(x);
    }
    mass_ = assemble_mass(*this);
    mass_llt_.compute(mass_);
    if (!problem_.diffusion.depends_on_t && !problem_.diffusion.depends_on_z) {
        constant_stiffness_ = stiffness_from_coefficients<Dim>(
            *this, transformed_diffusion_at_nodes<Dim>(*this, 0.0, Vector::Zero(nodes)));
    }
}

template <int Dim>
Vector GalerkinSystem<Dim>::rhs(double t, const Vector& a) const
{
    Vector r = assemble_load(*this, t, a);
    if (constant_stiffness_) {
        r.noalias() += *constant_stiffness_ * a;
    } else {
        r.noalias() += assemble_stiffness(*this, t, a) * a;
    }
    return mass_llt_.solve(r);
}

template <int Dim>
Matrix assemble_mass(const GalerkinSystem<Dim>& system)
{
    const Matrix& v = system.node_values();
    Matrix g = v.transpose() * system.node_measure().asDiagonal() * v;
    g = 0.5 * (g + g.transpose()).eval();
    const Eigen::LLT<Matrix> llt(g);
    if (llt.info() != Eigen::Success) {
        throw AssemblyFailure("mass matrix is not positive definite (degree " + std::to_string(system.degree()) +
                              ", quadrature order " + std::to_string(system.quadrature_order()) + ")");
    }
    return g;
}

template <int Dim>
Matrix assemble_stiffness(const GalerkinSystem<Dim>& system, double t, const Vector& coeffs)
{
    if (coeffs.size() != system.size()) {
        throw InvalidArgument("assemble_stiffness: coefficient vector has wrong length");
    }
    if (system.constant_stiffness()) {
        return system.cached_stiffness();
    }
    const Vector z = system.node_values() * coeffs;
    return stiffness_from_coefficients<Dim>(system, transformed_diffusion_at_nodes<Dim>(system, t, z));
}

template <int Dim>
Vector assemble_load(const GalerkinSystem<Dim>& system, double t, const Vector& coeffs)
{
    if (coeffs.size() != system.size()) {
        throw InvalidArgument("assemble_load: coefficient vector has wrong length");
    }
    const Vector z = system.node_values() * coeffs;
    const auto& forcing = system.problem().forcing;
    const auto& nodes = system.physical_nodes();
    Vector weighted(z.size());
    for (Eigen::Index k = 0; k < z.size(); ++k) {
        const double f = forcing(nodes[k], t, z[k]);
        if (!std::isfinite(f)) {
            throw EvaluationError("non-finite forcing value at s = " + describe<Dim>(nodes[k]) +
                                  ", x = " + describe<Dim>(Point<Dim>(system.rule().nodes.col(k))) +
                                  ", t = " + std::to_string(t));
        }
        weighted[k] = system.node_measure()[k] * f;
    }
    return system.node_values().transpose() * weighted;
}

template <int Dim>
CoefficientVector project_function(const GalerkinSystem<Dim>& system, const SpatialFn<Dim>& on_ball,
                                   ProjectionInnerProduct inner)
{
    const Vector& w = inner == ProjectionInnerProduct::reference ? system.node_weights() : system.node_measure();
    const Matrix& v = system.node_values();
    const Eigen::Index nodes = w.size();
    Vector rhs_weights(nodes);
    for (Eigen::Index k = 0; k < nodes; ++k) {
        rhs_weights[k] = w[k] * on_ball(system.rule().nodes.col(k));
    }
    const Matrix gram = v.transpose() * w.asDiagonal() * v;
    const Eigen::LLT<Matrix> llt(gram);
    if (llt.info() != Eigen::Success) {
        throw InvalidArgument("projection Gram matrix is singular: invalid basis/quadrature configuration (degree " +
                              std::to_string(system.degree()) + ", q = " +
                              std::to_string(system.quadrature_order()) + ")");
    }
    return {llt.solve(v.transpose() * rhs_weights), system.degree(), 0.0};
}

template <int Dim>
CoefficientVector project_initial(const GalerkinSystem<Dim>& system, ProjectionInnerProduct inner)
{
    const auto& problem = system.problem();
    return project_function<Dim>(
        system, [&problem](const Point<Dim>& x) { return problem.initial_on_ball(x); }, inner);
}

template <int Dim>
Vector evaluate_solution(const Vector& coeffs, const BubbleBasis<Dim>& basis, const std::vector<Point<Dim>>& points)
{
    if (coeffs.size() != basis.size()) {
        throw InvalidArgument("evaluate_solution: coefficient vector has wrong length");
    }
    Vector out(static_cast<Eigen::Index>(points.size()));
    for (std::size_t i = 0; i < points.size(); ++i) {
        out[Eigen::Index(i)] = basis.bubble_values(points[i]).dot(coeffs);
    }
    return out;
}

template <int Dim>
Matrix jacobian_estimate(const GalerkinSystem<Dim>& system, double t, const Vector& a, double step_scale)
{
    const bool nonlinear_diffusion = !system.constant_stiffness() && system.problem().diffusion.depends_on_z;
    const bool nonlinear_forcing = system.problem().forcing_depends_on_z;
    Matrix b = assemble_stiffness(system, t, a);
    if (nonlinear_forcing || nonlinear_diffusion) {
        auto residual = [&](const Vector& y) {
            Vector r = assemble_load(system, t, y);
            if (nonlinear_diffusion) {
                r.noalias() += assemble_stiffness(system, t, y) * y;
            }
            return r;
        };
        const Vector base = residual(a);
        const double root_eps = std::sqrt(std::numeric_limits<double>::epsilon());
        Matrix correction(a.size(), a.size());
        Vector shifted = a;
        for (Eigen::Index k = 0; k < a.size(); ++k) {
            const double h = step_scale * root_eps * (1.0 + std::abs(a[k]));
            shifted[k] = a[k] + h;
            correction.col(k) = (residual(shifted) - base) / h;
            shifted[k] = a[k];
        }
        if (nonlinear_diffusion) {
            b = correction;
        } else {
            b += correction;
        }
    }
    return system.mass_factor().solve(b);
}

void write_coefficients_csv(std::ostream& out, const CoefficientVector& coeffs, int dim)
{
    if (dim == 2) {
        out << "# basis=ridge2d degree=" << coeffs.degree
            << " index=(m,k) lexicographic, flat = m(m+1)/2 + k, 0<=k<=m\n";
    } else {
        out << "# basis=ball3d degree=" << coeffs.degree
            << " index=(m,j,beta) lexicographic, 0<=j<=m/2, 0<=beta<=2(m-2j)\n";
    }
    out << "# time=" << std::setprecision(17) << coeffs.time << '\n';
    out << "index,value\n";
    for (Eigen::Index i = 0; i < coeffs.values.size(); ++i) {
        out << i << ',' << coeffs.values[i] << '\n';
    }
}

#define SPECBALL_INSTANTIATE(D)                                                                              \
    template class GalerkinSystem<D>;                                                                        \
    template Matrix assemble_mass<D>(const GalerkinSystem<D>&);                                              \
    template Matrix assemble_stiffness<D>(const GalerkinSystem<D>&, double, const Vector&);                  \
    template Vector assemble_load<D>(const GalerkinSystem<D>&, double, const Vector&);                       \
    template CoefficientVector project_initial<D>(const GalerkinSystem<D>&, ProjectionInnerProduct);         \
    template CoefficientVector project_function<D>(const GalerkinSystem<D>&, const SpatialFn<D>&,            \
                                                   ProjectionInnerProduct);                                  \
    template Vector evaluate_solution<D>(const Vector&, const BubbleBasis<D>&, const std::vector<Point<D>>&); \
    template Matrix jacobian_estimate<D>(const GalerkinSystem<D>&, double, const Vector&, double);

SPECBALL_INSTANTIATE(2)
SPECBALL_INSTANTIATE(3)

#undef SPECBALL_INSTANTIATE

}  // namespace specball
