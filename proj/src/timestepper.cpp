#include "specball/timestepper.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <type_traits>

#include <Eigen/LU>
#include <Eigen/SVD>
#include <json.hpp>

namespace specball {

namespace {

template <typename S>
using Vec = VectorX<S>;
template <typename S>
using Mat = MatrixX<S>;

constexpr int kMaxOrder = 5;
constexpr int kNewtonMaxIter = 4;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 10.0;
constexpr double kNewtonTol = 0.1;  // in units of the local error tolerance

template <typename Derived>
typename Derived::Scalar rms_norm(const Eigen::MatrixBase<Derived>& v)
{
    using S = typename Derived::Scalar;
    return v.size() == 0 ? S(0) : S(v.norm() / std::sqrt(S(v.size())));
}

template <typename S>
std::string at_time(S t)
{
    std::ostringstream os;
    os << std::setprecision(17) << t;
    return os.str();
}

template <typename S>
void check_output_times(const BasicIvpProblem<S>& problem, const std::vector<S>& times)
{
    if (!(problem.t_end > problem.t0)) {
        throw InvalidArgument("solve_ivp: integration span must have t_end > t0");
    }
    if (!(problem.rtol > 0.0) || !(problem.atol > 0.0)) {
        throw InvalidArgument("solve_ivp: rtol and atol must be positive");
    }
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < problem.t0 || times[i] > problem.t_end) {
            throw InvalidArgument("solve_ivp: output time " + at_time(times[i]) + " outside the integration span");
        }
        if (i > 0 && !(times[i] > times[i - 1])) {
            throw InvalidArgument("solve_ivp: output times must be strictly increasing");
        }
    }
}

template <typename S>
Vec<S> checked_rhs(const BasicIvpProblem<S>& problem, std::type_identity_t<S> t,
                   const std::type_identity_t<Vec<S>>& y, SolverStats& stats)
{
    ++stats.rhs_evaluations;
    Vec<S> f = problem.rhs(t, y);
    if (!f.allFinite()) {
        throw EvaluationError("non-finite right-hand side at t = " + at_time(t));
    }
    return f;
}

// Cumulative-product matrix used to rescale the difference array when the step changes
// from h to factor * h.
template <typename S>
Mat<S> compute_r(int order, S factor)
{
    Mat<S> m = Mat<S>::Zero(order + 1, order + 1);
    m.row(0).setOnes();
    for (int i = 1; i <= order; ++i) {
        for (int j = 1; j <= order; ++j) {
            m(i, j) = (i - 1 - factor * j) / S(i);
        }
    }
    for (int i = 1; i <= order; ++i) {
        m.row(i) = m.row(i).cwiseProduct(m.row(i - 1));
    }
    return m;
}

template <typename S>
void change_differences(Mat<S>& d, int order, std::type_identity_t<S> factor)
{
    const Mat<S> ru = compute_r<S>(order, factor) * compute_r<S>(order, S(1));
    d.topRows(order + 1) = (ru.transpose() * d.topRows(order + 1)).eval();
}

template <typename S>
S select_initial_step(const BasicIvpProblem<S>& problem, const Vec<S>& y0, const Vec<S>& f0, SolverStats& stats)
{
    const Vec<S> scale = (problem.atol + problem.rtol * y0.array().abs()).matrix();
    const S d0 = rms_norm(y0.cwiseQuotient(scale));
    const S d1 = rms_norm(f0.cwiseQuotient(scale));
    const S h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    const Vec<S> y1 = y0 + h0 * f0;
    const Vec<S> f1 = checked_rhs(problem, problem.t0 + h0, y1, stats);
    const S d2 = rms_norm((f1 - f0).cwiseQuotient(scale)) / h0;
    const S h1 = (d1 <= 1e-15 && d2 <= 1e-15) ? std::max(S(1e-6), h0 * S(1e-3))
                                                    : std::sqrt(S(0.01) / std::max(d1, d2));
    return std::min(100.0 * h0, h1);
}

template <typename S>
struct NewtonResult {
    bool converged = false;
    /// The right-hand side returned a non-finite value during the iteration.
    bool nonfinite = false;
    int iterations = 0;
    Vec<S> y;
    Vec<S> d;
};

template <typename S>
NewtonResult<S> solve_bdf_system(const BasicIvpProblem<S>& problem, S t_new, const Vec<S>& y_predict, S c,
                              const Vec<S>& psi, const Eigen::PartialPivLU<Mat<S>>& lu, const Vec<S>& scale,
                              SolverStats& stats)
{
    NewtonResult<S> res;
    res.y = y_predict;
    res.d = Vec<S>::Zero(y_predict.size());
    S dy_norm_old = -1.0;
    for (int k = 0; k < kNewtonMaxIter; ++k) {
        res.iterations = k + 1;
        ++stats.rhs_evaluations;
        const Vec<S> f = problem.rhs(t_new, res.y);
        if (!f.allFinite()) {
            res.nonfinite = true;
            break;
        }
        const Vec<S> dy = lu.solve(c * f - psi - res.d);
        const S dy_norm = rms_norm(dy.cwiseQuotient(scale));
        const S rate = dy_norm_old < 0.0 ? -1.0 : dy_norm / dy_norm_old;
        if (rate >= 0.0 &&
            (rate >= 1.0 || std::pow(rate, kNewtonMaxIter - k) / (1.0 - rate) * dy_norm > kNewtonTol)) {
            break;
        }
        res.y += dy;
        res.d += dy;
        if (dy_norm == 0.0 || (rate >= 0.0 && rate / (1.0 - rate) * dy_norm < kNewtonTol)) {
            res.converged = true;
            break;
        }
        dy_norm_old = dy_norm;
    }
    return res;
}

/// Variable-order BDF in backward-difference form with quasi-constant step size.
template <typename S>
class BdfIntegrator {
public:
    BdfIntegrator(const BasicIvpProblem<S>& problem, SolverOptions options, SolverStats& stats)
        : problem_(problem), options_(options), stats_(stats), n_(problem.a0.size())
    {
        gamma_[0] = 0.0;
        for (int k = 1; k <= kMaxOrder; ++k) {
            gamma_[k] = gamma_[k - 1] + 1.0 / k;
        }
        for (int k = 0; k <= kMaxOrder + 1; ++k) {
            error_const_[k] = 1.0 / (k + 1);
        }
        t_ = problem.t0;
        y_ = problem.a0;
        const Vec<S> f = checked_rhs(problem_, t_, y_, stats_);
        h_abs_ = std::min(select_initial_step(problem_, y_, f, stats_), S(options_.max_step));
        h_abs_ = std::min(h_abs_, problem.t_end - problem.t0);
        d_ = Mat<S>::Zero(kMaxOrder + 3, n_);
        d_.row(0) = y_.transpose();
        d_.row(1) = (f * h_abs_).transpose();
        jac_ = problem_.jac(t_, y_);
        ++stats_.jacobian_evaluations;
    }

    [[nodiscard]] S time() const { return t_; }
    [[nodiscard]] const Vec<S>& state() const { return y_; }

    /// Polynomial through the current differences, valid on [t_old, t].
    [[nodiscard]] Vec<S> interpolate(S t) const
    {
        Vec<S> y = d_.row(0).transpose();
        S p = 1.0;
        for (int j = 0; j < order_; ++j) {
            p *= (t - (t_ - h_abs_ * j)) / (h_abs_ * (1 + j));
            y += p * d_.row(j + 1).transpose();
        }
        return y;
    }

    void step()
    {
        const S t = t_;
        const S min_step = 10.0 * std::abs(std::nextafter(t, problem_.t_end + 1.0) - t);
        S h_abs = h_abs_;
        if (h_abs > S(options_.max_step)) {
            change_differences(d_, order_, S(options_.max_step) / h_abs);
            h_abs = S(options_.max_step);
            n_equal_steps_ = 0;
        } else if (h_abs < min_step) {
            change_differences(d_, order_, min_step / h_abs);
            h_abs = min_step;
            n_equal_steps_ = 0;
        }

        const int order = order_;
        bool current_jac = false;
        S t_new = t;
        Vec<S> y_new;
        Vec<S> d;
        Vec<S> scale;
        int n_iter = 0;
        bool nonfinite_failure = false;
        for (;;) {
            if (h_abs < min_step && nonfinite_failure) {
                throw EvaluationError("non-finite right-hand side near t = " + at_time(t) +
                                      " (persisted down to the smallest step)");
            }
            if (h_abs < min_step) {
                throw StiffFailure("step size fell below " + at_time(min_step) + " at t = " + at_time(t) +
                                   " (Newton iteration or error control failed repeatedly)");
            }
            t_new = t + h_abs;
            if (t_new - problem_.t_end > 0.0) {
                t_new = problem_.t_end;
                change_differences(d_, order, std::abs(t_new - t) / h_abs);
                n_equal_steps_ = 0;
                lu_valid_ = false;
            }
            const S h = t_new - t;
            h_abs = std::abs(h);

            const Vec<S> y_predict = d_.topRows(order + 1).colwise().sum().transpose();
            scale = (problem_.atol + problem_.rtol * y_predict.array().abs()).matrix();
            Vec<S> psi = Vec<S>::Zero(n_);
            for (int k = 1; k <= order; ++k) {
                psi += gamma_[k] * d_.row(k).transpose();
            }
            psi /= gamma_[order];

            const S c = h / gamma_[order];
            bool converged = false;
            NewtonResult<S> newton;
            for (;;) {
                if (!lu_valid_) {
                    lu_.compute(Mat<S>::Identity(n_, n_) - c * jac_);
                    ++stats_.lu_decompositions;
                    lu_valid_ = true;
                }
                newton = solve_bdf_system(problem_, t_new, y_predict, c, psi, lu_, scale, stats_);
                converged = newton.converged;
                if (converged || current_jac) {
                    break;
                }
                jac_ = problem_.jac(t_new, y_predict);
                ++stats_.jacobian_evaluations;
                lu_valid_ = false;
                current_jac = true;
            }

            nonfinite_failure = !converged && newton.nonfinite;
            if (!converged) {
                h_abs *= 0.5;
                change_differences(d_, order, S(0.5));
                n_equal_steps_ = 0;
                lu_valid_ = false;
                ++stats_.rejected_steps;
                continue;
            }

            n_iter = newton.iterations;
            const S safety = 0.9 * (2 * kNewtonMaxIter + 1) / (2 * kNewtonMaxIter + n_iter);
            y_new = newton.y;
            d = newton.d;
            scale = (problem_.atol + problem_.rtol * y_new.array().abs()).matrix();
            const S error_norm = rms_norm((error_const_[order] * d).cwiseQuotient(scale));
            if (error_norm > 1.0) {
                const S factor = std::max(S(kMinFactor), safety * std::pow(error_norm, -1.0 / (order + 1)));
                h_abs *= factor;
                change_differences(d_, order, factor);
                n_equal_steps_ = 0;
                ++stats_.rejected_steps;
                continue;
            }

            ++n_equal_steps_;
            ++stats_.steps;
            t_ = t_new;
            y_ = y_new;
            h_abs_ = h_abs;

            // D^{j+1} y_n = D^j y_n - D^j y_{n-1}; d holds D^{order+1} y_n.
            d_.row(order + 2) = d.transpose() - d_.row(order + 1);
            d_.row(order + 1) = d.transpose();
            for (int i = order; i >= 0; --i) {
                d_.row(i) += d_.row(i + 1);
            }

            if (n_equal_steps_ < order + 1) {
                return;
            }

            const S error_m_norm =
                order > 1 ? rms_norm((error_const_[order - 1] * d_.row(order).transpose()).cwiseQuotient(scale))
                          : std::numeric_limits<S>::infinity();
            const S error_p_norm =
                order < kMaxOrder
                    ? rms_norm((error_const_[order + 1] * d_.row(order + 2).transpose()).cwiseQuotient(scale))
                    : std::numeric_limits<S>::infinity();
            const std::array<S, 3> norms = {error_m_norm, error_norm, error_p_norm};
            std::array<S, 3> factors{};
            for (int k = 0; k < 3; ++k) {
                factors[k] = norms[k] == 0.0 ? std::numeric_limits<S>::infinity()
                                             : std::pow(norms[k], -1.0 / (order + k));
            }
            const auto best = std::max_element(factors.begin(), factors.end());
            order_ = order + int(best - factors.begin()) - 1;
            const S factor = std::min(S(kMaxFactor), safety * *best);
            h_abs_ *= factor;
            change_differences(d_, order_, factor);
            n_equal_steps_ = 0;
            lu_valid_ = false;
            return;
        }
    }

private:
    const BasicIvpProblem<S>& problem_;
    SolverOptions options_;
    SolverStats& stats_;
    Eigen::Index n_;
    std::array<S, kMaxOrder + 1> gamma_{};
    std::array<S, kMaxOrder + 2> error_const_{};
    S t_ = 0.0;
    Vec<S> y_;
    S h_abs_ = 0.0;
    Mat<S> d_;
    int order_ = 1;
    int n_equal_steps_ = 0;
    Mat<S> jac_;
    Eigen::PartialPivLU<Mat<S>> lu_;
    bool lu_valid_ = false;
};

template <typename S>
BasicTrajectory<S> integrate_bdf(const BasicIvpProblem<S>& problem, const std::vector<S>& times, const SolverOptions& options)
{
    BasicTrajectory<S> out;
    out.stats.method = "bdf";
    BdfIntegrator<S> bdf(problem, options, out.stats);
    std::size_t next = 0;
    while (next < times.size() && times[next] <= problem.t0) {
        out.times.push_back(times[next]);
        out.states.push_back(problem.a0);
        ++next;
    }
    while (next < times.size()) {
        const S t_old = bdf.time();
        bdf.step();
        while (next < times.size() && times[next] <= bdf.time()) {
            out.times.push_back(times[next]);
            out.states.push_back(times[next] == bdf.time() ? bdf.state() : bdf.interpolate(times[next]));
            ++next;
        }
        if (bdf.time() == t_old) {
            throw StiffFailure("integration stalled at t = " + at_time(t_old));
        }
    }
    return out;
}

template <typename S>
Vec<S> cubic_hermite(S t0, const Vec<S>& y0, const Vec<S>& f0, S t1, const Vec<S>& y1, const Vec<S>& f1,
                     S t)
{
    const S h = t1 - t0;
    const S s = (t - t0) / h;
    const S h00 = (1 + 2 * s) * (1 - s) * (1 - s);
    const S h10 = s * (1 - s) * (1 - s);
    const S h01 = s * s * (3 - 2 * s);
    const S h11 = s * s * (s - 1);
    return h00 * y0 + h10 * h * f0 + h01 * y1 + h11 * h * f1;
}

template <typename S>
BasicTrajectory<S> integrate_fixed(const BasicIvpProblem<S>& problem, const std::vector<S>& times, const SolverOptions& options)
{
    if (!(options.fixed_step > 0.0)) {
        throw InvalidArgument("solve_ivp: fixed step must be positive");
    }
    BasicTrajectory<S> out;
    out.stats.method = options.method == OdeMethod::rk4 ? "rk4" : "bdf2_fixed";
    auto& stats = out.stats;
    S t = problem.t0;
    Vec<S> y = problem.a0;
    Vec<S> f = checked_rhs(problem, t, y, stats);
    Vec<S> y_prev;
    bool have_prev = false;
    std::size_t next = 0;
    const Eigen::Index n = y.size();
    while (next < times.size() && times[next] <= t) {
        out.times.push_back(times[next]);
        out.states.push_back(y);
        ++next;
    }
    while (next < times.size()) {
        const S step = S(options.fixed_step);
        const S h = std::min(step, problem.t_end - t);
        const S t_new = (problem.t_end - t <= step) ? problem.t_end : t + h;
        Vec<S> y_new;
        if (options.method == OdeMethod::rk4) {
            const Vec<S> k1 = f;
            const Vec<S> k2 = checked_rhs(problem, t + 0.5 * h, y + 0.5 * h * k1, stats);
            const Vec<S> k3 = checked_rhs(problem, t + 0.5 * h, y + 0.5 * h * k2, stats);
            const Vec<S> k4 = checked_rhs(problem, t + h, y + h * k3, stats);
            y_new = y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        } else {
            // BDF2 with a fixed step; implicit Euler for the first step.
            const bool bdf2 = have_prev;
            const S beta = bdf2 ? 2.0 / 3.0 : 1.0;
            const Vec<S> base = bdf2 ? Vec<S>((4.0 * y - y_prev) / 3.0) : y;
            const Mat<S> jac = problem.jac(t_new, y);
            ++stats.jacobian_evaluations;
            const Eigen::PartialPivLU<Mat<S>> lu(Mat<S>::Identity(n, n) - beta * h * jac);
            ++stats.lu_decompositions;
            y_new = y;
            bool converged = false;
            for (int it = 0; it < 20 && !converged; ++it) {
                const Vec<S> g = y_new - base - beta * h * checked_rhs(problem, t_new, y_new, stats);
                const Vec<S> dy = lu.solve(-g);
                y_new += dy;
                const Vec<S> scale = (problem.atol + problem.rtol * y_new.array().abs()).matrix();
                converged = rms_norm(dy.cwiseQuotient(scale)) < 1e-3;
            }
            if (!converged) {
                throw StiffFailure("fixed-step BDF2 Newton iteration failed at t = " + at_time(t_new));
            }
            y_prev = y;
            have_prev = true;
        }
        const Vec<S> f_new = checked_rhs(problem, t_new, y_new, stats);
        ++stats.steps;
        while (next < times.size() && times[next] <= t_new) {
            out.times.push_back(times[next]);
            out.states.push_back(times[next] == t_new ? y_new : cubic_hermite(t, y, f, t_new, y_new, f_new, times[next]));
            ++next;
        }
        t = t_new;
        y = y_new;
        f = f_new;
    }
    return out;
}

}  // namespace

template <typename Scalar>
BasicTrajectory<Scalar> solve_ivp(const BasicIvpProblem<Scalar>& problem, const std::vector<Scalar>& output_times,
                                  const SolverOptions& options)
{
    check_output_times(problem, output_times);
    if (!problem.rhs || !problem.jac) {
        throw InvalidArgument("solve_ivp: rhs and jac callables are required");
    }
    if (options.method == OdeMethod::bdf) {
        return integrate_bdf(problem, output_times, options);
    }
    return integrate_fixed(problem, output_times, options);
}

template BasicTrajectory<double> solve_ivp<double>(const BasicIvpProblem<double>&, const std::vector<double>&,
                                                  const SolverOptions&);
template BasicTrajectory<long double> solve_ivp<long double>(const BasicIvpProblem<long double>&,
                                                            const std::vector<long double>&, const SolverOptions&);

std::vector<double> linspace_times(double t0, double t_end, int n)
{
    if (n < 2) {
        throw InvalidArgument("linspace_times: need at least two samples");
    }
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) {
        out[i] = t0 + (t_end - t0) * double(i) / double(n - 1);
    }
    out.back() = t_end;
    return out;
}

double condition_number(const Matrix& m)
{
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw InvalidArgument("condition_number: matrix must be square and non-empty");
    }
    const Eigen::JacobiSVD<Matrix> svd(m);
    const Vector& s = svd.singularValues();
    const double largest = s[0];
    const double smallest = s[s.size() - 1];
    if (!(smallest > largest * double(m.rows()) * std::numeric_limits<double>::epsilon())) {
        return std::numeric_limits<double>::infinity();
    }
    return largest / smallest;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory)
{
    out << "time";
    const Eigen::Index n = trajectory.states.empty() ? 0 : trajectory.states.front().size();
    for (Eigen::Index i = 1; i <= n; ++i) {
        out << ",a" << i;
    }
    out << '\n' << std::setprecision(17);
    for (std::size_t k = 0; k < trajectory.times.size(); ++k) {
        out << trajectory.times[k];
        for (Eigen::Index i = 0; i < n; ++i) {
            out << ',' << trajectory.states[k][i];
        }
        out << '\n';
    }
}

std::string stats_json(const SolverStats& stats)
{
    const nlohmann::json j = {
        {"method", stats.method},
        {"steps", stats.steps},
        {"rejected_steps", stats.rejected_steps},
        {"rhs_evaluations", stats.rhs_evaluations},
        {"jacobian_evaluations", stats.jacobian_evaluations},
        {"lu_decompositions", stats.lu_decompositions},
    };
    return j.dump(2);
}

}  // namespace specball
