#include "specball/quadrature.hpp"

#include <iomanip>
#include <map>
#include <mutex>
#include <ostream>

namespace specball {

std::shared_ptr<const BallRule<double>> cached_ball_rule(int dim, int q)
{
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::shared_ptr<const BallRule<double>>> cache;
    const std::lock_guard<std::mutex> lock(mutex);
    auto& slot = cache[{dim, q}];
    if (!slot) {
        slot = std::make_shared<const BallRule<double>>(unit_ball_rule<double>(dim, q));
    }
    return slot;
}

void write_rule_csv(std::ostream& out, const BallRule<double>& rule)
{
    static const char* names[] = {"x1", "x2", "x3"};
    for (int d = 0; d < rule.dim; ++d) {
        out << names[d] << ',';
    }
    out << "weight\n";
    out << std::setprecision(17);
    for (Eigen::Index i = 0; i < rule.size(); ++i) {
        for (int d = 0; d < rule.dim; ++d) {
            out << rule.nodes(d, i) << ',';
        }
        out << rule.weights[i] << '\n';
    }
}

void write_rule_csv(std::ostream& out, const Rule1D<double>& rule)
{
    out << "x1,weight\n" << std::setprecision(17);
    for (Eigen::Index i = 0; i < rule.size(); ++i) {
        out << rule.nodes[i] << ',' << rule.weights[i] << '\n';
    }
}

}  // namespace specball
