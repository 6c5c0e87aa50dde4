#include "specball/basis3d.hpp"

#include <iostream>
#include <map>
#include <mutex>

namespace specball {

double ball3_normalization_check(int n)
{
    static std::mutex mutex;
    static std::map<int, double> checked;
    {
        const std::lock_guard<std::mutex> lock(mutex);
        if (auto it = checked.find(n); it != checked.end()) {
            return it->second;
        }
    }
    const BallBasis3<double> basis(n);
    const auto rule = cached_ball_rule(3, n + 2);
    Vector diag = Vector::Zero(basis.size());
    for (Eigen::Index i = 0; i < rule->size(); ++i) {
        const Vector v = basis.values(rule->nodes.col(i));
        diag += rule->weights[i] * v.cwiseAbs2();
    }
    const double deviation = (diag.array() - 1.0).abs().maxCoeff();
    if (deviation > 1e-10) {
        std::cerr << "warning: ball basis normalization at degree " << n
                  << " deviates from unit length by " << deviation << '\n';
    }
    const std::lock_guard<std::mutex> lock(mutex);
    checked[n] = deviation;
    return deviation;
}

}  // namespace specball
