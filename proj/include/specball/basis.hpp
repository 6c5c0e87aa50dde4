#pragma once

// Dimension-generic access to the bubble basis used by assembly.

#include "specball/basis2d.hpp"
#include "specball/basis3d.hpp"

namespace specball {

template <int Dim>
class BubbleBasis;

template <>
class BubbleBasis<2> {
public:
    explicit BubbleBasis(int n) : degree_(n)
    {
        if (n < 0) {
            throw InvalidArgument("BubbleBasis: degree must be >= 0");
        }
    }
    [[nodiscard]] int degree() const { return degree_; }
    [[nodiscard]] int size() const { return BasisSet2D::dimension(degree_); }
    [[nodiscard]] BubbleEval<2> bubble(const Point<2>& x) const { return bubble_basis(degree_, x); }
    [[nodiscard]] Vector bubble_values(const Point<2>& x) const
    {
        return (1.0 - x.squaredNorm()) * ridge_basis(degree_, x);
    }

private:
    int degree_;
};

template <>
class BubbleBasis<3> {
public:
    explicit BubbleBasis(int n) : impl_(n) {}
    [[nodiscard]] int degree() const { return impl_.degree(); }
    [[nodiscard]] int size() const { return impl_.size(); }
    [[nodiscard]] BubbleEval<3> bubble(const Point<3>& x) const { return impl_.bubble(x); }
    [[nodiscard]] Vector bubble_values(const Point<3>& x) const
    {
        return (1.0 - x.squaredNorm()) * impl_.values(x);
    }

private:
    BallBasis3<double> impl_;
};

}  // namespace specball
