#pragma once

#include <Eigen/Core>

namespace specball {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <int Dim, typename Scalar = double>
using Point = Eigen::Matrix<Scalar, Dim, 1>;
template <int Dim, typename Scalar = double>
using SquareMatrix = Eigen::Matrix<Scalar, Dim, Dim>;

/// Row k holds the gradient of basis function k.
template <int Dim, typename Scalar = double>
using GradientMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Dim>;

using Vector = VectorX<double>;
using Matrix = MatrixX<double>;

}  // namespace specball
