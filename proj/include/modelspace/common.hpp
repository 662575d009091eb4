#pragma once
// Shared aliases, error types and small helpers used across modelspace modules.

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace modelspace {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Eigen::Matrix2d;
using Eigen::Matrix3d;
using Eigen::Matrix4d;
using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::Vector3d;
using Eigen::Vector4d;
using Eigen::VectorXd;

// Raised when an input violates a documented precondition (dimension mismatch,
// point outside a model space, non-admissible body, ...).  The CLI maps it to
// exit code 2.
class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// Raised when a numerical check exceeds its tolerance.  The CLI maps it to exit
// code 3.
class ToleranceError : public std::runtime_error {
public:
    explicit ToleranceError(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool cond, const std::string& what)
{
    if (!cond) throw DomainError(what);
}

}  // namespace modelspace
