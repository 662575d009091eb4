#pragma once
// Symmetric bilinear forms of arbitrary signature on R^{n+1}: evaluation,
// signature, vector classification and restriction to subspaces.

#include "modelspace/common.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>
#include <vector>

namespace modelspace {

struct Signature {
    int p = 0;  // positive eigenvalues
    int q = 0;  // negative eigenvalues
    int z = 0;  // zero eigenvalues (degeneracy)
    bool operator==(const Signature&) const = default;
};

enum class VectorClass { spacelike, timelike, lightlike };

inline std::string to_string(VectorClass c)
{
    switch (c) {
    case VectorClass::spacelike: return "spacelike";
    case VectorClass::timelike: return "timelike";
    default: return "lightlike";
    }
}

// Zero threshold for eigenvalues relative to the spectral radius.
inline constexpr double kSignatureZeroRel = 1e-9;
// Light-likeness threshold relative to |x|^2.
inline constexpr double kLightlikeRel = 1e-9;
// Relative symmetry tolerance accepted when constructing a form.
inline constexpr double kSymmetryRel = 1e-12;

template <typename Scalar>
Signature signature_of(const MatrixX<Scalar>& m)
{
    Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> es(m, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    const Scalar radius = ev.size() ? ev.cwiseAbs().maxCoeff() : Scalar(0);
    const Scalar thr = Scalar(kSignatureZeroRel) * radius;
    Signature s;
    for (int i = 0; i < ev.size(); ++i) {
        if (radius == Scalar(0) || std::abs(ev[i]) <= thr) ++s.z;
        else if (ev[i] > 0) ++s.p;
        else ++s.q;
    }
    return s;
}

// A symmetric bilinear form stored as a full (n+1)x(n+1) matrix.
template <typename Scalar = double>
class BilinearForm {
public:
    using Matrix = MatrixX<Scalar>;
    using Vector = VectorX<Scalar>;

    BilinearForm() = default;

    explicit BilinearForm(Matrix m) : matrix_(std::move(m))
    {
        require(matrix_.rows() == matrix_.cols() && matrix_.rows() > 0,
                "BilinearForm: matrix must be square and non-empty");
        const Scalar scale = std::max<Scalar>(Scalar(1), matrix_.cwiseAbs().maxCoeff());
        require((matrix_ - matrix_.transpose()).cwiseAbs().maxCoeff() <= Scalar(kSymmetryRel) * scale,
                "BilinearForm: matrix is not symmetric");
        matrix_ = Scalar(0.5) * (matrix_ + matrix_.transpose());
        signature_ = signature_of<Scalar>(matrix_);
    }

    // Diagonal form with p entries +1, then q entries -1, then z zeros.
    static BilinearForm standard(int p, int q, int z = 0)
    {
        Vector d(p + q + z);
        d << Vector::Ones(p), -Vector::Ones(q), Vector::Zero(z);
        return BilinearForm(Matrix(d.asDiagonal()));
    }

    static BilinearForm diagonal(const Vector& d) { return BilinearForm(Matrix(d.asDiagonal())); }

    int dim() const { return static_cast<int>(matrix_.rows()); }
    const Matrix& matrix() const { return matrix_; }
    const Signature& signature() const { return signature_; }
    bool degenerate() const { return signature_.z > 0; }

    template <typename DerivedX, typename DerivedY>
    Scalar operator()(const Eigen::MatrixBase<DerivedX>& x, const Eigen::MatrixBase<DerivedY>& y) const
    {
        require(x.size() == dim() && y.size() == dim(), "eval: dimension mismatch");
        return x.dot(matrix_ * y);
    }

    BilinearForm operator-() const { return BilinearForm(Matrix(-matrix_)); }

private:
    Matrix matrix_;
    Signature signature_;
};

using Form = BilinearForm<double>;

// b(x, y) = x^T M y.
template <typename Scalar, typename DerivedX, typename DerivedY>
Scalar eval(const BilinearForm<Scalar>& b, const Eigen::MatrixBase<DerivedX>& x,
            const Eigen::MatrixBase<DerivedY>& y)
{
    return b(x, y);
}

template <typename Scalar, typename Derived>
VectorClass classify_vector(const BilinearForm<Scalar>& b, const Eigen::MatrixBase<Derived>& x)
{
    const Scalar n2 = x.squaredNorm();
    require(n2 > Scalar(0), "classify_vector: zero vector");
    const Scalar v = b(x, x);
    if (std::abs(v) <= Scalar(kLightlikeRel) * n2) return VectorClass::lightlike;
    return v > 0 ? VectorClass::spacelike : VectorClass::timelike;
}

// Gram matrix of b on the span of the columns of `basis`.
template <typename Scalar, typename Derived>
BilinearForm<Scalar> restrict(const BilinearForm<Scalar>& b, const Eigen::MatrixBase<Derived>& basis)
{
    require(basis.rows() == b.dim(), "restrict: dimension mismatch");
    require(basis.cols() >= 1, "restrict: empty basis");
    Eigen::ColPivHouseholderQR<MatrixX<Scalar>> qr(basis);
    qr.setThreshold(Scalar(1e-10));
    require(qr.rank() == basis.cols(), "restrict: basis vectors are linearly dependent");
    return BilinearForm<Scalar>(MatrixX<Scalar>(basis.transpose() * b.matrix() * basis));
}

template <typename Scalar>
BilinearForm<Scalar> restrict(const BilinearForm<Scalar>& b, const std::vector<VectorX<Scalar>>& basis)
{
    require(!basis.empty(), "restrict: empty basis");
    MatrixX<Scalar> m(b.dim(), static_cast<int>(basis.size()));
    for (std::size_t i = 0; i < basis.size(); ++i) {
        require(basis[i].size() == b.dim(), "restrict: dimension mismatch");
        m.col(static_cast<int>(i)) = basis[i];
    }
    return restrict(b, m);
}

// Named forms used by the model spaces.
namespace forms {
inline Form euclidean(int dim) { return Form::standard(dim, 0); }
inline Form lorentzian(int dim) { return Form::standard(dim - 1, 1); }
// b* = diag(1,...,1,0): degenerate form of co-Euclidean space.
inline Form co_euclidean(int dim) { return Form::standard(dim - 1, 0, 1); }
// b*_- = diag(1,...,1,-1,0): degenerate form of co-Minkowski space.
inline Form co_minkowski(int dim) { return Form::standard(dim - 2, 1, 1); }
// diag(0,...,0,1): the form whose positive set is an affine chart.
inline Form affine_chart(int dim) { return Form::diagonal(VectorXd::Unit(dim, dim - 1)); }
}  // namespace forms

}  // namespace modelspace
