#pragma once
// Projective points, model spaces as quotients of pseudo-spheres, lines,
// their position with respect to the absolute, cross-ratios and the
// projective distance.

#include "modelspace/forms.hpp"

#include <complex>
#include <optional>
#include <string>

namespace modelspace {

// Angular tolerance for projective equality of points.
inline constexpr double kProjectiveAngleTol = 1e-10;
// Relative discriminant threshold below which the absolute roots coincide.
inline constexpr double kDiscriminantRel = 1e-9;

// A point of RP^n stored through a unit-norm representative whose last
// nonzero coordinate is positive.
template <typename Scalar = double>
class ProjPoint {
public:
    using Vector = VectorX<Scalar>;

    ProjPoint() = default;

    template <typename Derived>
    explicit ProjPoint(const Eigen::MatrixBase<Derived>& v) : rep_(v)
    {
        const Scalar n = rep_.norm();
        require(n > Scalar(0) && std::isfinite(n), "ProjPoint: representative must be a nonzero finite vector");
        rep_ /= n;
        for (int i = static_cast<int>(rep_.size()) - 1; i >= 0; --i) {
            if (std::abs(rep_[i]) > Scalar(1e-14)) {
                if (rep_[i] < 0) rep_ = -rep_;
                break;
            }
        }
    }

    const Vector& rep() const { return rep_; }
    int dim() const { return static_cast<int>(rep_.size()); }

    // Projective equality: the representatives span the same line up to
    // an angle of kProjectiveAngleTol.
    bool operator==(const ProjPoint& other) const
    {
        if (dim() != other.dim()) return false;
        const Scalar c = rep_.dot(other.rep_);
        const Scalar sin_angle = (rep_ - c * other.rep_).norm();
        return sin_angle <= Scalar(kProjectiveAngleTol);
    }

private:
    Vector rep_;
};

using Point = ProjPoint<double>;

enum class SpaceKind { Ell, Hyp, dS, AdS, Euc, Min, coEuc, coMin };

std::string to_string(SpaceKind k);

// A model space: a bilinear form plus a sign selecting b^{-1}(+1) or b^{-1}(-1).
template <typename Scalar = double>
struct ModelSpace {
    BilinearForm<Scalar> form;
    int sign = 1;
    SpaceKind kind = SpaceKind::Ell;
    int n = 2;  // dimension of the space; ambient dimension is n + 1

    static ModelSpace make(SpaceKind kind, int n)
    {
        require(n >= 1, "ModelSpace: dimension must be positive");
        using F = BilinearForm<Scalar>;
        const int d = n + 1;
        switch (kind) {
        case SpaceKind::Ell: return {F::standard(d, 0), +1, kind, n};
        case SpaceKind::Hyp: return {F::standard(n, 1), -1, kind, n};
        case SpaceKind::dS: return {F::standard(n, 1), +1, kind, n};
        case SpaceKind::AdS:
            require(n >= 2, "ModelSpace: AdS needs n >= 2");
            return {F::standard(n - 1, 2), -1, kind, n};
        case SpaceKind::coEuc: return {F::standard(n, 0, 1), +1, kind, n};
        case SpaceKind::coMin:
            require(n >= 2, "ModelSpace: coMin needs n >= 2");
            return {F::standard(n - 1, 1, 1), -1, kind, n};
        case SpaceKind::Euc:
        case SpaceKind::Min: {
            VectorX<Scalar> diag = VectorX<Scalar>::Zero(d);
            diag[n] = Scalar(1);
            return {F::diagonal(diag), +1, kind, n};
        }
        }
        throw DomainError("ModelSpace: unknown kind");
    }

    int ambient_dim() const { return form.dim(); }
    bool degenerate() const { return form.degenerate(); }
    std::string name() const { return to_string(kind) + std::to_string(n); }

    // p lies in the space iff sign * b(rep, rep) > 0 (beyond the light-like threshold).
    bool contains(const ProjPoint<Scalar>& p) const
    {
        if (p.dim() != ambient_dim()) return false;
        const Scalar v = sign * form(p.rep(), p.rep());
        return v > Scalar(kLightlikeRel) * p.rep().squaredNorm();
    }

    // Representative scaled onto the pseudo-sphere b(x, x) = sign.
    VectorX<Scalar> lift(const ProjPoint<Scalar>& p) const
    {
        require(contains(p), "lift: point is not in " + name());
        return p.rep() / std::sqrt(sign * form(p.rep(), p.rep()));
    }
};

using Space = ModelSpace<double>;

// Parses names such as "Ell2", "Hyp3", "dS2", "AdS3", "coEuc3", "coMin3", "Euc2".
Space parse_space(const std::string& name);

// A line of RP^n: a 2-plane of R^{n+1} with Euclidean-orthonormal generators.
template <typename Scalar = double>
struct ProjLine {
    MatrixX<Scalar> span;  // (n+1) x 2, orthonormal columns

    static ProjLine from_generators(const VectorX<Scalar>& u, const VectorX<Scalar>& v)
    {
        require(u.size() == v.size(), "ProjLine: dimension mismatch");
        MatrixX<Scalar> m(u.size(), 2);
        m << u, v;
        Eigen::HouseholderQR<MatrixX<Scalar>> qr(m);
        MatrixX<Scalar> r = qr.matrixQR().template triangularView<Eigen::Upper>();
        const Scalar scale = std::max(u.norm(), v.norm());
        require(std::abs(r(1, 1)) > Scalar(kProjectiveAngleTol) * scale && std::abs(r(0, 0)) > Scalar(0),
                "ProjLine: generators are dependent");
        MatrixX<Scalar> q = qr.householderQ() * MatrixX<Scalar>::Identity(u.size(), 2);
        return ProjLine{q};
    }

    // Coordinates of a vector of the plane in the orthonormal basis.
    Eigen::Matrix<Scalar, 2, 1> coordinates(const VectorX<Scalar>& x) const { return span.transpose() * x; }
};

using Line = ProjLine<double>;

template <typename Scalar>
ProjLine<Scalar> line_through(const ProjPoint<Scalar>& x, const ProjPoint<Scalar>& y)
{
    require(x.dim() == y.dim(), "line_through: dimension mismatch");
    require(!(x == y), "line_through: coincident points");
    return ProjLine<Scalar>::from_generators(x.rep(), y.rep());
}

enum class LineType { elliptic, parabolic, hyperbolic };

inline std::string to_string(LineType t)
{
    switch (t) {
    case LineType::elliptic: return "elliptic";
    case LineType::parabolic: return "parabolic";
    default: return "hyperbolic";
    }
}

// Intersection of a line with the absolute: two points [alpha:beta] of the
// complexified line, in the coordinates of ProjLine::span.
template <typename Scalar = double>
struct AbsolutePair {
    using C = std::complex<Scalar>;
    Eigen::Matrix<C, 2, 1> first;
    Eigen::Matrix<C, 2, 1> second;
    bool coincident = false;  // double root (parabolic line)
    bool degenerate = false;  // the whole line lies in the absolute
    bool real = false;        // real distinct roots (hyperbolic line)
};

template <typename Scalar>
Eigen::Matrix<Scalar, 2, 2> restricted_gram(const BilinearForm<Scalar>& b, const ProjLine<Scalar>& l)
{
    return l.span.transpose() * b.matrix() * l.span;
}

template <typename Scalar>
AbsolutePair<Scalar> absolute_points(const ModelSpace<Scalar>& space, const ProjLine<Scalar>& l)
{
    using C = std::complex<Scalar>;
    const Eigen::Matrix<Scalar, 2, 2> g = restricted_gram(space.form, l);
    const Scalar a = g(0, 0), c = g(0, 1), d = g(1, 1);
    const Scalar scale = std::max({std::abs(a), std::abs(c), std::abs(d)});
    AbsolutePair<Scalar> out;
    const Scalar ambient_scale = std::max<Scalar>(Scalar(1e-300), space.form.matrix().cwiseAbs().maxCoeff());
    if (scale <= Scalar(kDiscriminantRel) * ambient_scale) {
        out.degenerate = true;
        out.coincident = true;
        out.first << C(1), C(0);
        out.second = out.first;
        return out;
    }
    const Scalar disc = c * c - a * d;
    // Roots of a alpha^2 + 2 c alpha beta + d beta^2 = 0.
    const C sq = std::sqrt(C(disc));
    if (std::abs(disc) <= Scalar(kDiscriminantRel) * scale * scale) {
        out.coincident = true;
        out.real = true;
        if (std::abs(a) >= std::abs(d)) out.first << C(-c / a), C(1);
        else out.first << C(1), C(-c / d);
        out.second = out.first;
        return out;
    }
    out.real = disc > 0;
    if (std::abs(a) >= std::abs(d)) {
        out.first << (C(-c) + sq) / a, C(1);
        out.second << (C(-c) - sq) / a, C(1);
    } else {
        out.first << C(1), (C(-c) + sq) / d;
        out.second << C(1), (C(-c) - sq) / d;
    }
    return out;
}

template <typename Scalar>
LineType classify_line(const ModelSpace<Scalar>& space, const ProjLine<Scalar>& l)
{
    const Eigen::Matrix<Scalar, 2, 2> g = restricted_gram(space.form, l);
    const Signature s = signature_of<Scalar>(MatrixX<Scalar>(g));
    if (s.z >= 1) return LineType::parabolic;
    if (s.p == 1 && s.q == 1) return LineType::hyperbolic;
    return LineType::elliptic;
}

// A value of C u {infinity}.
template <typename Scalar = double>
struct ExtendedComplex {
    std::complex<Scalar> value{};
    bool infinite = false;
};

// Cross-ratio [x, y, q, p] of four points of CP^1 given in homogeneous
// coordinates: h(p) for the homography with h(x) = inf, h(y) = 0, h(q) = 1.
template <typename Scalar>
ExtendedComplex<Scalar> cross_ratio(const Eigen::Matrix<std::complex<Scalar>, 2, 1>& x,
                                    const Eigen::Matrix<std::complex<Scalar>, 2, 1>& y,
                                    const Eigen::Matrix<std::complex<Scalar>, 2, 1>& q,
                                    const Eigen::Matrix<std::complex<Scalar>, 2, 1>& p)
{
    using C = std::complex<Scalar>;
    auto det = [](const auto& a, const auto& b) { return a[0] * b[1] - a[1] * b[0]; };
    auto same = [&](const auto& a, const auto& b) {
        return std::abs(det(a, b)) <= Scalar(kProjectiveAngleTol) * a.norm() * b.norm();
    };
    require(x.norm() > 0 && y.norm() > 0 && q.norm() > 0 && p.norm() > 0,
            "cross_ratio: zero homogeneous coordinates");
    require(!same(x, y), "cross_ratio: x and y coincide");
    require(!same(y, q) && !same(x, q), "cross_ratio: q coincides with x or y");
    const C num = det(x, q) * det(y, p);
    const C den = det(y, q) * det(x, p);
    if (same(x, p)) return {C(0), true};
    if (same(y, p)) return {C(0), false};
    return {num / den, false};
}

// Affine convenience overload: std::nullopt stands for the point at infinity.
template <typename Scalar>
ExtendedComplex<Scalar> cross_ratio(std::optional<std::complex<Scalar>> x, std::optional<std::complex<Scalar>> y,
                                    std::optional<std::complex<Scalar>> q, std::optional<std::complex<Scalar>> p)
{
    using C = std::complex<Scalar>;
    auto hom = [](const std::optional<C>& z) {
        Eigen::Matrix<C, 2, 1> v;
        if (z) v << *z, C(1);
        else v << C(1), C(0);
        return v;
    };
    return cross_ratio<Scalar>(hom(x), hom(y), hom(q), hom(p));
}

// Projective distance |1/2 ln [x, y, I, J]| (principal branch); 0 on parabolic lines.
template <typename Scalar>
Scalar projective_distance(const ModelSpace<Scalar>& space, const ProjPoint<Scalar>& x, const ProjPoint<Scalar>& y)
{
    using C = std::complex<Scalar>;
    require(space.contains(x), "projective_distance: x is not in " + space.name());
    require(space.contains(y), "projective_distance: y is not in " + space.name());
    if (x == y) return Scalar(0);
    const ProjLine<Scalar> l = line_through(x, y);
    if (classify_line(space, l) == LineType::parabolic) return Scalar(0);
    const AbsolutePair<Scalar> abs = absolute_points(space, l);
    if (abs.coincident) return Scalar(0);
    const Eigen::Matrix<Scalar, 2, 1> cx = l.coordinates(x.rep());
    const Eigen::Matrix<Scalar, 2, 1> cy = l.coordinates(y.rep());
    const Eigen::Matrix<C, 2, 1> zx = cx.template cast<C>();
    const Eigen::Matrix<C, 2, 1> zy = cy.template cast<C>();
    const ExtendedComplex<Scalar> cr = cross_ratio<Scalar>(zx, zy, abs.first, abs.second);
    require(!cr.infinite && std::abs(cr.value) > 0, "projective_distance: point on the absolute");
    return std::abs(Scalar(0.5) * std::log(cr.value));
}

// Pseudo-distance between lifts on the pseudo-sphere b(x, x) = sign, by
// inversion of b(x, y) = cos d, -b = cos d, b = cosh d or -b = cosh d.
template <typename Scalar, typename DX, typename DY>
Scalar pseudo_distance_lift(const ModelSpace<Scalar>& space, const Eigen::MatrixBase<DX>& xt,
                            const Eigen::MatrixBase<DY>& yt)
{
    const auto& b = space.form;
    const Scalar s = Scalar(space.sign);
    const Scalar tol = Scalar(1e-9);
    require(std::abs(b(xt, xt) - s) <= tol * std::max<Scalar>(1, xt.squaredNorm()),
            "pseudo_distance_lift: x is not on the pseudo-sphere");
    require(std::abs(b(yt, yt) - s) <= tol * std::max<Scalar>(1, yt.squaredNorm()),
            "pseudo_distance_lift: y is not on the pseudo-sphere");
    const Scalar beta = s * b(xt, yt);
    const VectorX<Scalar> xv = xt, yv = yt;
    const Scalar chord = (xv - yv).norm();
    if (chord <= Scalar(kProjectiveAngleTol) * xv.norm()) return Scalar(0);
    if ((xv + yv).norm() <= Scalar(kProjectiveAngleTol) * xv.norm()) {
        require(std::abs(beta + 1) < tol, "pseudo_distance_lift: opposite lifts on different branches");
        return Scalar(M_PI);
    }
    MatrixX<Scalar> basis(xv.size(), 2);
    basis << xv, yv;
    const Signature sig = restrict(b, basis).signature();
    if (sig.z >= 1) return Scalar(0);
    if (sig.p == 1 && sig.q == 1) {
        require(beta >= Scalar(1) - tol, "pseudo_distance_lift: lifts lie on different hyperbola branches");
        return std::acosh(std::max<Scalar>(Scalar(1), beta));
    }
    return std::acos(std::clamp<Scalar>(beta, Scalar(-1), Scalar(1)));
}

}  // namespace modelspace
