#include "modelspace/transition.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace modelspace {

std::string to_string(FamilyKind k)
{
    return k == FamilyKind::blow_up_point ? "point" : "plane";
}

FamilyKind parse_family(const std::string& name)
{
    if (name == "point" || name == "blow_up_point") return FamilyKind::blow_up_point;
    if (name == "plane" || name == "hyperplane" || name == "blow_up_hyperplane")
        return FamilyKind::blow_up_hyperplane;
    throw DomainError("unknown rescaling family '" + name + "' (expected point|plane)");
}

std::string to_string(LimitGroup g)
{
    switch (g) {
    case LimitGroup::IsomEuc: return "IsomEuc";
    case LimitGroup::IsomMin: return "IsomMin";
    case LimitGroup::IsomCoEuc: return "IsomCoEuc";
    default: return "IsomCoMin";
    }
}

VectorXd RescalingFamily::diagonal(double t) const
{
    require(t > 0.0, "RescalingFamily: t must be positive");
    require(dim >= 2, "RescalingFamily: dimension must be at least 2");
    VectorXd d = VectorXd::Ones(dim);
    if (kind == FamilyKind::blow_up_point) d.head(dim - 1).setConstant(1.0 / t);
    else d[dim - 1] = 1.0 / t;
    return d;
}

RescalingFamily RescalingFamily::dual() const
{
    return {kind == FamilyKind::blow_up_point ? FamilyKind::blow_up_hyperplane : FamilyKind::blow_up_point,
            dim};
}

Point rescaled_point_limit(const PointPath& path, const RescalingFamily& fam, double base_tol, double step)
{
    const VectorXd x0 = path(0.0);
    require(x0.size() == fam.dim, "rescaled_point_limit: path dimension does not match the family");
    const int n = fam.dim - 1;
    const double scale = std::max(1.0, x0.norm());
    const VectorXd dx = central_derivative([&](double t) { return path(t); }, 0.0, step);
    VectorXd limit(fam.dim);
    if (fam.kind == FamilyKind::blow_up_point) {
        if (x0.head(n).norm() > base_tol * scale)
            throw DomainError("rescaled_point_limit: x(0) is not the blown-up point; the limit diverges");
        limit << dx.head(n), x0[n];
    } else {
        if (std::abs(x0[n]) > base_tol * scale)
            throw DomainError("rescaled_point_limit: x(0) is not on the blown-up hyperplane; the limit diverges");
        limit << x0.head(n), dx[n];
    }
    require(limit.norm() > 0.0, "rescaled_point_limit: degenerate limit (zero vector)");
    return Point(limit);
}

MatrixXd conjugate_isometry(const MatrixXd& h, const RescalingFamily& fam, double t)
{
    require(h.rows() == fam.dim && h.cols() == fam.dim, "conjugate_isometry: dimension mismatch");
    const VectorXd g = fam.diagonal(t);
    return g.asDiagonal() * h * g.cwiseInverse().asDiagonal();
}

LimitResult<MatrixXd> conjugated_limit(const IsometryPath& h, const RescalingFamily& fam)
{
    return matrix_limit([&](double t) { return conjugate_isometry(h(t), fam, t); });
}

LimitResult<MatrixXd> matrix_limit(const MatrixPath& m, double tol)
{
    return richardson_limit([&](double t) { return MatrixXd(m(t)); }, 2, tol);
}

namespace {

// Normalizes m to |det| = 1 and fixes the projective sign so the corner is >= 0.
MatrixXd normalized(const MatrixXd& m)
{
    const double det = m.determinant();
    if (!(std::abs(det) > 0.0)) return m;
    MatrixXd a = m / std::pow(std::abs(det), 1.0 / static_cast<double>(m.rows()));
    if (a(a.rows() - 1, a.cols() - 1) < 0.0) a = -a;
    return a;
}

}  // namespace

double limit_group_defect(const MatrixXd& m, LimitGroup target)
{
    require(m.rows() == m.cols() && m.rows() >= 2, "limit_group_membership: square matrix expected");
    const int n = static_cast<int>(m.rows()) - 1;
    const MatrixXd a = normalized(m);
    if (!(std::abs(m.determinant()) > 0.0)) return 1e300;
    const bool co = target == LimitGroup::IsomCoEuc || target == LimitGroup::IsomCoMin;
    const bool lorentz = target == LimitGroup::IsomMin || target == LimitGroup::IsomCoMin;

    double defect = 0.0;
    // Zero block: last row (Euclidean/Minkowski) or last column (co-spaces).
    const VectorXd zero_block = co ? VectorXd(a.col(n).head(n)) : VectorXd(a.row(n).head(n).transpose());
    if (n > 0) defect = std::max(defect, zero_block.cwiseAbs().maxCoeff());
    defect = std::max(defect, std::abs(std::abs(a(n, n)) - 1.0));
    VectorXd jd = VectorXd::Ones(n);
    if (lorentz) jd[n - 1] = -1.0;
    const MatrixXd j = jd.asDiagonal();
    const MatrixXd blk = a.topLeftCorner(n, n);
    defect = std::max(defect, (blk.transpose() * j * blk - j).cwiseAbs().maxCoeff());
    return defect;
}

bool limit_group_membership(const MatrixXd& m, LimitGroup target, double tol)
{
    return limit_group_defect(m, target) <= tol;
}

TransitionSetup transition_setup(SpaceKind source, FamilyKind family, int ambient_dim)
{
    require(ambient_dim >= 3, "transition_setup: ambient dimension must be at least 3");
    const int d = ambient_dim;
    VectorXd diag = VectorXd::Ones(d);
    TransitionSetup s;
    s.source = source;
    s.family = family;
    s.ambient_dim = d;
    const bool point = family == FamilyKind::blow_up_point;
    switch (source) {
    case SpaceKind::Ell:
        s.sign = 1.0;
        s.limit = point ? SpaceKind::Euc : SpaceKind::coEuc;
        break;
    case SpaceKind::Hyp:
        s.sign = -1.0;
        if (point) diag[d - 1] = -1.0;
        else diag[d - 2] = -1.0;
        s.limit = point ? SpaceKind::Euc : SpaceKind::coMin;
        break;
    case SpaceKind::dS:
        s.sign = 1.0;
        if (point) diag[d - 2] = -1.0;
        else diag[d - 1] = -1.0;
        s.limit = point ? SpaceKind::Min : SpaceKind::coEuc;
        break;
    case SpaceKind::AdS:
        s.sign = -1.0;
        diag[d - 2] = -1.0;
        diag[d - 1] = -1.0;
        s.limit = point ? SpaceKind::Min : SpaceKind::coMin;
        break;
    default:
        throw DomainError("transition_setup: source must be one of Ell, Hyp, dS, AdS");
    }
    s.form = Form::diagonal(diag);
    switch (s.limit) {
    case SpaceKind::Euc: s.target = LimitGroup::IsomEuc; break;
    case SpaceKind::Min: s.target = LimitGroup::IsomMin; break;
    case SpaceKind::coEuc: s.target = LimitGroup::IsomCoEuc; break;
    default: s.target = LimitGroup::IsomCoMin; break;
    }
    return s;
}

namespace {

// Random element of the Lie algebra o(b) for a diagonal form with entries +-1.
MatrixXd random_algebra_element(const VectorXd& j, Rng& rng, double scale)
{
    const int d = static_cast<int>(j.size());
    MatrixXd s = MatrixXd::Zero(d, d);
    for (int r = 0; r < d; ++r)
        for (int c = r + 1; c < d; ++c) {
            s(r, c) = scale * rng.normal();
            s(c, r) = -s(r, c);
        }
    return j.asDiagonal() * s;
}

}  // namespace

IsometryPath random_isometry_path(const TransitionSetup& s, Rng& rng, double scale)
{
    const int d = s.ambient_dim;
    const VectorXd j = s.form.matrix().diagonal();
    const MatrixXd a = random_algebra_element(j, rng, scale);
    // R stabilizes e_last and {x_last = 0}: block isometry of the first d-1
    // coordinates times a sign on the last one.
    MatrixXd r = MatrixXd::Identity(d, d);
    const MatrixXd a3 = random_algebra_element(j.head(d - 1), rng, scale);
    r.topLeftCorner(d - 1, d - 1) = a3.exp();
    if (rng.uniform() < 0.5) r(d - 1, d - 1) = -1.0;
    return [r, a](double t) { return MatrixXd(r * (t * a).exp()); };
}

PointPath random_point_path(const TransitionSetup& s, Rng& rng, double scale)
{
    const int d = s.ambient_dim;
    const VectorXd j = s.form.matrix().diagonal();
    const MatrixXd a = random_algebra_element(j, rng, scale);
    VectorXd x0 = VectorXd::Zero(d);
    if (s.family == FamilyKind::blow_up_point) {
        x0[d - 1] = 1.0;
    } else {
        // A point of the pseudo-sphere inside {x_last = 0}: a unit sphere point
        // (definite restriction) or a hyperboloid point (Lorentzian restriction).
        const bool lorentz = j[d - 2] < 0.0;
        VectorXd y = rng.unit_vector(d - 1);
        if (lorentz) {
            VectorXd space = y.head(d - 2);
            if (space.norm() == 0.0) space = VectorXd::Unit(d - 2, 0);
            const double radius = rng.uniform(0.0, 1.2);
            x0.head(d - 2) = std::sinh(radius) * space.normalized();
            x0[d - 2] = std::cosh(radius);
        } else {
            x0.head(d - 1) = y;
        }
    }
    return [a, x0](double t) { return VectorXd((t * a).exp() * x0); };
}

double duality_transition_gap(const PointPath& path, const TransitionSetup& s)
{
    const RescalingFamily fam = s.rescaling();
    const MatrixXd& b = s.form.matrix();
    // Dual of the limit point, as a covector (the form is diagonal, so it
    // commutes with the rescaling pattern).
    const Point limit = rescaled_point_limit(path, fam);
    const VectorXd lhs = (b * limit.rep()).normalized();

    // Dual hyperplanes x(t)*: covectors b x(t).  Hyperplanes transform by the
    // inverse-transpose, i.e. under the dual family's inverse; the result is
    // O(t) and is rescaled by 1/t before extrapolating.
    const RescalingFamily dual = fam.dual();
    auto cov = [&](double t) {
        const VectorXd c = b * path(t);
        return VectorXd(dual.inverse(t) * c / t);
    };
    const auto lim = richardson_limit(cov, 2, 1e-10);
    const VectorXd rhs = lim.value.normalized();
    return std::min((lhs - rhs).norm(), (lhs + rhs).norm());
}

bool duality_transition_check(const PointPath& path, const TransitionSetup& s, double tol)
{
    return duality_transition_gap(path, s) < tol;
}

Matrix2d toy_rotation(double theta)
{
    Matrix2d m;
    m << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
    return m;
}

Matrix2d toy_translation(double a)
{
    Matrix2d m;
    m << 1.0, a, 0.0, 1.0;
    return m;
}

Matrix2d toy_boost(double phi)
{
    Matrix2d m;
    m << std::cosh(phi), -std::sinh(phi), std::sinh(phi), std::cosh(phi);
    return m;
}

Matrix2d toy_rescaling(double k)
{
    return Vector2d(k, 1.0).asDiagonal();
}

LimitResult<MatrixXd> toy_limit(const std::function<Matrix2d(double)>& m)
{
    return matrix_limit([&](double t) {
        const double k = 1.0 / t;
        return MatrixXd(toy_rescaling(k) * m(k) * toy_rescaling(k).inverse());
    });
}

}  // namespace modelspace
