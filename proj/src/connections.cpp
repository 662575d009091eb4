#include "modelspace/connections.hpp"

#include <cmath>

namespace modelspace {

double fd_step(const VectorXd& x)
{
    return 1e-5 * (1.0 + x.norm());
}

VectorXd ambient_derivative(const VectorField& w, const VectorXd& v, const VectorXd& x)
{
    require(v.size() == x.size(), "ambient_derivative: dimension mismatch");
    const VectorXd w0 = w(x);
    require(w0.size() == x.size() && w0.allFinite(), "ambient_derivative: field evaluation failed");
    return central_derivative([&](double s) { return VectorXd(w(x + s * v)); }, 0.0, fd_step(x));
}

VectorXd lie_bracket(const VectorField& x_field, const VectorField& y_field, const VectorXd& x)
{
    return ambient_derivative(y_field, x_field(x), x) - ambient_derivative(x_field, y_field(x), x);
}

Connection::Connection(Form form, double sign)
    : form_(std::move(form)), sign_(sign), warnings_(std::make_shared<std::atomic<long>>(0))
{
    require(sign == 1.0 || sign == -1.0, "Connection: sign must be +1 or -1");
}

VectorXd Connection::degenerate_field(const VectorXd& x) const
{
    require(degenerate(), "degenerate_field: the form is nondegenerate");
    return VectorXd::Unit(x.size(), x.size() - 1);
}

double Connection::locus_residual(const VectorXd& x) const
{
    return std::abs(form_(x, x) - sign_) / std::max(1.0, x.squaredNorm());
}

VectorXd Connection::project(const VectorXd& x, const VectorXd& w) const
{
    return w - (form_(w, x) / form_(x, x)) * x;
}

VectorField Connection::tangent(const VectorField& w) const
{
    auto counter = warnings_;
    Connection self = *this;
    return [self, counter, w](const VectorXd& x) {
        const VectorXd raw = w(x);
        const VectorXd t = self.project(x, raw);
        if ((raw - t).norm() > 1e-8 * std::max(1.0, raw.norm())) counter->fetch_add(1);
        return t;
    };
}

VectorXd Connection::derivative(const VectorXd& v, const VectorField& w, const VectorXd& x) const
{
    require(x.size() == dim(), "connection: dimension mismatch");
    const VectorField wt = tangent(w);
    return project(x, ambient_derivative(wt, project(x, v), x));
}

VectorXd Connection::operator()(const VectorField& v, const VectorField& w, const VectorXd& x) const
{
    return derivative(v(x), w, x);
}

VectorXd Connection::acceleration(const Curve& c, double t) const
{
    const VectorXd x = c(t);
    const double h = 1e-3;
    const VectorXd acc = (-c(t + 2 * h) + 16.0 * c(t + h) - 30.0 * x + 16.0 * c(t - h) - c(t - 2 * h)) / (12.0 * h * h);
    return project(x, acc);
}

Connection levi_civita(const Space& space)
{
    require(!space.degenerate(), "levi_civita: degenerate space (use co_connection)");
    return Connection(space.form, space.sign);
}

Connection co_connection(const Space& space)
{
    require(space.degenerate() && (space.kind == SpaceKind::coEuc || space.kind == SpaceKind::coMin),
            "co_connection: space must be coEuc or coMin");
    return Connection(space.form, space.sign);
}

double geodesic_residual(const Connection& conn, const Curve& c, double a, double b, int samples)
{
    require(samples >= 1 && b >= a, "geodesic_residual: invalid sampling");
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double t = samples == 1 ? a : a + (b - a) * i / (samples - 1);
        worst = std::max(worst, conn.acceleration(c, t).norm());
    }
    return worst;
}

double VolumeForm::operator()(const VectorXd& x, const std::vector<VectorXd>& v) const
{
    require(static_cast<int>(v.size()) + 1 == dim && x.size() == dim, "volume form: expects dim - 1 vectors");
    MatrixXd m(dim, dim);
    m.col(0) = x;
    for (int i = 0; i + 1 < dim; ++i) m.col(i + 1) = v[i];
    return m.determinant();
}

VolumeForm volume_form(const Space& space)
{
    return VolumeForm{space.ambient_dim()};
}

double symmetry_residual(const Connection& c, const VectorField& x_field, const VectorField& y_field,
                         const VectorXd& x)
{
    const VectorField xt = c.tangent(x_field), yt = c.tangent(y_field);
    return (c(xt, yt, x) - c(yt, xt, x) - lie_bracket(xt, yt, x)).norm();
}

double metric_residual(const Connection& c, const VectorField& x_field, const VectorField& y_field,
                       const VectorField& z_field, const VectorXd& x)
{
    const VectorField xt = c.tangent(x_field), yt = c.tangent(y_field), zt = c.tangent(z_field);
    const VectorXd z = zt(x);
    const double lhs = central_derivative_scalar(
        [&](double s) {
            const VectorXd p = x + s * z;
            return c.metric(xt(p), yt(p));
        },
        0.0, fd_step(x));
    const double rhs = c.metric(c(zt, xt, x), yt(x)) + c.metric(xt(x), c(zt, yt, x));
    return std::abs(lhs - rhs);
}

double degenerate_field_residual(const Connection& c, const VectorField& x_field, const VectorXd& x)
{
    const VectorField t = [&c](const VectorXd& p) { return c.degenerate_field(p); };
    return c(c.tangent(x_field), t, x).norm();
}

double parallel_volume_residual(const Connection& c, const VolumeForm& omega, const VectorField& z_field,
                                const std::vector<VectorField>& fields, const VectorXd& x)
{
    std::vector<VectorField> ft;
    for (const auto& f : fields) ft.push_back(c.tangent(f));
    const VectorField zt = c.tangent(z_field);
    const VectorXd z = zt(x);
    auto eval = [&](const VectorXd& p) {
        std::vector<VectorXd> v;
        for (const auto& f : ft) v.push_back(f(p));
        return omega(p, v);
    };
    const double lhs = central_derivative_scalar([&](double s) { return eval(x + s * z); }, 0.0, fd_step(x));
    double rhs = 0.0;
    std::vector<VectorXd> base;
    for (const auto& f : ft) base.push_back(f(x));
    for (std::size_t i = 0; i < ft.size(); ++i) {
        std::vector<VectorXd> v = base;
        v[i] = c(zt, ft[i], x);
        rhs += omega(x, v);
    }
    return std::abs(lhs - rhs);
}

double plane_residual(const Connection& c, const VectorField& v, const VectorField& w, const VectorXd& x)
{
    require(std::abs(x[x.size() - 1]) < 1e-12, "plane_residual: base point is not on the plane {x_last = 0}");
    return std::abs(c(v, w, x)[x.size() - 1]);
}

double holonomy_angle(const Connection& c, const Curve& loop, const VectorXd& v0, int steps)
{
    require(c.dim() == 3 && !c.degenerate(), "holonomy_angle: expects a 2-dimensional pseudo-sphere in R^3");
    const VectorXd x0 = loop(0.0);
    require((loop(1.0) - x0).norm() < 1e-9, "holonomy_angle: curve is not closed on [0, 1]");
    const Form& b = c.form();
    auto velocity = [&](double t) {
        const double h = 1e-4;
        return VectorXd((loop(t + h) - loop(t - h)) / (2 * h));
    };
    auto rhs = [&](double t, const VectorXd& v) {
        const VectorXd g = loop(t);
        return VectorXd(-(b(v, velocity(t)) / b(g, g)) * g);
    };
    VectorXd v = c.project(x0, v0);
    const VectorXd start = v;
    const double dt = 1.0 / steps;
    for (int i = 0; i < steps; ++i) {
        const double t = i * dt;
        const VectorXd k1 = rhs(t, v);
        const VectorXd k2 = rhs(t + dt / 2, v + dt / 2 * k1);
        const VectorXd k3 = rhs(t + dt / 2, v + dt / 2 * k2);
        const VectorXd k4 = rhs(t + dt, v + dt * k3);
        v += dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    // Signed angle in the oriented tangent plane (orientation det[x, ., .] > 0).
    const Vector3d x = x0, e1 = start.normalized(), e2 = x.normalized().cross(e1);
    const Vector3d vv = v;
    return std::atan2(vv.dot(e2), vv.dot(e1));
}

VectorField random_polynomial_field(int dim, Rng& rng, double scale)
{
    const VectorXd c0 = scale * rng.gaussian(dim);
    const MatrixXd lin = scale * rng.gaussian(dim, dim);
    std::vector<MatrixXd> quad;
    for (int i = 0; i < dim; ++i) quad.push_back(0.5 * scale * rng.gaussian(dim, dim));
    return [c0, lin, quad](const VectorXd& x) {
        VectorXd out = c0 + lin * x;
        for (std::size_t i = 0; i < quad.size(); ++i) out[static_cast<int>(i)] += x.dot(quad[i] * x);
        return out;
    };
}

FieldFamily random_polynomial_family(int dim, Rng& rng, double scale)
{
    const VectorField p0 = random_polynomial_field(dim, rng, scale);
    const VectorField p1 = random_polynomial_field(dim, rng, scale);
    const VectorField p2 = random_polynomial_field(dim, rng, scale);
    return [p0, p1, p2](double t, const VectorXd& x) { return VectorXd(p0(x) + t * p1(x) + t * t * p2(x)); };
}

VectorXd random_locus_point(const Connection& c, Rng& rng, double spread)
{
    const int d = c.dim();
    if (c.degenerate()) {
        // (y, s) with y on the unit sphere / hyperboloid of the first d-1 coordinates.
        VectorXd x(d);
        if (c.sign() > 0) {
            x.head(d - 1) = rng.unit_vector(d - 1);
        } else {
            const double r = rng.uniform(0.0, spread);
            x.head(d - 2) = std::sinh(r) * rng.unit_vector(d - 2);
            x[d - 2] = std::cosh(r);
        }
        x[d - 1] = spread * rng.normal();
        return x;
    }
    for (;;) {
        const VectorXd x = rng.gaussian(d);
        const double v = c.form()(x, x) * c.sign();
        if (v > 1e-2 * x.squaredNorm()) {
            const VectorXd y = x / std::sqrt(v);
            if (y.norm() < 1.0 + 3.0 * spread) return y;
        }
    }
}

ConnectionTransitionResult connection_transition_check(const TransitionSetup& setup, const FieldFamily& px,
                                                       const FieldFamily& py, const FieldFamily& pz,
                                                       const VectorXd& x_co)
{
    require(setup.family == FamilyKind::blow_up_hyperplane,
            "connection_transition_check: the plane family is required (co-space limits)");
    const int d = setup.ambient_dim;
    require(x_co.size() == d, "connection_transition_check: dimension mismatch");
    const VectorXd diag = setup.form.matrix().diagonal();
    VectorXd co_diag = diag;
    co_diag[d - 1] = 0.0;
    const Connection co(Form::diagonal(co_diag), setup.sign);
    require(co.locus_residual(x_co) < 1e-9, "connection_transition_check: base point is not on the co-space locus");
    for (const FieldFamily* p : {&px, &py, &pz}) {
        const VectorXd v0 = (*p)(0.0, x_co);
        require(std::abs(co.form()(v0, x_co)) <= 1e-8 * std::max(1.0, v0.norm()),
                "connection_transition_check: limit field is not tangent to the co-space locus");
    }
    const Connection src(setup.form, setup.sign);
    const RescalingFamily fam = setup.rescaling();
    const double b4 = diag[d - 1];

    // Base point on the source locus whose rescaling converges to x_co.
    auto source_point = [&](double t) {
        const double kappa2 = 1.0 - t * t * b4 * x_co[d - 1] * x_co[d - 1] / setup.sign;
        require(kappa2 > 0, "connection_transition_check: base point leaves the source chart");
        VectorXd x(d);
        x.head(d - 1) = std::sqrt(kappa2) * x_co.head(d - 1);
        x[d - 1] = t * x_co[d - 1];
        return x;
    };
    auto source_field = [&](const FieldFamily& p, double t) -> VectorField {
        const VectorXd g = fam.diagonal(t);
        return [p, g, t](const VectorXd& x) {
            return VectorXd(g.cwiseInverse().asDiagonal() * p(t, g.asDiagonal() * x));
        };
    };
    auto limit_field = [](const FieldFamily& p) -> VectorField {
        return [p](const VectorXd& x) { return p(0.0, x); };
    };

    const auto conn_limit = richardson_limit(
        [&](double t) {
            const VectorXd x = source_point(t);
            const VectorXd v = src(source_field(px, t), source_field(py, t), x);
            return VectorXd(fam.diagonal(t).asDiagonal() * v);
        },
        2, 1e-9);
    const VectorXd expected = co(limit_field(px), limit_field(py), x_co);

    const VolumeForm omega{d};
    const auto vol_limit = richardson_limit(
        [&](double t) {
            const VectorXd x = source_point(t);
            const VectorField fx = src.tangent(source_field(px, t)), fy = src.tangent(source_field(py, t)),
                              fz = src.tangent(source_field(pz, t));
            return omega(x, fx(x), fy(x), fz(x)) / t;  // det(g_t*) = 1 / t
        },
        2, 1e-9);
    const VectorField cx = co.tangent(limit_field(px)), cy = co.tangent(limit_field(py)),
                      cz = co.tangent(limit_field(pz));
    const double vol_expected = omega(x_co, cx(x_co), cy(x_co), cz(x_co));

    return {(conn_limit.value - expected).norm(), std::abs(vol_limit.value - vol_expected)};
}

}  // namespace modelspace
