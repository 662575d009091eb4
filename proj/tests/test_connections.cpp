#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "modelspace/connections.hpp"

#include <algorithm>
#include <cmath>

using namespace modelspace;

namespace {

const double kPi = std::acos(-1.0);

Connection coeuc() { return co_connection(Space::make(SpaceKind::coEuc, 3)); }
Connection comin() { return co_connection(Space::make(SpaceKind::coMin, 3)); }

// Independent oracle on the slice s = 0 for fields tangent to the slice: the
// R^3 part is the Levi-Civita connection of S^2 (tangential projection of the
// flat derivative onto y^perp) and the fibre component vanishes.
VectorXd slice_oracle(const VectorXd& v, const VectorField& w, const VectorXd& x)
{
    const double h = 1e-4;
    const VectorXd dw = (w(x + h * v) - w(x - h * v)) / (2 * h);
    VectorXd out = VectorXd::Zero(4);
    const Vector3d y = x.head(3);
    out.head(3) = dw.head(3) - dw.head(3).dot(y) * y;
    return out;
}

// Independent oracle for tangent fields at a general point: the flat
// derivative corrected by the second fundamental form term b(v, w) / sign * x.
VectorXd second_form_oracle(const Connection& c, const VectorXd& v, const VectorField& w, const VectorXd& x)
{
    const double h = 1e-3;
    const VectorXd dw = (-w(x + 2 * h * v) + 8 * w(x + h * v) - 8 * w(x - h * v) + w(x - 2 * h * v)) / (12 * h);
    return dw + (c.form()(v, w(x)) / c.sign()) * x;
}

// Field whose fibre component vanishes on the slice {x_last = 0}.
VectorField slice_field(VectorField f)
{
    return [f](const VectorXd& y) {
        VectorXd out = f(y);
        out[3] *= y[3];
        return out;
    };
}

// Family made tangent to the co-space locus by projection.
FieldFamily tangent_family(const Connection& co, FieldFamily p)
{
    return [co, p](double t, const VectorXd& x) { return co.project(x, p(t, x)); };
}

}  // namespace

TEST_CASE("constructors reject the wrong kind of space")
{
    CHECK_THROWS_AS(levi_civita(Space::make(SpaceKind::coEuc, 3)), DomainError);
    CHECK_THROWS_AS(co_connection(Space::make(SpaceKind::Ell, 3)), DomainError);
    CHECK_THROWS_AS(co_connection(Space::make(SpaceKind::Euc, 3)), DomainError);
    CHECK_NOTHROW(levi_civita(Space::make(SpaceKind::AdS, 3)));
}

TEST_CASE("worked examples in co-Euclidean space")
{
    const Connection c = coeuc();
    const VectorXd x = (VectorXd(4) << 1, 0, 0, 0.7).finished();
    // Constant field along the degenerate direction: derivative vanishes.
    const VectorField t = [](const VectorXd& p) { return VectorXd::Unit(p.size(), 3); };
    const VectorXd v = (VectorXd(4) << 0, 0.3, -0.2, 1.1).finished();
    CHECK(c.derivative(v, t, x).norm() < 1e-9);
    // Rotation field (x2, -x1, 0, 0) along e_2 at e_1.
    const VectorField rot = [](const VectorXd& p) { return (VectorXd(4) << p[1], -p[0], 0, 0).finished(); };
    const VectorXd e2 = VectorXd::Unit(4, 1);
    const VectorXd r = c.derivative(e2, rot, x);
    // D rot(e_2) = e_1, and removing the N-component along x leaves (0, 0, 0, -0.7).
    CHECK((r - (VectorXd(4) << 0, 0, 0, -0.7).finished()).norm() < 1e-9);
    // At e_2 along e_1 the rotation field gives (0, -1, 0, 0) before projection;
    // the normal component along x = e_2 is removed.
    const VectorXd x2 = (VectorXd(4) << 0, 1, 0, 0).finished();
    const VectorXd e1 = VectorXd::Unit(4, 0);
    CHECK(ambient_derivative(rot, e1, x2).isApprox((VectorXd(4) << 0, -1, 0, 0).finished(), 1e-9));
    CHECK(c.derivative(e1, rot, x2).norm() < 1e-9);
    // Position field: D_v x = v, already tangent.
    const VectorField pos = [](const VectorXd& p) { return p; };
    const VectorXd vt = c.project(x, v);
    CHECK((ambient_derivative(pos, vt, x) - vt).norm() < 1e-9);
}

TEST_CASE("co-space connections match independent oracles")
{
    Rng rng(3);
    for (const Connection& c : {coeuc(), comin()}) {
        for (int trial = 0; trial < 30; ++trial) {
            const VectorXd x = random_locus_point(c, rng);
            CHECK(c.locus_residual(x) < 1e-12);
            const VectorField w = c.tangent(random_polynomial_field(4, rng));
            const VectorXd v = c.project(x, rng.gaussian(4));
            const VectorXd got = c.derivative(v, w, x);
            CHECK((got - second_form_oracle(c, v, w, x)).norm() < 1e-6 * std::max(1.0, got.norm()));
            CHECK(std::abs(c.form()(got, x)) < 1e-9 * std::max(1.0, got.norm()));
        }
    }
    // On the slice S^2 x {0}: the Levi-Civita value of S^2.
    const Connection c = coeuc();
    for (int trial = 0; trial < 20; ++trial) {
        VectorXd x = random_locus_point(c, rng);
        x[3] = 0.0;
        const VectorField w = c.tangent(slice_field(random_polynomial_field(4, rng)));
        VectorXd v = c.project(x, rng.gaussian(4));
        v[3] = 0.0;
        CHECK((c.derivative(v, w, x) - slice_oracle(v, w, x)).norm() < 1e-6);
    }
}

TEST_CASE("characterizing identities")
{
    Rng rng(5);
    const Space spaces[] = {Space::make(SpaceKind::Ell, 3), Space::make(SpaceKind::Hyp, 3),
                            Space::make(SpaceKind::dS, 3), Space::make(SpaceKind::AdS, 3)};
    for (const Space& s : spaces) {
        const Connection c = levi_civita(s);
        for (int trial = 0; trial < 10; ++trial) {
            const VectorXd x = random_locus_point(c, rng);
            const VectorField a = random_polynomial_field(4, rng), b = random_polynomial_field(4, rng),
                              z = random_polynomial_field(4, rng);
            CHECK(symmetry_residual(c, a, b, x) < 1e-6);
            CHECK(metric_residual(c, a, b, z, x) < 1e-6);
            CHECK(parallel_volume_residual(c, volume_form(s), z, {a, b, z}, x) < 1e-6);
        }
    }
    for (const Connection& c : {coeuc(), comin()}) {
        for (int trial = 0; trial < 10; ++trial) {
            const VectorXd x = random_locus_point(c, rng);
            const VectorField a = random_polynomial_field(4, rng), b = random_polynomial_field(4, rng),
                              z = random_polynomial_field(4, rng);
            CHECK(symmetry_residual(c, a, b, x) < 1e-6);
            CHECK(metric_residual(c, a, b, z, x) < 1e-6);
            CHECK(degenerate_field_residual(c, a, x) < 1e-9);
            CHECK(parallel_volume_residual(c, VolumeForm{4}, z, {a, b, z}, x) < 1e-6);
        }
    }
}

TEST_CASE("space-like planes are totally geodesic")
{
    Rng rng(7);
    for (const Connection& c : {coeuc(), comin()}) {
        for (int trial = 0; trial < 10; ++trial) {
            VectorXd x = random_locus_point(c, rng);
            x[3] = 0.0;
            const VectorField p = slice_field(random_polynomial_field(4, rng)),
                              q = slice_field(random_polynomial_field(4, rng));
            CHECK(plane_residual(c, p, q, x) < 1e-9);
        }
    }
}

TEST_CASE("geodesics")
{
    // Great circles on S^2 and hyperbolas on H^2.
    const Connection s2(Form::standard(3, 0), 1);
    const Curve great = [](double t) { return (VectorXd(3) << std::cos(t), std::sin(t), 0).finished(); };
    CHECK(geodesic_residual(s2, great, 0, 2 * kPi) < 1e-6);
    const Connection h2(Form::standard(2, 1), -1);
    const Curve hyper = [](double t) { return (VectorXd(3) << std::sinh(t), 0, std::cosh(t)).finished(); };
    CHECK(geodesic_residual(h2, hyper, -1.5, 1.5) < 1e-6);

    // Latitude circles are not geodesics (control).
    const double th = kPi / 4;
    const Curve lat = [th](double t) {
        return (VectorXd(3) << std::sin(th) * std::cos(t), std::sin(th) * std::sin(t), std::cos(th)).finished();
    };
    CHECK(geodesic_residual(s2, lat, 0, 2 * kPi) > 1e-2);

    // co-Euclidean lines: a great circle in a space-like plane, a plane through
    // the origin tilted into the fibre, and the parabolic line {y} x R.
    const Connection ce = coeuc();
    const Curve ce_slice = [](double t) { return (VectorXd(4) << std::cos(t), 0, std::sin(t), 0).finished(); };
    CHECK(geodesic_residual(ce, ce_slice, -3, 3) < 1e-6);
    const Curve ce_tilted = [](double t) {
        return (VectorXd(4) << std::cos(t), 0, std::sin(t), 0.3 * std::cos(t) - 0.8 * std::sin(t)).finished();
    };
    CHECK(geodesic_residual(ce, ce_tilted, -3, 3) < 1e-6);
    const Curve ce_parabolic = [](double t) { return (VectorXd(4) << 0.6, 0, 0.8, -0.4 + 1.3 * t).finished(); };
    CHECK(geodesic_residual(ce, ce_parabolic, -3, 3) < 1e-6);
    const Curve ce_bad = [](double t) { return (VectorXd(4) << std::cos(t), 0, std::sin(t), t * t).finished(); };
    CHECK(geodesic_residual(ce, ce_bad, -1, 1) > 1e-2);
    // co-Minkowski: space-like geodesic of H^2 in a plane through the origin.
    const Connection cm = comin();
    const Curve cm_geo = [](double t) {
        return (VectorXd(4) << std::sinh(t), 0, std::cosh(t), -0.5 * std::cosh(t) + 2.0 * std::sinh(t)).finished();
    };
    CHECK(geodesic_residual(cm, cm_geo, -1.5, 1.5) < 1e-6);
    const Curve cm_parabolic = [](double t) { return (VectorXd(4) << 0, 0, 1, 0.2 - 0.7 * t).finished(); };
    CHECK(geodesic_residual(cm, cm_parabolic, -3, 3) < 1e-6);
}

TEST_CASE("volume forms")
{
    const VolumeForm omega = volume_form(Space::make(SpaceKind::coEuc, 3));
    const VectorXd x = (VectorXd(4) << 1, 0, 0, 0.4).finished();
    const VectorXd v = VectorXd::Unit(4, 1), w = VectorXd::Unit(4, 2), t = VectorXd::Unit(4, 3);
    CHECK(omega(x, v, w, t) == doctest::Approx(1.0));
    CHECK(omega(x, w, v, t) == doctest::Approx(-1.0));
    CHECK(std::abs(omega(x, v, v, t)) < 1e-15);
    CHECK_THROWS_AS(omega(x, std::vector<VectorXd>{v, w}), DomainError);
}

TEST_CASE("holonomy on the round sphere")
{
    const Connection s2(Form::standard(3, 0), 1);
    for (double th : {0.2, 0.5, 1.0}) {
        const Curve lat = [th](double u) {
            const double t = 2 * kPi * u;
            return (VectorXd(3) << std::sin(th) * std::cos(t), std::sin(th) * std::sin(t), std::cos(th)).finished();
        };
        const VectorXd v0 = (VectorXd(3) << 0, 0, 1).finished();
        const double angle = holonomy_angle(s2, lat, v0);
        // Enclosed area (curvature 1) modulo 2 pi, up to orientation.
        const double area = 2 * kPi * (1 - std::cos(th));
        double expected = std::remainder(area, 2 * kPi);
        const double got = std::abs(std::remainder(angle, 2 * kPi));
        CHECK(std::abs(got - std::abs(expected)) < 0.02 * std::abs(expected));
    }
}

TEST_CASE("holonomy around a small geodesic square")
{
    const Connection s2(Form::standard(3, 0), 1);
    const double a = 0.15;
    std::vector<Vector3d> corners = {Vector3d(a, a, 1).normalized(), Vector3d(-a, a, 1).normalized(),
                                     Vector3d(-a, -a, 1).normalized(), Vector3d(a, -a, 1).normalized()};
    // Great-circle arcs traversed at constant speed, each on a quarter of [0, 1].
    const Curve square = [corners](double u) {
        const double w = u - std::floor(u);
        const int k = std::min(3, static_cast<int>(std::floor(4 * w)));
        const double s = 4 * w - k;
        const Vector3d p = corners[k], q = corners[(k + 1) % 4];
        const double om = std::acos(std::clamp(p.dot(q), -1.0, 1.0));
        const Vector3d r = (std::sin((1 - s) * om) * p + std::sin(s * om) * q) / std::sin(om);
        return VectorXd(r);
    };
    // Enclosed area by Girard: sum of interior angles minus 2 pi.
    double angles = 0.0;
    for (int k = 0; k < 4; ++k) {
        const Vector3d p = corners[k], prev = corners[(k + 3) % 4], next = corners[(k + 1) % 4];
        const Vector3d t1 = (prev - prev.dot(p) * p).normalized(), t2 = (next - next.dot(p) * p).normalized();
        angles += std::acos(t1.dot(t2));
    }
    const double area = angles - 2 * kPi;
    // Transport is piecewise smooth: integrate each arc separately by chaining.
    VectorXd v = (corners[1] - corners[1].dot(corners[0]) * corners[0]).normalized();
    const VectorXd v0 = v;
    for (int k = 0; k < 4; ++k) {
        const Vector3d p = corners[k], q = corners[(k + 1) % 4];
        // Along a geodesic, parallel transport preserves the angle with the velocity.
        const Vector3d tp = (q - q.dot(p) * p).normalized();
        const Vector3d np = p.cross(tp);
        const Vector3d vv = v;
        const double c1 = vv.dot(tp), c2 = vv.dot(np);
        const Vector3d tq = -(p - p.dot(q) * q).normalized();
        const Vector3d nq = q.cross(tq);
        v = c1 * tq + c2 * nq;
    }
    const Vector3d e1 = Vector3d(v0).normalized(), e2 = corners[0].cross(e1);
    const double rot = std::abs(std::atan2(Vector3d(v).dot(e2), Vector3d(v).dot(e1)));
    CHECK(std::abs(rot / area - 1.0) < 0.02);
    // The RK4 transport of the connection agrees along a smooth loop enclosing
    // the same area (latitude circle), tested above; here the closed-form
    // geodesic transport confirms K = 1.
    CHECK(square(0.0).isApprox(square(1.0), 1e-12));
}

TEST_CASE("tangency warnings are counted")
{
    const Connection c = coeuc();
    const VectorXd x = (VectorXd(4) << 1, 0, 0, 0).finished();
    const VectorField radial = [](const VectorXd& p) { return p; };
    const long before = c.tangency_warnings();
    (void)c.derivative(VectorXd::Unit(4, 1), radial, x);
    CHECK(c.tangency_warnings() > before);
}

TEST_CASE("transition of connections and volume forms")
{
    Rng rng(9);
    for (SpaceKind src : {SpaceKind::Ell, SpaceKind::dS, SpaceKind::Hyp, SpaceKind::AdS}) {
        const TransitionSetup s = transition_setup(src, FamilyKind::blow_up_hyperplane);
        VectorXd co_diag = s.form.matrix().diagonal();
        co_diag[3] = 0.0;
        const Connection co(Form::diagonal(co_diag), s.sign);
        for (int trial = 0; trial < 4; ++trial) {
            const FieldFamily px = tangent_family(co, random_polynomial_family(4, rng, 0.7));
            const FieldFamily py = tangent_family(co, random_polynomial_family(4, rng, 0.7));
            const FieldFamily pz = tangent_family(co, random_polynomial_family(4, rng, 0.7));
            const VectorXd x = random_locus_point(co, rng, 0.8);
            const auto r = connection_transition_check(s, px, py, pz, x);
            CHECK(r.connection_gap < 1e-6);
            CHECK(r.volume_gap < 1e-6);
        }
    }
    // Zero fields give a zero gap; a non-tangent limit field is rejected.
    const TransitionSetup ell = transition_setup(SpaceKind::Ell, FamilyKind::blow_up_hyperplane);
    const FieldFamily zero = [](double, const VectorXd& x) { return VectorXd(VectorXd::Zero(x.size())); };
    const VectorXd base = (VectorXd(4) << 0, 0.6, 0.8, 0.5).finished();
    const auto r0 = connection_transition_check(ell, zero, zero, zero, base);
    CHECK(r0.connection_gap < 1e-12);
    CHECK(r0.volume_gap < 1e-12);
    const FieldFamily radial = [](double, const VectorXd& x) { return x; };
    CHECK_THROWS_AS(connection_transition_check(ell, radial, zero, zero, base), DomainError);
    CHECK_THROWS_AS(connection_transition_check(transition_setup(SpaceKind::Ell, FamilyKind::blow_up_point),
                                                {}, {}, {}, VectorXd::Zero(4)),
                    DomainError);
}
