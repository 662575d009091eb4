#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "modelspace/duality.hpp"
#include "modelspace/numerics.hpp"

#include <cmath>

using namespace modelspace;

namespace {

double mink(const VectorXd& x, const VectorXd& y)
{
    const int n = static_cast<int>(x.size()) - 1;
    return x.head(n).dot(y.head(n)) - x[n] * y[n];
}

// Random admissible Euclidean polytope: points at random radii around the origin.
MatrixXd random_polytope(int dim, int count, Rng& rng)
{
    MatrixXd pts(dim, count);
    for (int i = 0; i < count; ++i) pts.col(i) = rng.uniform(0.6, 1.6) * rng.unit_vector(dim);
    // Guarantee the origin is interior with a small cross-polytope.
    MatrixXd cross(dim, 2 * dim);
    cross << 0.3 * MatrixXd::Identity(dim, dim), -0.3 * MatrixXd::Identity(dim, dim);
    MatrixXd all(dim, count + 2 * dim);
    all << pts, cross;
    return all;
}

// Random future time-like points with x_n in [1, 3] and slope at most 0.8.
MatrixXd random_future_points(int dim, int count, Rng& rng)
{
    MatrixXd pts(dim, count);
    for (int i = 0; i < count; ++i) {
        const double t = rng.uniform(1.0, 3.0);
        pts.col(i) << rng.uniform(0.0, 0.8) * t * rng.unit_vector(dim - 1), t;
    }
    return pts;
}

// Membership in the closed future cone of the origin.
bool in_closed_future(const VectorXd& z, double tol)
{
    return z[z.size() - 1] >= -tol && mink(z, z) <= tol;
}

}  // namespace

TEST_CASE("dual cones")
{
    const Form e2 = Form::standard(2, 0);
    PolyCone quadrant{PolyCone::Representation::generators, Matrix2d::Identity()};
    MatrixXd expected(2, 2);
    expected << -1, 0, 0, -1;
    CHECK(same_rays(dual_cone(quadrant, e2).vectors, expected));

    // The future light cone of b_{1,1} is self-dual.
    const Form l2 = Form::standard(1, 1);
    MatrixXd light(2, 2);
    light << 1, -1, 1, 1;
    PolyCone future{PolyCone::Representation::generators, light};
    CHECK(same_rays(dual_cone(future, l2).vectors, light));

    // Halfspace representation: the dual is generated by the normals.
    PolyCone half{PolyCone::Representation::halfspaces, expected};
    CHECK(same_rays(dual_cone(half, e2).vectors, expected));

    CHECK_THROWS_AS(dual_cone(PolyCone{PolyCone::Representation::generators, MatrixXd(3, 0)}, Form::standard(3, 0)),
                    DomainError);

    // Double dual on random pointed cones of R^3 and R^4 (Euclidean and Lorentzian forms).
    Rng rng(2);
    for (int dim : {3, 4})
        for (const Form& b : {Form::standard(dim, 0), Form::standard(dim - 1, 1)})
            for (int trial = 0; trial < 20; ++trial) {
                MatrixXd gens(dim, 6);
                for (int i = 0; i < 6; ++i) gens.col(i) << 0.7 * rng.unit_vector(dim - 1), 1.0;
                PolyCone c{PolyCone::Representation::generators, gens};
                const PolyCone dual = dual_cone(c, b);
                // Every generator pairs non-positively with every dual ray.
                CHECK((gens.transpose() * b.matrix() * dual.vectors).maxCoeff() < 1e-10);
                const PolyCone dd = dual_cone(dual, b);
                CHECK(same_rays(dd.vectors, cone_generators(c, b), 1e-8));
                // Every original generator is a non-negative combination of the double dual rays:
                // it lies inside (is not separated from) the double dual.
                CHECK((gens.transpose() * b.matrix() * dual.vectors).maxCoeff() <= 1e-10);
            }
}

TEST_CASE("point-hyperplane duality")
{
    const Space ell = Space::make(SpaceKind::Ell, 2);
    const Point x(Vector3d(0, 0, 1));
    const Hyperplane h = dual_point(ell, x);
    for (int i = 0; i < 32; ++i) {
        const double s = 2 * M_PI * i / 32.0;
        const Point y(Vector3d(std::cos(s), std::sin(s), 0));
        CHECK(on_hyperplane(ell, h, y));
        CHECK(projective_distance(ell, x, y) == doctest::Approx(M_PI / 2).epsilon(1e-12));
    }

    Rng rng(4);
    // Random Ell^2 and AdS^3 points: every sampled point of x* (inside the space)
    // is at distance pi/2 from x.
    for (SpaceKind kind : {SpaceKind::Ell, SpaceKind::AdS}) {
        const Space s = Space::make(kind, kind == SpaceKind::Ell ? 2 : 3);
        const int d = s.ambient_dim();
        int checked = 0;
        while (checked < 200) {
            const Point p(rng.gaussian(d));
            if (!s.contains(p)) continue;
            const Hyperplane hp = dual_point(s, p);
            CHECK(dual_hyperplane(s, hp) == p);
            // Random vector in the b-orthogonal complement of p.
            const VectorXd n = s.form.matrix() * p.rep();
            VectorXd y = rng.gaussian(d);
            y -= n * (n.dot(y) / n.squaredNorm());
            const Point q(y);
            if (!s.contains(q)) continue;
            CHECK(on_hyperplane(s, hp, q));
            CHECK(std::abs(projective_distance(s, p, q) - M_PI / 2) < 1e-9);
            ++checked;
        }
    }

    // A time-like plane of Hyp^3 is dual to a point of dS^3.
    const Space hyp = Space::make(SpaceKind::Hyp, 3);
    const Space ds = Space::make(SpaceKind::dS, 3);
    for (int i = 0; i < 20; ++i) {
        VectorXd normal(4);
        normal << rng.unit_vector(3), rng.uniform(-0.9, 0.9);
        const Point dual = dual_hyperplane(hyp, Hyperplane{normal});
        CHECK(ds.contains(dual));
        CHECK_FALSE(hyp.contains(dual));
    }
    CHECK_THROWS_AS(dual_point(hyp, Point(Vector4d(1, 0, 0, 1))), DomainError);
}

TEST_CASE("Euclidean support functions")
{
    const MatrixXd dirs = direction_grid(3, 16);
    const auto ball = support_from_body(EuclideanBody::ball(3, 1.0), dirs);
    CHECK((ball.values.array() - 1.0).abs().maxCoeff() < 1e-15);

    MatrixXd cube(3, 8);
    for (int i = 0; i < 8; ++i) cube.col(i) << (i & 1 ? 1 : -1), (i & 2 ? 1 : -1), (i & 4 ? 1 : -1);
    const auto hc = support_from_body(cube, dirs);
    for (int i = 0; i < dirs.cols(); ++i) CHECK(hc.values[i] == doctest::Approx(dirs.col(i).lpNorm<1>()));

    // Origin outside the body: not admissible.
    MatrixXd shifted = cube;
    shifted.row(0).array() += 1.5;
    CHECK_THROWS_AS(support_from_body(shifted, dirs), DomainError);

    // The gauge of the cube (||v||_inf) is the support function of the cross-polytope.
    MatrixXd gd(3, 14);
    int c = 0;
    for (int i = 0; i < 8; ++i)
        gd.col(c++) = Vector3d(i & 1 ? 1 : -1, i & 2 ? 1 : -1, i & 4 ? 1 : -1).normalized();
    for (int a = 0; a < 3; ++a) {
        gd.col(c++) = Vector3d::Unit(a);
        gd.col(c++) = -Vector3d::Unit(a);
    }
    SupportFunctionE gauge{gd, VectorXd(14)};
    for (int i = 0; i < 14; ++i) gauge.values[i] = gd.col(i).lpNorm<Eigen::Infinity>();
    const EuclideanBody cross = body_from_support(gauge);
    MatrixXd expected(3, 6);
    expected << MatrixXd::Identity(3, 3), -MatrixXd::Identity(3, 3);
    CHECK(cross.vertices.cols() == 6);
    CHECK(same_rays(cross.vertices, expected, 1e-9));
    for (int i = 0; i < 6; ++i) CHECK(cross.vertices.col(i).norm() == doctest::Approx(1.0));
    // The cube's polar is the same cross-polytope.
    CHECK(same_rays(dual_body(EuclideanBody::polytope(cube)).vertices, expected, 1e-9));
}

TEST_CASE("Euclidean duality")
{
    for (double r : {0.25, 1.0, 2.0, 7.5}) {
        const EuclideanBody d = dual_body(EuclideanBody::ball(3, r));
        CHECK(d.kind == EuclideanBody::Kind::ball);
        CHECK(std::abs(d.radius - 1.0 / r) < 1e-15);
        // Sampled version: the envelope of h = r is a circumscribed polytope with the same samples.
        const MatrixXd dirs = direction_grid(2, 64);
        SupportFunctionE h{dirs, VectorXd::Constant(64, r)};
        CHECK(is_convex(h));
        const EuclideanBody env = body_from_support(h);
        CHECK(support_gap(support_from_body(env, dirs), h) < 1e-12 * r);
    }

    Rng rng(6);
    for (int dim : {2, 3}) {
        const MatrixXd dirs = direction_grid(dim, 64);
        for (int trial = 0; trial < 25; ++trial) {
            const EuclideanBody k = EuclideanBody::polytope(random_polytope(dim, 12, rng));
            const EuclideanBody kdd = dual_body(dual_body(k));
            CHECK(support_gap(support_from_body(k, dirs), support_from_body(kdd, dirs)) < 1e-6);
            // Round trip through sampled support functions.
            const auto h = support_from_body(k, dirs);
            CHECK(is_convex(h));
            CHECK(support_gap(support_from_body(body_from_support(h), dirs), h) < 1e-9);
        }
    }

    // Order reversal: A subset of B implies B* subset of A*.
    for (int trial = 0; trial < 20; ++trial) {
        const MatrixXd a = random_polytope(3, 10, rng);
        MatrixXd b(3, a.cols() + 5);
        b << a, 2.0 * rng.gaussian(3, 5);
        const MatrixXd dirs = direction_grid(3, 24);
        const auto ha = support_from_body(dual_body(EuclideanBody::polytope(a)), dirs);
        const auto hb = support_from_body(dual_body(EuclideanBody::polytope(b)), dirs);
        CHECK(((hb.values - ha.values).array() <= 1e-12).all());
    }

    // Sampled values that are not a support function are rejected.
    const MatrixXd dirs = direction_grid(2, 32);
    SupportFunctionE bad{dirs, VectorXd::Ones(32)};
    bad.values[5] = 1.3;
    CHECK_FALSE(is_convex(bad));
    CHECK_THROWS_AS(body_from_support(bad), DomainError);
}

TEST_CASE("Euclidean support additivity")
{
    Rng rng(9);
    const MatrixXd dirs = direction_grid(3, 20);
    for (int trial = 0; trial < 10; ++trial) {
        const MatrixXd a = random_polytope(3, 6, rng);
        const MatrixXd b = random_polytope(3, 5, rng);
        MatrixXd sum(3, a.cols() * b.cols());
        for (int i = 0; i < a.cols(); ++i)
            for (int j = 0; j < b.cols(); ++j) sum.col(i * b.cols() + j) = a.col(i) + b.col(j);
        const auto hs = support_from_body(sum, dirs);
        const auto ha = support_from_body(a, dirs);
        const auto hb = support_from_body(b, dirs);
        CHECK((hs.values - ha.values - hb.values).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("Minkowski support functions")
{
    const MatrixXd disc = disc_grid(2, 16, 0.9);
    const auto h1 = support_from_body(MinkowskiBody::hyperboloid(3, 1.0), disc);
    for (int i = 0; i < disc.cols(); ++i) CHECK(support_on_hyperboloid(h1, i) == doctest::Approx(-1.0));
    CHECK(is_convex(h1));
    CHECK_THROWS_AS(MinkowskiBody::generated(Vector3d(1, 0, 0.5)), DomainError);

    for (double r : {0.5, 1.0, 3.0}) {
        const MinkowskiBody d = dual_body(MinkowskiBody::hyperboloid(3, r));
        CHECK(std::abs(d.radius - 1.0 / r) < 1e-15);
        // Independent route: the envelope of the sampled support planes of H_r has
        // the normals q_i on H_{1/r}; the dual is generated by them and its support
        // matches H_{1/r} exactly at the samples (reverse Cauchy-Schwarz).
        const auto h = support_from_body(MinkowskiBody::hyperboloid(3, r), disc);
        const MinkowskiBody env = body_from_support(h);
        for (int i = 0; i < env.vectors.cols(); ++i)
            CHECK(std::abs(mink(env.vectors.col(i), env.vectors.col(i)) + 1.0 / (r * r)) < 1e-9);
        const auto hd = support_from_body(dual_body(env), disc);
        const auto exact = support_from_body(MinkowskiBody::hyperboloid(3, 1.0 / r), disc);
        CHECK(support_gap(hd, exact) < 1e-9);
    }
}

TEST_CASE("Minkowski duality")
{
    Rng rng(12);
    const MatrixXd disc = disc_grid(2, 64, 0.95);
    for (int trial = 0; trial < 20; ++trial) {
        const MinkowskiBody k = MinkowskiBody::generated(random_future_points(3, 8, rng));
        const MinkowskiBody kd = dual_body(k);
        const MinkowskiBody kdd = dual_body(kd);
        CHECK(support_gap(support_from_body(k, disc), support_from_body(kdd, disc)) < 1e-6);
        // The dual is admissible (negative convex support) and the double dual is
        // generated by a subset of the original generators (the extreme ones).
        const auto hd = support_from_body(kd, disc);
        CHECK((hd.values.array() < 0).all());
        CHECK(is_convex(hd));
        for (int i = 0; i < kdd.vectors.cols(); ++i) {
            double nearest = 1e300;
            for (int j = 0; j < k.vectors.cols(); ++j)
                nearest = std::min(nearest, (kdd.vectors.col(i) - k.vectors.col(j)).norm());
            CHECK(nearest < 1e-12);
        }
    }

    // Order reversal and additivity on generated bodies.
    const MatrixXd coarse = disc_grid(2, 12, 0.9);
    for (int trial = 0; trial < 10; ++trial) {
        const MatrixXd a = random_future_points(3, 5, rng);
        MatrixXd b(3, 8);
        b << a, random_future_points(3, 3, rng);
        const auto ha = support_from_body(dual_body(MinkowskiBody::generated(a)), coarse);
        const auto hb = support_from_body(dual_body(MinkowskiBody::generated(b)), coarse);
        CHECK(((hb.values - ha.values).array() <= 1e-9).all());

        const MatrixXd c = random_future_points(3, 4, rng);
        MatrixXd sum(3, a.cols() * c.cols());
        for (int i = 0; i < a.cols(); ++i)
            for (int j = 0; j < c.cols(); ++j) sum.col(i * c.cols() + j) = a.col(i) + c.col(j);
        const auto hs = support_from_body_min(sum, coarse);
        CHECK((hs.values - support_from_body_min(a, coarse).values - support_from_body_min(c, coarse).values)
                  .cwiseAbs()
                  .maxCoeff() < 1e-12);
    }

    // Non-convex disc samples are rejected.
    auto bad = support_from_body(MinkowskiBody::hyperboloid(3, 1.0), coarse);
    bad.values[bad.values.size() / 2] += 0.3;
    CHECK_FALSE(is_convex(bad));
    CHECK_THROWS_AS(body_from_support(bad), DomainError);
}

TEST_CASE("truncation dual")
{
    CHECK((truncation_dual(Vector3d(0, 0, 1), 2.0) - Vector3d(0, 0, 0.5)).norm() < 1e-12);
    Rng rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        const double s = rng.uniform(0, 1.5);
        VectorXd v(3);
        v << std::sinh(s) * rng.unit_vector(2), std::cosh(s);
        CHECK((truncation_dual(v, 1.0) - v).norm() < 1e-9);
        const double r = rng.uniform(0.3, 4.0);
        const VectorXd apex = truncation_dual(v, r);
        CHECK((apex - v / r).norm() < 1e-9);
        // Both inclusions: z is in K* iff z lies in the future cone of the apex.
        const MinkowskiBody k = MinkowskiBody::truncated(v / r);
        for (int i = 0; i < 200; ++i) {
            VectorXd z = random_future_points(3, 1, rng).col(0) * rng.uniform(0.05, 2.0);
            const bool in_dual = support(k, z) <= -1.0;
            const VectorXd w = z - apex;
            const double margin = std::abs(support(k, z) + 1.0);
            if (margin < 1e-7) continue;
            CHECK(in_dual == in_closed_future(w, 0.0));
        }
    }
    CHECK_THROWS_AS(truncation_dual(Vector3d(1, 0, 0.5), 1.0), DomainError);
    CHECK_THROWS_AS(truncation_dual(Vector3d(0, 0, 1), -1.0), DomainError);
}

TEST_CASE("cylinder model")
{
    // The branch x y = 1 (asymptotic to the line y = 0 sent to infinity) becomes the parabola X = Y^2.
    MatrixXd hyp(2, 41);
    for (int i = 0; i < 41; ++i) {
        const double t = -2.0 + 0.1 * i;
        hyp.col(i) << std::exp(t), std::exp(-t);
    }
    const MatrixXd par = cylinder_transform(hyp);
    for (int i = 0; i < par.cols(); ++i) CHECK(par(0, i) == doctest::Approx(par(1, i) * par(1, i)));
    CHECK((cylinder_transform_inverse(par) - hyp).cwiseAbs().maxCoeff() < 1e-12);

    // The unit hyperbola (sinh t, cosh t) is the boundary of H_1; its image is the
    // graph of hbar(x) = -sqrt(1 - x^2), the disc support function of H_1.
    MatrixXd unit(2, 41);
    for (int i = 0; i < 41; ++i) {
        const double t = -2.0 + 0.1 * i;
        unit.col(i) << std::sinh(t), std::cosh(t);
    }
    const MatrixXd img = cylinder_transform(unit);
    for (int i = 0; i < img.cols(); ++i) CHECK(img(1, i) == doctest::Approx(-std::sqrt(1 - img(0, i) * img(0, i))));
    CHECK_THROWS_AS(cylinder_transform(Vector2d(1, 0)), DomainError);

    // Convexity is preserved: graphs of random negative convex hbar map to convex graphs.
    Rng rng(14);
    for (int trial = 0; trial < 50; ++trial) {
        const double q = rng.uniform(0.0, 2.0), a = rng.uniform(-1.0, 1.0);
        const double c = std::abs(a) + q + rng.uniform(0.1, 2.0);
        const int n = 81;
        VectorXd x(n), y(n);
        MatrixXd graph(2, n);
        for (int i = 0; i < n; ++i) {
            x[i] = -0.95 + 1.9 * i / (n - 1);
            y[i] = -c + a * x[i] + q * x[i] * x[i];
            graph.col(i) << x[i], y[i];
        }
        CHECK(is_convex_profile(x, y));
        const MatrixXd back = cylinder_transform_inverse(graph);
        CHECK(is_convex_profile(back.row(0).transpose(), back.row(1).transpose()));
        // Round trip.
        CHECK((cylinder_transform(back) - graph).cwiseAbs().maxCoeff() < 1e-12);
    }
    // A concave profile is flagged.
    VectorXd x = VectorXd::LinSpaced(21, -1, 1);
    VectorXd y = -(x.array().square());
    CHECK_FALSE(is_convex_profile(x, y));
}

TEST_CASE("angles in co-Euclidean space")
{
    const Space co = Space::make(SpaceKind::coEuc, 3);
    Rng rng(15);
    for (int i = 0; i < 200; ++i) {
        const VectorXd v = rng.unit_vector(3), w = rng.unit_vector(3);
        VectorXd p(4), q(4);
        p << v, rng.normal();
        q << w, rng.normal();
        const double d = projective_distance(co, Point(p), Point(q));
        CHECK(std::abs(d - std::acos(std::min(1.0, std::abs(v.dot(w))))) < 1e-9);
    }
}
