#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "modelspace/transition.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

using namespace modelspace;

namespace {

const SpaceKind kSources[] = {SpaceKind::Ell, SpaceKind::Hyp, SpaceKind::dS, SpaceKind::AdS};
const FamilyKind kFamilies[] = {FamilyKind::blow_up_point, FamilyKind::blow_up_hyperplane};

// Independently built isometry path h(t) = R exp(tA) together with its exact
// conjugacy limit, read off from h(0) = R and h'(0) = R A.
struct KnownPath {
    IsometryPath h;
    MatrixXd limit;
};

KnownPath known_path(const TransitionSetup& s, Rng& rng)
{
    const int d = s.ambient_dim;
    const VectorXd j = s.form.matrix().diagonal();
    auto algebra = [&](const VectorXd& jj) {
        const int m = static_cast<int>(jj.size());
        MatrixXd skew = MatrixXd::Zero(m, m);
        for (int r = 0; r < m; ++r)
            for (int c = r + 1; c < m; ++c) {
                skew(r, c) = 0.6 * rng.normal();
                skew(c, r) = -skew(r, c);
            }
        return MatrixXd(jj.asDiagonal() * skew);
    };
    const MatrixXd a = algebra(j);
    MatrixXd r = MatrixXd::Identity(d, d);
    r.topLeftCorner(d - 1, d - 1) = algebra(j.head(d - 1)).exp();
    const MatrixXd ra = r * a;
    MatrixXd lim = MatrixXd::Zero(d, d);
    lim.topLeftCorner(d - 1, d - 1) = r.topLeftCorner(d - 1, d - 1);
    lim(d - 1, d - 1) = r(d - 1, d - 1);
    if (s.family == FamilyKind::blow_up_point) lim.col(d - 1).head(d - 1) = ra.col(d - 1).head(d - 1);
    else lim.row(d - 1).head(d - 1) = ra.row(d - 1).head(d - 1);
    return {[r, a](double t) { return MatrixXd(r * (t * a).exp()); }, lim};
}

}  // namespace

TEST_CASE("rescaling families")
{
    for (auto k : kFamilies) {
        RescalingFamily f{k, 4};
        CHECK((f.matrix(1.0) - MatrixXd::Identity(4, 4)).norm() == 0.0);
        CHECK((f.matrix(0.25) * f.inverse(0.25) - MatrixXd::Identity(4, 4)).norm() < 1e-15);
        CHECK(f.dual().dual().kind == k);
    }
    CHECK(RescalingFamily{FamilyKind::blow_up_point, 3}.diagonal(0.5) == Vector3d(2, 2, 1));
    CHECK(RescalingFamily{FamilyKind::blow_up_hyperplane, 3}.diagonal(0.5) == Vector3d(1, 1, 2));
    CHECK_THROWS_AS(RescalingFamily{}.diagonal(0.0), DomainError);
    CHECK(parse_family("plane") == FamilyKind::blow_up_hyperplane);
    CHECK_THROWS_AS(parse_family("line"), DomainError);
}

TEST_CASE("rescaled point limits")
{
    const RescalingFamily point{FamilyKind::blow_up_point, 3};
    const RescalingFamily plane{FamilyKind::blow_up_hyperplane, 3};

    // Constant path at the fixed point goes to the affine origin.
    auto constant = [](double) { return VectorXd(Vector3d(0, 0, 1)); };
    CHECK(rescaled_point_limit(constant, point) == Point(Vector3d(0, 0, 1)));

    for (double a : {-1.5, 0.3, 2.0}) {
        auto great_circle = [a](double t) { return VectorXd(Vector3d(std::sin(a * t), 0, std::cos(a * t))); };
        CHECK(rescaled_point_limit(great_circle, point) == Point(Vector3d(a, 0, 1)));
        // Plane family: a path leaving the equator with vertical speed a.
        auto leaving = [a](double t) {
            return VectorXd(Vector3d(std::cos(a * t) * 0.6, std::cos(a * t) * 0.8, std::sin(a * t)));
        };
        CHECK(rescaled_point_limit(leaving, plane) == Point(Vector3d(0.6, 0.8, a)));
    }
    CHECK_THROWS_AS(rescaled_point_limit(
                        [](double t) { return VectorXd(Vector3d(0.1 + t, 0, 1)); }, point),
                    DomainError);
    CHECK_THROWS_AS(rescaled_point_limit([](double) { return VectorXd(Vector3d(1, 0, 0.2)); }, plane),
                    DomainError);

    // Limits agree with direct extrapolation of g_t x(t) on random paths.
    Rng rng(11);
    for (auto src : kSources)
        for (auto fk : kFamilies) {
            const auto s = transition_setup(src, fk);
            for (int i = 0; i < 20; ++i) {
                const auto path = random_point_path(s, rng);
                const Point p = rescaled_point_limit(path, s.rescaling());
                const auto direct = richardson_limit(
                    [&](double t) { return VectorXd(s.rescaling().matrix(t) * path(t)); }, 2, 1e-10);
                const VectorXd q = direct.value.normalized();
                CHECK(std::min((q - p.rep()).norm(), (q + p.rep()).norm()) < 1e-8);
            }
        }
}

TEST_CASE("conjugation is a group homomorphism")
{
    Rng rng(3);
    RescalingFamily f{FamilyKind::blow_up_point, 4};
    CHECK((conjugate_isometry(MatrixXd::Identity(4, 4), f, 0.01) - MatrixXd::Identity(4, 4)).norm() == 0.0);
    for (int i = 0; i < 50; ++i) {
        const MatrixXd h1 = rng.gaussian(4, 4);
        const MatrixXd h2 = rng.gaussian(4, 4);
        for (auto k : kFamilies) {
            f.kind = k;
            const double t = rng.uniform(0.05, 1.0);
            const MatrixXd lhs = conjugate_isometry(h1 * h2, f, t);
            const MatrixXd rhs = conjugate_isometry(h1, f, t) * conjugate_isometry(h2, f, t);
            CHECK((lhs - rhs).norm() < 1e-12 * (1.0 + lhs.norm()));
        }
    }
}

TEST_CASE("setup table")
{
    for (auto src : kSources)
        for (auto fk : kFamilies) {
            const auto s = transition_setup(src, fk);
            const Space ref = Space::make(src, 3);
            // Same signature as the standard form of the source space.
            CHECK(s.form.signature() == ref.form.signature());
            CHECK(s.sign == ref.sign);
            const VectorXd e = VectorXd::Unit(4, 3);
            if (fk == FamilyKind::blow_up_point) {
                CHECK(s.form(e, e) == s.sign);
            } else {
                const MatrixXd plane = MatrixXd::Identity(4, 3);
                const Form r = restrict(s.form, plane);
                CHECK(r.signature().q == (s.limit == SpaceKind::coMin ? 1 : 0));
            }
        }
    CHECK(transition_setup(SpaceKind::dS, FamilyKind::blow_up_point).target == LimitGroup::IsomMin);
    CHECK(transition_setup(SpaceKind::Hyp, FamilyKind::blow_up_hyperplane).target == LimitGroup::IsomCoMin);
    CHECK_THROWS_AS(transition_setup(SpaceKind::coEuc, FamilyKind::blow_up_point), DomainError);
}

TEST_CASE("conjugated isometry paths match exact limits and land in the limit group")
{
    Rng rng(5);
    for (auto src : kSources)
        for (auto fk : kFamilies) {
            const auto s = transition_setup(src, fk);
            for (int i = 0; i < 60; ++i) {
                const KnownPath kp = known_path(s, rng);
                // Each h(t) preserves the source form.
                const MatrixXd h = kp.h(0.3);
                CHECK((h.transpose() * s.form.matrix() * h - s.form.matrix()).norm() < 1e-10);
                const auto lim = conjugated_limit(kp.h, s.rescaling());
                CHECK((lim.value - kp.limit).norm() < 1e-8);
                CHECK(limit_group_membership(lim.value, s.target, 1e-6));
            }
            for (int i = 0; i < 60; ++i) {
                const auto lim = conjugated_limit(random_isometry_path(s, rng), s.rescaling());
                CHECK(lim.converged);
                CHECK(limit_group_membership(lim.value, s.target, 1e-6));
            }
        }
}

TEST_CASE("anti-isometric source gives the same limit group")
{
    // Isometries of (b, -1) and (-b, +1) coincide, so the same rescaling yields
    // limits in the same group for a space and its anti-isometric copy.
    Rng rng(8);
    for (auto src : kSources)
        for (auto fk : kFamilies) {
            auto s = transition_setup(src, fk);
            auto anti = s;
            anti.form = -s.form;
            anti.sign = -s.sign;
            for (int i = 0; i < 20; ++i) {
                const auto path = random_isometry_path(anti, rng);
                const MatrixXd h = path(0.4);
                CHECK((h.transpose() * s.form.matrix() * h - s.form.matrix()).norm() < 1e-10);
                CHECK(limit_group_membership(conjugated_limit(path, s.rescaling()).value, s.target, 1e-6));
            }
        }
}

TEST_CASE("limit group membership patterns")
{
    for (auto g : {LimitGroup::IsomEuc, LimitGroup::IsomMin, LimitGroup::IsomCoEuc, LimitGroup::IsomCoMin})
        CHECK(limit_group_membership(MatrixXd::Identity(4, 4), g));
    Vector4d hd(1, 1, 1, 3.0);
    const MatrixXd homothety = hd.asDiagonal();
    CHECK_FALSE(limit_group_membership(homothety, LimitGroup::IsomCoEuc));
    CHECK_FALSE(limit_group_membership(homothety, LimitGroup::IsomEuc));
    // Projective rescaling of a member is still a member.
    MatrixXd m = MatrixXd::Identity(4, 4);
    m.col(3).head(3) << 1, 2, 3;
    CHECK(limit_group_membership(m, LimitGroup::IsomEuc));
    CHECK(limit_group_membership(-2.5 * m, LimitGroup::IsomEuc));
    CHECK_FALSE(limit_group_membership(m, LimitGroup::IsomCoEuc));
    CHECK(limit_group_membership(MatrixXd(m.transpose()), LimitGroup::IsomCoEuc));
    // A Lorentz boost in the first three coordinates is Min but not Euc.
    MatrixXd boost = MatrixXd::Identity(4, 4);
    boost(0, 0) = boost(2, 2) = std::cosh(0.7);
    boost(0, 2) = boost(2, 0) = std::sinh(0.7);
    CHECK(limit_group_membership(boost, LimitGroup::IsomMin));
    CHECK(limit_group_membership(boost, LimitGroup::IsomCoMin));
    CHECK_FALSE(limit_group_membership(boost, LimitGroup::IsomEuc));
    CHECK_FALSE(limit_group_membership(MatrixXd::Zero(4, 4), LimitGroup::IsomEuc));
}

TEST_CASE("duality commutes with transition")
{
    const auto ell = transition_setup(SpaceKind::Ell, FamilyKind::blow_up_point);
    CHECK(duality_transition_gap([](double) { return VectorXd(VectorXd::Unit(4, 3)); }, ell) < 1e-14);

    Rng rng(21);
    for (auto src : kSources)
        for (auto fk : kFamilies) {
            const auto s = transition_setup(src, fk);
            for (int i = 0; i < 25; ++i) {
                const auto path = random_point_path(s, rng);
                CHECK(duality_transition_check(path, s));
            }
        }
    // dS points are the hyperplanes of Hyp: their covectors are time-like and the
    // check compares a limit in the Minkowski chart with a limit in co-Minkowski space.
    const auto ds = transition_setup(SpaceKind::dS, FamilyKind::blow_up_point);
    for (int i = 0; i < 10; ++i) CHECK(duality_transition_check(random_point_path(ds, rng), ds));
}

TEST_CASE("one-dimensional toy model")
{
    for (double a : {-2.0, 0.5, 3.0}) {
        // The conjugate of R_theta by diag(k, 1) has upper-right entry -k sin(theta),
        // so theta_k = -a/k produces T_a; theta_k = a/k produces T_{-a}.
        const auto rot = toy_limit([a](double k) { return toy_rotation(-a / k); });
        CHECK((rot.value - MatrixXd(toy_translation(a))).norm() < 1e-9);
        const auto rot_literal = toy_limit([a](double k) { return toy_rotation(a / k); });
        CHECK((rot_literal.value - MatrixXd(toy_translation(-a))).norm() < 1e-9);
        const auto boost = toy_limit([a](double k) { return toy_boost(-a / k); });
        CHECK((boost.value - MatrixXd(toy_translation(a))).norm() < 1e-9);
        // Exact conjugate matches the closed form.
        const double k = 7.0, th = 0.3;
        Matrix2d expect;
        expect << std::cos(th), -k * std::sin(th), std::sin(th) / k, std::cos(th);
        CHECK((toy_rescaling(k) * toy_rotation(th) * toy_rescaling(k).inverse() - expect).norm() < 1e-14);
    }
    // The rescaling sends the points at infinity [1:+-1] to [1:+-1/k].
    const Vector2d p = toy_rescaling(10.0) * Vector2d(1, -1);
    CHECK(p[1] / p[0] == doctest::Approx(-0.1));
}
