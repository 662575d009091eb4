#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "modelspace/forms.hpp"
#include "modelspace/numerics.hpp"

using namespace modelspace;

TEST_CASE("eval on standard forms")
{
    CHECK(eval(Form::standard(3, 0), Vector3d(1, 0, 0), Vector3d(0, 1, 0)) == doctest::Approx(0));
    CHECK(eval(Form::standard(2, 1), Vector3d(0, 0, 1), Vector3d(0, 0, 1)) == doctest::Approx(-1));
    CHECK(eval(Form::standard(1, 1), Vector2d(1, 1), Vector2d(1, -1)) == doctest::Approx(2));
    CHECK_THROWS_AS(eval(Form::standard(2, 1), Vector2d(1, 0), Vector3d(1, 0, 0)), DomainError);
}

TEST_CASE("standard constructors and signatures")
{
    const Form b = Form::standard(2, 1);
    CHECK(b.signature() == Signature{2, 1, 0});
    CHECK(forms::co_euclidean(4).signature() == Signature{3, 0, 1});
    CHECK(forms::co_minkowski(4).signature() == Signature{2, 1, 1});
    CHECK(b.matrix()(2, 2) == -1);
    MatrixXd asym = MatrixXd::Identity(3, 3);
    asym(0, 1) = 1e-3;
    CHECK_THROWS_AS(Form{asym}, DomainError);
}

TEST_CASE("vector classification")
{
    const Form b = Form::standard(2, 1);
    CHECK(classify_vector(b, Vector3d(1, 0, 0)) == VectorClass::spacelike);
    CHECK(classify_vector(b, Vector3d(1, 0, 1)) == VectorClass::lightlike);
    CHECK(classify_vector(b, Vector3d(0.1, 0.1, 1)) == VectorClass::timelike);
    CHECK_THROWS_AS(classify_vector(b, Vector3d::Zero()), DomainError);
}

TEST_CASE("restriction to subspaces")
{
    const Form b = Form::standard(2, 1);
    MatrixXd p1(3, 2);
    p1 << 1, 0, 0, 1, 0, 0;
    CHECK(restrict(b, p1).signature() == Signature{2, 0, 0});
    MatrixXd p2(3, 2);
    p2 << 1, 0, 0, 0, 0, 1;
    CHECK(restrict(b, p2).signature() == Signature{1, 1, 0});
    MatrixXd ray(3, 1);
    ray << 1, 0, 1;
    CHECK(restrict(b, ray).signature() == Signature{0, 0, 1});
    MatrixXd dep(3, 2);
    dep << 1, 2, 0, 0, 1, 2;
    CHECK_THROWS_AS(restrict(b, dep), DomainError);
}

TEST_CASE("bilinearity on random inputs")
{
    Rng rng(1);
    for (int trial = 0; trial < 200; ++trial) {
        const int d = 2 + trial % 4;
        const MatrixXd s = rng.gaussian(d, d);
        const Form b(MatrixXd(s + s.transpose()));
        const VectorXd x = rng.gaussian(d), y = rng.gaussian(d), z = rng.gaussian(d);
        const double a = rng.normal(), c = rng.normal();
        const double lhs = eval(b, (a * x + c * y).eval(), z);
        const double rhs = a * eval(b, x, z) + c * eval(b, y, z);
        CHECK(std::abs(lhs - rhs) < 1e-10 * std::max(1.0, std::abs(lhs)));
        CHECK(std::abs(eval(b, x, y) - eval(b, y, x)) < 1e-12 * std::max(1.0, std::abs(eval(b, x, y))));
    }
}

TEST_CASE("restricted signature matches the four normal forms on rotated planes")
{
    // A plane spanned by two b-orthogonal vectors of prescribed norms has the
    // signature given by those signs; random invertible mixing of the basis
    // must not change it.
    Rng rng(2);
    const Form b = Form::standard(2, 2);
    const Vector4d e[4] = {Vector4d::Unit(0), Vector4d::Unit(1), Vector4d::Unit(2), Vector4d::Unit(3)};
    const std::pair<int, int> pairs[4] = {{0, 1}, {2, 3}, {0, 2}, {1, 3}};
    const Signature expected[4] = {{2, 0, 0}, {0, 2, 0}, {1, 1, 0}, {1, 1, 0}};
    for (int trial = 0; trial < 100; ++trial) {
        for (int k = 0; k < 4; ++k) {
            Matrix2d mix = rng.gaussian(2, 2);
            if (std::abs(mix.determinant()) < 0.1) mix += Matrix2d::Identity();
            MatrixXd basis(4, 2);
            basis << e[pairs[k].first], e[pairs[k].second];
            basis = basis * mix;
            CHECK(restrict(b, basis).signature() == expected[k]);
        }
        MatrixXd light(4, 2);
        light << Vector4d(1, 0, 1, 0), Vector4d(0, 1, 0, 0);
        CHECK(restrict(b, light).signature() == Signature{1, 0, 1});
    }
}

TEST_CASE("signature is a congruence invariant")
{
    Rng rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const int p = trial % 3, q = (trial / 3) % 3, z = (trial / 9) % 2;
        if (p + q + z == 0) continue;
        const Form b = Form::standard(p, q, z);
        MatrixXd g = rng.gaussian(p + q + z, p + q + z);
        if (std::abs(g.determinant()) < 1e-2) g += 2 * MatrixXd::Identity(g.rows(), g.cols());
        const Form c(MatrixXd(g.transpose() * b.matrix() * g));
        CHECK(c.signature() == b.signature());
    }
}
