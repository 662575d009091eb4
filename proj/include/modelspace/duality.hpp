#pragma once
// Dual cones, point/hyperplane duality, admissible convex bodies with their
// support functions (Euclidean and Minkowski flavors) and the cylinder model.

#include "modelspace/hull.hpp"
#include "modelspace/projective.hpp"

#include <string>
#include <vector>

namespace modelspace {

// ---------------------------------------------------------------- cones

// A polyhedral cone of R^m, either as the conic hull of generators or as
// {x : b(n_i, x) <= 0} for halfspace normals n_i.  Vectors are columns.
struct PolyCone {
    enum class Representation { generators, halfspaces };
    Representation representation = Representation::generators;
    MatrixXd vectors;
};

// C* = {x : b(x, y) <= 0 for all y in C}, returned as generators (extreme rays).
PolyCone dual_cone(const PolyCone& c, const Form& b);

// Extreme rays of a cone (unit-norm columns), converting from halfspaces if needed.
MatrixXd cone_generators(const PolyCone& c, const Form& b);

// True when both generator sets describe the same cone (rays equal up to positive
// scaling and order).
bool same_rays(const MatrixXd& a, const MatrixXd& b, double tol = 1e-8);

// ---------------------------------------------------------------- points and hyperplanes

// The hyperplane {y : b(normal, y) = 0} of a model space.
struct Hyperplane {
    VectorXd normal;
};

Hyperplane dual_point(const Space& space, const Point& x);
Point dual_hyperplane(const Space& space, const Hyperplane& h);
bool on_hyperplane(const Space& space, const Hyperplane& h, const Point& y, double tol = 1e-9);

// ---------------------------------------------------------------- Euclidean bodies

// An admissible Euclidean convex body: a polytope conv(vertices) or a ball of
// radius r centred at the origin.
struct EuclideanBody {
    enum class Kind { polytope, ball };
    Kind kind = Kind::polytope;
    int dim = 3;
    MatrixXd vertices;   // dim x m (polytope)
    double radius = 1.0; // ball

    static EuclideanBody polytope(const MatrixXd& vertices);
    static EuclideanBody ball(int dim, double r);
};

// Sampled support function h(v) on unit directions v (columns).
struct SupportFunctionE {
    MatrixXd directions;
    VectorXd values;
};

// h(v) = max over the body of <x, v>.
double support(const EuclideanBody& k, const VectorXd& v);
SupportFunctionE support_from_body(const EuclideanBody& k, const MatrixXd& directions);
SupportFunctionE support_from_body(const MatrixXd& points, const MatrixXd& directions);

// Facets of an admissible polytope; errors if the origin is not interior.
std::vector<Facet> admissible_facets(const EuclideanBody& k);
bool is_admissible(const EuclideanBody& k);

// K* = {y : <x, y> <= 1 for all x in K}.
EuclideanBody dual_body(const EuclideanBody& k);

// Samples are the restriction of a support function iff each sampled halfspace
// supports the envelope; the check tolerates slack 1e-8 * (value scale).
bool is_convex(const SupportFunctionE& h, double rel_slack = 1e-8);

// The body whose support function is h: intersection of {y : <y, v_i> <= h(v_i)}.
EuclideanBody body_from_support(const SupportFunctionE& h);

// Largest |h_a - h_b| over the grid.
double support_gap(const SupportFunctionE& a, const SupportFunctionE& b);

// ---------------------------------------------------------------- Minkowski bodies

// b_{n-1,1} on R^n (time coordinate last).
Form minkowski_form(int dim);

bool in_future_cone(const VectorXd& x, double tol = 1e-12);  // b(x,x) < 0, x_n > 0

// Admissible future convex sets of Minkowski space R^n:
//   generated:   conv(points) + F (future cone of the origin closure)
//   truncated:   {y in F : b(q_i, y) <= -1} for future time-like q_i
//   hyperboloid: H_r = {y in F : b(y, y) <= -r^2}
struct MinkowskiBody {
    enum class Kind { generated, truncated, hyperboloid };
    Kind kind = Kind::generated;
    int dim = 3;
    MatrixXd vectors;  // points (generated) or normals (truncated)
    double radius = 1.0;

    static MinkowskiBody generated(const MatrixXd& points);
    static MinkowskiBody truncated(const MatrixXd& normals);
    static MinkowskiBody hyperboloid(int dim, double r);
};

// H(w) = sup over the body of b(x, w) for w in the open future cone (negative).
double support(const MinkowskiBody& k, const VectorXd& w);

// Support samples stored on the disc: hbar(x) = H(x, 1) for x in B^{n-1}.
struct SupportFunctionMin {
    MatrixXd disc_points;  // (n-1) x N
    VectorXd values;       // negative
};

SupportFunctionMin support_from_body(const MinkowskiBody& k, const MatrixXd& disc_points);
SupportFunctionMin support_from_body_min(const MatrixXd& points, const MatrixXd& disc_points);
// Restriction to the upper hyperboloid: h(v) = H(v) for b(v, v) = -1.
double support_on_hyperboloid(const SupportFunctionMin& h, int index);

// K* = {y : b(x, y) <= -1 for all x in K}.
MinkowskiBody dual_body(const MinkowskiBody& k);

// Discrete midpoint convexity of disc samples laid out on a lattice.
bool is_convex(const SupportFunctionMin& h, double rel_slack = 1e-8);

// The body whose support function is hbar: {y in F : b(y, (x_i, 1)) <= hbar(x_i)}.
MinkowskiBody body_from_support(const SupportFunctionMin& h);

double support_gap(const SupportFunctionMin& a, const SupportFunctionMin& b);

// Apex of the dual cone of the admissible truncation F cap {b(x - r v, v) <= 0}.
VectorXd truncation_dual(const VectorXd& v, double r);

// ---------------------------------------------------------------- cylinder model

// (x, y) -> (x / y, -1 / y), applied to each column (last coordinate is y).
MatrixXd cylinder_transform(const MatrixXd& points);
MatrixXd cylinder_transform_inverse(const MatrixXd& points);

// Discrete convexity of a graph sampled at increasing abscissae (1-d profile).
bool is_convex_profile(const VectorXd& x, const VectorXd& y, double rel_slack = 1e-8);

}  // namespace modelspace
