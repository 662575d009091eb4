#pragma once
// Geometric transition: diagonal rescaling families g_t, rescaled limits of
// points and of conjugated isometries, membership in the limit groups, the
// duality/transition compatibility check and the 1-dimensional toy model.

#include "modelspace/numerics.hpp"
#include "modelspace/projective.hpp"

#include <functional>
#include <string>

namespace modelspace {

enum class FamilyKind { blow_up_point, blow_up_hyperplane };

std::string to_string(FamilyKind k);
FamilyKind parse_family(const std::string& name);  // "point" | "plane"

// g_t = diag(1/t, ..., 1/t, 1) (blow-up of e_last) or diag(1, ..., 1, 1/t)
// (blow-up of the hyperplane {x_last = 0}) on R^dim.
struct RescalingFamily {
    FamilyKind kind = FamilyKind::blow_up_point;
    int dim = 4;

    VectorXd diagonal(double t) const;
    MatrixXd matrix(double t) const { return diagonal(t).asDiagonal(); }
    MatrixXd inverse(double t) const { return diagonal(t).cwiseInverse().asDiagonal(); }
    // The family acting on the dual space (covectors): blow-up of a point is
    // dual to blow-up of a hyperplane and vice versa.
    RescalingFamily dual() const;
};

using PointPath = std::function<VectorXd(double)>;
using IsometryPath = std::function<MatrixXd(double)>;
using MatrixPath = std::function<MatrixXd(double)>;

// lim g_t x(t).  Blow-up of a point: (x'(0)', x_last(0)) with x'(0) = 0 required;
// blow-up of a hyperplane: (x'(0), x_last'(0)) with x_last(0) = 0 required.
// Derivatives by central differences with one Richardson step.
Point rescaled_point_limit(const PointPath& path, const RescalingFamily& fam,
                           double base_tol = 1e-9, double step = 1e-3);

// g_t h g_t^{-1}, an exact matrix product.
MatrixXd conjugate_isometry(const MatrixXd& h, const RescalingFamily& fam, double t);

// lim_{t->0} g_t h(t) g_t^{-1} on the default halving schedule.
LimitResult<MatrixXd> conjugated_limit(const IsometryPath& h, const RescalingFamily& fam);
// Limit of an arbitrary matrix-valued family m(t) as t -> 0.
LimitResult<MatrixXd> matrix_limit(const MatrixPath& m, double tol = 1e-8);

enum class LimitGroup { IsomEuc, IsomMin, IsomCoEuc, IsomCoMin };
std::string to_string(LimitGroup g);

// Pattern match after normalizing to |det| = 1 (and up to the projective sign):
//   IsomEuc / IsomMin:     [A t; 0 +-1] with A in O(n) / O(n-1,1)
//   IsomCoEuc / IsomCoMin: [A 0; t +-1] with A in O(n) / O(n-1,1)
bool limit_group_membership(const MatrixXd& m, LimitGroup target, double tol = 1e-8);
// Worst violated entry of the pattern (0 for exact members).
double limit_group_defect(const MatrixXd& m, LimitGroup target);

// Source data of a transition in ambient dimension n+1.  The source form is an
// isometric copy of the standard one, ordered so that the blown-up locus (e_last
// or {x_last = 0}) belongs to the model space.
struct TransitionSetup {
    SpaceKind source = SpaceKind::Ell;
    FamilyKind family = FamilyKind::blow_up_point;
    int ambient_dim = 4;
    Form form;
    double sign = 1.0;
    SpaceKind limit = SpaceKind::Euc;
    LimitGroup target = LimitGroup::IsomEuc;

    RescalingFamily rescaling() const { return {family, ambient_dim}; }
};

TransitionSetup transition_setup(SpaceKind source, FamilyKind family, int ambient_dim = 4);

// h(t) = R exp(t A) with A in o(b) random and R an isometry stabilizing the
// blown-up locus, so the conjugated limit exists.
IsometryPath random_isometry_path(const TransitionSetup& s, Rng& rng, double scale = 0.7);
// x(t) = exp(t A) x0 with x0 on the blown-up locus and on the pseudo-sphere.
PointPath random_point_path(const TransitionSetup& s, Rng& rng, double scale = 0.7);

// Projective gap between the dual of the rescaled limit point and the rescaled
// limit of the dual hyperplanes (covectors b x(t), rescaled by the dual family).
double duality_transition_gap(const PointPath& path, const TransitionSetup& s);
bool duality_transition_check(const PointPath& path, const TransitionSetup& s, double tol = 1e-7);

// ---------------------------------------------------------------- 1-d toy model

Matrix2d toy_rotation(double theta);  // [[cos, -sin], [sin, cos]]
Matrix2d toy_translation(double a);   // [[1, a], [0, 1]]
Matrix2d toy_boost(double phi);       // [[cosh, -sinh], [sinh, cosh]]
Matrix2d toy_rescaling(double k);     // diag(k, 1)

// lim_{k->oo} g_k m(k) g_k^{-1}, extrapolated in 1/k.
LimitResult<MatrixXd> toy_limit(const std::function<Matrix2d(double)>& m);

}  // namespace modelspace
