#pragma once
// Embedding data (I, II, B, III) of parametrized surface patches in the six
// nondegenerate 3-dimensional model spaces and in the co-spaces, Gauss and
// Codazzi residuals, support-function shape operators, dual data, support
// recovery from a shape operator and the transition of surfaces.

#include "modelspace/connections.hpp"
#include "modelspace/transition.hpp"

#include <functional>
#include <string>
#include <vector>

namespace modelspace {

// A surface patch over the parameter rectangle [u0, u1] x [v0, v1].
// normal_sign flips the default normal orientation (see SurfaceSpace).
struct SurfacePatch {
    std::function<VectorXd(double, double)> immersion;
    double u0 = -0.5, u1 = 0.5, v0 = -0.5, v1 = 0.5;
    int normal_sign = 1;
};

// Ambient geometry of a 3-dimensional space for surface computations.
//  * flat (Euc, Min): points of R^3 with the flat form b_{3,0} resp. b_{2,1};
//  * curved (Ell, Hyp, dS, AdS): points of the pseudo-sphere b(x, x) = sign in R^4;
//  * co-spaces (coEuc, coMin): double-cover chart (y, s), y on S^2 resp. H^2.
// Normal convention: N is b-orthogonal to the patch (and to x in the curved
// case), |b(N, N)| = 1, oriented so that det[s_u, s_v, N] > 0 (flat) or
// det[s_u, s_v, N, x] > 0 (curved), times normal_sign.  With
// II(v, w) = -b(D_v s_w, N) the unit sphere of E^3 (outward) and the future
// hyperboloid of Min^3 have B = +Id.  Co-spaces: II is the T-component of the
// co-connection derivative (T = +e_4).
struct SurfaceSpace {
    SpaceKind kind = SpaceKind::Euc;
    Form form = Form::standard(3, 0);
    int sign = 0;  // 0 for flat spaces
    bool flat() const { return sign == 0; }
    bool co() const { return kind == SpaceKind::coEuc || kind == SpaceKind::coMin; }
    int ambient_dim() const { return form.dim(); }
    // Constant curvature c of the space (Gauss: K_I = c + g(N, N) det B).
    double curvature() const;
    // g(N, N) of the unit normal of a space-like surface: +1 in Riemannian
    // spaces, -1 in Lorentzian ones, 0 for the co-spaces.
    double normal_norm() const;
    std::string name() const;
};

SurfaceSpace surface_space(SpaceKind kind);
SurfaceSpace surface_space(const std::string& name);
// Source space of a transition setup (plane family, reordered form).
SurfaceSpace surface_space(const TransitionSetup& setup);

// Sampled embedding data on a (rows x cols) grid including the boundary;
// node (i, j) is at (u0 + i hu, v0 + j hv), stored at index i * cols + j.
struct EmbeddingData {
    int rows = 0, cols = 0;
    double u0 = 0, v0 = 0, hu = 0, hv = 0;
    std::vector<Matrix2d> I, II, B, III;
    // Metadata.
    std::string space;
    std::string normal_convention;
    double curvature = 0.0;    // c in the Gauss equation
    double normal_norm = 1.0;  // g(N, N) (0 for co-spaces: K_I = c)

    int index(int i, int j) const { return i * cols + j; }
    Vector2d node(int i, int j) const { return {u0 + i * hu, v0 + j * hv}; }
    std::size_t size() const { return I.size(); }
};

// Embedding data of a patch in a nondegenerate space.  Errors: immersion off the
// locus (1e-8), degenerate or non-space-like induced metric, no unit normal.
EmbeddingData embedding_data(const SurfacePatch& patch, const SurfaceSpace& space, int grid = 64);

// Base patches of the co-spaces: dev(a, b) on S^2 resp. H^2 and a support
// function u on ambient points of S^2 / H^2.
using BaseMap = std::function<Vector3d(double, double)>;
using SupportFunction = std::function<double(const Vector3d&)>;
struct GraphPatch {
    BaseMap base;
    SupportFunction u;
    double u0 = -0.5, u1 = 0.5, v0 = -0.5, v1 = 0.5;
};
// Standard base charts: spherical coordinates around e_1 on S^2 and geodesic
// polar-free coordinates (sinh a cosh b, sinh b, cosh a cosh b) on H^2.
BaseMap sphere_chart();
BaseMap hyperbolic_chart();

// Immersion sigma = (dev, u(dev)) in the double-cover chart.  Errors: dev not
// on S^2 / H^2, or (when a metric is given) dev not isometric to 1e-6.
SurfacePatch immersion_from_data_co(const GraphPatch& g, const SurfaceSpace& space);
SurfacePatch immersion_from_data_co(const GraphPatch& g, const SurfaceSpace& space,
                                    const std::function<Matrix2d(double, double)>& metric, int grid = 16);

// Embedding data of a co-space graph.  Errors: patch not a graph over the base.
EmbeddingData embedding_data_co(const SurfacePatch& patch, const SurfaceSpace& space, int grid = 64);

// Shape operator from the support function via the 1-homogeneous extension U:
// B = I^{-1} D^2U|_{T}, i.e. Hess u + u Id (coEuc) and Hess u - u Id (coMin).
Matrix2d shape_from_support(const GraphPatch& g, const SurfaceSpace& space, double a, double b);
EmbeddingData shape_from_support_data(const GraphPatch& g, const SurfaceSpace& space, int grid = 64);

// Sup-norm Gauss and Codazzi residuals over interior nodes.  The Gauss
// residual uses the Brioschi curvature, either raw (O(h^2) in the grid step)
// or step-refined (two Richardson levels on grid steps h, 2h, 4h, O(h^6)); the
// refined residual skips the 4 outermost node rings.
struct GaussCodazzi {
    double gauss = 0.0;
    double codazzi = 0.0;
};
GaussCodazzi gauss_codazzi_residual(const EmbeddingData& data, bool step_refined = true);
// Intrinsic curvature K_I of `metric` at node (i, j) by the Brioschi formula
// with second-order central differences of grid step `stride` nodes; requires
// stride <= i < rows - stride, same for j.
double brioschi_curvature(const EmbeddingData& data, const std::vector<Matrix2d>& metric, int i, int j,
                          int stride = 1);
// Richardson combination (64 K_h - 20 K_2h + K_4h) / 45 of the Brioschi
// curvature; requires 4 <= i < rows - 4, same for j.
double refined_curvature(const EmbeddingData& data, const std::vector<Matrix2d>& metric, int i, int j);
// Codazzi vector d^{nabla^I} B at (i, j) (fourth-order grid differences;
// requires 2 <= i < rows - 2).
Vector2d codazzi_vector(const EmbeddingData& data, int i, int j);

// Dual data (III, B^{-1}).  Errors: B singular at a node.
EmbeddingData dual_embedding_data(const EmbeddingData& data, const SurfaceSpace& dual_space);

// Support function recovery: least-squares solve of the discretized
// Hess u + u Id = B (coEuc) resp. Hess u - u Id = B (coMin) on the grid of the
// base patch, gauge-fixed so that u is orthogonal to the restrictions of the
// (Minkowski-)linear functions.  Errors: Codazzi residual above codazzi_tol.
struct RecoveredSupport {
    int rows = 0, cols = 0;
    VectorXd values;           // u at node (i, j), index i * cols + j
    double forward_residual = 0.0;  // sup |discrete operator(u) - B|
    double codazzi = 0.0;
};
RecoveredSupport recover_support_from_shape(const BaseMap& base, const SurfaceSpace& space,
                                            const std::function<Matrix2d(double, double)>& shape, double u0,
                                            double u1, double v0, double v1, int grid = 64,
                                            double codazzi_tol = 1e-5);
// Removes the linear-gauge component: returns u minus its least-squares
// projection onto the restrictions of the linear functions.
VectorXd remove_linear_gauge(const BaseMap& base, const SurfaceSpace& space, const VectorXd& u, int rows,
                             int cols, double u0, double u1, double v0, double v1);

// Transition of a family sigma_t in a source space (plane family) to the
// co-space: I = lim I_t, II = lim II_t / t, B = lim B_t / t, and
// K_ext = lim det(B_t) / t^2 (Richardson extrapolation).  Errors: sigma_0 not in
// the plane {x_4 = 0}.
using SurfaceFamily = std::function<VectorXd(double, double, double)>;  // (t, u, v)
struct SurfaceTransition {
    EmbeddingData limit;
    std::vector<double> k_ext;  // per node
    double error_estimate = 0.0;
};
SurfaceTransition surface_transition(const SurfaceFamily& family, const TransitionSetup& setup, double u0,
                                     double u1, double v0, double v1, int grid = 16);
// Rate samples |II_t / t - II_limit|_sup for the given t values.
std::vector<double> surface_transition_rates(const SurfaceFamily& family, const TransitionSetup& setup,
                                             const EmbeddingData& limit, const std::vector<double>& ts);
// Normalized graph family over a base patch: x_4 = t u, rescaled onto the source locus.
SurfaceFamily graph_family(const GraphPatch& g, const TransitionSetup& setup);

// Mean-curvature style summaries.
double max_abs_trace(const EmbeddingData& data);
double max_asymmetry(const EmbeddingData& data);  // sup |II - II^T|

}  // namespace modelspace
