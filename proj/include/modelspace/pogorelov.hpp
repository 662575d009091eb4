#pragma once
// Affine-chart metrics (Klein model of H^n, the affine chart of AdS^n and the
// flat targets), the operator L, the infinitesimal Pogorelov map and the
// Killing-field / Weyl-formula verification apparatus.

#include "modelspace/connections.hpp"
#include "modelspace/numerics.hpp"

#include <functional>
#include <string>

namespace modelspace {

enum class ChartKind { HypKlein, AdSChart, EucFlat, MinFlat };

std::string to_string(ChartKind k);

// A metric on (a domain of) the affine chart R^n.
//   HypKlein / AdSChart: g_x(X, Y) = rho^2 b(X, Y) + rho^4 b(x, X) b(x, Y),
//                        rho(x) = 1 / sqrt(1 - b(x, x)), b = b_{n,0} resp. b_{n-1,1};
//   EucFlat / MinFlat:   g_x(X, Y) = b(X, Y).
class ChartMetric {
public:
    ChartMetric(ChartKind kind, int n);

    ChartKind kind() const { return kind_; }
    int dim() const { return n_; }
    const Form& form() const { return form_; }
    bool flat() const { return kind_ == ChartKind::EucFlat || kind_ == ChartKind::MinFlat; }

    bool contains(const VectorXd& x) const;
    // rho(x) (1 for the flat metrics); error outside the domain.
    double rho(const VectorXd& x) const;
    // Gram matrix of g_x in the standard basis.
    MatrixXd matrix(const VectorXd& x) const;
    double operator()(const VectorXd& x, const VectorXd& u, const VectorXd& v) const;
    // Christoffel term Gamma_x(X, Y), so that nabla_X Y = DY(X) + Gamma_x(X, Y).
    VectorXd christoffel(const VectorXd& x, const VectorXd& u, const VectorXd& v) const;
    // Levi-Civita derivative nabla_X Y at x.
    VectorXd covariant(const VectorField& x_field, const VectorField& y_field, const VectorXd& x) const;
    // sqrt|det g_x|: density of the Riemannian / Lorentzian volume form.
    double volume_density(const VectorXd& x) const;

private:
    ChartKind kind_;
    int n_;
    Form form_;
};

// Built-in chart pairs sharing unparametrized geodesics (straight lines).
struct ChartPair {
    ChartMetric src;
    ChartMetric dst;
};
ChartPair hyp_euc_pair(int n = 3);
ChartPair ads_min_pair(int n = 3);
// "hyp-euc" | "ads-min".
ChartPair parse_pair(const std::string& name, int n = 3);

// Operator L defined by g(X, Y) = g_dst(L X, Y), as a matrix at x.
MatrixXd operator_L(const ChartMetric& src, const ChartMetric& dst, const VectorXd& x);
VectorXd operator_L(const ChartMetric& src, const ChartMetric& dst, const VectorXd& x, const VectorXd& v);

// Volume ratio lambda = omega_dst / omega_src: closed form rho^{-(n+1)} for the
// built-in pairs, and the determinant cross-check.
double pogorelov_lambda(const ChartPair& pair, const VectorXd& x);
double pogorelov_lambda_from_volumes(const ChartPair& pair, const VectorXd& x);

// Infinitesimal Pogorelov map P(X) = lambda^{2/(n+1)} L(X) at x, and applied
// to a field.  For the built-in pairs P(K)_x = K_x + rho^2 b(x, K_x) x.
VectorXd pogorelov_vector(const ChartPair& pair, const VectorXd& x, const VectorXd& v);
VectorField infinitesimal_pogorelov(const VectorField& k, const ChartPair& pair);

// Killing fields induced on the chart by a generator A (A^T J + J A = 0 for the
// ambient form J = b (+) (-1)): K_x = (A y)_head - (A y)_last x with y = (x, 1).
struct KillingField {
    MatrixXd generator;
    VectorXd operator()(const VectorXd& x) const;
    VectorField field() const;
};
// Ambient form b (+) (-1) of the chart pair's source model (Hyp or AdS).
MatrixXd ambient_form(const ChartPair& pair);
// |A^T J + J A|_max.
double killing_generator_defect(const MatrixXd& a, const MatrixXd& j);
KillingField random_killing(const ChartPair& pair, Rng& rng, double scale = 1.0);
// Flat-target Killing fields: K_x = M x + c with M b-antisymmetric.
VectorField flat_killing(const MatrixXd& m, const VectorXd& c);

// Deterministic sample cloud: quasi-random (Halton) points in the chart ball of
// the given radius intersected with the domain of the metric.
MatrixXd sample_cloud(const ChartMetric& m, int count = 512, double radius = 0.9);

// Killing residual: max over the cloud and basis pairs (e_i, e_j) of
// |g(nabla_{e_i} K, e_j) + g(e_i, nabla_{e_j} K)|.
double killing_residual(const ChartMetric& m, const VectorField& k, const MatrixXd& cloud);
double killing_residual_at(const ChartMetric& m, const VectorField& k, const VectorXd& x);

// Weyl formula gap at x: (nabla^b_X Y - nabla^a_X Y) - (X(f) Y + Y(f) X) with
// f = ln(lambda) / (n + 1), lambda = omega_b / omega_a.
VectorXd weyl_gap(const ChartMetric& a, const ChartMetric& b, const std::function<double(const VectorXd&)>& lambda,
                  const VectorField& x_field, const VectorField& y_field, const VectorXd& x);
// Contraction check: |trace(Y -> nabla^b_X Y - nabla^a_X Y) - X(ln lambda)| at x.
double contraction_gap(const ChartMetric& a, const ChartMetric& b,
                       const std::function<double(const VectorXd&)>& lambda, const VectorXd& x,
                       const VectorXd& v);

// Surface patch in the affine chart and a vector field along it.
struct ChartSurface {
    std::function<VectorXd(double, double)> immersion;
    double u0 = -0.5, u1 = 0.5, v0 = -0.5, v1 = 0.5;
};
using SurfaceField = std::function<VectorXd(double, double)>;

// Infinitesimal isometry residual: max over a grid and the tangent directions
// sigma_u, sigma_v, sigma_u + sigma_v of |g(nabla_X Z, X)|.
struct RigidityResidual {
    double worst = 0.0;
    double u = 0.0, v = 0.0;
};
RigidityResidual infinitesimal_isometry_residual(const ChartMetric& m, const ChartSurface& s, const SurfaceField& z,
                                                 int grid = 9);
// Transport of an infinitesimal isometric deformation by the Pogorelov map.
// Errors: the input is not an infinitesimal isometric deformation (tolerance
// 1e-7), reporting the worst sample.
SurfaceField rigidity_transport(const SurfaceField& z, const ChartSurface& s, const ChartPair& pair,
                                double tol = 1e-7, int grid = 9);

}  // namespace modelspace
