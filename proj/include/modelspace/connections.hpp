#pragma once
// Connections and volume forms on pseudo-spheres b(x, x) = sign and on the
// double covers of the co-spaces (S^2 x R, H^2 x R), all obtained from the flat
// connection of the ambient R^{n+1} with the transverse field N_x = x.

#include "modelspace/numerics.hpp"
#include "modelspace/transition.hpp"

#include <atomic>
#include <functional>
#include <memory>

namespace modelspace {

// Vector fields and curves are callables on ambient representatives.
using VectorField = std::function<VectorXd(const VectorXd&)>;
using Curve = std::function<VectorXd(double)>;
// A t-dependent family of fields (used by transition checks).
using FieldFamily = std::function<VectorXd(double, const VectorXd&)>;

// Default finite-difference step at x: 1e-5 * (1 + |x|).
double fd_step(const VectorXd& x);

// Directional derivative DW(v) at x by central differences.
VectorXd ambient_derivative(const VectorField& w, const VectorXd& v, const VectorXd& x);

// Lie bracket [X, Y] = DY(X) - DX(Y) of ambient fields.
VectorXd lie_bracket(const VectorField& x_field, const VectorField& y_field, const VectorXd& x);

// The connection induced on the locus {b(x, x) = sign} by the flat ambient
// connection, splitting along N_x = x:
//     D_v W = nabla_v W - (b(v, W) / sign) N_x.
// For nondegenerate b this is the Levi-Civita connection of the pseudo-sphere;
// for the degenerate forms b* it is the co-Euclidean / co-Minkowski connection.
class Connection {
public:
    Connection(Form form, double sign);

    const Form& form() const { return form_; }
    double sign() const { return sign_; }
    bool degenerate() const { return form_.degenerate(); }
    int dim() const { return form_.dim(); }

    VectorXd normal(const VectorXd& x) const { return x; }
    // Degenerate direction T = e_last (co-spaces; chart-level sign +1).
    VectorXd degenerate_field(const VectorXd& x) const;

    // Residual |b(x, x) - sign| relative to |x|^2.
    double locus_residual(const VectorXd& x) const;
    // Component along N removed: w - (b(w, x) / b(x, x)) x.
    VectorXd project(const VectorXd& x, const VectorXd& w) const;
    // Field made tangent by projection; counts a warning when the raw value was
    // off the tangent space by more than 1e-8.
    VectorField tangent(const VectorField& w) const;

    // nabla_v W at x.
    VectorXd derivative(const VectorXd& v, const VectorField& w, const VectorXd& x) const;
    // nabla_V W at x.
    VectorXd operator()(const VectorField& v, const VectorField& w, const VectorXd& x) const;
    // Covariant acceleration nabla_{c'} c' of a curve on the locus.
    VectorXd acceleration(const Curve& c, double t) const;

    // Metric g = b restricted to tangent vectors.
    double metric(const VectorXd& v, const VectorXd& w) const { return form_(v, w); }

    long tangency_warnings() const { return warnings_->load(); }

private:
    Form form_;
    double sign_;
    std::shared_ptr<std::atomic<long>> warnings_;
};

// Levi-Civita connection of a nondegenerate model space (error if degenerate).
Connection levi_civita(const Space& space);
// Connection of coEuc / coMin on the double cover (error if nondegenerate).
Connection co_connection(const Space& space);

// sup over samples of |nabla_{c'} c'| on [a, b].
double geodesic_residual(const Connection& conn, const Curve& c, double a, double b, int samples = 64);

// omega_x(v_1, ..., v_n) = det[N_x, v_1, ..., v_n].
struct VolumeForm {
    int dim = 4;
    double operator()(const VectorXd& x, const std::vector<VectorXd>& v) const;
    double operator()(const VectorXd& x, const VectorXd& v, const VectorXd& w, const VectorXd& u) const
    {
        return (*this)(x, std::vector<VectorXd>{v, w, u});
    }
};

VolumeForm volume_form(const Space& space);

// Residuals of the characterizing identities at x (absolute values).
double symmetry_residual(const Connection& c, const VectorField& x_field, const VectorField& y_field,
                         const VectorXd& x);
double metric_residual(const Connection& c, const VectorField& x_field, const VectorField& y_field,
                       const VectorField& z_field, const VectorXd& x);
// |nabla_X T| (co-spaces).
double degenerate_field_residual(const Connection& c, const VectorField& x_field, const VectorXd& x);
// Z.omega(X_1..X_n) - sum omega(.., nabla_Z X_i, ..).
double parallel_volume_residual(const Connection& c, const VolumeForm& omega, const VectorField& z_field,
                                const std::vector<VectorField>& fields, const VectorXd& x);
// Fields tangent to the slice {x_last = 0}: |(nabla_V W)_last|, i.e. the
// deviation from tangency to the space-like plane.
double plane_residual(const Connection& c, const VectorField& v, const VectorField& w, const VectorXd& x);

// Rotation angle of a tangent vector parallel transported around a closed curve
// on a 2-sphere slice (RK4 on the transport equation).
double holonomy_angle(const Connection& c, const Curve& loop, const VectorXd& v0, int steps = 2000);

// Random polynomial vector field of degree <= 2 on R^dim (coefficients N(0, scale^2)).
VectorField random_polynomial_field(int dim, Rng& rng, double scale = 1.0);
FieldFamily random_polynomial_family(int dim, Rng& rng, double scale = 1.0);

// Random point of the locus of the connection (double-cover chart for co-spaces).
VectorXd random_locus_point(const Connection& c, Rng& rng, double spread = 1.0);

// Transition of connections under the plane family g_t* from a source
// (Ell/dS -> coEuc, Hyp/AdS -> coMin).  Fields are supplied in the rescaled
// chart: the source field is X_t(x) = g_t*^{-1} P_t(g_t* x), so X_0 is tangent
// to the blown-up plane by construction.  The base point x_co lies on the
// co-space locus and is moved to the rescaled source locus for t > 0.
// Errors: a limit field P_0 not tangent to the co-space locus at x_co.
struct ConnectionTransitionResult {
    double connection_gap = 0.0;  // |lim g_t* nabla^src_{X_t} Y_t - nabla^co_{X0} Y0|
    double volume_gap = 0.0;      // |lim det(g_t*) omega^src(X_t, Y_t, Z_t) - omega^co(X0, Y0, Z0)|
};

ConnectionTransitionResult connection_transition_check(const TransitionSetup& setup, const FieldFamily& px,
                                                       const FieldFamily& py, const FieldFamily& pz,
                                                       const VectorXd& x_co);

}  // namespace modelspace
