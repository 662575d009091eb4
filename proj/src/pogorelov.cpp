#include "modelspace/pogorelov.hpp"

#include <cmath>
#include <sstream>

namespace modelspace {

namespace {

Form chart_form(ChartKind kind, int n)
{
    switch (kind) {
    case ChartKind::HypKlein:
    case ChartKind::EucFlat: return Form::standard(n, 0);
    case ChartKind::AdSChart:
    case ChartKind::MinFlat: return Form::standard(n - 1, 1);
    }
    throw DomainError("chart metric: unknown kind");
}

// Radical inverse of i in the given base (Halton coordinate).
double radical_inverse(int i, int base)
{
    double f = 1.0, r = 0.0;
    while (i > 0) {
        f /= base;
        r += f * (i % base);
        i /= base;
    }
    return r;
}

}  // namespace

std::string to_string(ChartKind k)
{
    switch (k) {
    case ChartKind::HypKlein: return "HypKlein";
    case ChartKind::AdSChart: return "AdSChart";
    case ChartKind::EucFlat: return "EucFlat";
    case ChartKind::MinFlat: return "MinFlat";
    }
    return "?";
}

ChartMetric::ChartMetric(ChartKind kind, int n) : kind_(kind), n_(n), form_(chart_form(kind, n))
{
    require(n >= 2, "chart metric: dimension must be at least 2");
}

bool ChartMetric::contains(const VectorXd& x) const
{
    if (x.size() != n_ || !x.allFinite()) return false;
    return flat() || form_(x, x) < 1.0;
}

double ChartMetric::rho(const VectorXd& x) const
{
    require(contains(x), "chart metric: point outside the domain of " + to_string(kind_));
    return flat() ? 1.0 : 1.0 / std::sqrt(1.0 - form_(x, x));
}

MatrixXd ChartMetric::matrix(const VectorXd& x) const
{
    const MatrixXd& b = form_.matrix();
    if (flat()) {
        require(contains(x), "chart metric: point outside the domain");
        return b;
    }
    const double r2 = rho(x) * rho(x);
    const VectorXd bx = b * x;
    return r2 * b + r2 * r2 * bx * bx.transpose();
}

double ChartMetric::operator()(const VectorXd& x, const VectorXd& u, const VectorXd& v) const
{
    return u.dot(matrix(x) * v);
}

VectorXd ChartMetric::christoffel(const VectorXd& x, const VectorXd& u, const VectorXd& v) const
{
    if (flat()) return VectorXd::Zero(n_);
    const double h = fd_step(x);
    std::vector<MatrixXd> dg(n_);
    for (int l = 0; l < n_; ++l) {
        const VectorXd e = VectorXd::Unit(n_, l);
        dg[l] = central_derivative([&](double s) { return matrix(x + s * e); }, 0.0, h);
    }
    MatrixXd du = MatrixXd::Zero(n_, n_), dv = MatrixXd::Zero(n_, n_);
    for (int l = 0; l < n_; ++l) {
        du += u[l] * dg[l];
        dv += v[l] * dg[l];
    }
    VectorXd rhs = du * v + dv * u;
    for (int l = 0; l < n_; ++l) rhs[l] -= u.dot(dg[l] * v);
    return 0.5 * matrix(x).lu().solve(rhs);
}

VectorXd ChartMetric::covariant(const VectorField& x_field, const VectorField& y_field, const VectorXd& x) const
{
    const VectorXd u = x_field(x);
    return ambient_derivative(y_field, u, x) + christoffel(x, u, y_field(x));
}

double ChartMetric::volume_density(const VectorXd& x) const
{
    return std::sqrt(std::abs(matrix(x).determinant()));
}

ChartPair hyp_euc_pair(int n)
{
    return {ChartMetric(ChartKind::HypKlein, n), ChartMetric(ChartKind::EucFlat, n)};
}

ChartPair ads_min_pair(int n)
{
    return {ChartMetric(ChartKind::AdSChart, n), ChartMetric(ChartKind::MinFlat, n)};
}

ChartPair parse_pair(const std::string& name, int n)
{
    if (name == "hyp-euc") return hyp_euc_pair(n);
    if (name == "ads-min") return ads_min_pair(n);
    throw DomainError("unknown chart pair '" + name + "' (expected hyp-euc or ads-min)");
}

MatrixXd operator_L(const ChartMetric& src, const ChartMetric& dst, const VectorXd& x)
{
    const MatrixXd gd = dst.matrix(x);
    const Eigen::FullPivLU<MatrixXd> lu(gd);
    require(lu.isInvertible(), "operator_L: target metric is degenerate at x");
    // g(X, Y) = Y^T G X = Y^T Gd L X for all Y  =>  L = Gd^{-1} G.
    return lu.solve(src.matrix(x));
}

VectorXd operator_L(const ChartMetric& src, const ChartMetric& dst, const VectorXd& x, const VectorXd& v)
{
    return operator_L(src, dst, x) * v;
}

double pogorelov_lambda(const ChartPair& pair, const VectorXd& x)
{
    const int n = pair.src.dim();
    return std::pow(pair.src.rho(x), -(n + 1)) * std::pow(pair.dst.rho(x), n + 1);
}

double pogorelov_lambda_from_volumes(const ChartPair& pair, const VectorXd& x)
{
    return pair.dst.volume_density(x) / pair.src.volume_density(x);
}

VectorXd pogorelov_vector(const ChartPair& pair, const VectorXd& x, const VectorXd& v)
{
    const double lambda = pogorelov_lambda(pair, x);
    require(lambda > 0, "infinitesimal_pogorelov: nonpositive volume ratio");
    const int n = pair.src.dim();
    return std::pow(lambda, 2.0 / (n + 1)) * operator_L(pair.src, pair.dst, x, v);
}

VectorField infinitesimal_pogorelov(const VectorField& k, const ChartPair& pair)
{
    return [k, pair](const VectorXd& x) { return pogorelov_vector(pair, x, k(x)); };
}

VectorXd KillingField::operator()(const VectorXd& x) const
{
    const int n = static_cast<int>(x.size());
    require(generator.rows() == n + 1 && generator.cols() == n + 1, "Killing field: generator size mismatch");
    VectorXd y(n + 1);
    y << x, 1.0;
    const VectorXd ay = generator * y;
    return ay.head(n) - ay[n] * x;
}

VectorField KillingField::field() const
{
    const KillingField self = *this;
    return [self](const VectorXd& x) { return self(x); };
}

MatrixXd ambient_form(const ChartPair& pair)
{
    const int n = pair.src.dim();
    MatrixXd j = MatrixXd::Zero(n + 1, n + 1);
    j.topLeftCorner(n, n) = pair.src.form().matrix();
    j(n, n) = -1.0;
    return j;
}

double killing_generator_defect(const MatrixXd& a, const MatrixXd& j)
{
    require(a.rows() == j.rows() && a.cols() == j.cols(), "Killing generator: size mismatch");
    return (a.transpose() * j + j * a).cwiseAbs().maxCoeff();
}

KillingField random_killing(const ChartPair& pair, Rng& rng, double scale)
{
    const MatrixXd j = ambient_form(pair);
    const int d = static_cast<int>(j.rows());
    const MatrixXd g = scale * rng.gaussian(d, d);
    const MatrixXd s = g - g.transpose();
    // A = J^{-1} S with S skew satisfies A^T J + J A = -S + S = 0 (J diagonal +-1).
    return {j * s};
}

VectorField flat_killing(const MatrixXd& m, const VectorXd& c)
{
    return [m, c](const VectorXd& x) { return VectorXd(m * x + c); };
}

MatrixXd sample_cloud(const ChartMetric& m, int count, double radius)
{
    static const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19};
    const int n = m.dim();
    require(n <= 8, "sample_cloud: dimension too large");
    MatrixXd out(n, count);
    int found = 0;
    for (int i = 1; found < count; ++i) {
        VectorXd x(n);
        for (int a = 0; a < n; ++a) x[a] = radius * (2.0 * radical_inverse(i, primes[a]) - 1.0);
        if (x.norm() > radius || !m.contains(x)) continue;
        if (!m.flat() && m.form()(x, x) > 1.0 - 1e-3) continue;
        out.col(found++) = x;
    }
    return out;
}

double killing_residual_at(const ChartMetric& m, const VectorField& k, const VectorXd& x)
{
    const int n = m.dim();
    const VectorXd kx = k(x);
    const MatrixXd g = m.matrix(x);
    MatrixXd nabla(n, n);  // column i: nabla_{e_i} K
    for (int i = 0; i < n; ++i) {
        const VectorXd e = VectorXd::Unit(n, i);
        nabla.col(i) = ambient_derivative(k, e, x) + m.christoffel(x, e, kx);
    }
    const MatrixXd sym = nabla.transpose() * g + g * nabla;  // (i, j): g(nabla_i K, e_j) + g(e_i, nabla_j K)
    return sym.cwiseAbs().maxCoeff();
}

double killing_residual(const ChartMetric& m, const VectorField& k, const MatrixXd& cloud)
{
    double worst = 0.0;
    for (int i = 0; i < cloud.cols(); ++i) worst = std::max(worst, killing_residual_at(m, k, cloud.col(i)));
    return worst;
}

VectorXd weyl_gap(const ChartMetric& a, const ChartMetric& b, const std::function<double(const VectorXd&)>& lambda,
                  const VectorField& x_field, const VectorField& y_field, const VectorXd& x)
{
    const int n = a.dim();
    const VectorXd u = x_field(x), v = y_field(x);
    const VectorXd diff = b.covariant(x_field, y_field, x) - a.covariant(x_field, y_field, x);
    auto f = [&](const VectorXd& p) { return std::log(lambda(p)) / (n + 1); };
    const double h = fd_step(x);
    const double fu = central_derivative_scalar([&](double s) { return f(x + s * u); }, 0.0, h);
    const double fv = central_derivative_scalar([&](double s) { return f(x + s * v); }, 0.0, h);
    return diff - (fu * v + fv * u);
}

double contraction_gap(const ChartMetric& a, const ChartMetric& b,
                       const std::function<double(const VectorXd&)>& lambda, const VectorXd& x,
                       const VectorXd& v)
{
    const int n = a.dim();
    double trace = 0.0;
    for (int i = 0; i < n; ++i) {
        const VectorXd e = VectorXd::Unit(n, i);
        trace += (b.christoffel(x, v, e) - a.christoffel(x, v, e))[i];
    }
    const double dl =
        central_derivative_scalar([&](double s) { return std::log(lambda(x + s * v)); }, 0.0, fd_step(x));
    return std::abs(trace - dl);
}

RigidityResidual infinitesimal_isometry_residual(const ChartMetric& m, const ChartSurface& s, const SurfaceField& z,
                                                 int grid)
{
    require(grid >= 2, "infinitesimal isometry residual: grid must be at least 2");
    RigidityResidual out;
    const double h = 1e-5;
    for (int i = 0; i < grid; ++i) {
        for (int j = 0; j < grid; ++j) {
            const double u = s.u0 + (s.u1 - s.u0) * i / (grid - 1);
            const double v = s.v0 + (s.v1 - s.v0) * j / (grid - 1);
            const VectorXd x = s.immersion(u, v);
            const VectorXd zx = z(u, v);
            const double dirs[3][2] = {{1, 0}, {0, 1}, {1, 1}};
            for (const auto& d : dirs) {
                auto along = [&](auto&& f) {
                    return central_derivative([&](double t) { return VectorXd(f(u + t * d[0], v + t * d[1])); },
                                              0.0, h);
                };
                const VectorXd tx = along(s.immersion);
                const VectorXd dz = along(z);
                const VectorXd nabla = dz + m.christoffel(x, tx, zx);
                const double r = std::abs(m(x, nabla, tx));
                if (r > out.worst) out = {r, u, v};
            }
        }
    }
    return out;
}

SurfaceField rigidity_transport(const SurfaceField& z, const ChartSurface& s, const ChartPair& pair, double tol,
                                int grid)
{
    const RigidityResidual r = infinitesimal_isometry_residual(pair.src, s, z, grid);
    if (r.worst > tol) {
        std::ostringstream msg;
        msg << "rigidity_transport: field is not an infinitesimal isometric deformation (residual " << r.worst
            << " at u = " << r.u << ", v = " << r.v << ")";
        throw DomainError(msg.str());
    }
    return [z, s, pair](double u, double v) { return pogorelov_vector(pair, s.immersion(u, v), z(u, v)); };
}

}  // namespace modelspace
