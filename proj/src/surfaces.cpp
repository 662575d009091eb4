#include "modelspace/surfaces.hpp"

#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace modelspace {

namespace {

using Immersion = std::function<VectorXd(double, double)>;

std::string at(double u, double v)
{
    std::ostringstream s;
    s << " at (u, v) = (" << u << ", " << v << ")";
    return s.str();
}

// Partial derivatives of a map (u, v) -> R^d at a point by central
// differences on steps h, h/2, h/4 with two Richardson levels.  The leading error is
// about 8e-7 h^6 f^(8), so a fairly large h keeps the rounding noise of the
// second differences (about eps / (h/4)^2) near 1e-12.
struct Jet {
    VectorXd x, xu, xv, xuu, xuv, xvv;
};

template <typename D>
VectorXd extrapolated(D&& d, double h)
{
    return (64.0 * d(h / 4) - 20.0 * d(h / 2) + d(h)) / 45.0;
}

Jet jet(const Immersion& f, double u, double v)
{
    constexpr double h = 8e-2;
    Jet j;
    j.x = f(u, v);
    auto first = [&](double du, double dv) {
        return extrapolated([&](double s) { return VectorXd((f(u + s * du, v + s * dv) - f(u - s * du, v - s * dv)) / (2 * s)); }, h);
    };
    auto second = [&](double du, double dv) {
        return extrapolated(
            [&](double s) { return VectorXd((f(u + s * du, v + s * dv) - 2.0 * j.x + f(u - s * du, v - s * dv)) / (s * s)); },
            h);
    };
    j.xu = first(1, 0);
    j.xv = first(0, 1);
    j.xuu = second(1, 0);
    j.xvv = second(0, 1);
    j.xuv = extrapolated(
        [&](double s) { return VectorXd((f(u + s, v + s) - f(u + s, v - s) - f(u - s, v + s) + f(u - s, v - s)) / (4 * s * s)); },
        h);
    return j;
}

Matrix2d gram(const Form& b, const VectorXd& a, const VectorXd& c)
{
    Matrix2d g;
    g << b(a, a), b(a, c), b(c, a), b(c, c);
    return g;
}

void finish(EmbeddingData& d)
{
    const std::size_t n = d.I.size();
    d.B.resize(n);
    d.III.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        d.B[k] = d.I[k].inverse() * d.II[k];
        d.III[k] = d.B[k].transpose() * d.I[k] * d.B[k];
    }
}

EmbeddingData empty_grid(double u0, double u1, double v0, double v1, int grid)
{
    require(grid >= 2, "embedding data: grid must be at least 2");
    require(u1 > u0 && v1 > v0, "embedding data: empty parameter rectangle");
    EmbeddingData d;
    d.rows = d.cols = grid;
    d.u0 = u0;
    d.v0 = v0;
    d.hu = (u1 - u0) / (grid - 1);
    d.hv = (v1 - v0) / (grid - 1);
    d.I.resize(static_cast<std::size_t>(grid) * grid);
    d.II.resize(d.I.size());
    return d;
}

// Fourth-order central first-derivative weights at offsets -2..2.
constexpr double kD1[5] = {1.0 / 12, -8.0 / 12, 0.0, 8.0 / 12, -1.0 / 12};
// Fourth-order central second-derivative weights at offsets -2..2.
constexpr double kD2[5] = {-1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12, -1.0 / 12};

template <typename T, typename Get>
T d4(Get&& get, int i, int j, int axis, double h)
{
    T acc = get(i, j) * 0.0;
    for (int k = -2; k <= 2; ++k) {
        if (k == 0) continue;
        acc += kD1[k + 2] * (axis == 0 ? get(i + k, j) : get(i, j + k));
    }
    return acc / h;
}

// Five-point finite-difference weights at node i of a grid with n nodes:
// centred when possible, shifted (one-sided) near the ends.
struct Stencil {
    int start = 0;
    double d1[5] = {}, d2[5] = {};
};

Stencil stencil(int i, int n)
{
    Stencil st;
    st.start = std::clamp(i - 2, 0, n - 5);
    Eigen::Matrix<double, 5, 5> v;
    for (int p = 0; p < 5; ++p)
        for (int k = 0; k < 5; ++k) v(p, k) = std::pow(double(st.start + k - i), p);
    const auto lu = v.fullPivLu();
    const Eigen::Matrix<double, 5, 1> w1 = lu.solve(Eigen::Matrix<double, 5, 1>::Unit(1));
    const Eigen::Matrix<double, 5, 1> w2 = lu.solve(2.0 * Eigen::Matrix<double, 5, 1>::Unit(2));
    for (int k = 0; k < 5; ++k) {
        st.d1[k] = w1[k];
        st.d2[k] = w2[k];
    }
    return st;
}

// Base-point data of a co-space graph base chart.
struct BaseJet {
    Vector3d y;
    Matrix2d metric;
    Matrix2d christoffel[2];  // christoffel[k](i, j) = Gamma^k_ij
};

const Form& base_form(const SurfaceSpace& space)
{
    static const Form sphere = Form::standard(3, 0);
    static const Form hyper = Form::standard(2, 1);
    return space.kind == SpaceKind::coEuc ? sphere : hyper;
}

double co_sign(const SurfaceSpace& space) { return space.kind == SpaceKind::coEuc ? 1.0 : -1.0; }

BaseJet base_jet(const BaseMap& base, const SurfaceSpace& space, double a, double b)
{
    const Form& bf = base_form(space);
    const Jet j = jet([&](double s, double t) { return VectorXd(base(s, t)); }, a, b);
    BaseJet out;
    out.y = j.x;
    out.metric = gram(bf, j.xu, j.xv);
    const Matrix2d inv = out.metric.inverse();
    const VectorXd* second[2][2] = {{&j.xuu, &j.xuv}, {&j.xuv, &j.xvv}};
    const VectorXd* first[2] = {&j.xu, &j.xv};
    for (int k = 0; k < 2; ++k) out.christoffel[k].setZero();
    for (int i = 0; i < 2; ++i)
        for (int jj = 0; jj < 2; ++jj) {
            Vector2d lowered(bf(*second[i][jj], *first[0]), bf(*second[i][jj], *first[1]));
            const Vector2d raised = inv * lowered;
            for (int k = 0; k < 2; ++k) out.christoffel[k](i, jj) = raised[k];
        }
    return out;
}

void check_co(const SurfaceSpace& space)
{
    require(space.co(), "co-space surface operation requires coEuc or coMin");
}

// 1-homogeneous extension of u off S^2 / H^2.
double homogeneous_extension(const GraphPatch& g, const SurfaceSpace& space, const Vector3d& x)
{
    const double q = co_sign(space) * base_form(space)(x, x);
    require(q > 0, "support function extension: point outside the cone over the base");
    const double r = std::sqrt(q);
    return r * g.u(x / r);
}

}  // namespace

double SurfaceSpace::curvature() const
{
    switch (kind) {
    case SpaceKind::Euc:
    case SpaceKind::Min: return 0.0;
    case SpaceKind::Ell:
    case SpaceKind::dS:
    case SpaceKind::coEuc: return 1.0;
    case SpaceKind::Hyp:
    case SpaceKind::AdS:
    case SpaceKind::coMin: return -1.0;
    }
    return 0.0;
}

double SurfaceSpace::normal_norm() const
{
    switch (kind) {
    case SpaceKind::Euc:
    case SpaceKind::Ell:
    case SpaceKind::Hyp: return 1.0;
    case SpaceKind::Min:
    case SpaceKind::dS:
    case SpaceKind::AdS: return -1.0;
    case SpaceKind::coEuc:
    case SpaceKind::coMin: return 0.0;
    }
    return 0.0;
}

std::string SurfaceSpace::name() const { return to_string(kind) + "3"; }

SurfaceSpace surface_space(SpaceKind kind)
{
    switch (kind) {
    case SpaceKind::Euc: return {kind, Form::standard(3, 0), 0};
    case SpaceKind::Min: return {kind, Form::standard(2, 1), 0};
    default: {
        const Space s = Space::make(kind, 3);
        return {kind, s.form, s.sign};
    }
    }
}

SurfaceSpace surface_space(const std::string& name)
{
    return surface_space(parse_space(name).kind);
}

SurfaceSpace surface_space(const TransitionSetup& setup)
{
    require(setup.family == FamilyKind::blow_up_hyperplane && setup.ambient_dim == 4,
            "surface transition: requires the plane family in ambient dimension 4");
    return {setup.source, setup.form, static_cast<int>(setup.sign)};
}

EmbeddingData embedding_data(const SurfacePatch& patch, const SurfaceSpace& space, int grid)
{
    require(!space.co(), "embedding_data: use embedding_data_co for co-spaces");
    require(patch.normal_sign == 1 || patch.normal_sign == -1, "embedding_data: normal_sign must be +-1");
    EmbeddingData d = empty_grid(patch.u0, patch.u1, patch.v0, patch.v1, grid);
    d.space = space.name();
    d.curvature = space.curvature();
    d.normal_norm = space.normal_norm();
    d.normal_convention = space.flat() ? "det[s_u, s_v, N] > 0" : "det[s_u, s_v, N, x] > 0";
    if (patch.normal_sign < 0) d.normal_convention += " (flipped)";
    const Form& b = space.form;
    const int dim = space.ambient_dim();
    for (int i = 0; i < grid; ++i) {
        for (int j = 0; j < grid; ++j) {
            const Vector2d p = d.node(i, j);
            const Jet s = jet(patch.immersion, p[0], p[1]);
            require(s.x.size() == dim, "embedding_data: immersion has the wrong dimension");
            if (!space.flat())
                require(std::abs(b(s.x, s.x) - space.sign) <= 1e-8 * std::max(1.0, s.x.squaredNorm()),
                        "embedding_data: immersion is off the locus of " + space.name() + at(p[0], p[1]));
            const Matrix2d I = gram(b, s.xu, s.xv);
            require(I(0, 0) > 0 && I.determinant() > 1e-14 * std::max(1.0, I.squaredNorm()),
                    "embedding_data: induced metric is degenerate or not space-like" + at(p[0], p[1]));
            // Normal: b-orthogonal to the tangent plane (and to x).
            MatrixXd m(dim, space.flat() ? 2 : 3);
            m.col(0) = s.xu;
            m.col(1) = s.xv;
            if (!space.flat()) m.col(2) = s.x;
            const MatrixXd c = (b.matrix() * m).transpose();
            Eigen::JacobiSVD<MatrixXd> svd(c, Eigen::ComputeFullV);
            VectorXd n = svd.matrixV().col(dim - 1);
            const double nn = b(n, n);
            require(std::abs(nn) > 1e-10, "embedding_data: light-like normal" + at(p[0], p[1]));
            require(nn * d.normal_norm > 0, "embedding_data: normal has the wrong causal type" + at(p[0], p[1]));
            n /= std::sqrt(std::abs(nn));
            MatrixXd frame(dim, dim);
            frame.col(0) = s.xu;
            frame.col(1) = s.xv;
            frame.col(2) = n;
            if (!space.flat()) frame.col(3) = s.x;
            if (frame.determinant() * patch.normal_sign < 0) n = -n;
            Matrix2d II;
            II << -b(s.xuu, n), -b(s.xuv, n), -b(s.xuv, n), -b(s.xvv, n);
            const int k = d.index(i, j);
            d.I[k] = I;
            d.II[k] = II;
        }
    }
    finish(d);
    return d;
}

BaseMap sphere_chart()
{
    return [](double a, double b) {
        return Vector3d(std::cos(a) * std::cos(b), std::sin(a) * std::cos(b), std::sin(b));
    };
}

BaseMap hyperbolic_chart()
{
    return [](double a, double b) {
        return Vector3d(std::sinh(a) * std::cosh(b), std::sinh(b), std::cosh(a) * std::cosh(b));
    };
}

SurfacePatch immersion_from_data_co(const GraphPatch& g, const SurfaceSpace& space)
{
    check_co(space);
    const Form& bf = base_form(space);
    const double eps = co_sign(space);
    const Vector3d y0 = g.base(0.5 * (g.u0 + g.u1), 0.5 * (g.v0 + g.v1));
    require(std::abs(bf(y0, y0) - eps) < 1e-9, "immersion_from_data: developing map is not on the base surface");
    SurfacePatch p;
    const BaseMap base = g.base;
    const SupportFunction u = g.u;
    p.immersion = [base, u](double a, double b) {
        const Vector3d y = base(a, b);
        VectorXd x(4);
        x << y, u(y);
        return x;
    };
    p.u0 = g.u0;
    p.u1 = g.u1;
    p.v0 = g.v0;
    p.v1 = g.v1;
    return p;
}

SurfacePatch immersion_from_data_co(const GraphPatch& g, const SurfaceSpace& space,
                                    const std::function<Matrix2d(double, double)>& metric, int grid)
{
    check_co(space);
    const Form& bf = base_form(space);
    const double eps = co_sign(space);
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) {
            const double a = g.u0 + (g.u1 - g.u0) * i / (grid - 1), b = g.v0 + (g.v1 - g.v0) * j / (grid - 1);
            const BaseJet bj = base_jet(g.base, space, a, b);
            require(std::abs(bf(bj.y, bj.y) - eps) < 1e-9,
                    "immersion_from_data: developing map is not on the base surface" + at(a, b));
            require((bj.metric - metric(a, b)).cwiseAbs().maxCoeff() < 1e-6,
                    "immersion_from_data: developing map is not a local isometry" + at(a, b));
        }
    return immersion_from_data_co(g, space);
}

EmbeddingData embedding_data_co(const SurfacePatch& patch, const SurfaceSpace& space, int grid)
{
    check_co(space);
    EmbeddingData d = empty_grid(patch.u0, patch.u1, patch.v0, patch.v1, grid);
    d.space = space.name();
    d.curvature = space.curvature();
    d.normal_norm = 0.0;
    d.normal_convention = "T = +e4 (double-cover chart)";
    const Form& b = space.form;
    const double eps = space.sign;
    const Connection conn(space.form, space.sign);
    for (int i = 0; i < grid; ++i) {
        for (int j = 0; j < grid; ++j) {
            const Vector2d p = d.node(i, j);
            const Jet s = jet(patch.immersion, p[0], p[1]);
            require(s.x.size() == 4, "embedding_data_co: immersion must take values in R^4");
            require(std::abs(b(s.x, s.x) - eps) <= 1e-8 * std::max(1.0, s.x.squaredNorm()),
                    "embedding_data_co: patch is not a graph over the base surface" + at(p[0], p[1]));
            const Matrix2d I = gram(b, s.xu, s.xv);
            require(I(0, 0) > 0 && I.determinant() > 1e-14 * std::max(1.0, I.squaredNorm()),
                    "embedding_data_co: patch is not a graph over the base surface" + at(p[0], p[1]));
            Eigen::Matrix<double, 4, 3> frame;
            frame.col(0) = s.xu;
            frame.col(1) = s.xv;
            frame.col(2) = Vector4d::UnitW();
            const auto qr = frame.colPivHouseholderQr();
            auto t_component = [&](const VectorXd& second) {
                const VectorXd nabla = conn.project(s.x, second);
                return qr.solve(Vector4d(nabla))[2];
            };
            Matrix2d II;
            II(0, 0) = t_component(s.xuu);
            II(0, 1) = II(1, 0) = t_component(s.xuv);
            II(1, 1) = t_component(s.xvv);
            const int k = d.index(i, j);
            d.I[k] = I;
            d.II[k] = II;
        }
    }
    finish(d);
    return d;
}

Matrix2d shape_from_support(const GraphPatch& g, const SurfaceSpace& space, double a, double b)
{
    check_co(space);
    const BaseJet bj = base_jet(g.base, space, a, b);
    const Vector3d ya = central_derivative([&](double s) { return Vector3d(g.base(a + s, b)); }, 0.0, 1e-4);
    const Vector3d yb = central_derivative([&](double s) { return Vector3d(g.base(a, b + s)); }, 0.0, 1e-4);
    auto U = [&](const Vector3d& x) { return homogeneous_extension(g, space, x); };
    const double u0 = U(bj.y);
    // Second directional derivative of U along z, Richardson-refined.
    auto d2 = [&](const Vector3d& z) {
        auto q = [&](double h) { return (U(bj.y + h * z) - 2.0 * u0 + U(bj.y - h * z)) / (h * h); };
        const double h = 2e-3 / std::max(1.0, z.norm());
        return (4.0 * q(h / 2) - q(h)) / 3.0;
    };
    Matrix2d hess;
    hess(0, 0) = d2(ya);
    hess(1, 1) = d2(yb);
    hess(0, 1) = hess(1, 0) = 0.25 * (d2(ya + yb) - d2(ya - yb));
    return bj.metric.inverse() * hess;
}

EmbeddingData shape_from_support_data(const GraphPatch& g, const SurfaceSpace& space, int grid)
{
    check_co(space);
    EmbeddingData d = empty_grid(g.u0, g.u1, g.v0, g.v1, grid);
    d.space = space.name();
    d.curvature = space.curvature();
    d.normal_norm = 0.0;
    d.normal_convention = "T = +e4 (double-cover chart)";
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) {
            const Vector2d p = d.node(i, j);
            const int k = d.index(i, j);
            d.I[k] = base_jet(g.base, space, p[0], p[1]).metric;
            d.II[k] = d.I[k] * shape_from_support(g, space, p[0], p[1]);
            d.II[k] = 0.5 * (d.II[k] + d.II[k].transpose()).eval();
        }
    finish(d);
    return d;
}

double brioschi_curvature(const EmbeddingData& data, const std::vector<Matrix2d>& metric, int i, int j, int stride)
{
    require(stride >= 1, "brioschi_curvature: stride must be positive");
    require(i >= stride && j >= stride && i + stride < data.rows && j + stride < data.cols,
            "brioschi_curvature: stencil leaves the grid");
    const double hu = stride * data.hu, hv = stride * data.hv;
    auto g = [&](int a, int b, int r, int c) {
        return metric[data.index(i + (a - i) * stride, j + (b - j) * stride)](r, c);
    };
    auto du = [&](int r, int c) { return (g(i + 1, j, r, c) - g(i - 1, j, r, c)) / (2 * hu); };
    auto dv = [&](int r, int c) { return (g(i, j + 1, r, c) - g(i, j - 1, r, c)) / (2 * hv); };
    auto duu = [&](int r, int c) { return (g(i + 1, j, r, c) - 2 * g(i, j, r, c) + g(i - 1, j, r, c)) / (hu * hu); };
    auto dvv = [&](int r, int c) { return (g(i, j + 1, r, c) - 2 * g(i, j, r, c) + g(i, j - 1, r, c)) / (hv * hv); };
    auto duv = [&](int r, int c) {
        return (g(i + 1, j + 1, r, c) - g(i + 1, j - 1, r, c) - g(i - 1, j + 1, r, c) + g(i - 1, j - 1, r, c)) /
               (4 * hu * hv);
    };
    const double E = g(i, j, 0, 0), F = g(i, j, 0, 1), G = g(i, j, 1, 1);
    Matrix3d m1, m2;
    m1 << -0.5 * dvv(0, 0) + duv(0, 1) - 0.5 * duu(1, 1), 0.5 * du(0, 0), du(0, 1) - 0.5 * dv(0, 0),
        dv(0, 1) - 0.5 * du(1, 1), E, F, 0.5 * dv(1, 1), F, G;
    m2 << 0, 0.5 * dv(0, 0), 0.5 * du(1, 1), 0.5 * dv(0, 0), E, F, 0.5 * du(1, 1), F, G;
    const double w = E * G - F * F;
    return (m1.determinant() - m2.determinant()) / (w * w);
}

Vector2d codazzi_vector(const EmbeddingData& data, int i, int j)
{
    require(i >= 2 && j >= 2 && i + 2 < data.rows && j + 2 < data.cols, "codazzi_vector: node too close to the boundary");
    auto metric = [&](int a, int b) { return data.I[data.index(a, b)]; };
    auto shape = [&](int a, int b) { return data.B[data.index(a, b)]; };
    const Matrix2d dg[2] = {d4<Matrix2d>(metric, i, j, 0, data.hu), d4<Matrix2d>(metric, i, j, 1, data.hv)};
    const Matrix2d dB[2] = {d4<Matrix2d>(shape, i, j, 0, data.hu), d4<Matrix2d>(shape, i, j, 1, data.hv)};
    const Matrix2d ginv = metric(i, j).inverse();
    const Matrix2d& B = shape(i, j);
    // Gamma^k_{ab} = 1/2 g^{kl} (d_a g_{bl} + d_b g_{al} - d_l g_{ab}).
    double gamma[2][2][2];
    for (int k = 0; k < 2; ++k)
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                double s = 0.0;
                for (int l = 0; l < 2; ++l) s += ginv(k, l) * (dg[a](b, l) + dg[b](a, l) - dg[l](a, b));
                gamma[k][a][b] = 0.5 * s;
            }
    Vector2d c;
    for (int k = 0; k < 2; ++k) {
        double v = dB[0](k, 1) - dB[1](k, 0);
        for (int l = 0; l < 2; ++l) v += gamma[k][0][l] * B(l, 1) - gamma[k][1][l] * B(l, 0);
        c[k] = v;
    }
    return c;
}

double refined_curvature(const EmbeddingData& data, const std::vector<Matrix2d>& metric, int i, int j)
{
    return (64.0 * brioschi_curvature(data, metric, i, j, 1) - 20.0 * brioschi_curvature(data, metric, i, j, 2) +
            brioschi_curvature(data, metric, i, j, 4)) /
           45.0;
}

GaussCodazzi gauss_codazzi_residual(const EmbeddingData& data, bool step_refined)
{
    require(data.rows >= 5 && data.cols >= 5, "gauss_codazzi_residual: grid must be at least 5 x 5");
    GaussCodazzi r;
    const int m = step_refined ? 4 : 1;
    for (int i = m; i + m < data.rows; ++i)
        for (int j = m; j + m < data.cols; ++j) {
            const double k =
                step_refined ? refined_curvature(data, data.I, i, j) : brioschi_curvature(data, data.I, i, j);
            const double expected = data.curvature + data.normal_norm * data.B[data.index(i, j)].determinant();
            r.gauss = std::max(r.gauss, std::abs(k - expected));
            if (i >= 2 && j >= 2 && i + 2 < data.rows && j + 2 < data.cols)
                r.codazzi = std::max(r.codazzi, codazzi_vector(data, i, j).norm());
        }
    return r;
}

EmbeddingData dual_embedding_data(const EmbeddingData& data, const SurfaceSpace& dual_space)
{
    EmbeddingData d = data;
    d.space = dual_space.name();
    d.curvature = dual_space.curvature();
    d.normal_norm = dual_space.normal_norm();
    d.normal_convention = "dual of " + data.space + " data";
    for (std::size_t k = 0; k < data.size(); ++k) {
        const Matrix2d& B = data.B[k];
        if (std::abs(B.determinant()) < 1e-12 * std::max(1.0, B.squaredNorm())) {
            const int i = static_cast<int>(k) / data.cols, j = static_cast<int>(k) % data.cols;
            const Vector2d p = data.node(i, j);
            throw DomainError("dual_embedding_data: shape operator is singular" + at(p[0], p[1]));
        }
        d.I[k] = data.III[k];
        d.B[k] = B.inverse();
        d.II[k] = d.I[k] * d.B[k];
        d.III[k] = d.B[k].transpose() * d.I[k] * d.B[k];
    }
    return d;
}

VectorXd remove_linear_gauge(const BaseMap& base, const SurfaceSpace& space, const VectorXd& u, int rows,
                             int cols, double u0, double u1, double v0, double v1)
{
    check_co(space);
    require(u.size() == rows * cols, "remove_linear_gauge: size mismatch");
    MatrixXd basis(rows * cols, 3);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            const double a = u0 + (u1 - u0) * i / (rows - 1), b = v0 + (v1 - v0) * j / (cols - 1);
            basis.row(i * cols + j) = base(a, b).transpose();
        }
    const VectorXd coeff = basis.colPivHouseholderQr().solve(u);
    return u - basis * coeff;
}

RecoveredSupport recover_support_from_shape(const BaseMap& base, const SurfaceSpace& space,
                                            const std::function<Matrix2d(double, double)>& shape, double u0,
                                            double u1, double v0, double v1, int grid, double codazzi_tol)
{
    check_co(space);
    require(grid >= 7, "recover_support_from_shape: grid must be at least 7");
    EmbeddingData d = empty_grid(u0, u1, v0, v1, grid);
    d.space = space.name();
    d.curvature = space.curvature();
    d.normal_norm = 0.0;
    std::vector<BaseJet> jets(d.I.size());
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) {
            const Vector2d p = d.node(i, j);
            const int k = d.index(i, j);
            jets[k] = base_jet(base, space, p[0], p[1]);
            d.I[k] = jets[k].metric;
            d.II[k] = d.I[k] * shape(p[0], p[1]);
        }
    finish(d);
    // Codazzi is the integrability condition of B = Hess u + eps u Id.
    double codazzi = 0.0;
    for (int i = 2; i + 2 < grid; ++i)
        for (int j = 2; j + 2 < grid; ++j) codazzi = std::max(codazzi, codazzi_vector(d, i, j).norm());
    if (codazzi > codazzi_tol) {
        std::ostringstream msg;
        msg << "recover_support_from_shape: shape operator violates the Codazzi equation (residual " << codazzi
            << " > " << codazzi_tol << "); no support function exists";
        throw ToleranceError(msg.str());
    }

    const double eps = co_sign(space);
    const int n = grid * grid;
    const double hu = d.hu, hv = d.hv;
    std::vector<Eigen::Triplet<double>> trip;
    std::vector<double> rhs;
    int row = 0;
    // Rows: (Hess u)_{ab} + eps u I_{ab} = II_{ab} at every node, with 5-point
    // stencils (central inside, shifted one-sided near the boundary).
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) {
            const int k = d.index(i, j);
            const BaseJet& bj = jets[k];
            const Stencil su = stencil(i, grid), sv = stencil(j, grid);
            for (int a = 0; a < 2; ++a)
                for (int b = a; b < 2; ++b) {
                    // Second derivative part.
                    for (int s = 0; s < 5; ++s) {
                        if (a == 0 && b == 0) trip.emplace_back(row, d.index(su.start + s, j), su.d2[s] / (hu * hu));
                        if (a == 1 && b == 1) trip.emplace_back(row, d.index(i, sv.start + s), sv.d2[s] / (hv * hv));
                        if (a == 0 && b == 1)
                            for (int t = 0; t < 5; ++t)
                                trip.emplace_back(row, d.index(su.start + s, sv.start + t), su.d1[s] * sv.d1[t] / (hu * hv));
                        // - Gamma^c_ab d_c u.
                        trip.emplace_back(row, d.index(su.start + s, j), -bj.christoffel[0](a, b) * su.d1[s] / hu);
                        trip.emplace_back(row, d.index(i, sv.start + s), -bj.christoffel[1](a, b) * sv.d1[s] / hv);
                    }
                    trip.emplace_back(row, k, eps * bj.metric(a, b));
                    rhs.push_back(d.II[k](a, b));
                    ++row;
                }
        }
    // Gauge pins: u = 0 at three nodes with independent base points (removes
    // the kernel of linear functions); the orthogonal gauge is applied after.
    const double pin_weight = 1.0 / (hu * hv);
    const int pins[3] = {d.index(0, 0), d.index(grid - 1, 0), d.index(0, grid - 1)};
    for (int p : pins) {
        trip.emplace_back(row++, p, pin_weight);
        rhs.push_back(0.0);
    }
    Eigen::SparseMatrix<double> A(row, n);
    A.setFromTriplets(trip.begin(), trip.end());
    const VectorXd b = Eigen::Map<const VectorXd>(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
    const Eigen::SparseMatrix<double> normal = A.transpose() * A;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(normal);
    require(solver.info() == Eigen::Success, "recover_support_from_shape: factorization failed");
    VectorXd u = solver.solve(A.transpose() * b);

    RecoveredSupport out;
    out.rows = out.cols = grid;
    out.codazzi = codazzi;
    out.values = remove_linear_gauge(base, space, u, grid, grid, u0, u1, v0, v1);
    // Forward application on the gauge-fixed values, compared as shape operators.
    const VectorXd fwd = A.topRows(row - 3) * out.values;
    int r = 0;
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) {
            const int k = d.index(i, j);
            Matrix2d m;
            m(0, 0) = fwd[r];
            m(0, 1) = m(1, 0) = fwd[r + 1];
            m(1, 1) = fwd[r + 2];
            r += 3;
            out.forward_residual =
                std::max(out.forward_residual, (d.I[k].inverse() * m - d.B[k]).cwiseAbs().maxCoeff());
        }
    return out;
}

SurfaceFamily graph_family(const GraphPatch& g, const TransitionSetup& setup)
{
    const SurfaceSpace src = surface_space(setup);
    const VectorXd diag = src.form.matrix().diagonal();
    const double eps = src.sign, b4 = diag[3];
    const BaseMap base = g.base;
    const SupportFunction u = g.u;
    return [base, u, eps, b4](double t, double a, double b) {
        const Vector3d y = base(a, b);
        const double uy = u(y);
        const double scale2 = eps / (eps + t * t * b4 * uy * uy);
        require(scale2 > 0, "graph_family: point leaves the source locus");
        VectorXd x(4);
        x << y, t * uy;
        return VectorXd(std::sqrt(scale2) * x);
    };
}

namespace {

VectorXd stack_transition(const EmbeddingData& d, double t)
{
    const std::size_t n = d.size();
    VectorXd v(11 * n);
    for (std::size_t k = 0; k < n; ++k) {
        const Eigen::Index o = static_cast<Eigen::Index>(11 * k);
        v.segment<3>(o) << d.I[k](0, 0), d.I[k](0, 1), d.I[k](1, 1);
        v.segment<3>(o + 3) << d.II[k](0, 0) / t, d.II[k](0, 1) / t, d.II[k](1, 1) / t;
        v.segment<4>(o + 6) << d.B[k](0, 0) / t, d.B[k](0, 1) / t, d.B[k](1, 0) / t, d.B[k](1, 1) / t;
        v[o + 10] = d.B[k].determinant() / (t * t);
    }
    return v;
}

// Member of the family at parameter t.  The normal is oriented so that its
// x4-component is positive, i.e. towards the degenerate direction T = +e4 of
// the limit: the determinant rule gives this directly when b_44 > 0 and the
// opposite orientation when b_44 < 0 (dS, AdS in the plane-family ordering).
SurfacePatch patch_at(const SurfaceFamily& family, const SurfaceSpace& src, double t, double u0, double u1,
                      double v0, double v1)
{
    SurfacePatch p;
    p.normal_sign = src.form.matrix()(3, 3) > 0 ? 1 : -1;
    p.immersion = [family, t](double u, double v) { return family(t, u, v); };
    p.u0 = u0;
    p.u1 = u1;
    p.v0 = v0;
    p.v1 = v1;
    return p;
}

}  // namespace

SurfaceTransition surface_transition(const SurfaceFamily& family, const TransitionSetup& setup, double u0,
                                     double u1, double v0, double v1, int grid)
{
    const SurfaceSpace src = surface_space(setup);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const double u = u0 + (u1 - u0) * i / 2, v = v0 + (v1 - v0) * j / 2;
            const VectorXd x = family(0.0, u, v);
            require(std::abs(x[3]) < 1e-9 * std::max(1.0, x.norm()),
                    "surface_transition: sigma_0 does not lie in the plane {x4 = 0}" + at(u, v));
        }
    const std::vector<double> schedule = {0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125, 0.00390625};
    const auto lim = richardson_limit(
        [&](double t) { return stack_transition(embedding_data(patch_at(family, src, t, u0, u1, v0, v1), src, grid), t); },
        3, 1e-7, false, schedule);

    SurfaceTransition out;
    const SpaceKind co = setup.limit;
    EmbeddingData& d = out.limit;
    d = empty_grid(u0, u1, v0, v1, grid);
    const SurfaceSpace cs = surface_space(co);
    d.space = cs.name();
    d.curvature = cs.curvature();
    d.normal_norm = 0.0;
    d.normal_convention = "limit of " + src.name() + " data under the plane family, normal towards +e4";
    out.k_ext.resize(d.size());
    for (std::size_t k = 0; k < d.size(); ++k) {
        const Eigen::Index o = static_cast<Eigen::Index>(11 * k);
        const VectorXd& v = lim.value;
        d.I[k] << v[o], v[o + 1], v[o + 1], v[o + 2];
        d.II[k] << v[o + 3], v[o + 4], v[o + 4], v[o + 5];
        out.k_ext[k] = v[o + 10];
    }
    finish(d);
    out.error_estimate = lim.error_estimate;
    return out;
}

std::vector<double> surface_transition_rates(const SurfaceFamily& family, const TransitionSetup& setup,
                                             const EmbeddingData& limit, const std::vector<double>& ts)
{
    const SurfaceSpace src = surface_space(setup);
    const double u1 = limit.u0 + limit.hu * (limit.rows - 1), v1 = limit.v0 + limit.hv * (limit.cols - 1);
    std::vector<double> out;
    for (double t : ts) {
        require(t > 0, "surface_transition_rates: t must be positive");
        const EmbeddingData d = embedding_data(patch_at(family, src, t, limit.u0, u1, limit.v0, v1), src, limit.rows);
        double worst = 0.0;
        for (std::size_t k = 0; k < d.size(); ++k)
            worst = std::max(worst, (d.II[k] / t - limit.II[k]).cwiseAbs().maxCoeff());
        out.push_back(worst);
    }
    return out;
}

double max_abs_trace(const EmbeddingData& data)
{
    double worst = 0.0;
    for (const auto& b : data.B) worst = std::max(worst, std::abs(b.trace()));
    return worst;
}

double max_asymmetry(const EmbeddingData& data)
{
    double worst = 0.0;
    for (const auto& m : data.II) worst = std::max(worst, (m - m.transpose()).cwiseAbs().maxCoeff());
    return worst;
}

}  // namespace modelspace
