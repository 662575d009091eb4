#include "modelspace/duality.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <tuple>

namespace modelspace {

// ---------------------------------------------------------------- cones

MatrixXd cone_generators(const PolyCone& c, const Form& b)
{
    require(c.vectors.cols() > 0, "cone: empty input");
    require(c.vectors.rows() == b.dim(), "cone: dimension mismatch");
    if (c.representation == PolyCone::Representation::generators) {
        // Normalize and keep extreme rays: enumerate through the dual halfspace form twice.
        const MatrixXd dual_rays = cone_extreme_rays((b.matrix() * c.vectors).eval());
        require(dual_rays.cols() > 0, "cone: generators do not span a pointed dual");
        return cone_extreme_rays((b.matrix() * dual_rays).eval());
    }
    return cone_extreme_rays((b.matrix() * c.vectors).eval());
}

PolyCone dual_cone(const PolyCone& c, const Form& b)
{
    require(c.vectors.cols() > 0, "dual_cone: empty input");
    require(c.vectors.rows() == b.dim(), "dual_cone: dimension mismatch");
    if (c.representation == PolyCone::Representation::halfspaces) {
        // The dual of {x : b(n_i, x) <= 0} is the conic hull of the n_i.
        MatrixXd g = c.vectors;
        for (int i = 0; i < g.cols(); ++i) g.col(i).normalize();
        return {PolyCone::Representation::generators, g};
    }
    // Generators become halfspace normals; vertex enumeration turns them back into rays.
    const MatrixXd rays = cone_extreme_rays((b.matrix() * c.vectors).eval());
    require(rays.cols() > 0, "dual_cone: dual cone has no extreme rays (input not full-dimensional)");
    return {PolyCone::Representation::generators, rays};
}

bool same_rays(const MatrixXd& a, const MatrixXd& b, double tol)
{
    if (a.rows() != b.rows()) return false;
    auto covered = [&](const MatrixXd& x, const MatrixXd& y) {
        for (int i = 0; i < x.cols(); ++i) {
            const VectorXd u = x.col(i).normalized();
            bool found = false;
            for (int j = 0; j < y.cols() && !found; ++j) found = (u - y.col(j).normalized()).norm() <= tol;
            if (!found) return false;
        }
        return true;
    };
    return covered(a, b) && covered(b, a);
}

// ---------------------------------------------------------------- points and hyperplanes

Hyperplane dual_point(const Space& space, const Point& x)
{
    require(x.dim() == space.ambient_dim(), "dual_point: dimension mismatch");
    require(classify_vector(space.form, x.rep()) != VectorClass::lightlike,
            "dual_point: isotropic point has no dual hyperplane");
    return Hyperplane{space.form.matrix() * x.rep()};
}

Point dual_hyperplane(const Space& space, const Hyperplane& h)
{
    require(h.normal.size() == space.ambient_dim(), "dual_hyperplane: dimension mismatch");
    require(!space.degenerate(), "dual_hyperplane: degenerate form is not invertible");
    return Point(space.form.matrix().ldlt().solve(h.normal).eval());
}

bool on_hyperplane(const Space& space, const Hyperplane& h, const Point& y, double tol)
{
    (void)space;
    return std::abs(h.normal.normalized().dot(y.rep())) <= tol;
}

// ---------------------------------------------------------------- Euclidean bodies

EuclideanBody EuclideanBody::polytope(const MatrixXd& vertices)
{
    require(vertices.cols() > vertices.rows(), "polytope: needs at least dim + 1 vertices");
    EuclideanBody k;
    k.kind = Kind::polytope;
    k.dim = static_cast<int>(vertices.rows());
    k.vertices = vertices;
    return k;
}

EuclideanBody EuclideanBody::ball(int dim, double r)
{
    require(r > 0, "ball: radius must be positive");
    EuclideanBody k;
    k.kind = Kind::ball;
    k.dim = dim;
    k.radius = r;
    return k;
}

double support(const EuclideanBody& k, const VectorXd& v)
{
    require(v.size() == k.dim, "support: dimension mismatch");
    if (k.kind == EuclideanBody::Kind::ball) return k.radius * v.norm();
    return (k.vertices.transpose() * v).maxCoeff();
}

std::vector<Facet> admissible_facets(const EuclideanBody& k)
{
    require(k.kind == EuclideanBody::Kind::polytope, "admissible_facets: not a polytope");
    const std::vector<Facet> facets = convex_hull_facets(k.vertices);
    const double scale = std::max(1.0, k.vertices.cwiseAbs().maxCoeff());
    for (const Facet& f : facets)
        require(f.offset > 1e-9 * scale, "non-admissible body: the origin is not in the interior");
    return facets;
}

bool is_admissible(const EuclideanBody& k)
{
    if (k.kind == EuclideanBody::Kind::ball) return k.radius > 0;
    try {
        admissible_facets(k);
        return true;
    } catch (const DomainError&) {
        return false;
    }
}

SupportFunctionE support_from_body(const EuclideanBody& k, const MatrixXd& directions)
{
    require(directions.rows() == k.dim, "support_from_body: dimension mismatch");
    if (k.kind == EuclideanBody::Kind::polytope) admissible_facets(k);
    SupportFunctionE h{directions, VectorXd(directions.cols())};
    for (int i = 0; i < directions.cols(); ++i) h.values[i] = support(k, directions.col(i));
    return h;
}

SupportFunctionE support_from_body(const MatrixXd& points, const MatrixXd& directions)
{
    return support_from_body(EuclideanBody::polytope(points), directions);
}

EuclideanBody dual_body(const EuclideanBody& k)
{
    if (k.kind == EuclideanBody::Kind::ball) return EuclideanBody::ball(k.dim, 1.0 / k.radius);
    const std::vector<Facet> facets = admissible_facets(k);
    MatrixXd verts(k.dim, static_cast<int>(facets.size()));
    for (std::size_t i = 0; i < facets.size(); ++i)
        verts.col(static_cast<int>(i)) = facets[i].normal / facets[i].offset;
    return EuclideanBody::polytope(unique_columns(verts, 1e-9 * std::max(1.0, verts.cwiseAbs().maxCoeff())));
}

namespace {

MatrixXd envelope_vertices(const SupportFunctionE& h)
{
    require(h.directions.cols() == h.values.size() && h.values.size() > 0, "support samples: size mismatch");
    require((h.values.array() > 0).all(), "support samples must be positive (origin interior)");
    return halfspace_intersection_vertices(h.directions, h.values);
}

}  // namespace

bool is_convex(const SupportFunctionE& h, double rel_slack)
{
    const MatrixXd verts = envelope_vertices(h);
    const double slack = rel_slack * std::max(1.0, h.values.cwiseAbs().maxCoeff());
    for (int i = 0; i < h.values.size(); ++i) {
        const double s = (verts.transpose() * h.directions.col(i)).maxCoeff();
        if (h.values[i] > s + slack) return false;
    }
    return true;
}

EuclideanBody body_from_support(const SupportFunctionE& h)
{
    require(is_convex(h), "body_from_support: samples are not the support function of a convex body");
    return EuclideanBody::polytope(envelope_vertices(h));
}

double support_gap(const SupportFunctionE& a, const SupportFunctionE& b)
{
    require(a.values.size() == b.values.size(), "support_gap: grids differ");
    require((a.directions - b.directions).cwiseAbs().maxCoeff() < 1e-12, "support_gap: grids differ");
    return (a.values - b.values).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------- Minkowski bodies

Form minkowski_form(int dim) { return Form::standard(dim - 1, 1); }

namespace {

double mink(const VectorXd& x, const VectorXd& y)
{
    const int n = static_cast<int>(x.size());
    return x.head(n - 1).dot(y.head(n - 1)) - x[n - 1] * y[n - 1];
}

void require_future_timelike(const VectorXd& x, const std::string& what)
{
    require(in_future_cone(x), what + ": vector must be future time-like (inside the open future cone)");
}

// Support of the truncated body T = {y in closure(F) : b(q_j, y) <= -1}.
// T is the dual of G = conv(q_j) + closure(F), so H_T(w) = -1 / lambda*(w) with
// lambda*(w) = min{lambda : lambda w in G}.  Writing w = |w| u with u unit,
// lambda* |w| = min over p in conv(q_j) of g(p) = -b(p, u) + |p_perp|, where
// p_perp is the b-orthogonal part of p (space-like, Euclidean norm in an
// orthonormal frame of u^perp).  g is convex, so its minimum over the polytope
// is found exactly by a closed-form stationary point on each face simplex.
class TruncatedSupport {
public:
    explicit TruncatedSupport(const MatrixXd& q) : q_(q), n_(static_cast<int>(q.rows()))
    {
        const int m = static_cast<int>(q.cols());
        // Affine dimension of the normals.
        const VectorXd mean = q.rowwise().mean();
        const MatrixXd centered = q.colwise() - mean;
        Eigen::JacobiSVD<MatrixXd> svd(centered, Eigen::ComputeFullU);
        const double scale = std::max(1.0, q.cwiseAbs().maxCoeff());
        int k = 0;
        for (int i = 0; i < svd.singularValues().size(); ++i)
            if (svd.singularValues()[i] > 1e-10 * scale) ++k;
        if (k <= 2 && m > k + 1) {
            std::vector<int> all(m);
            for (int i = 0; i < m; ++i) all[i] = i;
            if (k == 0) {
                simplices_.push_back({0});
            } else if (k == 1) {
                const VectorXd dir = svd.matrixU().col(0);
                auto cmp = [&](int x, int y) { return dir.dot(q.col(x)) < dir.dot(q.col(y)); };
                const int lo = *std::min_element(all.begin(), all.end(), cmp);
                const int hi = *std::max_element(all.begin(), all.end(), cmp);
                simplices_ = {{std::min(lo, hi), std::max(lo, hi)}, {lo}, {hi}};
            } else {
                add_polygon(all, svd.matrixU().col(0), svd.matrixU().col(1));
                finish();
            }
            return;
        }
        if (n_ <= 3 && k == n_ && m > n_ + 2) {
            build_from_hull();
            return;
        }
        std::vector<int> sel;
        std::function<void(int)> rec = [&](int start) {
            if (!sel.empty()) simplices_.push_back(sel);
            if (static_cast<int>(sel.size()) == n_) return;
            for (int i = start; i < m; ++i) {
                sel.push_back(i);
                rec(i + 1);
                sel.pop_back();
            }
        };
        rec(0);
    }

    double operator()(const VectorXd& w) const
    {
        const double norm_w = std::sqrt(-mink(w, w));
        const VectorXd u = w / norm_w;
        // Orthonormal frame of u^perp: Gram-Schmidt for b on the basis vectors.
        MatrixXd frame(n_, n_ - 1);
        int filled = 0;
        for (int i = 0; i < n_ && filled < n_ - 1; ++i) {
            VectorXd e = VectorXd::Unit(n_, i);
            e += mink(e, u) * u;  // remove the u-component (b(u, u) = -1)
            for (int j = 0; j < filled; ++j) e -= mink(e, frame.col(j)) * frame.col(j);
            const double nn = mink(e, e);
            if (nn < 1e-8) continue;
            frame.col(filled++) = e / std::sqrt(nn);
        }
        VectorXd sgn = VectorXd::Ones(n_);
        sgn[n_ - 1] = -1.0;
        // Linear part l(p) = -b(p, u) and frame coordinates c(p) = [b(p, e_i)].
        const VectorXd lin = -(sgn.asDiagonal() * u);
        const MatrixXd coord = (sgn.asDiagonal() * frame).transpose();
        const VectorXd lq = q_.transpose() * lin;
        const MatrixXd cq = coord * q_;

        double best = 1e300;
        for (const auto& simplex : simplices_) best = std::min(best, simplex_min(simplex, lq, cq));
        require(best > 0.0 && best < 1e300, "support: truncation normals must be future time-like");
        return -norm_w / best;
    }

private:
    double simplex_min(const std::vector<int>& s, const VectorXd& lq, const MatrixXd& cq) const
    {
        const int k = static_cast<int>(s.size()) - 1;
        const int p0 = s[0];
        if (k == 0) return lq[p0] + cq.col(p0).norm();
        VectorXd alpha(k);
        MatrixXd a(cq.rows(), k);
        for (int i = 0; i < k; ++i) {
            alpha[i] = lq[s[i + 1]] - lq[p0];
            a.col(i) = cq.col(s[i + 1]) - cq.col(p0);
        }
        const VectorXd c = cq.col(p0);
        const MatrixXd ata = a.transpose() * a;
        Eigen::LDLT<MatrixXd> ldlt(ata);
        if (ldlt.info() != Eigen::Success || ldlt.rcond() < 1e-12) return 1e300;
        const VectorXd s0 = -ldlt.solve(a.transpose() * c);
        const VectorXd rperp = c + a * s0;
        const VectorXd ia = ldlt.solve(alpha);
        const double gamma = alpha.dot(ia);
        if (gamma >= 1.0) return 1e300;  // no interior minimum on this face
        const double rho = rperp.norm() / std::sqrt(1.0 - gamma);
        const VectorXd sol = s0 - ia * rho;
        const double tol = 1e-12;
        if ((sol.array() < -tol).any() || sol.sum() > 1.0 + tol) return 1e300;
        return lq[p0] + alpha.dot(sol) + (c + a * sol).norm();
    }

    void build_from_hull()
    {
        const std::vector<Facet> facets = convex_hull_facets(q_);
        const double scale = std::max(1.0, q_.cwiseAbs().maxCoeff());
        for (const Facet& f : facets) {
            std::vector<int> on;
            for (int i = 0; i < q_.cols(); ++i)
                if (std::abs(f.normal.dot(q_.col(i)) - f.offset) <= 1e-9 * scale) on.push_back(i);
            if (n_ == 2) {
                const VectorXd dir = Vector2d(-f.normal[1], f.normal[0]);
                auto cmp = [&](int x, int y) { return dir.dot(q_.col(x)) < dir.dot(q_.col(y)); };
                const int lo = *std::min_element(on.begin(), on.end(), cmp);
                const int hi = *std::max_element(on.begin(), on.end(), cmp);
                simplices_.push_back({std::min(lo, hi), std::max(lo, hi)});
                vertices_.push_back(lo);
                vertices_.push_back(hi);
                continue;
            }
            const Vector3d nrm = f.normal;
            const Vector3d e1 = nrm.unitOrthogonal();
            add_polygon(on, e1, nrm.cross(e1));
        }
        finish();
    }

    // Edges, fan triangles and vertices of the planar polygon conv(q_i, i in idx),
    // with the plane spanned by e1, e2.
    void add_polygon(const std::vector<int>& idx, const VectorXd& e1, const VectorXd& e2)
    {
        const int np = static_cast<int>(idx.size());
        MatrixXd pts2(2, np);
        for (int i = 0; i < np; ++i) pts2.col(i) << e1.dot(q_.col(idx[i])), e2.dot(q_.col(idx[i]));
        std::vector<int> poly;
        if (np >= 3) {
            // Extreme points by the 2-d hull; keep their indices.
            const MatrixXd ext = hull_vertices(pts2);
            for (int c = 0; c < ext.cols(); ++c) {
                int bestj = 0;
                double bestd = 1e300;
                for (int j = 0; j < np; ++j) {
                    const double d = (pts2.col(j) - ext.col(c)).squaredNorm();
                    if (d < bestd) bestd = d, bestj = j;
                }
                poly.push_back(bestj);
            }
            const Vector2d centroid = ext.rowwise().mean();
            std::sort(poly.begin(), poly.end(), [&](int a, int b) {
                const Vector2d da = pts2.col(a) - centroid, db = pts2.col(b) - centroid;
                return std::atan2(da.y(), da.x()) < std::atan2(db.y(), db.x());
            });
        } else {
            for (int j = 0; j < np; ++j) poly.push_back(j);
        }
        for (int& p : poly) p = idx[p];
        const std::size_t nv = poly.size();
        for (std::size_t i = 0; i < nv; ++i) {
            const int a = poly[i], b = poly[(i + 1) % nv];
            if (a != b) simplices_.push_back({std::min(a, b), std::max(a, b)});
            vertices_.push_back(a);
        }
        for (std::size_t i = 1; i + 1 < nv; ++i) simplices_.push_back({poly[0], poly[i], poly[i + 1]});
    }

    void finish()
    {
        std::sort(simplices_.begin(), simplices_.end());
        simplices_.erase(std::unique(simplices_.begin(), simplices_.end()), simplices_.end());
        std::sort(vertices_.begin(), vertices_.end());
        vertices_.erase(std::unique(vertices_.begin(), vertices_.end()), vertices_.end());
        for (int v : vertices_) simplices_.push_back({v});
    }

    MatrixXd q_;
    int n_;
    std::vector<std::vector<int>> simplices_;
    std::vector<int> vertices_;
};

double truncated_support(const MatrixXd& q, const VectorXd& w)
{
    return TruncatedSupport(q)(w);
}

}  // namespace

bool in_future_cone(const VectorXd& x, double tol)
{
    return x[x.size() - 1] > 0 && mink(x, x) < -tol * x.squaredNorm();
}

MinkowskiBody MinkowskiBody::generated(const MatrixXd& points)
{
    require(points.cols() >= 1 && points.rows() >= 2, "generated body: needs at least one point");
    for (int i = 0; i < points.cols(); ++i) require_future_timelike(points.col(i), "non-admissible body");
    MinkowskiBody k;
    k.kind = Kind::generated;
    k.dim = static_cast<int>(points.rows());
    k.vectors = points;
    return k;
}

MinkowskiBody MinkowskiBody::truncated(const MatrixXd& normals)
{
    require(normals.cols() >= 1 && normals.rows() >= 2, "truncated body: needs at least one normal");
    for (int i = 0; i < normals.cols(); ++i) require_future_timelike(normals.col(i), "non-admissible truncation");
    MinkowskiBody k;
    k.kind = Kind::truncated;
    k.dim = static_cast<int>(normals.rows());
    k.vectors = normals;
    return k;
}

MinkowskiBody MinkowskiBody::hyperboloid(int dim, double r)
{
    require(r > 0, "hyperboloid: radius must be positive");
    MinkowskiBody k;
    k.kind = Kind::hyperboloid;
    k.dim = dim;
    k.radius = r;
    return k;
}

double support(const MinkowskiBody& k, const VectorXd& w)
{
    require(w.size() == k.dim, "support: dimension mismatch");
    require_future_timelike(w, "support");
    switch (k.kind) {
    case MinkowskiBody::Kind::generated: {
        double best = -1e300;
        for (int i = 0; i < k.vectors.cols(); ++i) best = std::max(best, mink(k.vectors.col(i), w));
        return best;
    }
    case MinkowskiBody::Kind::hyperboloid: return -k.radius * std::sqrt(-mink(w, w));
    case MinkowskiBody::Kind::truncated: return truncated_support(k.vectors, w);
    }
    return 0;
}

SupportFunctionMin support_from_body(const MinkowskiBody& k, const MatrixXd& disc_points)
{
    require(disc_points.rows() == k.dim - 1, "support_from_body: disc dimension mismatch");
    SupportFunctionMin h{disc_points, VectorXd(disc_points.cols())};
    std::optional<TruncatedSupport> truncated;
    if (k.kind == MinkowskiBody::Kind::truncated) truncated.emplace(k.vectors);
    for (int i = 0; i < disc_points.cols(); ++i) {
        require(disc_points.col(i).norm() < 1.0, "support_from_body: disc samples must lie in the open unit ball");
        VectorXd w(k.dim);
        w << disc_points.col(i), 1.0;
        h.values[i] = truncated ? (*truncated)(w) : support(k, w);
    }
    return h;
}

SupportFunctionMin support_from_body_min(const MatrixXd& points, const MatrixXd& disc_points)
{
    return support_from_body(MinkowskiBody::generated(points), disc_points);
}

double support_on_hyperboloid(const SupportFunctionMin& h, int index)
{
    const double r2 = h.disc_points.col(index).squaredNorm();
    return h.values[index] / std::sqrt(1.0 - r2);
}

MinkowskiBody dual_body(const MinkowskiBody& k)
{
    switch (k.kind) {
    case MinkowskiBody::Kind::hyperboloid: return MinkowskiBody::hyperboloid(k.dim, 1.0 / k.radius);
    case MinkowskiBody::Kind::generated: return MinkowskiBody::truncated(k.vectors);
    case MinkowskiBody::Kind::truncated: {
        // Only normals whose plane touches the body contribute a point of the dual.
        std::vector<int> keep;
        const TruncatedSupport hk(k.vectors);
        for (int j = 0; j < k.vectors.cols(); ++j)
            if (hk(k.vectors.col(j)) >= -1.0 - 1e-9) keep.push_back(j);
        MatrixXd pts(k.dim, static_cast<int>(keep.size()));
        for (std::size_t i = 0; i < keep.size(); ++i) pts.col(static_cast<int>(i)) = k.vectors.col(keep[i]);
        return MinkowskiBody::generated(unique_columns(pts, 1e-12));
    }
    }
    return k;
}

bool is_convex(const SupportFunctionMin& h, double rel_slack)
{
    const int d = static_cast<int>(h.disc_points.rows());
    const int n = static_cast<int>(h.disc_points.cols());
    require(n == h.values.size(), "support samples: size mismatch");
    require((h.values.array() < 0).all(), "Minkowski support samples must be negative");
    if (n < 3) return true;
    // Lattice spacing: smallest nonzero coordinate difference.
    double spacing = 1e300;
    for (int i = 1; i < n; ++i)
        for (int a = 0; a < d; ++a) {
            const double diff = std::abs(h.disc_points(a, i) - h.disc_points(a, 0));
            if (diff > 1e-12) spacing = std::min(spacing, diff);
        }
    std::map<std::vector<long long>, int> index;
    auto key = [&](const VectorXd& x) {
        std::vector<long long> k(d);
        for (int a = 0; a < d; ++a) k[a] = std::llround((x[a] - h.disc_points(a, 0)) / spacing);
        return k;
    };
    for (int i = 0; i < n; ++i) index[key(h.disc_points.col(i))] = i;
    std::vector<VectorXd> steps;
    if (d == 1) {
        steps.push_back(VectorXd::Constant(1, spacing));
    } else {
        steps = {Vector2d(spacing, 0), Vector2d(0, spacing), Vector2d(spacing, spacing), Vector2d(spacing, -spacing)};
    }
    const double slack = rel_slack * std::max(1.0, h.values.cwiseAbs().maxCoeff());
    for (int i = 0; i < n; ++i) {
        for (const VectorXd& s : steps) {
            const auto lo = index.find(key(h.disc_points.col(i) - s));
            const auto hi = index.find(key(h.disc_points.col(i) + s));
            if (lo == index.end() || hi == index.end()) continue;
            if (h.values[lo->second] + h.values[hi->second] - 2 * h.values[i] < -slack) return false;
        }
    }
    return true;
}

MinkowskiBody body_from_support(const SupportFunctionMin& h)
{
    require(is_convex(h), "body_from_support: samples are not convex");
    const int d = static_cast<int>(h.disc_points.rows()) + 1;
    MatrixXd normals(d, h.values.size());
    for (int i = 0; i < h.values.size(); ++i) {
        VectorXd w(d);
        w << h.disc_points.col(i), 1.0;
        normals.col(i) = w / (-h.values[i]);
    }
    return MinkowskiBody::truncated(normals);
}

double support_gap(const SupportFunctionMin& a, const SupportFunctionMin& b)
{
    require(a.values.size() == b.values.size(), "support_gap: grids differ");
    return (a.values - b.values).cwiseAbs().maxCoeff();
}

VectorXd truncation_dual(const VectorXd& v, double r)
{
    require(r > 0, "truncation_dual: r must be positive");
    require_future_timelike(v, "truncation_dual");
    require(std::abs(mink(v, v) + 1.0) < 1e-9, "truncation_dual: v must be a unit time-like vector");
    // The truncation is {y in F : b(v / r, y) <= -1}; its dual is the cone over one point.
    const MinkowskiBody dual = dual_body(MinkowskiBody::truncated(v / r));
    require(dual.vectors.cols() == 1, "truncation_dual: unexpected dual structure");
    return dual.vectors.col(0);
}

// ---------------------------------------------------------------- cylinder model

MatrixXd cylinder_transform(const MatrixXd& points)
{
    const int d = static_cast<int>(points.rows());
    MatrixXd out(d, points.cols());
    for (int i = 0; i < points.cols(); ++i) {
        const double y = points(d - 1, i);
        require(std::abs(y) > 1e-14, "cylinder_transform: sample with y = 0");
        out.col(i).head(d - 1) = points.col(i).head(d - 1) / y;
        out(d - 1, i) = -1.0 / y;
    }
    return out;
}

MatrixXd cylinder_transform_inverse(const MatrixXd& points)
{
    const int d = static_cast<int>(points.rows());
    MatrixXd out(d, points.cols());
    for (int i = 0; i < points.cols(); ++i) {
        const double z = points(d - 1, i);
        require(std::abs(z) > 1e-14, "cylinder_transform_inverse: sample with z = 0");
        const double y = -1.0 / z;
        out.col(i).head(d - 1) = points.col(i).head(d - 1) * y;
        out(d - 1, i) = y;
    }
    return out;
}

bool is_convex_profile(const VectorXd& x, const VectorXd& y, double rel_slack)
{
    require(x.size() == y.size(), "is_convex_profile: size mismatch");
    const double slack = rel_slack * std::max(1.0, y.cwiseAbs().maxCoeff());
    for (int i = 1; i + 1 < x.size(); ++i) {
        const double s1 = (y[i] - y[i - 1]) / (x[i] - x[i - 1]);
        const double s2 = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
        if (s2 < s1 - slack / std::max(1e-12, x[i + 1] - x[i - 1])) return false;
    }
    return true;
}

}  // namespace modelspace
