#include "modelspace/hull.hpp"

#include <algorithm>
#include <functional>
#include <cmath>
#include <map>
#include <numeric>

namespace modelspace {

namespace {

double point_scale(const MatrixXd& points)
{
    return std::max(1.0, points.cwiseAbs().maxCoeff());
}

void append_unique_facet(std::vector<Facet>& facets, const Facet& f, double tol)
{
    for (const Facet& g : facets)
        if ((g.normal - f.normal).norm() <= tol && std::abs(g.offset - f.offset) <= tol) return;
    facets.push_back(f);
}

// Andrew's monotone chain in the plane.
std::vector<Facet> hull_2d(const MatrixXd& points, double tol)
{
    const int n = static_cast<int>(points.cols());
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        if (points(0, a) != points(0, b)) return points(0, a) < points(0, b);
        return points(1, a) < points(1, b);
    });
    auto cross = [&](int o, int a, int b) {
        return (points(0, a) - points(0, o)) * (points(1, b) - points(1, o)) -
               (points(1, a) - points(1, o)) * (points(0, b) - points(0, o));
    };
    const double eps = tol * point_scale(points) * point_scale(points);
    std::vector<int> h(2 * n);
    int k = 0;
    for (int i = 0; i < n; ++i) {
        while (k >= 2 && cross(h[k - 2], h[k - 1], idx[i]) <= eps) --k;
        h[k++] = idx[i];
    }
    for (int i = n - 2, t = k + 1; i >= 0; --i) {
        while (k >= t && cross(h[k - 2], h[k - 1], idx[i]) <= eps) --k;
        h[k++] = idx[i];
    }
    h.resize(std::max(0, k - 1));
    require(h.size() >= 3, "convex hull: point set is not full-dimensional");
    std::vector<Facet> facets;
    for (std::size_t i = 0; i < h.size(); ++i) {
        const Vector2d a = points.col(h[i]);
        const Vector2d b = points.col(h[(i + 1) % h.size()]);
        Vector2d nrm(b.y() - a.y(), a.x() - b.x());
        nrm.normalize();
        append_unique_facet(facets, Facet{nrm, nrm.dot(a)}, 1e-12);
    }
    return facets;
}

struct Face {
    int a, b, c;
    Vector3d normal;
    double offset;
    bool alive = true;
};

Face make_face(const MatrixXd& p, int a, int b, int c)
{
    const Vector3d pa = p.col(a), pb = p.col(b), pc = p.col(c);
    Vector3d nrm = (pb - pa).cross(pc - pa);
    const double len = nrm.norm();
    nrm = len > 0 ? Vector3d(nrm / len) : Vector3d::Zero();
    return Face{a, b, c, nrm, nrm.dot(pa), true};
}

// Incremental hull in R^3 with a visibility tolerance.
std::vector<Facet> hull_3d(const MatrixXd& points, double tol)
{
    const int n = static_cast<int>(points.cols());
    const double eps = tol * point_scale(points);
    // Initial tetrahedron from extreme points.
    int i0 = 0;
    for (int i = 1; i < n; ++i)
        if (points(0, i) < points(0, i0)) i0 = i;
    int i1 = i0;
    double best = -1;
    for (int i = 0; i < n; ++i) {
        const double d = (points.col(i) - points.col(i0)).norm();
        if (d > best) { best = d; i1 = i; }
    }
    int i2 = i0;
    best = -1;
    const Vector3d dir = (points.col(i1) - points.col(i0)).normalized();
    for (int i = 0; i < n; ++i) {
        const Vector3d v = points.col(i) - points.col(i0);
        const double d = (v - v.dot(dir) * dir).norm();
        if (d > best) { best = d; i2 = i; }
    }
    Face base = make_face(points, i0, i1, i2);
    int i3 = i0;
    best = -1;
    for (int i = 0; i < n; ++i) {
        const double d = std::abs(base.normal.dot(points.col(i)) - base.offset);
        if (d > best) { best = d; i3 = i; }
    }
    require(best > eps && base.normal.norm() > 0, "convex hull: point set is not full-dimensional");
    const Vector3d centroid = (points.col(i0) + points.col(i1) + points.col(i2) + points.col(i3)) / 4.0;
    std::vector<Face> faces;
    auto add_face = [&](int a, int b, int c) {
        Face f = make_face(points, a, b, c);
        if (f.normal.dot(centroid) - f.offset > 0) f = make_face(points, a, c, b);
        faces.push_back(f);
    };
    add_face(i0, i1, i2);
    add_face(i0, i1, i3);
    add_face(i0, i2, i3);
    add_face(i1, i2, i3);

    for (int p = 0; p < n; ++p) {
        if (p == i0 || p == i1 || p == i2 || p == i3) continue;
        const Vector3d x = points.col(p);
        std::vector<int> visible;
        for (int f = 0; f < static_cast<int>(faces.size()); ++f)
            if (faces[f].alive && faces[f].normal.dot(x) - faces[f].offset > eps) visible.push_back(f);
        if (visible.empty()) continue;
        std::map<std::pair<int, int>, int> edge_count;
        for (int f : visible) {
            const Face& fc = faces[f];
            const int e[3][2] = {{fc.a, fc.b}, {fc.b, fc.c}, {fc.c, fc.a}};
            for (const auto& ed : e) edge_count[{ed[0], ed[1]}] += 1;
        }
        std::vector<std::pair<int, int>> horizon;
        for (const auto& [edge, cnt] : edge_count)
            if (edge_count.find({edge.second, edge.first}) == edge_count.end()) horizon.push_back(edge);
        for (int f : visible) faces[f].alive = false;
        for (const auto& [u, v] : horizon) {
            Face f = make_face(points, u, v, p);
            faces.push_back(f);
        }
    }
    std::vector<Facet> facets;
    for (const Face& f : faces)
        if (f.alive && f.normal.norm() > 0) facets.push_back(Facet{f.normal, f.offset});
    return facets;
}

}  // namespace

std::vector<Facet> convex_hull_facets_brute_force(const MatrixXd& points, double tol)
{
    const int d = static_cast<int>(points.rows());
    const int n = static_cast<int>(points.cols());
    require(n >= d + 1, "convex hull: not enough points");
    const double eps = tol * point_scale(points);
    std::vector<Facet> facets;
    std::vector<int> sel(d);
    std::function<void(int, int)> rec = [&](int start, int depth) {
        if (depth == d) {
            MatrixXd diff(d - 1, d);
            for (int k = 1; k < d; ++k) diff.row(k - 1) = (points.col(sel[k]) - points.col(sel[0])).transpose();
            Eigen::FullPivLU<MatrixXd> lu(diff);
            if (d > 1 && lu.rank() < d - 1) return;
            VectorXd nrm = d == 1 ? VectorXd::Ones(1) : VectorXd(lu.kernel().col(0));
            if (nrm.norm() == 0) return;
            nrm.normalize();
            double off = nrm.dot(points.col(sel[0]));
            bool pos = false, neg = false;
            for (int i = 0; i < n; ++i) {
                const double s = nrm.dot(points.col(i)) - off;
                if (s > eps) pos = true;
                if (s < -eps) neg = true;
            }
            if (pos && neg) return;
            if (!pos && !neg) return;  // degenerate (all coplanar)
            if (pos) {
                nrm = -nrm;
                off = -off;
            }
            append_unique_facet(facets, Facet{nrm, off}, 1e-9);
            return;
        }
        for (int i = start; i < n; ++i) {
            sel[depth] = i;
            rec(i + 1, depth + 1);
        }
    };
    rec(0, 0);
    require(!facets.empty(), "convex hull: point set is not full-dimensional");
    return facets;
}

std::vector<Facet> convex_hull_facets(const MatrixXd& points, double tol)
{
    const int d = static_cast<int>(points.rows());
    if (d == 2) return hull_2d(points, tol);
    if (d == 3) return hull_3d(points, tol);
    return convex_hull_facets_brute_force(points, tol);
}

MatrixXd unique_columns(const MatrixXd& points, double tol)
{
    std::vector<int> keep;
    for (int i = 0; i < points.cols(); ++i) {
        bool dup = false;
        for (int j : keep)
            if ((points.col(i) - points.col(j)).norm() <= tol) { dup = true; break; }
        if (!dup) keep.push_back(i);
    }
    MatrixXd out(points.rows(), static_cast<int>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k) out.col(static_cast<int>(k)) = points.col(keep[k]);
    return out;
}

MatrixXd halfspace_intersection_vertices(const MatrixXd& normals, const VectorXd& offsets, double tol)
{
    require(normals.cols() == offsets.size(), "halfspace intersection: size mismatch");
    require((offsets.array() > 0).all(), "halfspace intersection: origin must be interior (offsets > 0)");
    // Polarity: vertices of the intersection are n_f / c_f for the facets of conv(n_i / c_i).
    MatrixXd polar(normals.rows(), normals.cols());
    for (int i = 0; i < normals.cols(); ++i) polar.col(i) = normals.col(i) / offsets[i];
    const std::vector<Facet> facets = convex_hull_facets(polar, tol);
    MatrixXd verts(normals.rows(), static_cast<int>(facets.size()));
    for (std::size_t k = 0; k < facets.size(); ++k) {
        require(facets[k].offset > 0, "halfspace intersection: unbounded intersection");
        verts.col(static_cast<int>(k)) = facets[k].normal / facets[k].offset;
    }
    return unique_columns(verts, 1e-9 * std::max(1.0, verts.cwiseAbs().maxCoeff()));
}

MatrixXd hull_vertices(const MatrixXd& points, double tol)
{
    const std::vector<Facet> facets = convex_hull_facets(points, tol);
    const double eps = 1e-9 * point_scale(points);
    const int d = static_cast<int>(points.rows());
    std::vector<int> keep;
    for (int i = 0; i < points.cols(); ++i) {
        MatrixXd active(d, 0);
        for (const Facet& f : facets) {
            if (std::abs(f.normal.dot(points.col(i)) - f.offset) <= eps) {
                active.conservativeResize(d, active.cols() + 1);
                active.col(active.cols() - 1) = f.normal;
            }
        }
        if (active.cols() >= d && Eigen::FullPivLU<MatrixXd>(active).rank() == d) keep.push_back(i);
    }
    MatrixXd out(d, static_cast<int>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k) out.col(static_cast<int>(k)) = points.col(keep[k]);
    return unique_columns(out, eps);
}

MatrixXd cone_extreme_rays(const MatrixXd& normals, double tol)
{
    const int d = static_cast<int>(normals.rows());
    const int m = static_cast<int>(normals.cols());
    require(m >= d - 1, "cone_extreme_rays: not enough constraints for a pointed cone");
    std::vector<VectorXd> rays;
    std::vector<int> sel(d - 1);
    MatrixXd unit = normals;
    for (int i = 0; i < m; ++i) unit.col(i).normalize();
    auto try_ray = [&](const VectorXd& r) {
        for (int i = 0; i < m; ++i)
            if (unit.col(i).dot(r) > tol) return;
        for (const VectorXd& s : rays)
            if ((s - r).norm() <= 1e-8) return;
        rays.push_back(r);
    };
    std::function<void(int, int)> rec = [&](int start, int depth) {
        if (depth == d - 1) {
            MatrixXd a(d - 1, d);
            for (int k = 0; k < d - 1; ++k) a.row(k) = unit.col(sel[k]).transpose();
            Eigen::FullPivLU<MatrixXd> lu(a);
            lu.setThreshold(1e-10);
            if (lu.rank() != d - 1) return;
            VectorXd r = lu.kernel().col(0).normalized();
            try_ray(r);
            try_ray(-r);
            return;
        }
        for (int i = start; i < m; ++i) {
            sel[depth] = i;
            rec(i + 1, depth + 1);
        }
    };
    if (d == 1) {
        try_ray(VectorXd::Ones(1));
        try_ray(-VectorXd::Ones(1));
    } else {
        rec(0, 0);
    }
    MatrixXd out(d, static_cast<int>(rays.size()));
    for (std::size_t k = 0; k < rays.size(); ++k) out.col(static_cast<int>(k)) = rays[k];
    return out;
}

}  // namespace modelspace
