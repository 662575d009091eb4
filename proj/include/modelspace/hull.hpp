#pragma once
// Small convex-hull and halfspace-intersection helpers for dimensions 2 and 3
// (general dimensions by brute force).  Points are stored as matrix columns.

#include "modelspace/common.hpp"

#include <vector>

namespace modelspace {

// Supporting hyperplane {x : <normal, x> = offset} with unit outward normal;
// the hull lies in {<normal, x> <= offset}.
struct Facet {
    VectorXd normal;
    double offset = 0.0;
};

// Facets of conv(points).  Requires a full-dimensional point set.
std::vector<Facet> convex_hull_facets(const MatrixXd& points, double tol = 1e-10);

// Brute-force facet enumeration over d-subsets (exact for small point sets).
std::vector<Facet> convex_hull_facets_brute_force(const MatrixXd& points, double tol = 1e-10);

// Vertices of {x : <n_i, x> <= c_i} with all c_i > 0 (the origin is interior).
MatrixXd halfspace_intersection_vertices(const MatrixXd& normals, const VectorXd& offsets, double tol = 1e-10);

// Extreme points of conv(points).
MatrixXd hull_vertices(const MatrixXd& points, double tol = 1e-10);

// Removes duplicate columns (Euclidean distance below tol).
MatrixXd unique_columns(const MatrixXd& points, double tol);

// Extreme rays of the pointed polyhedral cone {x : <n_i, x> <= 0}, unit norm.
MatrixXd cone_extreme_rays(const MatrixXd& normals, double tol = 1e-10);

}  // namespace modelspace
