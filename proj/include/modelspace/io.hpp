#pragma once
// Scene and JSON input/output: one JSON scene format shared by every command,
// parsing of vectors, matrices, bodies and surface patches, and deterministic
// number / CSV formatting for the command-line front end.
//
// Scene format:
//   { "space": "Hyp3",                      (optional)
//     "entities": [ { "tag": "point", ... }, ... ],
//     "metadata": { ... } }                   (optional, free form)
//
// Entity tags and their fields:
//   point      coords: [x0, ..., xn]                  (inside "space" when given)
//   line       through: [[...], [...]]                (two distinct points)
//   cone       generators | halfspaces: [[...], ...]  (vectors of equal size)
//   body       flavor: euclidean | minkowski, kind: ball | polytope |
//              hyperboloid | generated | truncated, dim, radius,
//              vertices | points | normals: [[...], ...]
//   support    flavor, directions: [[...], ...], values: [...]
//   patch      type: sphere | hyperboloid | polynomial-graph | support-graph,
//              domain: [u0, u1, v0, v1], normal_sign: +-1, plus
//              radius (sphere, hyperboloid), coefficients: [[c_ij]] with
//              p(u, v) = sum c_ij u^i v^j (polynomial-graph), constant, linear,
//              quadratic with u(y) = c + l.y + y^T Q y / 2 (support-graph)
//   field      constant: [...], linear: [[...], ...]  (X(x) = c + M x)
//   path       generator: [[...], ...]                (h(t) = exp(t A))
// Unknown tags, unknown spaces and entities violating their invariants are
// rejected with DomainError.

#include "modelspace/duality.hpp"
#include "modelspace/surfaces.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace modelspace::io {

using Json = nlohmann::ordered_json;

// Parses JSON text.  Errors: DomainError "<source>:<line>:<column>: ..." for
// malformed input.
Json parse_json(const std::string& text, const std::string& source = "<input>");
// Reads and parses a file.  Errors: DomainError when unreadable or malformed.
Json read_json_file(const std::string& path);

// Numeric arrays.  `what` names the value in error messages.
VectorXd vector_from_json(const Json& j, const std::string& what);
// Array of rows -> matrix.
MatrixXd matrix_from_json(const Json& j, const std::string& what);
// Array of points -> matrix whose columns are the points.
MatrixXd columns_from_json(const Json& j, const std::string& what);
// "[1, 0, 0]" -> vector.
VectorXd parse_vector(const std::string& text, const std::string& what);

struct Entity {
    std::string tag;
    Json data;
};

struct Scene {
    std::string space;  // empty when the scene does not name a space
    std::vector<Entity> entities;
    Json metadata;
    std::vector<const Entity*> of(const std::string& tag) const;
};

// The accepted entity tags.
const std::vector<std::string>& entity_tags();
// Validates and converts a parsed document.  A document without "entities"
// is read as a single entity whose tag is given by `implicit_tag` (so a bare
// body or patch object is accepted where one is expected).
Scene scene_from_json(const Json& doc, const std::string& implicit_tag = "");
Scene read_scene(const std::string& path, const std::string& implicit_tag = "");
// The unique entity with the given tag.  Errors: none or several present.
const Entity& single_entity(const Scene& scene, const std::string& tag);

enum class Flavor { euclidean, minkowski };
Flavor parse_flavor(const std::string& name);
std::string to_string(Flavor f);

EuclideanBody euclidean_body_from_json(const Json& j);
MinkowskiBody minkowski_body_from_json(const Json& j);
Json to_json(const EuclideanBody& k);
Json to_json(const MinkowskiBody& k);
std::string describe(const EuclideanBody& k);
std::string describe(const MinkowskiBody& k);

// Patch of a nondegenerate 3-dimensional space (sphere: Euc3, hyperboloid:
// Min3, polynomial-graph: any of the six).
SurfacePatch patch_from_json(const Json& j, const SurfaceSpace& space);
// Support-graph patch over the standard base chart: S^2 for coEuc3 and for the
// sources Ell3 / dS3, H^2 for coMin3 and for Hyp3 / AdS3.
GraphPatch graph_from_json(const Json& j, SpaceKind kind);
bool is_graph_patch(const Json& j);

// Ambient field X(x) = c + M x of a "field" entity.
struct AffineField {
    VectorXd constant;
    MatrixXd linear;
    VectorXd operator()(const VectorXd& x) const { return constant + linear * x; }
};
AffineField field_from_json(const Json& j);

// Deterministic number formatting: shortest round-trip ("%.17g" trimmed to
// the shortest representation that parses back exactly).
std::string format_number(double v);
// 12 significant digits, for human-readable summaries.
std::string format_short(double v);
// Fixed scientific format with 3 decimals, for residuals.
std::string format_residual(double v);

// Simple CSV table with a header row; numbers use format_number, NaN cells are
// written empty.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    std::string str() const;
};

}  // namespace modelspace::io
