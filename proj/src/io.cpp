#include "modelspace/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

namespace modelspace::io {

namespace {

std::string location(const std::string& text, std::size_t byte)
{
    // nlohmann reports the 1-based offset of the last character read.
    std::size_t line = 1, column = 0;
    const std::size_t end = std::min(byte, text.size());
    for (std::size_t k = 0; k < end; ++k) {
        if (text[k] == '\n') {
            ++line;
            column = 0;
        } else {
            ++column;
        }
    }
    return std::to_string(line) + ":" + std::to_string(std::max<std::size_t>(column, 1));
}

double number(const Json& j, const std::string& what)
{
    require(j.is_number(), what + ": expected a number");
    const double v = j.get<double>();
    require(std::isfinite(v), what + ": number is not finite");
    return v;
}

double number_or(const Json& obj, const char* key, double fallback, const std::string& what)
{
    return obj.contains(key) ? number(obj.at(key), what + "." + key) : fallback;
}

std::string string_field(const Json& obj, const char* key, const std::string& what)
{
    require(obj.contains(key), what + ": missing field \"" + key + "\"");
    require(obj.at(key).is_string(), what + "." + key + ": expected a string");
    return obj.at(key).get<std::string>();
}

void require_object(const Json& j, const std::string& what)
{
    require(j.is_object(), what + ": expected a JSON object");
}

// Rejects fields outside `allowed` so that typos do not pass silently.
void check_fields(const Json& obj, std::initializer_list<const char*> allowed, const std::string& what)
{
    for (const auto& item : obj.items()) {
        const bool known = std::any_of(allowed.begin(), allowed.end(),
                                       [&](const char* a) { return item.key() == a; });
        require(known, what + ": unknown field \"" + item.key() + "\"");
    }
}

// Standard frame of a curved space for polynomial graphs: base point x0,
// tangent directions e_a, e_b and the transverse direction n0.
struct Frame {
    Vector4d x0, ea, eb, n0;
};

Frame curved_frame(SpaceKind kind)
{
    const Vector4d e1 = Vector4d::Unit(0), e2 = Vector4d::Unit(1), e3 = Vector4d::Unit(2), e4 = Vector4d::Unit(3);
    switch (kind) {
    case SpaceKind::Ell:
    case SpaceKind::Hyp:
    case SpaceKind::AdS: return {e4, e1, e2, e3};
    case SpaceKind::dS: return {e1, e2, e3, e4};
    default: throw DomainError("polynomial-graph: no curved frame for " + to_string(kind));
    }
}

double polynomial(const MatrixXd& c, double u, double v)
{
    double s = 0.0, ui = 1.0;
    for (int i = 0; i < c.rows(); ++i, ui *= u) {
        double vj = 1.0;
        for (int j = 0; j < c.cols(); ++j, vj *= v) s += c(i, j) * ui * vj;
    }
    return s;
}

void read_domain(const Json& j, double& u0, double& u1, double& v0, double& v1, const std::string& what)
{
    if (!j.contains("domain")) return;
    const VectorXd d = vector_from_json(j.at("domain"), what + ".domain");
    require(d.size() == 4, what + ".domain: expected [u0, u1, v0, v1]");
    require(d[0] < d[1] && d[2] < d[3], what + ".domain: empty parameter rectangle");
    u0 = d[0];
    u1 = d[1];
    v0 = d[2];
    v1 = d[3];
}

void validate_entity(const Entity& e, const std::string& space_name)
{
    const std::string what = "entity \"" + e.tag + "\"";
    require_object(e.data, what);
    const Json& d = e.data;
    std::optional<Space> space;
    if (!space_name.empty()) space = parse_space(space_name);

    if (e.tag == "point") {
        check_fields(d, {"tag", "name", "coords"}, what);
        require(d.contains("coords"), what + ": missing field \"coords\"");
        const VectorXd x = vector_from_json(d.at("coords"), what + ".coords");
        require(x.norm() > 0, what + ": zero vector");
        if (space) {
            require(x.size() == space->ambient_dim(), what + ": dimension does not match " + space_name);
            require(space->contains(Point(x)), what + ": point is not in " + space_name);
        }
    } else if (e.tag == "line") {
        check_fields(d, {"tag", "name", "through"}, what);
        require(d.contains("through"), what + ": missing field \"through\"");
        const MatrixXd p = columns_from_json(d.at("through"), what + ".through");
        require(p.cols() == 2, what + ".through: expected two points");
        (void)line_through(Point(VectorXd(p.col(0))), Point(VectorXd(p.col(1))));
        if (space) require(p.rows() == space->ambient_dim(), what + ": dimension does not match " + space_name);
    } else if (e.tag == "cone") {
        check_fields(d, {"tag", "name", "generators", "halfspaces"}, what);
        const bool gen = d.contains("generators"), half = d.contains("halfspaces");
        require(gen != half, what + ": expected exactly one of \"generators\" and \"halfspaces\"");
        const MatrixXd v = columns_from_json(d.at(gen ? "generators" : "halfspaces"), what);
        require(v.cols() >= 1, what + ": no vectors");
        if (space) require(v.rows() == space->ambient_dim(), what + ": dimension does not match " + space_name);
    } else if (e.tag == "body") {
        if (parse_flavor(string_field(d, "flavor", what)) == Flavor::euclidean) (void)euclidean_body_from_json(d);
        else (void)minkowski_body_from_json(d);
    } else if (e.tag == "support") {
        check_fields(d, {"tag", "name", "flavor", "directions", "values"}, what);
        const Flavor f = parse_flavor(string_field(d, "flavor", what));
        require(d.contains("directions") && d.contains("values"), what + ": needs \"directions\" and \"values\"");
        const MatrixXd dirs = columns_from_json(d.at("directions"), what + ".directions");
        const VectorXd vals = vector_from_json(d.at("values"), what + ".values");
        require(dirs.cols() == vals.size(), what + ": directions and values differ in count");
        if (f == Flavor::minkowski) {
            require((vals.array() < 0).all(), what + ": Minkowski support values must be negative");
            require((dirs.colwise().norm().array() < 1).all(), what + ": disc points must lie in the open unit ball");
        } else {
            require((dirs.colwise().norm().array() > 0).all(), what + ": zero direction");
        }
    } else if (e.tag == "patch") {
        if (is_graph_patch(d)) {
            const SpaceKind kind = space ? space->kind : SpaceKind::coEuc;
            (void)graph_from_json(d, kind);
        } else {
            require(space.has_value(), what + ": a non-graph patch needs the scene space");
            (void)patch_from_json(d, surface_space(space_name));
        }
    } else if (e.tag == "field") {
        const AffineField f = field_from_json(d);
        if (space) require(f.constant.size() == space->ambient_dim(), what + ": dimension does not match " + space_name);
    } else if (e.tag == "path") {
        check_fields(d, {"tag", "name", "generator"}, what);
        require(d.contains("generator"), what + ": missing field \"generator\"");
        const MatrixXd a = matrix_from_json(d.at("generator"), what + ".generator");
        require(a.rows() == a.cols(), what + ".generator: expected a square matrix");
        if (space) require(a.rows() == space->ambient_dim(), what + ": dimension does not match " + space_name);
    }
}

}  // namespace

// ---------------------------------------------------------------- JSON basics

Json parse_json(const std::string& text, const std::string& source)
{
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        std::string msg = e.what();
        // Drop the library prefix "[json.exception.parse_error.101] parse error at line 1, column 2: ".
        const std::size_t colon = msg.find(": ");
        if (colon != std::string::npos) msg = msg.substr(colon + 2);
        throw DomainError(source + ":" + location(text, e.byte) + ": malformed JSON: " + msg);
    }
}

Json read_json_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    require(in.good(), path + ": cannot open file");
    std::ostringstream s;
    s << in.rdbuf();
    return parse_json(s.str(), path);
}

VectorXd vector_from_json(const Json& j, const std::string& what)
{
    require(j.is_array(), what + ": expected an array of numbers");
    VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t k = 0; k < j.size(); ++k)
        v[static_cast<Eigen::Index>(k)] = number(j[k], what + "[" + std::to_string(k) + "]");
    return v;
}

MatrixXd matrix_from_json(const Json& j, const std::string& what)
{
    require(j.is_array() && !j.empty(), what + ": expected a non-empty array of rows");
    const VectorXd first = vector_from_json(j[0], what + "[0]");
    require(first.size() > 0, what + ": empty row");
    MatrixXd m(static_cast<Eigen::Index>(j.size()), first.size());
    for (std::size_t k = 0; k < j.size(); ++k) {
        const VectorXd row = vector_from_json(j[k], what + "[" + std::to_string(k) + "]");
        require(row.size() == first.size(), what + ": rows differ in length");
        m.row(static_cast<Eigen::Index>(k)) = row.transpose();
    }
    return m;
}

MatrixXd columns_from_json(const Json& j, const std::string& what)
{
    return matrix_from_json(j, what).transpose();
}

VectorXd parse_vector(const std::string& text, const std::string& what)
{
    return vector_from_json(parse_json(text, what), what);
}

// ---------------------------------------------------------------- scenes

std::vector<const Entity*> Scene::of(const std::string& tag) const
{
    std::vector<const Entity*> out;
    for (const Entity& e : entities)
        if (e.tag == tag) out.push_back(&e);
    return out;
}

const std::vector<std::string>& entity_tags()
{
    static const std::vector<std::string> tags{"point", "line", "cone", "body", "support", "patch", "field", "path"};
    return tags;
}

Scene scene_from_json(const Json& doc, const std::string& implicit_tag)
{
    require_object(doc, "scene");
    Scene scene;
    if (!doc.contains("entities")) {
        require(!implicit_tag.empty(), "scene: missing field \"entities\"");
        Json data = doc;
        if (data.contains("tag")) {
            require(data.at("tag").is_string(), "scene: \"tag\" must be a string");
            require(data.at("tag").get<std::string>() == implicit_tag,
                    "scene: expected a \"" + implicit_tag + "\" entity");
        }
        if (data.contains("space")) {
            scene.space = string_field(data, "space", "scene");
            data.erase("space");
        }
        scene.entities.push_back({implicit_tag, data});
    } else {
        check_fields(doc, {"space", "entities", "metadata"}, "scene");
        if (doc.contains("space")) scene.space = string_field(doc, "space", "scene");
        if (doc.contains("metadata")) scene.metadata = doc.at("metadata");
        const Json& list = doc.at("entities");
        require(list.is_array(), "scene.entities: expected an array");
        for (std::size_t k = 0; k < list.size(); ++k) {
            const std::string what = "scene.entities[" + std::to_string(k) + "]";
            require_object(list[k], what);
            const std::string tag = string_field(list[k], "tag", what);
            const auto& tags = entity_tags();
            require(std::find(tags.begin(), tags.end(), tag) != tags.end(), what + ": unknown tag \"" + tag + "\"");
            scene.entities.push_back({tag, list[k]});
        }
    }
    if (!scene.space.empty()) (void)parse_space(scene.space);
    for (const Entity& e : scene.entities) validate_entity(e, scene.space);
    return scene;
}

Scene read_scene(const std::string& path, const std::string& implicit_tag)
{
    const Json doc = read_json_file(path);
    try {
        return scene_from_json(doc, implicit_tag);
    } catch (const DomainError& e) {
        throw DomainError(path + ": " + e.what());
    }
}

const Entity& single_entity(const Scene& scene, const std::string& tag)
{
    const auto found = scene.of(tag);
    require(found.size() == 1, "scene: expected exactly one \"" + tag + "\" entity, found " +
                                   std::to_string(found.size()));
    return *found.front();
}

// ---------------------------------------------------------------- bodies

Flavor parse_flavor(const std::string& name)
{
    if (name == "euclidean") return Flavor::euclidean;
    if (name == "minkowski") return Flavor::minkowski;
    throw DomainError("unknown flavor \"" + name + "\" (expected euclidean or minkowski)");
}

std::string to_string(Flavor f) { return f == Flavor::euclidean ? "euclidean" : "minkowski"; }

EuclideanBody euclidean_body_from_json(const Json& j)
{
    const std::string what = "body";
    require_object(j, what);
    check_fields(j, {"tag", "name", "flavor", "kind", "dim", "radius", "vertices"}, what);
    const std::string kind = string_field(j, "kind", what);
    if (kind == "ball") {
        const double dim = number_or(j, "dim", 3, what);
        require(dim >= 2 && dim == std::floor(dim), what + ".dim: expected an integer >= 2");
        require(j.contains("radius"), what + ": ball needs \"radius\"");
        return EuclideanBody::ball(static_cast<int>(dim), number(j.at("radius"), what + ".radius"));
    }
    if (kind == "polytope") {
        require(j.contains("vertices"), what + ": polytope needs \"vertices\"");
        const EuclideanBody k = EuclideanBody::polytope(columns_from_json(j.at("vertices"), what + ".vertices"));
        require(is_admissible(k), what + ": polytope does not contain the origin in its interior");
        return k;
    }
    throw DomainError(what + ": unknown euclidean kind \"" + kind + "\" (expected ball or polytope)");
}

MinkowskiBody minkowski_body_from_json(const Json& j)
{
    const std::string what = "body";
    require_object(j, what);
    check_fields(j, {"tag", "name", "flavor", "kind", "dim", "radius", "points", "normals"}, what);
    const std::string kind = string_field(j, "kind", what);
    if (kind == "hyperboloid") {
        const double dim = number_or(j, "dim", 3, what);
        require(dim >= 2 && dim == std::floor(dim), what + ".dim: expected an integer >= 2");
        require(j.contains("radius"), what + ": hyperboloid needs \"radius\"");
        return MinkowskiBody::hyperboloid(static_cast<int>(dim), number(j.at("radius"), what + ".radius"));
    }
    if (kind == "generated") {
        require(j.contains("points"), what + ": generated body needs \"points\"");
        return MinkowskiBody::generated(columns_from_json(j.at("points"), what + ".points"));
    }
    if (kind == "truncated") {
        require(j.contains("normals"), what + ": truncated body needs \"normals\"");
        return MinkowskiBody::truncated(columns_from_json(j.at("normals"), what + ".normals"));
    }
    throw DomainError(what + ": unknown minkowski kind \"" + kind + "\" (expected hyperboloid, generated or truncated)");
}

namespace {

Json columns_to_json(const MatrixXd& m)
{
    Json out = Json::array();
    for (int c = 0; c < m.cols(); ++c) {
        Json col = Json::array();
        for (int r = 0; r < m.rows(); ++r) col.push_back(m(r, c));
        out.push_back(col);
    }
    return out;
}

}  // namespace

Json to_json(const EuclideanBody& k)
{
    Json j;
    j["flavor"] = "euclidean";
    j["dim"] = k.dim;
    if (k.kind == EuclideanBody::Kind::ball) {
        j["kind"] = "ball";
        j["radius"] = k.radius;
    } else {
        j["kind"] = "polytope";
        j["vertices"] = columns_to_json(k.vertices);
    }
    return j;
}

Json to_json(const MinkowskiBody& k)
{
    Json j;
    j["flavor"] = "minkowski";
    j["dim"] = k.dim;
    switch (k.kind) {
    case MinkowskiBody::Kind::hyperboloid:
        j["kind"] = "hyperboloid";
        j["radius"] = k.radius;
        break;
    case MinkowskiBody::Kind::generated:
        j["kind"] = "generated";
        j["points"] = columns_to_json(k.vectors);
        break;
    case MinkowskiBody::Kind::truncated:
        j["kind"] = "truncated";
        j["normals"] = columns_to_json(k.vectors);
        break;
    }
    return j;
}

std::string describe(const EuclideanBody& k)
{
    if (k.kind == EuclideanBody::Kind::ball)
        return "ball of radius " + format_number(k.radius) + " in E^" + std::to_string(k.dim);
    return "polytope with " + std::to_string(k.vertices.cols()) + " vertices in E^" + std::to_string(k.dim);
}

std::string describe(const MinkowskiBody& k)
{
    switch (k.kind) {
    case MinkowskiBody::Kind::hyperboloid:
        return "future hyperboloid of radius " + format_number(k.radius) + " in Min^" + std::to_string(k.dim);
    case MinkowskiBody::Kind::generated:
        return "future convex set generated by " + std::to_string(k.vectors.cols()) + " points in Min^" +
               std::to_string(k.dim);
    default:
        return "truncation by " + std::to_string(k.vectors.cols()) + " space-like planes in Min^" +
               std::to_string(k.dim);
    }
}

// ---------------------------------------------------------------- patches

bool is_graph_patch(const Json& j)
{
    return j.is_object() && j.contains("type") && j.at("type").is_string() &&
           j.at("type").get<std::string>() == "support-graph";
}

SurfacePatch patch_from_json(const Json& j, const SurfaceSpace& space)
{
    const std::string what = "patch";
    require_object(j, what);
    check_fields(j, {"tag", "name", "type", "domain", "normal_sign", "radius", "coefficients"}, what);
    const std::string type = string_field(j, "type", what);
    SurfacePatch p;
    read_domain(j, p.u0, p.u1, p.v0, p.v1, what);
    if (j.contains("normal_sign")) {
        const double s = number(j.at("normal_sign"), what + ".normal_sign");
        require(s == 1 || s == -1, what + ".normal_sign: expected +1 or -1");
        p.normal_sign = static_cast<int>(s);
    }
    if (type == "sphere" || type == "hyperboloid") {
        const bool sphere = type == "sphere";
        require(space.kind == (sphere ? SpaceKind::Euc : SpaceKind::Min),
                what + ": a " + type + " patch lives in " + (sphere ? "Euc3" : "Min3"));
        const double r = number_or(j, "radius", 1.0, what);
        require(r > 0, what + ".radius: must be positive");
        const BaseMap chart = sphere ? sphere_chart() : hyperbolic_chart();
        p.immersion = [chart, r](double a, double b) { return VectorXd(r * chart(a, b)); };
        return p;
    }
    if (type == "polynomial-graph") {
        require(j.contains("coefficients"), what + ": polynomial-graph needs \"coefficients\"");
        const MatrixXd c = matrix_from_json(j.at("coefficients"), what + ".coefficients");
        require(!space.co(), what + ": co-space patches are support graphs");
        if (space.flat()) {
            p.immersion = [c](double u, double v) { return VectorXd(Vector3d(u, v, polynomial(c, u, v))); };
        } else {
            const Frame f = curved_frame(space.kind);
            const Form form = space.form;
            const double sign = space.sign;
            p.immersion = [c, f, form, sign](double u, double v) {
                const Vector4d y = f.x0 + u * f.ea + v * f.eb + polynomial(c, u, v) * f.n0;
                const double q = sign * form(y, y);
                if (!(q > 0))
                    throw DomainError("polynomial-graph: point leaves the model space at (" + format_number(u) +
                                      ", " + format_number(v) + ")");
                return VectorXd(y / std::sqrt(q));
            };
        }
        // Evaluate once at the corners and the centre so that the graph is
        // validated on load.
        for (double u : {p.u0, 0.5 * (p.u0 + p.u1), p.u1})
            for (double v : {p.v0, 0.5 * (p.v0 + p.v1), p.v1}) (void)p.immersion(u, v);
        return p;
    }
    if (type == "support-graph") throw DomainError(what + ": support-graph patches live in the co-spaces");
    throw DomainError(what + ": unknown type \"" + type +
                      "\" (expected sphere, hyperboloid, polynomial-graph or support-graph)");
}

GraphPatch graph_from_json(const Json& j, SpaceKind kind)
{
    const std::string what = "patch";
    require_object(j, what);
    check_fields(j, {"tag", "name", "type", "domain", "constant", "linear", "quadratic"}, what);
    require(is_graph_patch(j), what + ": expected type \"support-graph\"");
    bool spherical = true;
    switch (kind) {
    case SpaceKind::coEuc:
    case SpaceKind::Ell:
    case SpaceKind::dS: spherical = true; break;
    case SpaceKind::coMin:
    case SpaceKind::Hyp:
    case SpaceKind::AdS: spherical = false; break;
    default: throw DomainError(what + ": support graphs need a co-space or a transition source, not " + to_string(kind));
    }
    const double c0 = number_or(j, "constant", 0.0, what);
    Vector3d lin = Vector3d::Zero();
    Matrix3d quad = Matrix3d::Zero();
    if (j.contains("linear")) {
        const VectorXd l = vector_from_json(j.at("linear"), what + ".linear");
        require(l.size() == 3, what + ".linear: expected 3 entries");
        lin = l;
    }
    if (j.contains("quadratic")) {
        const MatrixXd q = matrix_from_json(j.at("quadratic"), what + ".quadratic");
        require(q.rows() == 3 && q.cols() == 3, what + ".quadratic: expected a 3 x 3 matrix");
        require((q - q.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, q.cwiseAbs().maxCoeff()),
                what + ".quadratic: matrix is not symmetric");
        quad = q;
    }
    GraphPatch g;
    g.base = spherical ? sphere_chart() : hyperbolic_chart();
    g.u = [c0, lin, quad](const Vector3d& y) { return c0 + lin.dot(y) + 0.5 * y.dot(quad * y); };
    read_domain(j, g.u0, g.u1, g.v0, g.v1, what);
    return g;
}

AffineField field_from_json(const Json& j)
{
    const std::string what = "field";
    require_object(j, what);
    check_fields(j, {"tag", "name", "constant", "linear"}, what);
    require(j.contains("constant") || j.contains("linear"), what + ": needs \"constant\" and/or \"linear\"");
    AffineField f;
    if (j.contains("constant")) f.constant = vector_from_json(j.at("constant"), what + ".constant");
    if (j.contains("linear")) f.linear = matrix_from_json(j.at("linear"), what + ".linear");
    const Eigen::Index n = j.contains("constant") ? f.constant.size() : f.linear.rows();
    require(n > 0, what + ": empty field");
    if (!j.contains("constant")) f.constant = VectorXd::Zero(n);
    if (!j.contains("linear")) f.linear = MatrixXd::Zero(n, n);
    require(f.linear.rows() == n && f.linear.cols() == n, what + ".linear: expected a square matrix matching the constant");
    return f;
}

// ---------------------------------------------------------------- formatting

std::string format_number(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";
    char buf[40];
    for (int p = 1; p <= 17; ++p) {
        std::snprintf(buf, sizeof buf, "%.*g", p, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

std::string format_short(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string format_residual(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

std::string CsvTable::str() const
{
    std::ostringstream s;
    for (std::size_t k = 0; k < header.size(); ++k) s << (k ? "," : "") << header[k];
    s << "\n";
    for (const auto& row : rows) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (k) s << ",";
            if (!std::isnan(row[k])) s << format_number(row[k]);
        }
        s << "\n";
    }
    return s.str();
}

}  // namespace modelspace::io
