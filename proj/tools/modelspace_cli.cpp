// modelspace: command-line front end of the model-space kernel.
//
// Exit codes: 0 success, 2 validation error (bad arguments, malformed or
// invalid JSON), 3 numeric-tolerance failure (with a worst-offender report),
// 1 unexpected internal error.

#include "modelspace/acceptance.hpp"
#include "modelspace/connections.hpp"
#include "modelspace/duality.hpp"
#include "modelspace/io.hpp"
#include "modelspace/pogorelov.hpp"
#include "modelspace/surfaces.hpp"
#include "modelspace/transition.hpp"

#include <CLI11.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace modelspace;
using io::Json;

namespace {

constexpr int kDefaultGrid = 64;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// ---------------------------------------------------------------- options and reports

struct Options {
    std::string space;
    std::string flavor = "euclidean";
    std::string family = "point";
    std::string x, y;
    std::string body, patch, scene;
    std::string emit = "text";
    std::optional<double> tol;
    std::uint64_t seed = 0;
    std::optional<int> grid;
    int samples = 20;
    std::vector<int> only;
    bool details = false;
    bool timing = false;
};

// Output of a command: text lines, a JSON summary and an optional per-point
// table.  `breach` is set when a numeric tolerance was exceeded.
struct Report {
    std::vector<std::string> lines;
    Json summary = Json::object();
    std::optional<io::CsvTable> table;
    std::optional<std::string> breach;

    void line(const std::string& s) { lines.push_back(s); }
    void fail(const std::string& what)
    {
        if (!breach) breach = what;
    }
};

int grid_size(const Options& o)
{
    if (o.grid) {
        require(*o.grid >= 8 && *o.grid <= 1024, "--grid must lie in [8, 1024]");
        return *o.grid;
    }
    if (const char* env = std::getenv("MODELSPACE_GRID")) {
        char* end = nullptr;
        const long g = std::strtol(env, &end, 10);
        require(end != env && *end == '\0' && g >= 8 && g <= 1024,
                std::string("MODELSPACE_GRID must be an integer in [8, 1024], got \"") + env + "\"");
        return static_cast<int>(g);
    }
    return kDefaultGrid;
}

double tolerance(const Options& o, double fallback)
{
    const double t = o.tol.value_or(fallback);
    require(t > 0 && std::isfinite(t), "--tol must be positive");
    return t;
}

std::string num(double v) { return io::format_number(v); }
std::string res(double v) { return io::format_residual(v); }
std::string sh(double v) { return io::format_short(v); }

void check_limit(Report& r, const std::string& name, double value, double limit, const std::string& where = "")
{
    r.summary["checks"][name] = Json{{"value", value}, {"limit", limit}, {"ok", value < limit}};
    if (!(value < limit))
        r.fail(name + " = " + res(value) + " exceeds tolerance " + res(limit) + (where.empty() ? "" : " " + where));
}

std::string emit(const Report& r, const std::string& mode)
{
    std::ostringstream s;
    if (mode == "text") {
        for (const auto& l : r.lines) s << l << "\n";
    } else if (mode == "json") {
        Json out = r.summary;
        if (r.table) {
            Json rows = Json::array();
            for (const auto& row : r.table->rows) {
                Json obj = Json::object();
                for (std::size_t k = 0; k < row.size(); ++k)
                    obj[r.table->header[k]] = std::isnan(row[k]) ? Json(nullptr) : Json(row[k]);
                rows.push_back(obj);
            }
            out["points"] = rows;
        }
        s << out.dump(2) << "\n";
    } else {
        if (r.table) {
            s << r.table->str();
        } else {
            s << "key,value\n";
            for (const auto& item : r.summary.items())
                if (item.value().is_primitive())
                    s << item.key() << "," << (item.value().is_string() ? item.value().get<std::string>()
                                                                        : item.value().dump())
                      << "\n";
        }
    }
    return s.str();
}

VectorXd vector_option(const std::string& text, const char* flag)
{
    require(!text.empty(), std::string("missing ") + flag);
    return io::parse_vector(text, flag);
}

Space space_option(const Options& o)
{
    require(!o.space.empty(), "missing --space");
    return parse_space(o.space);
}

// Points from --x / --y, or the first two point entities of --scene.
std::pair<VectorXd, VectorXd> point_pair(const Options& o)
{
    if (!o.scene.empty()) {
        const io::Scene scene = io::read_scene(o.scene);
        const auto pts = scene.of("point");
        require(pts.size() >= 2, o.scene + ": expected two point entities");
        return {io::vector_from_json(pts[0]->data.at("coords"), "point"),
                io::vector_from_json(pts[1]->data.at("coords"), "point")};
    }
    return {vector_option(o.x, "--x"), vector_option(o.y, "--y")};
}

// ---------------------------------------------------------------- distance / classify-line

Report cmd_distance(const Options& o)
{
    const Space space = space_option(o);
    const auto [xv, yv] = point_pair(o);
    require(xv.size() == space.ambient_dim() && yv.size() == space.ambient_dim(),
            "points must have " + std::to_string(space.ambient_dim()) + " homogeneous coordinates for " +
                space.name());
    const Point x(xv), y(yv);
    require(space.contains(x), "x is not in " + space.name());
    require(space.contains(y), "y is not in " + space.name());
    const double d = projective_distance(space, x, y);
    const std::string type = x == y ? "none (coincident points)" : to_string(classify_line(space, line_through(x, y)));
    Report r;
    r.summary["command"] = "distance";
    r.summary["space"] = space.name();
    r.summary["distance"] = d;
    r.summary["line"] = type;
    r.line("space: " + space.name());
    r.line("distance: " + num(d));
    r.line("line: " + type);
    return r;
}

Report cmd_classify_line(const Options& o)
{
    const Space space = space_option(o);
    const auto [xv, yv] = point_pair(o);
    require(xv.size() == space.ambient_dim() && yv.size() == space.ambient_dim(),
            "points must have " + std::to_string(space.ambient_dim()) + " homogeneous coordinates for " +
                space.name());
    const Line l = line_through(Point(xv), Point(yv));
    const LineType t = classify_line(space, l);
    const AbsolutePair<double> abs = absolute_points(space, l);
    const int count = abs.degenerate ? -1 : (t == LineType::elliptic ? 0 : (t == LineType::parabolic ? 1 : 2));
    Report r;
    r.summary["command"] = "classify-line";
    r.summary["space"] = space.name();
    r.summary["line"] = to_string(t);
    r.summary["absolute_points"] = count;
    r.line("space: " + space.name());
    r.line("line: " + to_string(t));
    r.line("real absolute points: " + (count < 0 ? std::string("line contained in the absolute") : std::to_string(count)));
    return r;
}

// ---------------------------------------------------------------- dualize

bool constant_values(double lo, double hi) { return hi - lo <= 1e-12 * std::max(1.0, std::abs(hi)); }

Report cmd_dualize(const Options& o)
{
    require(!o.body.empty(), "missing --body");
    const io::Flavor flavor = io::parse_flavor(o.flavor);
    const io::Scene scene = io::read_scene(o.body, "body");
    const Json& data = io::single_entity(scene, "body").data;
    if (data.contains("flavor"))
        require(data.at("flavor") == io::to_string(flavor),
                o.body + ": body flavor does not match --flavor " + io::to_string(flavor));
    const int grid = grid_size(o);
    const double tol = tolerance(o, 1e-6);
    Report r;
    r.summary["command"] = "dualize";
    r.summary["flavor"] = io::to_string(flavor);
    r.summary["grid"] = grid;
    io::CsvTable table;
    double lo = 0, hi = 0, gap = 0;
    int count = 0;
    if (flavor == io::Flavor::euclidean) {
        const EuclideanBody k = io::euclidean_body_from_json(data);
        require(k.dim == 2 || k.dim == 3, "dualize: bodies of dimension 2 or 3 are supported");
        const EuclideanBody dual = dual_body(k);
        const MatrixXd dirs = direction_grid(k.dim, grid);
        const SupportFunctionE h = support_from_body(dual, dirs);
        lo = h.values.minCoeff();
        hi = h.values.maxCoeff();
        count = static_cast<int>(dirs.cols());
        gap = support_gap(support_from_body(dual_body(dual), dirs), support_from_body(k, dirs));
        r.summary["body"] = io::to_json(k);
        r.summary["dual"] = io::to_json(dual);
        r.line("body: " + io::describe(k));
        r.line("dual: " + io::describe(dual));
        for (int d = 0; d < k.dim; ++d) table.header.push_back("d" + std::to_string(d + 1));
        table.header.push_back("h");
        for (int c = 0; c < dirs.cols(); ++c) {
            std::vector<double> row(dirs.col(c).data(), dirs.col(c).data() + k.dim);
            row.push_back(h.values[c]);
            table.rows.push_back(row);
        }
        r.line("support of the dual on " + std::to_string(count) + " unit directions: min " + sh(lo) + ", max " +
               sh(hi));
    } else {
        const MinkowskiBody k = io::minkowski_body_from_json(data);
        require(k.dim == 2 || k.dim == 3, "dualize: bodies of dimension 2 or 3 are supported");
        const MinkowskiBody dual = dual_body(k);
        const MatrixXd disc = disc_grid(k.dim - 1, grid, 0.95);
        const SupportFunctionMin h = support_from_body(dual, disc);
        VectorXd on_h(disc.cols());
        for (int c = 0; c < disc.cols(); ++c) on_h[c] = support_on_hyperboloid(h, c);
        lo = on_h.minCoeff();
        hi = on_h.maxCoeff();
        count = static_cast<int>(disc.cols());
        gap = support_gap(support_from_body(dual_body(dual), disc), support_from_body(k, disc));
        r.summary["body"] = io::to_json(k);
        r.summary["dual"] = io::to_json(dual);
        r.line("body: " + io::describe(k));
        r.line("dual: " + io::describe(dual));
        for (int d = 0; d + 1 < k.dim; ++d) table.header.push_back("p" + std::to_string(d + 1));
        table.header.push_back("h_disc");
        table.header.push_back("h_hyperboloid");
        for (int c = 0; c < disc.cols(); ++c) {
            std::vector<double> row(disc.col(c).data(), disc.col(c).data() + k.dim - 1);
            row.push_back(h.values[c]);
            row.push_back(on_h[c]);
            table.rows.push_back(row);
        }
        r.line("support of the dual on " + std::to_string(count) + " hyperboloid points: min " + sh(lo) + ", max " +
               sh(hi));
    }
    r.summary["samples"] = count;
    r.summary["support_min"] = lo;
    r.summary["support_max"] = hi;
    if (constant_values(lo, hi)) {
        r.summary["support_constant"] = 0.5 * (lo + hi);
        r.line("support ≡ " + sh(0.5 * (lo + hi)));
    }
    r.summary["double_dual_gap"] = gap;
    r.line("double-dual support gap: " + res(gap));
    check_limit(r, "double-dual support gap", gap, tol);
    r.table = table;
    return r;
}

// ---------------------------------------------------------------- transition

Report cmd_transition(const Options& o)
{
    const Space space = space_option(o);
    const TransitionSetup setup = transition_setup(space.kind, parse_family(o.family), space.ambient_dim());
    const double tol = tolerance(o, 1e-6);
    const RescalingFamily fam = setup.rescaling();
    const MatrixXd j = setup.form.matrix();

    std::vector<IsometryPath> paths;
    std::vector<MatrixXd> generators;
    Rng rng(o.seed);
    if (!o.scene.empty()) {
        const io::Scene scene = io::read_scene(o.scene);
        for (const io::Entity* e : scene.of("path")) {
            const MatrixXd a = io::matrix_from_json(e->data.at("generator"), "path.generator");
            require(a.rows() == setup.ambient_dim, "path.generator: expected a " + std::to_string(setup.ambient_dim) +
                                                       " x " + std::to_string(setup.ambient_dim) + " matrix");
            const double defect = (a.transpose() * j + j * a).cwiseAbs().maxCoeff();
            require(defect <= 1e-9 * std::max(1.0, a.cwiseAbs().maxCoeff()),
                    "path.generator is not infinitesimally isometric for the form diag(" +
                        [&] {
                            std::string s;
                            for (int i = 0; i < j.rows(); ++i) s += (i ? ", " : "") + num(j(i, i));
                            return s;
                        }() + ")");
            generators.push_back(a);
            paths.push_back([a](double t) { return MatrixXd((t * a).exp()); });
        }
        require(!paths.empty(), o.scene + ": no path entities");
    } else {
        require(o.samples >= 1, "--samples must be positive");
        for (int i = 0; i < o.samples; ++i) paths.push_back(random_isometry_path(setup, rng));
    }

    Report r;
    r.summary["command"] = "transition";
    r.summary["source"] = space.name();
    r.summary["family"] = o.family;
    r.summary["limit_space"] = to_string(setup.limit) + std::to_string(space.n);
    r.summary["limit_group"] = to_string(setup.target);
    r.summary["paths"] = paths.size();
    r.line("source: " + space.name() + ", family: blow-up of a " + o.family);
    r.line("limit space: " + to_string(setup.limit) + std::to_string(space.n) + ", limit group " +
           to_string(setup.target));
    io::CsvTable table{{"path", "group_defect", "error_estimate"}, {}};
    double worst = 0.0;
    std::size_t worst_index = 0;
    for (std::size_t k = 0; k < paths.size(); ++k) {
        const LimitResult<MatrixXd> lim = conjugated_limit(paths[k], fam);
        const double defect = limit_group_defect(lim.value, setup.target);
        table.rows.push_back({static_cast<double>(k), defect, lim.error_estimate});
        if (defect > worst || k == 0) {
            worst = std::max(worst, defect);
            worst_index = k;
        }
        if (!generators.empty()) {
            std::ostringstream m;
            m << "path " << k << " limit:";
            for (int a = 0; a < lim.value.rows(); ++a) {
                m << (a ? " ;" : " [");
                for (int b = 0; b < lim.value.cols(); ++b) m << " " << sh(std::abs(lim.value(a, b)) < 1e-9 ? 0.0 : lim.value(a, b));
            }
            m << " ]";
            r.line(m.str());
        }
    }
    double gap = 0.0;
    if (generators.empty())
        for (int i = 0; i < o.samples; ++i)
            gap = std::max(gap, duality_transition_gap(random_point_path(setup, rng), setup));
    r.summary["worst_group_defect"] = worst;
    r.line("worst limit-group defect over " + std::to_string(paths.size()) + " paths: " + res(worst) + " (path " +
           std::to_string(worst_index) + ")");
    check_limit(r, "limit-group defect", worst, tol, "at path " + std::to_string(worst_index));
    if (generators.empty()) {
        r.summary["worst_duality_gap"] = gap;
        r.line("worst duality/transition gap over " + std::to_string(o.samples) + " point paths: " + res(gap));
        check_limit(r, "duality/transition gap", gap, tol);
    }
    r.table = table;
    return r;
}

// ---------------------------------------------------------------- check-connection

Report cmd_check_connection(const Options& o)
{
    const Space space = space_option(o);
    require(space.n == 3, "check-connection: 3-dimensional spaces are supported");
    const double tol = tolerance(o, 1e-6);
    const bool co = space.degenerate();
    const Connection conn = co ? co_connection(space) : levi_civita(space);
    const int d = space.ambient_dim();
    Rng rng(o.seed);

    std::vector<VectorField> scene_fields;
    if (!o.scene.empty()) {
        const io::Scene scene = io::read_scene(o.scene);
        for (const io::Entity* e : scene.of("field")) {
            const io::AffineField f = io::field_from_json(e->data);
            require(f.constant.size() == d, "field: expected " + std::to_string(d) + " components");
            scene_fields.push_back([f](const VectorXd& x) { return f(x); });
        }
        require(!scene_fields.empty(), o.scene + ": no field entities");
    }
    require(o.samples >= 1, "--samples must be positive");
    const auto field = [&](int k) {
        return scene_fields.empty() ? random_polynomial_field(d, rng)
                                    : scene_fields[static_cast<std::size_t>(k) % scene_fields.size()];
    };
    // Fields tangent to the slice {x_last = 0} for the plane check.
    const auto slice = [d](VectorField f) {
        return VectorField([f, d](const VectorXd& y) {
            VectorXd out = f(y);
            out[d - 1] *= y[d - 1];
            return out;
        });
    };

    io::CsvTable table{{"sample", "x1", "x2", "x3", "x4", "symmetry", "metric", "volume", "degenerate_field", "plane"},
                       {}};
    std::vector<std::string> names{"symmetry", "metric", "volume", "degenerate_field", "plane"};
    std::vector<double> worst(names.size(), 0.0);
    std::vector<int> where(names.size(), 0);
    for (int s = 0; s < o.samples; ++s) {
        const VectorXd x = random_locus_point(conn, rng);
        const VectorField a = field(3 * s), b = field(3 * s + 1), z = field(3 * s + 2);
        std::vector<double> v{symmetry_residual(conn, a, b, x), metric_residual(conn, a, b, z, x),
                              parallel_volume_residual(conn, VolumeForm{d}, z, {a, b, z}, x), kNaN, kNaN};
        if (co) {
            v[3] = degenerate_field_residual(conn, a, x);
            VectorXd xs = x;
            xs[d - 1] = 0.0;
            v[4] = plane_residual(conn, slice(a), slice(b), xs);
        }
        std::vector<double> row{static_cast<double>(s)};
        for (int i = 0; i < d; ++i) row.push_back(x[i]);
        row.insert(row.end(), v.begin(), v.end());
        table.rows.push_back(row);
        for (std::size_t k = 0; k < v.size(); ++k)
            if (!std::isnan(v[k]) && v[k] > worst[k]) {
                worst[k] = v[k];
                where[k] = s;
            }
    }
    Report r;
    r.summary["command"] = "check-connection";
    r.summary["space"] = space.name();
    r.summary["connection"] = co ? "degenerate co-space connection" : "Levi-Civita";
    r.summary["samples"] = o.samples;
    r.line("space: " + space.name() + " (" + (co ? "degenerate co-space connection" : "Levi-Civita connection") +
           ", " + std::to_string(o.samples) + " samples)");
    const std::vector<std::string> labels{"symmetry (torsion)", "metric compatibility", "parallel volume form",
                                          "parallel degenerate field T", "space-like plane preservation"};
    for (std::size_t k = 0; k < names.size(); ++k) {
        if (!co && k >= 3) continue;
        r.summary[names[k]] = worst[k];
        r.line(labels[k] + ": " + res(worst[k]));
        check_limit(r, names[k], worst[k], tol, "at sample " + std::to_string(where[k]));
    }
    r.table = table;
    return r;
}

// ---------------------------------------------------------------- pogorelov

Report cmd_pogorelov(const Options& o)
{
    const Space space = space_option(o);
    require(space.n == 3 && (space.kind == SpaceKind::Hyp || space.kind == SpaceKind::AdS),
            "pogorelov: --space must be Hyp3 or AdS3");
    const ChartPair pair = space.kind == SpaceKind::Hyp ? hyp_euc_pair(3) : ads_min_pair(3);
    const double tol = tolerance(o, 1e-6);
    constexpr double kSourceTol = 1e-7;
    const MatrixXd j = ambient_form(pair);
    Rng rng(o.seed);

    std::vector<KillingField> fields;
    if (!o.scene.empty()) {
        const io::Scene scene = io::read_scene(o.scene);
        for (const io::Entity* e : scene.of("path")) {
            const MatrixXd a = io::matrix_from_json(e->data.at("generator"), "path.generator");
            require(a.rows() == 4 && a.cols() == 4, "path.generator: expected a 4 x 4 matrix");
            require(killing_generator_defect(a, j) <= 1e-9 * std::max(1.0, a.cwiseAbs().maxCoeff()),
                    "path.generator is not a Killing generator of " + space.name());
            fields.push_back(KillingField{a});
        }
        require(!fields.empty(), o.scene + ": no path entities");
    } else {
        require(o.samples >= 1, "--samples must be positive");
        for (int i = 0; i < o.samples; ++i) fields.push_back(random_killing(pair, rng));
    }
    const MatrixXd cloud = sample_cloud(pair.src, 128);
    io::CsvTable table{{"generator", "source_residual", "image_residual"}, {}};
    double src = 0.0, img = 0.0;
    std::size_t worst = 0;
    for (std::size_t k = 0; k < fields.size(); ++k) {
        const double s = killing_residual(pair.src, fields[k].field(), cloud);
        const double t = killing_residual(pair.dst, infinitesimal_pogorelov(fields[k].field(), pair), cloud);
        table.rows.push_back({static_cast<double>(k), s, t});
        src = std::max(src, s);
        if (t > img || k == 0) {
            img = std::max(img, t);
            worst = k;
        }
    }
    // Eigenvalue dictionary of L on the sample cloud.
    const Form& b = pair.src.form();
    double dict = 0.0;
    for (int c = 0; c < cloud.cols(); ++c) {
        const VectorXd x = cloud.col(c);
        if (x.norm() < 1e-3) continue;
        const double r2 = 1.0 / (1.0 - b(x, x));
        VectorXd w = VectorXd::Unit(3, c % 3);
        w -= (b(x, w) / b(x, x)) * x;
        dict = std::max(dict, (operator_L(pair.src, pair.dst, x, x) - r2 * r2 * x).norm() / (r2 * r2 * x.norm()));
        if (w.norm() > 1e-6)
            dict = std::max(dict, (operator_L(pair.src, pair.dst, x, w) - r2 * w).norm() / (r2 * w.norm()));
    }
    const std::string target = space.kind == SpaceKind::Hyp ? "Euc3" : "Min3";
    Report r;
    r.summary["command"] = "pogorelov";
    r.summary["source"] = space.name();
    r.summary["target"] = target;
    r.summary["generators"] = fields.size();
    r.summary["source_residual"] = src;
    r.summary["image_residual"] = img;
    r.summary["dictionary_gap"] = dict;
    r.line("Pogorelov map " + space.name() + " -> " + target + " on " + std::to_string(fields.size()) +
           " Killing fields");
    r.line("source Killing residual: " + res(src));
    r.line("image Killing residual: " + res(img) + " (generator " + std::to_string(worst) + ")");
    r.line("eigenvalue dictionary (rho^2, rho^4) gap: " + res(dict));
    require(src < kSourceTol, "source fields are not Killing to " + res(kSourceTol) + " (residual " + res(src) + ")");
    check_limit(r, "image Killing residual", img, tol, "at generator " + std::to_string(worst));
    check_limit(r, "eigenvalue dictionary gap", dict, 1e-9);
    r.table = table;
    return r;
}

// ---------------------------------------------------------------- surfaces

struct LoadedPatch {
    io::Json data;
    std::string space;  // from the scene, if any
};

LoadedPatch load_patch(const Options& o)
{
    require(!o.patch.empty(), "missing --patch");
    const io::Scene scene = io::read_scene(o.patch, "patch");
    return {io::single_entity(scene, "patch").data, scene.space};
}

std::string surface_space_name(const Options& o, const LoadedPatch& p)
{
    if (!o.space.empty()) {
        if (!p.space.empty())
            require(parse_space(p.space).kind == parse_space(o.space).kind && parse_space(p.space).n == parse_space(o.space).n,
                    "--space " + o.space + " does not match the scene space " + p.space);
        return o.space;
    }
    require(!p.space.empty(), "missing --space");
    return p.space;
}

EmbeddingData data_of(const Json& patch, const SurfaceSpace& space, int grid)
{
    if (space.co()) {
        const GraphPatch g = io::graph_from_json(patch, space.kind);
        return embedding_data_co(immersion_from_data_co(g, space), space, grid);
    }
    return embedding_data(io::patch_from_json(patch, space), space, grid);
}

// Per-node table of embedding data with K_I (refined Brioschi curvature,
// 4-node margin), det B and the Gauss / Codazzi residuals; adds summaries and
// tolerance checks to the report.
void surface_table(Report& r, const EmbeddingData& data, double tol, const std::string& prefix = "")
{
    io::CsvTable table{{"i", "j", "u", "v", "I11", "I12", "I22", "B11", "B12", "B21", "B22", "K_I", "det_B",
                        "gauss_residual", "codazzi_residual"},
                       {}};
    double k_lo = std::numeric_limits<double>::infinity(), k_hi = -k_lo;
    double d_lo = k_lo, d_hi = -k_lo;
    double gauss = 0, codazzi = 0;
    Vector2d gauss_at = Vector2d::Zero(), codazzi_at = Vector2d::Zero();
    for (int i = 0; i < data.rows; ++i)
        for (int j = 0; j < data.cols; ++j) {
            const int k = data.index(i, j);
            const Matrix2d& I = data.I[k];
            const Matrix2d& B = data.B[k];
            const Vector2d p = data.node(i, j);
            const double det = B.determinant();
            d_lo = std::min(d_lo, det);
            d_hi = std::max(d_hi, det);
            double kk = kNaN, g = kNaN, c = kNaN;
            if (i >= 4 && j >= 4 && i + 4 < data.rows && j + 4 < data.cols) {
                kk = refined_curvature(data, data.I, i, j);
                g = std::abs(kk - (data.curvature + data.normal_norm * det));
                k_lo = std::min(k_lo, kk);
                k_hi = std::max(k_hi, kk);
                if (g > gauss) {
                    gauss = g;
                    gauss_at = p;
                }
            }
            if (i >= 2 && j >= 2 && i + 2 < data.rows && j + 2 < data.cols) {
                c = codazzi_vector(data, i, j).norm();
                if (c > codazzi) {
                    codazzi = c;
                    codazzi_at = p;
                }
            }
            table.rows.push_back({double(i), double(j), p[0], p[1], I(0, 0), I(0, 1), I(1, 1), B(0, 0), B(0, 1),
                                  B(1, 0), B(1, 1), kk, det, g, c});
        }
    const auto at = [](const Vector2d& p) { return "at (u, v) = (" + sh(p[0]) + ", " + sh(p[1]) + ")"; };
    r.summary[prefix + "K_I_min"] = k_lo;
    r.summary[prefix + "K_I_max"] = k_hi;
    r.summary[prefix + "det_B_min"] = d_lo;
    r.summary[prefix + "det_B_max"] = d_hi;
    r.summary[prefix + "gauss_residual"] = gauss;
    r.summary[prefix + "codazzi_residual"] = codazzi;
    r.line("K_I: [" + sh(k_lo) + ", " + sh(k_hi) + "]");
    r.line("det B: [" + sh(d_lo) + ", " + sh(d_hi) + "]");
    r.line("gauss residual: " + res(gauss) + " " + at(gauss_at));
    r.line("codazzi residual: " + res(codazzi) + " " + at(codazzi_at));
    check_limit(r, prefix + "gauss residual", gauss, tol, at(gauss_at));
    check_limit(r, prefix + "codazzi residual", codazzi, tol, at(codazzi_at));
    r.table = table;
}

void surface_header(Report& r, const char* command, const EmbeddingData& data, int grid)
{
    r.summary["command"] = command;
    r.summary["space"] = data.space;
    r.summary["grid"] = grid;
    r.summary["normal_convention"] = data.normal_convention;
    r.summary["curvature"] = data.curvature;
    r.summary["normal_norm"] = data.normal_norm;
    r.line("space: " + data.space + " (curvature " + num(data.curvature) + ", g(N, N) = " + num(data.normal_norm) +
           ")");
    r.line("grid: " + std::to_string(grid) + " x " + std::to_string(grid) + ", " + data.normal_convention);
}

Report cmd_check_surface(const Options& o)
{
    const LoadedPatch p = load_patch(o);
    const SurfaceSpace space = surface_space(surface_space_name(o, p));
    const int grid = grid_size(o);
    const EmbeddingData data = data_of(p.data, space, grid);
    Report r;
    surface_header(r, "check-surface", data, grid);
    surface_table(r, data, tolerance(o, 1e-4));
    return r;
}

SpaceKind dual_kind(SpaceKind k)
{
    switch (k) {
    case SpaceKind::Ell: return SpaceKind::Ell;
    case SpaceKind::Hyp: return SpaceKind::dS;
    case SpaceKind::dS: return SpaceKind::Hyp;
    case SpaceKind::AdS: return SpaceKind::AdS;
    case SpaceKind::Euc: return SpaceKind::coEuc;
    case SpaceKind::Min: return SpaceKind::coMin;
    case SpaceKind::coEuc: return SpaceKind::Euc;
    case SpaceKind::coMin: return SpaceKind::Min;
    }
    throw DomainError("dual space: unknown kind");
}

double sup_gap(const std::vector<Matrix2d>& a, const std::vector<Matrix2d>& b)
{
    double g = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) g = std::max(g, (a[k] - b[k]).cwiseAbs().maxCoeff());
    return g;
}

Report cmd_dual_surface(const Options& o)
{
    const LoadedPatch p = load_patch(o);
    const SurfaceSpace space = surface_space(surface_space_name(o, p));
    const SurfaceSpace dual_space = surface_space(dual_kind(space.kind));
    const int grid = grid_size(o);
    const double tol = tolerance(o, 1e-4);
    const EmbeddingData data = data_of(p.data, space, grid);
    const EmbeddingData dual = dual_embedding_data(data, dual_space);
    const EmbeddingData back = dual_embedding_data(dual, space);
    const double involution = std::max(sup_gap(back.I, data.I), sup_gap(back.B, data.B));
    double third = 0.0;
    for (int i = 4; i + 4 < data.rows; ++i)
        for (int j = 4; j + 4 < data.cols; ++j)
            third = std::max(third, std::abs(refined_curvature(dual, dual.I, i, j) -
                                             refined_curvature(data, data.I, i, j) /
                                                 data.B[data.index(i, j)].determinant()));
    Report r;
    surface_header(r, "dual-surface", dual, grid);
    r.summary["source_space"] = data.space;
    r.line("dual of a surface in " + data.space + ": data (III, B^-1)");
    surface_table(r, dual, tol);
    r.summary["involution_gap"] = involution;
    r.summary["third_form_curvature_gap"] = third;
    r.line("involution gap: " + res(involution));
    r.line("K_III - K_I / det B: " + res(third));
    check_limit(r, "involution gap", involution, tol);
    check_limit(r, "K_III - K_I / det B", third, tol);
    return r;
}

Report cmd_transition_surface(const Options& o)
{
    const LoadedPatch p = load_patch(o);
    const Space src = parse_space(surface_space_name(o, p));
    require(src.n == 3, "transition-surface: 3-dimensional source spaces are supported");
    const TransitionSetup setup = transition_setup(src.kind, FamilyKind::blow_up_hyperplane, 4);
    const GraphPatch g = io::graph_from_json(p.data, src.kind);
    const int grid = o.grid ? grid_size(o) : std::min(grid_size(o), 16);
    const double tol = tolerance(o, 1e-5);
    const SurfaceTransition tr = surface_transition(graph_family(g, setup), setup, g.u0, g.u1, g.v0, g.v1, grid);
    const SurfaceSpace co = surface_space(setup.limit);
    const EmbeddingData ref = shape_from_support_data(g, co, grid);
    const double gap = std::max(sup_gap(tr.limit.I, ref.I), sup_gap(tr.limit.B, ref.B));
    const std::vector<double> ts = {0.04, 0.02, 0.01};
    const std::vector<double> rates = surface_transition_rates(graph_family(g, setup), setup, tr.limit, ts);

    Report r;
    r.summary["command"] = "transition-surface";
    r.summary["source"] = src.name();
    r.summary["limit_space"] = co.name();
    r.summary["grid"] = grid;
    r.summary["limit_gap"] = gap;
    r.summary["error_estimate"] = tr.error_estimate;
    r.line("source: " + src.name() + " (graph family x_4 = t u), limit space: " + co.name());
    r.line("grid: " + std::to_string(grid) + " x " + std::to_string(grid) + ", " + tr.limit.normal_convention);
    r.line("limit vs co-space formulas (I, Hess u +- u Id): " + res(gap));
    r.line("extrapolation error estimate: " + res(tr.error_estimate));
    std::string rate_line = "|II_t / t - II_0|:";
    for (std::size_t k = 0; k < ts.size(); ++k) {
        rate_line += " t=" + num(ts[k]) + ": " + res(rates[k]);
        r.summary["rates"][num(ts[k])] = rates[k];
    }
    r.line(rate_line);
    check_limit(r, "surface transition limit gap", gap, tol);

    io::CsvTable table{{"i", "j", "u", "v", "I11", "I12", "I22", "B11", "B12", "B21", "B22", "K_ext"}, {}};
    for (int i = 0; i < tr.limit.rows; ++i)
        for (int j = 0; j < tr.limit.cols; ++j) {
            const int k = tr.limit.index(i, j);
            const Matrix2d& I = tr.limit.I[k];
            const Matrix2d& B = tr.limit.B[k];
            const Vector2d q = tr.limit.node(i, j);
            table.rows.push_back({double(i), double(j), q[0], q[1], I(0, 0), I(0, 1), I(1, 1), B(0, 0), B(0, 1),
                                  B(1, 0), B(1, 1), tr.k_ext[static_cast<std::size_t>(k)]});
        }
    r.table = table;
    return r;
}

// ---------------------------------------------------------------- acceptance

Report cmd_acceptance(const Options& o)
{
    for (int id : o.only)
        require(id >= 1 && id <= kCriteriaCount, "--only: criteria are numbered 1.." + std::to_string(kCriteriaCount));
    const std::vector<CriterionResult> results = run_acceptance(o.only, o.seed);
    Report r;
    r.summary["command"] = "acceptance";
    r.summary["seed"] = o.seed;
    io::CsvTable table{{"criterion", "passed", "worst_value", "worst_limit"}, {}};
    int failed = 0;
    Json list = Json::array();
    for (const CriterionResult& c : results) {
        r.line(format_result(c, o.timing));
        if (o.details) {
            std::istringstream d(format_details(c));
            for (std::string l; std::getline(d, l);) r.line(l);
        }
        const AcceptanceCheck* w = c.worst();
        Json item{{"id", c.id}, {"title", c.title}, {"passed", c.passed()}};
        if (w) item["worst"] = Json{{"name", w->name}, {"value", w->value}, {"limit", w->limit}};
        if (!c.error.empty()) item["error"] = c.error;
        list.push_back(item);
        table.rows.push_back({double(c.id), c.passed() ? 1.0 : 0.0, w ? w->value : kNaN, w ? w->limit : kNaN});
        if (!c.passed()) {
            ++failed;
            r.fail("criterion " + std::to_string(c.id) + " (" + c.title + ") failed" +
                   (w ? ": " + w->name + " = " + res(w->value) : std::string()) +
                   (c.error.empty() ? std::string() : ": " + c.error));
        }
    }
    r.summary["criteria"] = list;
    r.summary["failed"] = failed;
    r.line(std::to_string(failed) + " of " + std::to_string(results.size()) + " criteria failed");
    r.table = table;
    return r;
}

// ---------------------------------------------------------------- command-line wiring

const char* kCsvHelp =
    "CSV columns (--emit csv):\n"
    "  distance, classify-line, pogorelov summaries: key,value\n"
    "  dualize euclidean:  d1..dn,h            (unit direction, support of the dual)\n"
    "  dualize minkowski:  p1..p(n-1),h_disc,h_hyperboloid\n"
    "                      (disc point, support on the disc, support on the hyperboloid)\n"
    "  transition:         path,group_defect,error_estimate\n"
    "  check-connection:   sample,x1..x4,symmetry,metric,volume,degenerate_field,plane\n"
    "  pogorelov:          generator,source_residual,image_residual\n"
    "  check-surface, dual-surface:\n"
    "                      i,j,u,v,I11,I12,I22,B11,B12,B21,B22,K_I,det_B,gauss_residual,codazzi_residual\n"
    "                      (K_I and residuals are empty within 4 resp. 2 nodes of the boundary)\n"
    "  transition-surface: i,j,u,v,I11,I12,I22,B11,B12,B21,B22,K_ext\n"
    "  acceptance:         criterion,passed,worst_value,worst_limit\n"
    "Exit codes: 0 success, 1 internal error, 2 validation error, 3 numeric tolerance exceeded.\n"
    "Environment: MODELSPACE_GRID overrides the default grid size (64).";

void add_common(CLI::App* sub, Options& o)
{
    sub->add_option("--emit", o.emit, "Output format")->check(CLI::IsMember({"text", "json", "csv"}));
    sub->add_option("--seed", o.seed, "Random seed (default 0)");
    sub->add_option("--tol", o.tol, "Tolerance for the numeric checks");
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"modelspace: projective model spaces, duality and geometric transition"};
    app.footer(kCsvHelp);
    app.require_subcommand(1);
    Options o;

    struct Command {
        CLI::App* app;
        Report (*run)(const Options&);
    };
    std::vector<Command> commands;
    const auto add = [&](const char* name, const char* desc, Report (*run)(const Options&)) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->footer(kCsvHelp);
        add_common(sub, o);
        commands.push_back({sub, run});
        return sub;
    };
    const auto points = [&](CLI::App* sub) {
        sub->add_option("--space", o.space, "Model space, e.g. Ell2, Hyp3, dS2, AdS3, coEuc3, coMin3")->required();
        sub->add_option("--x", o.x, "First point, e.g. \"[1,0,0]\"");
        sub->add_option("--y", o.y, "Second point");
        sub->add_option("--scene", o.scene, "Scene file with two point entities (instead of --x/--y)");
    };
    points(add("distance", "Cross-ratio distance of two points and the type of their line", cmd_distance));
    points(add("classify-line", "Type of the line through two points (elliptic, parabolic, hyperbolic)",
               cmd_classify_line));

    CLI::App* dualize = add("dualize", "Dual convex body and its support function", cmd_dualize);
    dualize->add_option("--flavor", o.flavor, "euclidean or minkowski")->check(CLI::IsMember({"euclidean", "minkowski"}));
    dualize->add_option("--body", o.body, "Body file (body object or scene with one body entity)")->required();
    dualize->add_option("--grid", o.grid, "Direction grid size");

    CLI::App* trans = add("transition", "Conjugated limits of isometry paths under a rescaling family", cmd_transition);
    trans->add_option("--space", o.space, "Source space: Ell3, Hyp3, dS3, AdS3 (any dimension >= 2)")->required();
    trans->add_option("--family", o.family, "point or plane")->check(CLI::IsMember({"point", "plane"}));
    trans->add_option("--samples", o.samples, "Number of random paths (default 20)");
    trans->add_option("--scene", o.scene, "Scene with path entities (generators in the listed form)");

    CLI::App* conn = add("check-connection", "Characterizing identities of the connection of a 3-space",
                         cmd_check_connection);
    conn->add_option("--space", o.space, "Ell3, Hyp3, dS3, AdS3, coEuc3 or coMin3")->required();
    conn->add_option("--samples", o.samples, "Number of random points and field triples (default 20)");
    conn->add_option("--scene", o.scene, "Scene with field entities (used cyclically)");

    CLI::App* pog = add("pogorelov", "Infinitesimal Pogorelov map on Killing fields", cmd_pogorelov);
    pog->add_option("--space", o.space, "Hyp3 (to Euc3) or AdS3 (to Min3)")->required();
    pog->add_option("--samples", o.samples, "Number of random Killing generators (default 20)");
    pog->add_option("--scene", o.scene, "Scene with path entities holding Killing generators");

    for (auto [name, desc, run] :
         {std::tuple{"check-surface", "Embedding data, Gauss and Codazzi residuals of a patch", cmd_check_surface},
          std::tuple{"dual-surface", "Dual embedding data (III, B^-1) in the dual space", cmd_dual_surface},
          std::tuple{"transition-surface", "Limit of a support-graph family in the co-space",
                     cmd_transition_surface}}) {
        CLI::App* sub = add(name, desc, run);
        sub->add_option("--space", o.space, "Space of the patch (defaults to the scene space)");
        sub->add_option("--patch", o.patch, "Patch file (patch object or scene with one patch entity)")->required();
        sub->add_option("--grid", o.grid, "Grid size (default 64; 16 for transition-surface)");
    }

    CLI::App* acc = add("acceptance", "Run the acceptance criteria and print the pass/fail table", cmd_acceptance);
    acc->add_option("--only", o.only, "Criteria to run (default: all)")->delimiter(',');
    acc->add_flag("--details", o.details, "List every check");
    acc->add_flag("--timing", o.timing, "Show per-criterion run times (not reproducible)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        for (const Command& c : commands) {
            if (!c.app->parsed()) continue;
            const Report r = c.run(o);
            std::cout << emit(r, o.emit);
            std::cout.flush();
            if (r.breach) {
                std::cerr << "tolerance exceeded: " << *r.breach << "\n";
                return 3;
            }
            return 0;
        }
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ToleranceError& e) {
        std::cerr << "tolerance exceeded: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
