#include "kelvin/study.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "kelvin/csv.hpp"
#include "kelvin/errors.hpp"
#include "kelvin/geometry.hpp"
#include "kelvin/material.hpp"

namespace kelvin {

using nlohmann::json;

namespace {

// ---------------------------------------------------------------- json helpers

[[noreturn]] void config_error(const std::string& key, const std::string& what) {
    throw ConfigError(key + ": " + what);
}

template <std::size_t D>
Vec<D> vec_from(const json& j, const std::string& key) {
    if (!j.is_array() || j.size() != D)
        config_error(key, "expected an array of " + std::to_string(D) + " numbers");
    Vec<D> v;
    for (std::size_t i = 0; i < D; ++i) {
        if (!j[i].is_number()) config_error(key, "expected numeric components");
        v[i] = j[i].get<double>();
    }
    return v;
}

template <std::size_t D>
json vec_json(const Vec<D>& v) {
    return json(std::vector<double>(v.c.begin(), v.c.end()));
}

template <std::size_t D>
Vec<D> to_vec(const std::vector<double>& v) {
    if (v.size() != D) config_error("cell.center", "expected " + std::to_string(D) + " coordinates");
    Vec<D> out;
    std::copy(v.begin(), v.end(), out.c.begin());
    return out;
}

double number_at(const json& j, const std::string& key, const std::string& path) {
    if (!j.contains(key)) config_error(path + key, "missing");
    if (!j[key].is_number()) config_error(path + key, "expected a number");
    return j[key].get<double>();
}

int int_at(const json& j, const std::string& key, const std::string& path) {
    if (!j.contains(key)) config_error(path + key, "missing");
    if (!j[key].is_number_integer()) config_error(path + key, "expected an integer");
    return j[key].get<int>();
}

template <std::size_t D>
NamedEvalSet<D> eval_set_from(const json& j, const std::string& path) {
    if (!j.is_object()) config_error(path, "expected an object");
    if (!j.contains("type") || !j["type"].is_string()) config_error(path + ".type", "missing");
    const std::string type = j["type"].get<std::string>();
    NamedEvalSet<D> out;
    out.name = j.value("name", type);
    const std::string p = path + ".";
    if (type == "point") {
        out.set = PointSet<D>{vec_from<D>(j.value("point", json()), p + "point")};
    } else if (type == "segment") {
        SegmentSet<D> s{vec_from<D>(j.value("a", json()), p + "a"),
                        vec_from<D>(j.value("b", json()), p + "b"),
                        int_at(j, "subdivisions", p)};
        if (s.subdivisions < 1) config_error(p + "subdivisions", "must be at least 1");
        out.set = s;
    } else if (type == "rectangle") {
        RectangleSet<D> s{vec_from<D>(j.value("corner", json()), p + "corner"),
                          vec_from<D>(j.value("e1", json()), p + "e1"),
                          vec_from<D>(j.value("e2", json()), p + "e2"), int_at(j, "n1", p),
                          int_at(j, "n2", p)};
        if (s.n1 < 1 || s.n2 < 1) config_error(p + "n1/n2", "must be at least 1");
        out.set = s;
    } else if (type == "circle") {
        if constexpr (D == 2) {
            CircleSet s{vec_from<2>(j.value("center", json()), p + "center"),
                        number_at(j, "radius", p), 0, j.value("phase", 0.0)};
            if (!(s.radius > 0.0)) config_error(p + "radius", "must be positive");
            const json count = j.value("count", json("auto"));
            if (count.is_string() && count.get<std::string>() == "auto") {
                out.auto_count = true;
            } else if (count.is_number_integer() && count.get<int>() >= 8) {
                s.count = count.get<int>();
            } else {
                config_error(p + "count", "expected \"auto\" or an integer >= 8");
            }
            out.set = s;
        } else {
            config_error(p + "type", "circle evaluation sets are two-dimensional only");
        }
    } else {
        config_error(p + "type", "unknown evaluation set type '" + type + "'");
    }
    return out;
}

template <std::size_t D>
json eval_set_json(const NamedEvalSet<D>& named) {
    json j;
    j["name"] = named.name;
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, PointSet<D>>) {
                j["type"] = "point";
                j["point"] = vec_json(s.point);
            } else if constexpr (std::is_same_v<T, SegmentSet<D>>) {
                j["type"] = "segment";
                j["a"] = vec_json(s.a);
                j["b"] = vec_json(s.b);
                j["subdivisions"] = s.subdivisions;
            } else if constexpr (std::is_same_v<T, RectangleSet<D>>) {
                j["type"] = "rectangle";
                j["corner"] = vec_json(s.corner);
                j["e1"] = vec_json(s.e1);
                j["e2"] = vec_json(s.e2);
                j["n1"] = s.n1;
                j["n2"] = s.n2;
            } else {
                j["type"] = "circle";
                j["center"] = vec_json(s.center);
                j["radius"] = s.radius;
                j["phase"] = s.phase;
                if (named.auto_count)
                    j["count"] = "auto";
                else
                    j["count"] = s.count;
            }
        },
        named.set);
    return j;
}

template <std::size_t D>
GridSpec<D> grid_from(const json& j) {
    GridSpec<D> g{vec_from<D>(j.value("corner", json()), "grid.corner"),
                  vec_from<D>(j.value("e1", json()), "grid.e1"),
                  vec_from<D>(j.value("e2", json()), "grid.e2"), int_at(j, "n1", "grid."),
                  int_at(j, "n2", "grid.")};
    if (g.n1 < 1 || g.n2 < 1) config_error("grid.n1/n2", "must be at least 1");
    return g;
}

template <std::size_t D>
json grid_json(const GridSpec<D>& g) {
    return {{"corner", vec_json(g.corner)}, {"e1", vec_json(g.e1)}, {"e2", vec_json(g.e2)},
            {"n1", g.n1},                   {"n2", g.n2}};
}

template <std::size_t D>
TraceSpec<D> trace_from(const json& j) {
    if (!j.is_object() || !j.contains("type")) config_error("trace.type", "missing");
    const std::string type = j["type"].get<std::string>();
    TraceSpec<D> t;
    if (type == "points") {
        const json pts = j.value("points", json::array());
        if (!pts.is_array()) config_error("trace.points", "expected an array");
        for (std::size_t i = 0; i < pts.size(); ++i)
            t.points.push_back(vec_from<D>(pts[i], "trace.points[" + std::to_string(i) + "]"));
    } else if (type == "circle" && D == 2) {
        CircleSet c{vec_from<2>(j.value("center", json()), "trace.center"),
                    number_at(j, "radius", "trace."), 0, j.value("phase", 0.0)};
        const json count = j.value("count", json("auto"));
        if (count.is_number_integer())
            c.count = count.get<int>();
        else if (!(count.is_string() && count.get<std::string>() == "auto"))
            config_error("trace.count", "expected \"auto\" or an integer");
        t.circle = c;
    } else if (type == "sphere" && D == 3) {
        SphereSample s{vec_from<3>(j.value("center", json()), "trace.center"),
                       number_at(j, "radius", "trace."), int_at(j, "count", "trace.")};
        t.sphere = s;
    } else {
        config_error("trace.type", "unsupported trace type '" + type + "' in " +
                                       std::to_string(D) + "D");
    }
    return t;
}

template <std::size_t D>
json trace_json(const TraceSpec<D>& t) {
    if (t.circle) {
        json j{{"type", "circle"},
               {"center", vec_json(t.circle->center)},
               {"radius", t.circle->radius},
               {"phase", t.circle->phase}};
        if (t.circle->count == 0)
            j["count"] = "auto";
        else
            j["count"] = t.circle->count;
        return j;
    }
    if (t.sphere)
        return {{"type", "sphere"},
                {"center", vec_json(t.sphere->center)},
                {"radius", t.sphere->radius},
                {"count", t.sphere->count}};
    json pts = json::array();
    for (const auto& p : t.points) pts.push_back(vec_json(p));
    return {{"type", "points"}, {"points", pts}};
}

const char* norm_name(NormVariant v) { return v == NormVariant::plain ? "plain" : "rms"; }

// ---------------------------------------------------------------- meshes

template <std::size_t D>
auto build_mesh(const StudyConfig& cfg, int resolution) {
    if constexpr (D == 2) {
        return make_circle_boundary(to_vec<2>(cfg.center), cfg.radius, resolution, cfg.magnitude);
    } else {
        return make_icosphere(to_vec<3>(cfg.center), cfg.radius, resolution, cfg.magnitude,
                              cfg.project_vertices);
    }
}

template <std::size_t D>
const std::vector<NamedEvalSet<D>>& eval_sets(const StudyConfig& cfg) {
    if constexpr (D == 2)
        return cfg.eval_sets_2d;
    else
        return cfg.eval_sets_3d;
}

int auto_sample_count(const std::vector<int>& resolutions) {
    return std::max(1024, 8 * resolutions.back());
}

template <std::size_t D>
StudyReport run_study(const StudyConfig& cfg) {
    if (cfg.dimension != static_cast<int>(D))
        config_error("dimension", "expected " + std::to_string(D) + ", config has " +
                                      std::to_string(cfg.dimension));
    validate(cfg);
    const auto t0 = std::chrono::steady_clock::now();
    const Material mat = make_material(cfg.young_modulus, cfg.poisson_ratio);
    const Vec<D> center = to_vec<D>(cfg.center);

    StudyReport report;
    report.config = cfg;
    report.resolutions = study_resolutions(cfg);
    report.threads = omp_get_max_threads();
    const std::size_t nres = report.resolutions.size();

    struct Work {
        EvalSet<D> set;
        QuadratureNodes<D> nodes;
        std::optional<QuadratureNodes<D>> unaligned;
        std::vector<double> selected;
        std::vector<std::optional<double>> std_aligned;
    };
    std::vector<Work> work;
    for (const auto& named : eval_sets<D>(cfg)) {
        Work w{named.set, {}, {}, {}, {}};
        if constexpr (D == 2) {
            if (auto* c = std::get_if<CircleSet>(&w.set)) {
                if (named.auto_count) c->count = auto_sample_count(report.resolutions);
                CircleSet shifted = *c;
                shifted.count = c->count + 1;
                w.unaligned = eval_nodes<2>(EvalSet<2>{shifted});
            }
        }
        w.nodes = eval_nodes<D>(w.set);

        EvalSetReport r;
        r.name = named.name;
        r.kind = kind_name<D>(w.set);
        r.theory_violating = crosses_boundary<D>(w.set, center, cfg.radius);
        r.min_clearance = std::numeric_limits<double>::infinity();
        r.sample_count = static_cast<int>(w.nodes.points.size());
        report.sets.push_back(std::move(r));
        work.push_back(std::move(w));
    }

    for (std::size_t k = 0; k < nres; ++k) {
        const auto mesh = build_mesh<D>(cfg, report.resolutions[k]);
        report.station_counts.push_back(mesh.size());
        report.mesh_h.push_back(kelvin::mesh_h(mesh));

        for (std::size_t s = 0; s < work.size(); ++s) {
            auto& w = work[s];
            auto& r = report.sets[s];
            L2Norm n{std::nan(""), std::nan("")};
            std::optional<double> sd, sd_unaligned;
            std::string error;
            try {
                const auto samples = evaluate(mesh, mat, std::span<const Vec<D>>(w.nodes.points));
                std::vector<Vec<D>> values;
                values.reserve(samples.size());
                for (const auto& smp : samples) {
                    values.push_back(smp.displacement);
                    r.min_clearance = std::min(r.min_clearance, smp.min_station_distance);
                }
                n = l2_norm<D>(values, w.nodes);
                if constexpr (D == 2) {
                    if (const auto* c = std::get_if<CircleSet>(&w.set)) {
                        sd = std_normal_component(values, w.nodes.points, c->center);
                        const auto& un = *w.unaligned;
                        const auto us = evaluate(mesh, mat, std::span<const Vec2>(un.points));
                        std::vector<Vec2> uv;
                        for (const auto& smp : us) uv.push_back(smp.displacement);
                        sd_unaligned = std_normal_component(uv, un.points, c->center);
                    }
                }
            } catch (const Error& e) {
                error = e.what();
            }
            r.norms.push_back(n);
            w.selected.push_back(select(n, cfg.norm_variant));
            w.std_aligned.push_back(sd);
            r.std_unaligned.push_back(sd_unaligned);
            r.errors.push_back(error);
        }
    }

    for (std::size_t s = 0; s < work.size(); ++s) {
        auto& r = report.sets[s];
        r.rows = convergence_rows(report.resolutions, work[s].selected);
        for (std::size_t k = 0; k < nres; ++k) r.rows[k].std = work[s].std_aligned[k];
    }

    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

std::string mesh_mapping(const StudyConfig& cfg) {
    if (cfg.dimension == 2)
        return "resolution = number m of polygon segments (regular m-gon inscribed in the cell "
               "circle, stations at segment midpoints)";
    std::string s =
        "resolution = icosphere refinement level k: level 0 is the regular icosahedron "
        "(20 triangles), level k has 20*4^k triangles; stations at triangle centroids; ";
    s += cfg.project_vertices ? "new vertices projected onto the sphere"
                              : "new vertices left at edge midpoints (unprojected)";
    return s;
}

template <std::size_t D>
std::vector<std::string> coord_header(const char* px) {
    static const char* axes[] = {"x", "y", "z"};
    std::vector<std::string> h;
    for (std::size_t i = 0; i < D; ++i) h.push_back(std::string(px) + axes[i]);
    return h;
}

template <std::size_t D>
void append(std::vector<double>& row, const Vec<D>& v) {
    row.insert(row.end(), v.c.begin(), v.c.end());
}

template <std::size_t D>
int field_resolution(const StudyConfig& cfg) {
    return cfg.field_resolution.value_or(cfg.resolutions.back());
}

template <std::size_t D>
FieldRun run_field_impl(const StudyConfig& cfg) {
    const Material mat = make_material(cfg.young_modulus, cfg.poisson_ratio);
    const auto mesh = build_mesh<D>(cfg, field_resolution<D>(cfg));
    GridSpec<D> grid;
    if constexpr (D == 2)
        grid = cfg.grid_2d.value_or(default_config(2).grid_2d.value());
    else
        grid = cfg.grid_3d.value_or(default_config(3).grid_3d.value());

    const auto result = field_grid(mesh, mat, grid);
    const auto dir = cfg.output_dir;
    FieldRun run;
    run.written = result.samples.size();
    run.skipped = result.skipped.size();

    CsvTable skipped(coord_header<D>(""));
    for (const auto& p : result.skipped) {
        std::vector<double> row;
        append(row, p);
        skipped.row(row);
    }
    write_file_atomic(dir / "field.csv", render_field_csv<D>(result.samples));
    write_file_atomic(dir / "boundary.csv", render_mesh_csv<D>(mesh.stations()));
    write_file_atomic(dir / "skipped.csv", skipped.str());
    run.files = {dir / "field.csv", dir / "boundary.csv", dir / "skipped.csv"};
    return run;
}

template <std::size_t D>
FieldRun run_trace_impl(const StudyConfig& cfg) {
    const Material mat = make_material(cfg.young_modulus, cfg.poisson_ratio);
    const auto mesh = build_mesh<D>(cfg, field_resolution<D>(cfg));
    TraceSpec<D> spec;
    if constexpr (D == 2)
        spec = cfg.trace_2d.value_or(default_config(2).trace_2d.value());
    else
        spec = cfg.trace_3d.value_or(default_config(3).trace_3d.value());

    std::vector<Vec<D>> points = spec.points;
    if constexpr (D == 2) {
        if (spec.circle) {
            CircleSet c = *spec.circle;
            if (c.count == 0) c.count = auto_sample_count(study_resolutions(cfg));
            points = eval_nodes<2>(EvalSet<2>{c}).points;
        }
    } else {
        if (spec.sphere) points = sphere_points(*spec.sphere);
    }

    const auto trace = boundary_trace_export(mesh, std::span<const Vec<D>>(points), mat);
    FieldRun run;
    run.written = trace.size();
    write_file_atomic(cfg.output_dir / "trace.csv", render_trace_csv<D>(trace));
    run.files = {cfg.output_dir / "trace.csv"};
    return run;
}

}  // namespace

// ---------------------------------------------------------------- config

StudyConfig default_config(int dimension) {
    StudyConfig c;
    c.dimension = dimension;
    if (dimension == 2) {
        c.center = {0.0, 0.0};
        c.radius = 0.3;
        c.resolutions = {10, 20, 40, 80};
        c.extra_resolutions = 2;
        c.eval_sets_2d = {{"circle_R0.5", CircleSet{{{0.0, 0.0}}, 0.5, 0, 0.0}, true}};
        c.grid_2d = GridSpec<2>{{{-2.0, -2.0}}, {{4.0, 0.0}}, {{0.0, 4.0}}, 10, 10};
        c.trace_2d = TraceSpec<2>{{}, CircleSet{{{0.0, 0.0}}, 0.5, 0, 0.0}, std::nullopt};
    } else if (dimension == 3) {
        c.center = {0.0, 0.0, 0.0};
        c.radius = 0.1;
        c.resolutions = {1, 2, 3, 4, 5, 6};
        c.extra_resolutions = 0;
        c.eval_sets_3d = {
            {"case1_point", PointSet<3>{{{2.0, 0.0, 0.0}}}, false},
            {"case2a_segment_quoted", SegmentSet<3>{{{-1.0, 1.0, -1.0}}, {{-1.0, 1.0, 1.0}}, 256},
             false},
            {"case2a_segment_intersecting",
             SegmentSet<3>{{{0.0, 0.0, -1.0}}, {{0.0, 0.0, 1.0}}, 128}, false},
            {"case2b_segment", SegmentSet<3>{{{10.0, 0.0, -1.0}}, {{10.0, 0.0, 1.0}}, 256}, false},
            {"case3_plane",
             RectangleSet<3>{{{-1.0, -1.0, 0.5}}, {{1.0, 0.0, 0.0}}, {{0.0, 1.0, 0.0}}, 32, 32},
             false},
            {"case3_plane_quoted",
             RectangleSet<3>{{{-1.0, -1.0, 0.0}}, {{1.0, 0.0, 0.0}}, {{0.0, 1.0, 0.0}}, 32, 32},
             false},
        };
        c.grid_3d = GridSpec<3>{{{-2.0, -2.0, 0.0}}, {{4.0, 0.0, 0.0}}, {{0.0, 4.0, 0.0}}, 10, 10};
        c.trace_3d = TraceSpec<3>{{}, std::nullopt, SphereSample{{{0.0, 0.0, 0.0}}, 0.5, 256}};
    } else {
        config_error("dimension", "must be 2 or 3");
    }
    return c;
}

StudyConfig parse_config(const json& j, std::optional<int> dimension) {
    if (!j.is_object()) config_error("<root>", "expected a JSON object");
    int dim = dimension.value_or(2);
    if (j.contains("dimension")) {
        if (!j["dimension"].is_number_integer()) config_error("dimension", "expected 2 or 3");
        const int d = j["dimension"].get<int>();
        if (dimension && d != *dimension)
            config_error("dimension", "config is " + std::to_string(d) + "D but the command is " +
                                          std::to_string(*dimension) + "D");
        dim = d;
    }
    StudyConfig c = default_config(dim);

    if (j.contains("material")) {
        const auto& m = j["material"];
        if (m.contains("E")) c.young_modulus = number_at(m, "E", "material.");
        if (m.contains("nu")) c.poisson_ratio = number_at(m, "nu", "material.");
    }
    if (j.contains("Q")) c.magnitude = number_at(j, "Q", "");
    if (j.contains("cell")) {
        const auto& cell = j["cell"];
        if (cell.contains("center")) {
            if (dim == 2) {
                const auto v = vec_from<2>(cell["center"], "cell.center");
                c.center.assign(v.c.begin(), v.c.end());
            } else {
                const auto v = vec_from<3>(cell["center"], "cell.center");
                c.center.assign(v.c.begin(), v.c.end());
            }
        }
        if (cell.contains("radius")) c.radius = number_at(cell, "radius", "cell.");
    }
    if (j.contains("resolutions")) {
        const auto& r = j["resolutions"];
        if (!r.is_array()) config_error("resolutions", "expected an array of integers");
        c.resolutions.clear();
        for (const auto& x : r) {
            if (!x.is_number_integer()) config_error("resolutions", "expected integers");
            c.resolutions.push_back(x.get<int>());
        }
    }
    if (j.contains("extra_resolutions"))
        c.extra_resolutions = int_at(j, "extra_resolutions", "");
    if (j.contains("project_vertices")) {
        if (!j["project_vertices"].is_boolean()) config_error("project_vertices", "expected a boolean");
        c.project_vertices = j["project_vertices"].get<bool>();
    }
    if (j.contains("norm_variant")) {
        const std::string v = j["norm_variant"].is_string() ? j["norm_variant"].get<std::string>() : "";
        if (v == "plain")
            c.norm_variant = NormVariant::plain;
        else if (v == "rms")
            c.norm_variant = NormVariant::rms;
        else
            config_error("norm_variant", "expected \"plain\" or \"rms\"");
    }
    if (j.contains("output_dir")) c.output_dir = j["output_dir"].get<std::string>();
    if (j.contains("field_resolution")) c.field_resolution = int_at(j, "field_resolution", "");

    if (j.contains("eval_sets")) {
        const auto& sets = j["eval_sets"];
        if (!sets.is_array()) config_error("eval_sets", "expected an array");
        c.eval_sets_2d.clear();
        c.eval_sets_3d.clear();
        for (std::size_t i = 0; i < sets.size(); ++i) {
            const std::string path = "eval_sets[" + std::to_string(i) + "]";
            if (dim == 2)
                c.eval_sets_2d.push_back(eval_set_from<2>(sets[i], path));
            else
                c.eval_sets_3d.push_back(eval_set_from<3>(sets[i], path));
        }
    }
    if (j.contains("grid")) {
        if (dim == 2)
            c.grid_2d = grid_from<2>(j["grid"]);
        else
            c.grid_3d = grid_from<3>(j["grid"]);
    }
    if (j.contains("trace")) {
        if (dim == 2)
            c.trace_2d = trace_from<2>(j["trace"]);
        else
            c.trace_3d = trace_from<3>(j["trace"]);
    }
    validate(c);
    return c;
}

StudyConfig load_config(const std::filesystem::path& path, std::optional<int> dimension) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return parse_config(j, dimension);
}

json to_json(const StudyConfig& c) {
    json j;
    j["dimension"] = c.dimension;
    j["material"] = {{"E", c.young_modulus}, {"nu", c.poisson_ratio}};
    j["Q"] = c.magnitude;
    j["cell"] = {{"center", c.center}, {"radius", c.radius}};
    j["resolutions"] = c.resolutions;
    j["extra_resolutions"] = c.extra_resolutions;
    j["project_vertices"] = c.project_vertices;
    j["norm_variant"] = norm_name(c.norm_variant);
    j["output_dir"] = c.output_dir.string();
    if (c.field_resolution) j["field_resolution"] = *c.field_resolution;
    json sets = json::array();
    if (c.dimension == 2) {
        for (const auto& s : c.eval_sets_2d) sets.push_back(eval_set_json(s));
        if (c.grid_2d) j["grid"] = grid_json(*c.grid_2d);
        if (c.trace_2d) j["trace"] = trace_json(*c.trace_2d);
    } else {
        for (const auto& s : c.eval_sets_3d) sets.push_back(eval_set_json(s));
        if (c.grid_3d) j["grid"] = grid_json(*c.grid_3d);
        if (c.trace_3d) j["trace"] = trace_json(*c.trace_3d);
    }
    j["eval_sets"] = sets;
    return j;
}

void validate(const StudyConfig& c) {
    if (c.dimension != 2 && c.dimension != 3) config_error("dimension", "must be 2 or 3");
    if (c.center.size() != static_cast<std::size_t>(c.dimension))
        config_error("cell.center", "dimension mismatch");
    if (!(c.radius > 0.0)) config_error("cell.radius", "must be positive");
    if (c.resolutions.empty()) config_error("resolutions", "must not be empty");
    for (std::size_t i = 0; i < c.resolutions.size(); ++i) {
        const int r = c.resolutions[i];
        if (c.dimension == 2 && r < 3) config_error("resolutions", "2D segment counts must be >= 3");
        if (c.dimension == 3 && (r < 0 || r > 10))
            config_error("resolutions", "3D refinement levels must lie in [0, 10]");
        if (i > 0 && r <= c.resolutions[i - 1])
            config_error("resolutions", "must be strictly increasing");
    }
    if (c.extra_resolutions < 0) config_error("extra_resolutions", "must be non-negative");
    if (c.dimension == 3 && c.resolutions.back() + c.extra_resolutions > 10)
        config_error("extra_resolutions", "would exceed refinement level 10");
    const std::size_t nsets = c.dimension == 2 ? c.eval_sets_2d.size() : c.eval_sets_3d.size();
    if (nsets == 0) config_error("eval_sets", "must not be empty");
    if (c.field_resolution) {
        if (c.dimension == 2 && *c.field_resolution < 3)
            config_error("field_resolution", "must be >= 3");
        if (c.dimension == 3 && (*c.field_resolution < 0 || *c.field_resolution > 10))
            config_error("field_resolution", "must lie in [0, 10]");
    }
}

std::vector<int> study_resolutions(const StudyConfig& c) {
    std::vector<int> r = c.resolutions;
    for (int k = 0; k < c.extra_resolutions; ++k)
        r.push_back(c.dimension == 2 ? 2 * r.back() : r.back() + 1);
    return r;
}

std::vector<Vec3> sphere_points(const SphereSample& s) {
    if (s.count < 0) throw ParameterError("sphere sample count must be non-negative");
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    std::vector<Vec3> pts;
    pts.reserve(static_cast<std::size_t>(s.count));
    for (int i = 0; i < s.count; ++i) {
        const double z = 1.0 - 2.0 * (i + 0.5) / s.count;
        const double rho = std::sqrt(1.0 - z * z);
        const double phi = golden * i;
        pts.push_back(s.center + s.radius * Vec3{{rho * std::cos(phi), rho * std::sin(phi), z}});
    }
    return pts;
}

// ---------------------------------------------------------------- studies

bool StudyReport::ok() const {
    for (const auto& s : sets)
        for (const auto& e : s.errors)
            if (!e.empty()) return false;
    return true;
}

StudyReport run_study2d(const StudyConfig& config) { return run_study<2>(config); }
StudyReport run_study3d(const StudyConfig& config) { return run_study<3>(config); }

std::string render_table_csv(const EvalSetReport& set) {
    CsvTable t({"resolution", "norm_plain", "norm_rms", "q", "std"});
    for (std::size_t k = 0; k < set.rows.size(); ++k) {
        const auto& row = set.rows[k];
        t.row({std::to_string(row.resolution), format_number(set.norms[k].plain),
               format_number(set.norms[k].rms), row.q ? format_number(*row.q) : "",
               row.std ? format_number(*row.std) : ""});
    }
    return t.str();
}

json report_json(const StudyReport& report) {
    auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
    auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
    json j;
    j["tool"] = kToolVersion;
    j["config"] = to_json(report.config);
    j["mesh_mapping"] = mesh_mapping(report.config);
    j["resolutions"] = report.resolutions;
    j["station_counts"] = report.station_counts;
    j["mesh_h"] = report.mesh_h;
    json sets = json::array();
    for (const auto& s : report.sets) {
        json js;
        js["name"] = s.name;
        js["kind"] = s.kind;
        js["theory_violating"] = s.theory_violating;
        js["min_clearance"] = num(s.min_clearance);
        js["sample_count"] = s.sample_count;
        json rows = json::array();
        for (std::size_t k = 0; k < s.rows.size(); ++k) {
            json r;
            r["resolution"] = s.rows[k].resolution;
            r["norm_plain"] = num(s.norms[k].plain);
            r["norm_rms"] = num(s.norms[k].rms);
            r["q"] = opt(s.rows[k].q);
            r["std"] = opt(s.rows[k].std);
            r["std_unaligned"] = opt(s.std_unaligned[k]);
            if (!s.errors[k].empty()) r["error"] = s.errors[k];
            rows.push_back(r);
        }
        js["rows"] = rows;
        sets.push_back(js);
    }
    j["eval_sets"] = sets;
    j["ok"] = report.ok();
    return j;
}

std::vector<std::filesystem::path> write_study(const StudyReport& report) {
    const auto& dir = report.config.output_dir;
    std::vector<std::filesystem::path> files;
    for (std::size_t i = 0; i < report.sets.size(); ++i) {
        const auto& s = report.sets[i];
        std::filesystem::path p;
        if (report.config.dimension == 2)
            p = dir / (i == 0 ? std::string("table2.csv") : "table2_" + s.name + ".csv");
        else
            p = dir / ("table3_" + s.name + ".csv");
        write_file_atomic(p, render_table_csv(s));
        files.push_back(p);
    }
    write_file_atomic(dir / "report.json", report_json(report).dump(2) + "\n");
    files.push_back(dir / "report.json");
    const json timing{{"wall_seconds", report.wall_seconds}, {"threads", report.threads}};
    write_file_atomic(dir / "timing.json", timing.dump(2) + "\n");
    files.push_back(dir / "timing.json");
    return files;
}

template <std::size_t D>
std::string render_mesh_csv(std::span<const ForceStation<D>> stations) {
    auto header = coord_header<D>("");
    for (auto& h : coord_header<D>("n")) header.push_back(h);
    header.push_back("Q");
    header.push_back("measure");
    CsvTable t(header);
    for (const auto& st : stations) {
        std::vector<double> row;
        append(row, st.position);
        append(row, st.normal);
        row.push_back(st.magnitude);
        row.push_back(st.measure);
        t.row(row);
    }
    return t.str();
}

template <std::size_t D>
std::string render_field_csv(std::span<const FieldSample<D>> samples) {
    auto header = coord_header<D>("");
    for (auto& h : coord_header<D>("u")) header.push_back(h);
    header.push_back("clearance");
    CsvTable t(header);
    for (const auto& s : samples) {
        std::vector<double> row;
        append(row, s.point);
        append(row, s.displacement);
        row.push_back(s.min_station_distance);
        t.row(row);
    }
    return t.str();
}

template <std::size_t D>
std::string render_trace_csv(std::span<const TraceSample<D>> samples) {
    auto header = coord_header<D>("");
    for (auto& h : coord_header<D>("v")) header.push_back(h);
    CsvTable t(header);
    for (const auto& s : samples) {
        std::vector<double> row;
        append(row, s.point);
        append(row, s.value);
        t.row(row);
    }
    return t.str();
}

template std::string render_mesh_csv<2>(std::span<const ForceStation2>);
template std::string render_mesh_csv<3>(std::span<const ForceStation3>);
template std::string render_field_csv<2>(std::span<const FieldSample2>);
template std::string render_field_csv<3>(std::span<const FieldSample3>);
template std::string render_trace_csv<2>(std::span<const TraceSample<2>>);
template std::string render_trace_csv<3>(std::span<const TraceSample<3>>);

FieldRun run_field(const StudyConfig& config) {
    validate(config);
    return config.dimension == 2 ? run_field_impl<2>(config) : run_field_impl<3>(config);
}

FieldRun run_trace(const StudyConfig& config) {
    validate(config);
    return config.dimension == 2 ? run_trace_impl<2>(config) : run_trace_impl<3>(config);
}

}  // namespace kelvin
