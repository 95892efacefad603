#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "kelvin/errors.hpp"
#include "kelvin/study.hpp"

using namespace kelvin;
using doctest::Approx;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("kelvin_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<double>> read_csv(const fs::path& p, std::string* header = nullptr) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    if (header) *header = line;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            row.push_back(cell.empty() ? std::nan("") : std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

StudyConfig small2d() {
    auto c = default_config(2);
    c.resolutions = {10, 20, 40};
    c.extra_resolutions = 0;
    return c;
}

template <class F>
void check_config_error(F&& f, const std::string& key) {
    try {
        f();
        FAIL("expected ConfigError for " << key);
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find(key) != std::string::npos);
    }
}

}  // namespace

TEST_CASE("config JSON round trip") {
    for (int dim : {2, 3}) {
        auto c = default_config(dim);
        c.field_resolution = dim == 2 ? 33 : 2;
        c.norm_variant = NormVariant::plain;
        const auto j = to_json(c);
        CHECK(to_json(parse_config(j)) == j);
    }
}

TEST_CASE("partial config fills defaults") {
    const auto c = parse_config(nlohmann::json::parse(R"({"Q": 2000, "material": {"nu": 0.3}})"));
    CHECK(c.dimension == 2);
    CHECK(c.magnitude == 2000.0);
    CHECK(c.poisson_ratio == 0.3);
    CHECK(c.young_modulus == 1.0e7);
    CHECK(c.eval_sets_2d.size() == 1);
    CHECK(study_resolutions(c) == std::vector<int>{10, 20, 40, 80, 160, 320});
    CHECK(study_resolutions(default_config(3)) == std::vector<int>{1, 2, 3, 4, 5, 6});
}

TEST_CASE("config validation names the offending key") {
    using nlohmann::json;
    check_config_error([] { parse_config(json::parse(R"({"resolutions": [10, 10]})")); },
                       "resolutions");
    check_config_error([] { parse_config(json::parse(R"({"resolutions": [2, 4]})")); },
                       "resolutions");
    check_config_error(
        [] { parse_config(json::parse(R"({"dimension": 3, "resolutions": [1, 11]})")); },
        "resolutions");
    check_config_error([] { parse_config(json::parse(R"({"eval_sets": []})")); }, "eval_sets");
    check_config_error([] { parse_config(json::parse(R"({"norm_variant": "weighted"})")); },
                       "norm_variant");
    check_config_error([] { parse_config(json::parse(R"({"cell": {"radius": -1}})")); },
                       "cell.radius");
    check_config_error([] { parse_config(json::parse(R"({"dimension": 3})"), 2); }, "dimension");
    check_config_error(
        [] {
            parse_config(json::parse(R"({"eval_sets": [{"name": "s", "type": "blob"}]})"));
        },
        "eval_sets[0]");
    CHECK_THROWS_AS(load_config("/nonexistent/kelvin.json"), ConfigError);
}

TEST_CASE("doubling Q doubles every norm and keeps q") {
    auto a = small2d();
    auto b = small2d();
    b.magnitude = 2.0 * a.magnitude;
    const auto ra = run_study2d(a);
    const auto rb = run_study2d(b);
    REQUIRE(ra.sets[0].rows.size() == 3);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(rb.sets[0].norms[k].plain == 2.0 * ra.sets[0].norms[k].plain);
        CHECK(rb.sets[0].rows[k].q == ra.sets[0].rows[k].q);
    }
}

TEST_CASE("study outputs are byte-deterministic") {
    auto c = small2d();
    c.output_dir = scratch("det");
    const auto files = write_study(run_study2d(c));
    std::vector<std::string> first;
    for (const auto& f : files) first.push_back(slurp(f));
    REQUIRE(write_study(run_study2d(c)) == files);
    for (std::size_t i = 0; i < files.size(); ++i) {
        if (files[i].filename() == "timing.json") continue;
        CHECK(slurp(files[i]) == first[i]);
    }
    CHECK(slurp(files[0]).find("10,") == std::string("resolution,norm_plain,norm_rms,q,std\n").size());
    std::string header;
    const auto rows = read_csv(fs::path(c.output_dir) / "table2.csv", &header);
    CHECK(header == "resolution,norm_plain,norm_rms,q,std");
    CHECK(rows.size() == 3);
}

TEST_CASE("circle set reports aligned and unaligned STD") {
    const auto r = run_study2d(small2d());
    const auto& s = r.sets[0];
    CHECK_FALSE(s.theory_violating);
    CHECK(s.sample_count == 1024);
    for (std::size_t k = 0; k < 3; ++k) {
        REQUIRE(s.rows[k].std);
        REQUIRE(s.std_unaligned[k]);
        CHECK(*s.std_unaligned[k] >= 0.0);
    }
    CHECK(*s.rows[2].std < *s.rows[0].std);
}

TEST_CASE("intersecting sets are flagged and singular rows recorded") {
    auto c = default_config(3);
    c.resolutions = {0, 1, 2};
    c.eval_sets_3d = {
        {"through", SegmentSet<3>{{{0.0, 0.0, -1.0}}, {{0.0, 0.0, 1.0}}, 16}, false},
        {"far", PointSet<3>{{{2.0, 0.0, 0.0}}}, false},
    };
    const auto r = run_study3d(c);
    CHECK(r.sets[0].theory_violating);
    CHECK_FALSE(r.sets[1].theory_violating);
    CHECK(r.ok());

    // A sample sitting on a level-0 station cannot be evaluated at that level.
    const auto mesh = make_icosphere({{0.0, 0.0, 0.0}}, 0.1, 0, 1.0);
    c.eval_sets_3d = {{"hit", PointSet<3>{mesh.stations()[3].position}, false}};
    const auto bad = run_study3d(c);
    CHECK_FALSE(bad.ok());
    CHECK_FALSE(bad.sets[0].errors[0].empty());
    CHECK(std::isnan(bad.sets[0].norms[0].plain));
    CHECK(bad.sets[0].errors[1].empty());
}

TEST_CASE("field export") {
    auto c = small2d();
    c.output_dir = scratch("field");
    const auto run = run_field(c);
    CHECK(run.written == 100);
    CHECK(run.skipped == 0);
    std::string header;
    const auto rows = read_csv(fs::path(c.output_dir) / "field.csv", &header);
    CHECK(header == "x,y,ux,uy,clearance");
    CHECK(rows.size() == 100);
    const auto mesh = read_csv(fs::path(c.output_dir) / "boundary.csv", &header);
    CHECK(header == "x,y,nx,ny,Q,measure");
    CHECK(mesh.size() == 40);
}

TEST_CASE("trace export matches the norm and handles empty boundaries") {
    auto c = small2d();
    c.output_dir = scratch("trace");
    run_trace(c);
    std::string header;
    const auto rows = read_csv(fs::path(c.output_dir) / "trace.csv", &header);
    CHECK(header == "x,y,vx,vy");
    REQUIRE(rows.size() == 1024);
    const double w = 2.0 * 0.5 * std::sin(std::numbers::pi / 1024);
    double sum = 0.0;
    for (const auto& r : rows) sum += (r[2] * r[2] + r[3] * r[3]) * w;
    const auto study = run_study2d(c);
    const double n = study.sets[0].norms.back().plain;
    CHECK(sum == Approx(n * n).epsilon(1e-12));
    // Pulling forces: the negated field points away from the cell.
    for (const auto& r : rows) CHECK(r[0] * r[2] + r[1] * r[3] > 0.0);

    c.trace_2d = TraceSpec<2>{};
    c.output_dir = scratch("trace_empty");
    CHECK(run_trace(c).written == 0);
    CHECK(slurp(fs::path(c.output_dir) / "trace.csv") == "x,y,vx,vy\n");
}

TEST_CASE("3D trace on a sphere") {
    auto c = default_config(3);
    c.resolutions = {1, 2};
    c.output_dir = scratch("trace3");
    CHECK(run_trace(c).written == 256);
    std::string header;
    const auto rows = read_csv(fs::path(c.output_dir) / "trace.csv", &header);
    CHECK(header == "x,y,z,vx,vy,vz");
    for (const auto& r : rows) CHECK(std::hypot(r[0], r[1], r[2]) == Approx(0.5));
}
