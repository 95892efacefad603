#include <cmath>
#include <numbers>
#include <set>
#include <utility>

#include "doctest.h"
#include "kelvin/errors.hpp"
#include "kelvin/geometry.hpp"

using namespace kelvin;
using doctest::Approx;

TEST_CASE("square inscribed in radius 0.3") {
    const auto mesh = make_circle_boundary({{0.0, 0.0}}, 0.3, 4, 1.0);
    REQUIRE(mesh.size() == 4);
    CHECK(total_measure<2>(mesh.stations()) == Approx(1.69706).epsilon(1e-5));
    CHECK(mesh_h(mesh) == Approx(0.3 * std::sqrt(2.0)));
    // First station: midpoint of (0.3, 0)-(0, 0.3), normal toward the origin.
    const auto& s = mesh.stations()[0];
    CHECK(s.position[0] == Approx(0.15));
    CHECK(s.position[1] == Approx(0.15));
    CHECK(s.normal[0] == Approx(-std::sqrt(0.5)));
    CHECK(s.normal[1] == Approx(-std::sqrt(0.5)));
}

TEST_CASE("polygon stations: inward unit normals, closedness, perimeter limit") {
    const Vec2 c{{1.5, -0.7}};
    const auto mesh = make_circle_boundary(c, 0.3, 360, [](const Vec2& x) { return x[0]; });
    Vec2 flux{};
    for (const auto& s : mesh.stations()) {
        CHECK(norm(s.normal) == Approx(1.0).epsilon(1e-15));
        CHECK(dot(s.normal, c - s.position) > 0.0);
        CHECK(distance(s.position, c) < 0.3);
        CHECK(s.magnitude == s.position[0]);
        flux += s.measure * s.normal;
    }
    CHECK(norm(flux) < 1e-14);
    const double p = total_measure<2>(mesh.stations());
    CHECK(p < 2.0 * std::numbers::pi * 0.3);
    CHECK(p == Approx(2.0 * std::numbers::pi * 0.3).epsilon(1e-4));
}

TEST_CASE("polygon parameter errors") {
    CHECK_THROWS_AS(make_circle_boundary({{0.0, 0.0}}, 0.3, 2, 1.0), ParameterError);
    CHECK_THROWS_AS(make_circle_boundary({{0.0, 0.0}}, 0.0, 8, 1.0), ParameterError);
    CHECK_THROWS_AS(make_circle_boundary({{0.0, 0.0}}, -1.0, 8, 1.0), ParameterError);
}

TEST_CASE("level-0 icosphere is the icosahedron") {
    const auto mesh = make_icosphere({{0.0, 0.0, 0.0}}, 1.0, 0, 1.0);
    CHECK(mesh.vertices().size() == 12);
    CHECK(mesh.triangles().size() == 20);
    std::set<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (const auto& t : mesh.triangles())
        for (int k = 0; k < 3; ++k) {
            const auto a = t[k], b = t[(k + 1) % 3];
            edges.insert({std::min(a, b), std::max(a, b)});
        }
    CHECK(edges.size() == 30);
    CHECK(mesh_h(mesh) == Approx(1.05146).epsilon(1e-5));
    CHECK(mesh.refinement_level() == 0);
}

TEST_CASE("icosphere refinement") {
    const Vec3 c{{0.2, -0.1, 0.4}};
    const double r = 0.1;
    double prev_h = 0.0;
    for (int level = 0; level <= 4; ++level) {
        const auto mesh = make_icosphere(c, r, level, 2.0);
        CHECK(mesh.size() == 20u << (2 * level));
        for (const auto& v : mesh.vertices()) CHECK(std::abs(distance(v, c) - r) <= 1e-12 * r);
        Vec3 flux{};
        for (const auto& s : mesh.stations()) {
            CHECK(norm(s.normal) == Approx(1.0).epsilon(1e-15));
            CHECK(dot(s.normal, c - s.position) > 0.0);
            CHECK(distance(s.position, c) < r);
            CHECK(s.magnitude == 2.0);
            flux += s.measure * s.normal;
        }
        CHECK(norm(flux) < 1e-15);
        const double h = mesh_h(mesh);
        // Projection makes the first halvings coarser; the ratio settles from level 3.
        if (level >= 3) {
            CHECK(h / prev_h >= 0.48);
            CHECK(h / prev_h <= 0.52);
        }
        prev_h = h;
        if (level == 2)
            CHECK(total_measure<3>(mesh.stations()) ==
                  Approx(4.0 * std::numbers::pi * r * r).epsilon(0.01));
    }
}

TEST_CASE("icosphere vertices are nested across levels") {
    const auto a = make_icosphere({{0.0, 0.0, 0.0}}, 1.0, 2, 1.0);
    const auto b = make_icosphere({{0.0, 0.0, 0.0}}, 1.0, 3, 1.0);
    REQUIRE(b.vertices().size() > a.vertices().size());
    for (std::size_t i = 0; i < a.vertices().size(); ++i) CHECK(a.vertices()[i] == b.vertices()[i]);
}

TEST_CASE("unprojected refinement keeps the flat icosahedron faces") {
    const auto flat = make_icosphere({{0.0, 0.0, 0.0}}, 1.0, 3, 1.0, false);
    const auto ico = make_icosphere({{0.0, 0.0, 0.0}}, 1.0, 0, 1.0);
    CHECK(total_measure<3>(flat.stations()) ==
          Approx(total_measure<3>(ico.stations())).epsilon(1e-13));
}

TEST_CASE("icosphere parameter errors") {
    CHECK_THROWS_AS(make_icosphere({{0.0, 0.0, 0.0}}, 1.0, -1, 1.0), ParameterError);
    CHECK_THROWS_AS(make_icosphere({{0.0, 0.0, 0.0}}, 1.0, 13, 1.0), ParameterError);
    CHECK_THROWS_AS(make_icosphere({{0.0, 0.0, 0.0}}, 0.0, 1, 1.0), ParameterError);
}
