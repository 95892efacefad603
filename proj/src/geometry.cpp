#include "kelvin/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <unordered_map>

#include "kelvin/errors.hpp"

namespace kelvin {
namespace {

void require_radius(double radius) {
    if (!std::isfinite(radius) || radius <= 0.0) {
        std::ostringstream msg;
        msg << "cell radius must be positive, got " << radius;
        throw ParameterError(msg.str());
    }
}

// Unit normal rotated from the tangent, flipped toward the center if needed.
Vec2 inward_normal(const Vec2& a, const Vec2& b, const Vec2& center) {
    const Vec2 t = b - a;
    Vec2 n{{-t[1], t[0]}};
    n = n / norm(n);
    if (dot(n, center - (a + b) * 0.5) < 0.0) n = -n;
    return n;
}

ForceStation3 triangle_station(const Vec3& p0, const Vec3& p1, const Vec3& p2,
                               const Vec3& center, const MagnitudeFn<3>& magnitude) {
    ForceStation3 st;
    st.position = (p0 + p1 + p2) / 3.0;
    const Vec3 c = cross(p1 - p0, p2 - p0);
    const double twice_area = norm(c);
    st.measure = 0.5 * twice_area;
    st.normal = c / twice_area;
    if (dot(st.normal, center - st.position) < 0.0) st.normal = -st.normal;
    st.magnitude = magnitude(st.position);
    return st;
}

// Regular icosahedron with unit circumradius.
void unit_icosahedron(std::vector<Vec3>& vertices, std::vector<Triangle>& triangles) {
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    vertices = {
        {{-1, t, 0}}, {{1, t, 0}},  {{-1, -t, 0}}, {{1, -t, 0}},
        {{0, -1, t}}, {{0, 1, t}},  {{0, -1, -t}}, {{0, 1, -t}},
        {{t, 0, -1}}, {{t, 0, 1}},  {{-t, 0, -1}}, {{-t, 0, 1}},
    };
    for (auto& v : vertices) v = v / norm(v);
    triangles = {
        {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
        {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
        {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
        {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1},
    };
}

}  // namespace

BoundaryMesh2D make_circle_boundary(const Vec2& center, double radius, int segments,
                                    const MagnitudeFn<2>& magnitude) {
    require_radius(radius);
    if (segments < 3) {
        std::ostringstream msg;
        msg << "a closed polygon needs at least 3 segments, got " << segments;
        throw ParameterError(msg.str());
    }
    const auto m = static_cast<std::size_t>(segments);

    std::vector<Vec2> vertices(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(j) / segments;
        vertices[j] = center + radius * Vec2{{std::cos(angle), std::sin(angle)}};
    }

    std::vector<ForceStation2> stations(m);
    for (std::size_t j = 0; j < m; ++j) {
        const Vec2& a = vertices[j];
        const Vec2& b = vertices[(j + 1) % m];
        auto& st = stations[j];
        st.position = (a + b) * 0.5;
        st.normal = inward_normal(a, b, center);
        st.measure = distance(a, b);
        st.magnitude = magnitude(st.position);
    }
    return BoundaryMesh2D(center, radius, std::move(vertices), std::move(stations));
}

BoundaryMesh2D make_circle_boundary(const Vec2& center, double radius, int segments,
                                    double magnitude) {
    return make_circle_boundary(center, radius, segments, constant_magnitude<2>(magnitude));
}

SurfaceMesh3D make_icosphere(const Vec3& center, double radius, int level,
                             const MagnitudeFn<3>& magnitude, bool project) {
    require_radius(radius);
    if (level < 0 || level > 12) {
        std::ostringstream msg;
        msg << "refinement level must lie in [0, 12], got " << level;
        throw ParameterError(msg.str());
    }

    // Built on the unit sphere at the origin, then mapped.
    std::vector<Vec3> unit;
    std::vector<Triangle> tris;
    unit_icosahedron(unit, tris);

    for (int k = 0; k < level; ++k) {
        std::unordered_map<std::uint64_t, std::uint32_t> midpoint;
        midpoint.reserve(tris.size() * 3 / 2);
        unit.reserve(unit.size() + tris.size() * 3 / 2);
        auto split = [&](std::uint32_t a, std::uint32_t b) {
            const std::uint64_t key = (std::uint64_t{std::min(a, b)} << 32) | std::max(a, b);
            auto [it, inserted] = midpoint.try_emplace(key, 0u);
            if (inserted) {
                Vec3 p = (unit[a] + unit[b]) * 0.5;
                if (project) p = p / norm(p);
                it->second = static_cast<std::uint32_t>(unit.size());
                unit.push_back(p);
            }
            return it->second;
        };

        std::vector<Triangle> next;
        next.reserve(tris.size() * 4);
        for (const auto& [a, b, c] : tris) {
            const auto ab = split(a, b);
            const auto bc = split(b, c);
            const auto ca = split(c, a);
            next.push_back({a, ab, ca});
            next.push_back({b, bc, ab});
            next.push_back({c, ca, bc});
            next.push_back({ab, bc, ca});
        }
        tris = std::move(next);
    }

    std::vector<Vec3> vertices(unit.size());
    for (std::size_t i = 0; i < unit.size(); ++i) vertices[i] = center + radius * unit[i];

    std::vector<ForceStation3> stations;
    stations.reserve(tris.size());
    for (const auto& [a, b, c] : tris)
        stations.push_back(triangle_station(vertices[a], vertices[b], vertices[c], center, magnitude));

    return SurfaceMesh3D(center, radius, std::move(vertices), std::move(tris), std::move(stations),
                         level);
}

SurfaceMesh3D make_icosphere(const Vec3& center, double radius, int level, double magnitude,
                             bool project) {
    return make_icosphere(center, radius, level, constant_magnitude<3>(magnitude), project);
}

double mesh_h(const BoundaryMesh2D& mesh) {
    double h = 0.0;
    for (const auto& st : mesh.stations()) h = std::max(h, st.measure);
    return h;
}

double mesh_h(const SurfaceMesh3D& mesh) {
    const auto v = mesh.vertices();
    double h = 0.0;
    for (const auto& [a, b, c] : mesh.triangles())
        h = std::max({h, distance(v[a], v[b]), distance(v[b], v[c]), distance(v[c], v[a])});
    return h;
}

}  // namespace kelvin
