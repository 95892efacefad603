#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "kelvin/vec.hpp"

namespace kelvin {

/// A point of force application on a discretized cell boundary.
///
/// `magnitude` is force per unit measure; `measure` is the segment length (2D)
/// or triangle area (3D) the station stands for; `normal` is the unit normal
/// pointing into the cell.
template <std::size_t D>
struct ForceStation {
    Vec<D> position;
    Vec<D> normal;
    double magnitude = 0.0;
    double measure = 0.0;
};

using ForceStation2 = ForceStation<2>;
using ForceStation3 = ForceStation<3>;

/// Force magnitude as a function of station position.
template <std::size_t D>
using MagnitudeFn = std::function<double(const Vec<D>&)>;

template <std::size_t D>
MagnitudeFn<D> constant_magnitude(double q) {
    return [q](const Vec<D>&) { return q; };
}

/// Regular polygon inscribed in a circle, counter-clockwise, one station per edge.
class BoundaryMesh2D {
public:
    static constexpr std::size_t dim = 2;

    BoundaryMesh2D(Vec2 center, double radius, std::vector<Vec2> vertices,
                   std::vector<ForceStation2> stations)
        : center_(center), radius_(radius), vertices_(std::move(vertices)),
          stations_(std::move(stations)) {}

    const Vec2& center() const noexcept { return center_; }
    double radius() const noexcept { return radius_; }
    std::span<const Vec2> vertices() const noexcept { return vertices_; }
    std::span<const ForceStation2> stations() const noexcept { return stations_; }
    std::size_t size() const noexcept { return stations_.size(); }

private:
    Vec2 center_;
    double radius_;
    std::vector<Vec2> vertices_;
    std::vector<ForceStation2> stations_;
};

using Triangle = std::array<std::uint32_t, 3>;

/// Triangulated sphere, one station per triangle (centroid, inward normal, area).
class SurfaceMesh3D {
public:
    static constexpr std::size_t dim = 3;

    SurfaceMesh3D(Vec3 center, double radius, std::vector<Vec3> vertices,
                  std::vector<Triangle> triangles, std::vector<ForceStation3> stations,
                  int level)
        : center_(center), radius_(radius), vertices_(std::move(vertices)),
          triangles_(std::move(triangles)), stations_(std::move(stations)), level_(level) {}

    const Vec3& center() const noexcept { return center_; }
    double radius() const noexcept { return radius_; }
    std::span<const Vec3> vertices() const noexcept { return vertices_; }
    std::span<const Triangle> triangles() const noexcept { return triangles_; }
    std::span<const ForceStation3> stations() const noexcept { return stations_; }
    std::size_t size() const noexcept { return stations_.size(); }
    int refinement_level() const noexcept { return level_; }

private:
    Vec3 center_;
    double radius_;
    std::vector<Vec3> vertices_;
    std::vector<Triangle> triangles_;
    std::vector<ForceStation3> stations_;
    int level_;
};

BoundaryMesh2D make_circle_boundary(const Vec2& center, double radius, int segments,
                                    const MagnitudeFn<2>& magnitude);
BoundaryMesh2D make_circle_boundary(const Vec2& center, double radius, int segments,
                                    double magnitude);

/// Icosphere: a regular icosahedron inscribed in the sphere, refined `level`
/// times by 4-to-1 midpoint splitting. New vertices are projected radially
/// onto the sphere unless `project` is false.
///
/// Vertex indices are stable across levels: the vertices of level k are the
/// first vertices of level k+1.
SurfaceMesh3D make_icosphere(const Vec3& center, double radius, int level,
                             const MagnitudeFn<3>& magnitude, bool project = true);
SurfaceMesh3D make_icosphere(const Vec3& center, double radius, int level, double magnitude,
                             bool project = true);

/// Largest element diameter: segment length (2D), longest triangle edge (3D).
double mesh_h(const BoundaryMesh2D& mesh);
double mesh_h(const SurfaceMesh3D& mesh);

/// Sum of station measures (polygon perimeter or polyhedron area).
template <std::size_t D>
double total_measure(std::span<const ForceStation<D>> stations) {
    double s = 0.0;
    for (const auto& st : stations) s += st.measure;
    return s;
}

}  // namespace kelvin
