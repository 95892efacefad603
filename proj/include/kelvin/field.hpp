#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kelvin/geometry.hpp"
#include "kelvin/material.hpp"
#include "kelvin/vec.hpp"

namespace kelvin {

/// Relative clearance (in units of the cell radius) below which field
/// evaluation is refused.
inline constexpr double kFieldClearanceFactor = 1e-6;

template <std::size_t D>
struct FieldSample {
    Vec<D> point;
    Vec<D> displacement;
    double min_station_distance = 0.0;
};

using FieldSample2 = FieldSample<2>;
using FieldSample3 = FieldSample<3>;

/// Smallest distance from `x` to any station position.
template <std::size_t D>
double min_station_distance(std::span<const ForceStation<D>> stations, const Vec<D>& x);

/// Superposed discrete field  u(x) = sum_j Q_j G(x, x_j) n_j |Gamma_j|.
///
/// Stations are summed in index order. Throws SingularityError carrying the
/// offending station index if x is closer than `min_clearance` to a station.
template <std::size_t D>
FieldSample<D> field_sum(std::span<const ForceStation<D>> stations, const Material& mat,
                         const Vec<D>& x, double min_clearance);

FieldSample2 field_sum(const BoundaryMesh2D& mesh, const Material& mat, const Vec2& x);
FieldSample3 field_sum(const SurfaceMesh3D& mesh, const Material& mat, const Vec3& x);

/// Clearance used for a mesh: kFieldClearanceFactor * radius.
template <class Mesh>
double field_clearance(const Mesh& mesh) {
    return kFieldClearanceFactor * mesh.radius();
}

// Batch evaluation kernels. Both produce bitwise identical results: each
// point is an independent sequential station sum, so the degree of
// parallelism never changes the arithmetic. When any point fails, the error
// of the lowest failing index is rethrown.

/// Reference implementation: one thread, points in order.
template <std::size_t D>
std::vector<FieldSample<D>> evaluate_serial(std::span<const ForceStation<D>> stations,
                                            const Material& mat, std::span<const Vec<D>> points,
                                            double min_clearance);

/// OpenMP over points.
template <std::size_t D>
std::vector<FieldSample<D>> evaluate_parallel(std::span<const ForceStation<D>> stations,
                                              const Material& mat, std::span<const Vec<D>> points,
                                              double min_clearance);

template <class Mesh, std::size_t D = Mesh::dim>
std::vector<FieldSample<D>> evaluate(const Mesh& mesh, const Material& mat,
                                     std::span<const Vec<D>> points) {
    return evaluate_parallel<D>(mesh.stations(), mat, points, field_clearance(mesh));
}

/// Rectangular lattice: node (i, j) = corner + i/(n1-1) e1 + j/(n2-1) e2,
/// with a single node at `corner` along an axis of count 1.
template <std::size_t D>
struct GridSpec {
    Vec<D> corner;
    Vec<D> e1;
    Vec<D> e2;
    int n1 = 1;
    int n2 = 1;
};

/// Lattice nodes in row-major order (j outer, i inner).
template <std::size_t D>
std::vector<Vec<D>> grid_points(const GridSpec<D>& grid);

template <std::size_t D>
struct GridResult {
    std::vector<FieldSample<D>> samples;  ///< row-major, clearance violators removed
    std::vector<Vec<D>> skipped;
};

template <class Mesh, std::size_t D = Mesh::dim>
GridResult<D> field_grid(const Mesh& mesh, const Material& mat, const GridSpec<D>& grid);

/// Exact circle or sphere carrying a continuous inward normal load.
template <std::size_t D>
struct RoundBoundary {
    Vec<D> center;
    double radius = 1.0;
    MagnitudeFn<D> magnitude;
};

using CircleBoundary = RoundBoundary<2>;
using SphereBoundary = RoundBoundary<3>;

struct OracleOptions {
    double rel_tol = 1e-10;
    int start_segments = 16;      ///< 2D: first polygon, doubled each step
    int max_segments = 1 << 21;   ///< 2D resource cap
    int start_level = 2;          ///< 3D: first icosphere level
    int max_level = 8;            ///< 3D resource cap
};

template <std::size_t D>
struct OracleResult {
    FieldSample<D> sample;
    int final_resolution = 0;  ///< segments (2D) or refinement level (3D)
    double error_estimate = 0.0;
};

/// High-resolution approximation of the continuous boundary integral
///   u(x) = \oint Q G(x, x') n(x') dGamma'
/// by Richardson extrapolation (Romberg tableau in h^2, h^4, ...) of the
/// discrete sum over successively doubled polygons / refined icospheres.
/// Stops when consecutive diagonal extrapolants agree to rel_tol relative.
/// Throws ConvergenceError at the resource cap and SingularityError when a
/// point lies within kFieldClearanceFactor * radius of the exact boundary.
template <std::size_t D>
std::vector<OracleResult<D>> field_integral_oracle(const RoundBoundary<D>& boundary,
                                                   const Material& mat,
                                                   std::span<const Vec<D>> points,
                                                   const OracleOptions& options = {});

template <std::size_t D>
OracleResult<D> field_integral_oracle(const RoundBoundary<D>& boundary, const Material& mat,
                                      const Vec<D>& x, const OracleOptions& options = {}) {
    return field_integral_oracle<D>(boundary, mat, std::span<const Vec<D>>(&x, 1), options)[0];
}

template <std::size_t D>
struct TraceSample {
    Vec<D> point;
    Vec<D> value;  ///< -u(point)
};

/// Negated discrete field at outer-boundary points, the Dirichlet data of the
/// regular part in a singularity-removal split.
template <class Mesh, std::size_t D = Mesh::dim>
std::vector<TraceSample<D>> boundary_trace_export(const Mesh& mesh,
                                                  std::span<const Vec<D>> eval_boundary,
                                                  const Material& mat);

}  // namespace kelvin
