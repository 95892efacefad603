#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "kelvin/geometry.hpp"
#include "kelvin/vec.hpp"

namespace kelvin {

struct QuadratureResult {
    double value = 0.0;
    std::size_t element_count = 0;
    double h = 0.0;  ///< largest element diameter
};

template <std::size_t D>
using ScalarFn = std::function<double(const Vec<D>&)>;

template <std::size_t D>
using VectorFn = std::function<Vec<D>(const Vec<D>&)>;

/// Composite midpoint rule over a closed polygon: sum_j f(mid_j) |v_{j+1} - v_j|.
/// Errors thrown by f are rethrown with the segment index prepended.
template <std::size_t D>
QuadratureResult midpoint_polyline(const ScalarFn<D>& f, std::span<const Vec<D>> vertices);

/// Centroid rule over a triangulation: sum_j f(centroid_j) area_j.
QuadratureResult midpoint_triangles(const ScalarFn<3>& f, const SurfaceMesh3D& mesh);

/// Midpoint nodes and weights of an evaluation set, plus the set's exact measure
/// (used by the RMS variant). A single point has weight 1 and measure 1.
template <std::size_t D>
struct QuadratureNodes {
    std::vector<Vec<D>> points;
    std::vector<double> weights;
    double measure = 1.0;
};

/// Midpoints of the N-gon inscribed in the circle (center, R), weights = chord
/// lengths; measure = 2 pi R. `phase` rotates the N-gon by phase * 2 pi / N.
QuadratureNodes<2> circle_nodes(const Vec2& center, double radius, int count, double phase = 0.0);

template <std::size_t D>
QuadratureNodes<D> point_nodes(const Vec<D>& x);

/// n equal sub-segments of [a, b].
template <std::size_t D>
QuadratureNodes<D> segment_nodes(const Vec<D>& a, const Vec<D>& b, int subdivisions);

/// n1 x n2 cell centers of the parallelogram corner + s e1 + t e2, s, t in [0, 1].
template <std::size_t D>
QuadratureNodes<D> rectangle_nodes(const Vec<D>& corner, const Vec<D>& e1, const Vec<D>& e2,
                                   int n1, int n2);

/// Composite midpoint L2 norm. rms == plain / sqrt(measure) exactly.
struct L2Norm {
    double plain = 0.0;
    double rms = 0.0;
};

enum class NormVariant { plain, rms };

inline double select(const L2Norm& n, NormVariant v) {
    return v == NormVariant::plain ? n.plain : n.rms;
}

/// sqrt(sum_j |values_j|^2 weights_j), summed in index order.
template <std::size_t D>
L2Norm l2_norm(std::span<const Vec<D>> values, const QuadratureNodes<D>& nodes);

L2Norm l2_norm_circle(const VectorFn<2>& field, const Vec2& center, double radius, int count);

template <std::size_t D>
L2Norm l2_norm_segment(const VectorFn<D>& field, const Vec<D>& a, const Vec<D>& b,
                       int subdivisions);

L2Norm l2_norm_rectangle(const VectorFn<3>& field, const Vec3& corner, const Vec3& e1,
                         const Vec3& e2, int n1, int n2);

/// Population standard deviation of values_j . (p_j - center)/|p_j - center|.
double std_normal_component(std::span<const Vec2> values, std::span<const Vec2> points,
                            const Vec2& center);

double std_normal_component(const VectorFn<2>& field, const Vec2& center, double radius,
                            int count);

/// Richardson order estimate q = log2(|n_h - n_h2| / |n_h2 - n_h4|).
/// Throws ParameterError when |n_h2 - n_h4| is at the rounding-noise floor.
double richardson_q(double n_h, double n_h2, double n_h4);

struct ConvergenceRow {
    int resolution = 0;
    double norm = 0.0;
    std::optional<double> q;
    std::optional<double> std;
};

/// Attaches q to every row that has two successors. A degenerate triple
/// leaves q empty rather than failing the whole table.
std::vector<ConvergenceRow> convergence_rows(std::span<const int> resolutions,
                                             std::span<const double> norms);

}  // namespace kelvin
