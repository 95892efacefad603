#include "kelvin/eval_set.hpp"

#include <algorithm>
#include <cmath>

namespace kelvin {
namespace {

template <std::size_t D>
double segment_distance(const Vec<D>& p, const Vec<D>& a, const Vec<D>& b) {
    const Vec<D> ab = b - a;
    const double len2 = dot(ab, ab);
    const double t = len2 > 0.0 ? std::clamp(dot(p - a, ab) / len2, 0.0, 1.0) : 0.0;
    return distance(p, a + t * ab);
}

template <std::size_t D>
double parallelogram_distance(const Vec<D>& p, const Vec<D>& o, const Vec<D>& e1,
                              const Vec<D>& e2) {
    // Solve the 2x2 normal equations for the in-plane coordinates of p.
    const Vec<D> r = p - o;
    const double g11 = dot(e1, e1), g12 = dot(e1, e2), g22 = dot(e2, e2);
    const double b1 = dot(r, e1), b2 = dot(r, e2);
    const double det = g11 * g22 - g12 * g12;
    const double s = (b1 * g22 - b2 * g12) / det;
    const double t = (b2 * g11 - b1 * g12) / det;
    if (s >= 0.0 && s <= 1.0 && t >= 0.0 && t <= 1.0) return distance(p, o + s * e1 + t * e2);
    return std::min({segment_distance(p, o, o + e1), segment_distance(p, o, o + e2),
                     segment_distance(p, o + e1, o + e1 + e2),
                     segment_distance(p, o + e2, o + e1 + e2)});
}

}  // namespace

template <std::size_t D>
QuadratureNodes<D> eval_nodes(const EvalSet<D>& set) {
    return std::visit(
        [](const auto& s) -> QuadratureNodes<D> {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, PointSet<D>>) {
                return point_nodes<D>(s.point);
            } else if constexpr (std::is_same_v<T, SegmentSet<D>>) {
                return segment_nodes<D>(s.a, s.b, s.subdivisions);
            } else if constexpr (std::is_same_v<T, RectangleSet<D>>) {
                return rectangle_nodes<D>(s.corner, s.e1, s.e2, s.n1, s.n2);
            } else {
                return circle_nodes(s.center, s.radius, s.count, s.phase);
            }
        },
        set);
}

template <std::size_t D>
bool crosses_boundary(const EvalSet<D>& set, const Vec<D>& center, double radius) {
    double lo = 0.0, hi = 0.0;
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, PointSet<D>>) {
                lo = hi = distance(s.point, center);
            } else if constexpr (std::is_same_v<T, SegmentSet<D>>) {
                lo = segment_distance(center, s.a, s.b);
                hi = std::max(distance(center, s.a), distance(center, s.b));
            } else if constexpr (std::is_same_v<T, RectangleSet<D>>) {
                lo = parallelogram_distance(center, s.corner, s.e1, s.e2);
                hi = std::max({distance(center, s.corner), distance(center, s.corner + s.e1),
                               distance(center, s.corner + s.e2),
                               distance(center, s.corner + s.e1 + s.e2)});
            } else {
                const double d = distance(s.center, center);
                lo = std::abs(d - s.radius);
                hi = d + s.radius;
            }
        },
        set);
    return lo <= radius && radius <= hi;
}

template <std::size_t D>
const char* kind_name(const EvalSet<D>& set) {
    return std::visit(
        [](const auto& s) -> const char* {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, PointSet<D>>) return "point";
            else if constexpr (std::is_same_v<T, SegmentSet<D>>) return "segment";
            else if constexpr (std::is_same_v<T, RectangleSet<D>>) return "rectangle";
            else return "circle";
        },
        set);
}

template QuadratureNodes<2> eval_nodes<2>(const EvalSet<2>&);
template QuadratureNodes<3> eval_nodes<3>(const EvalSet<3>&);
template bool crosses_boundary<2>(const EvalSet<2>&, const Vec2&, double);
template bool crosses_boundary<3>(const EvalSet<3>&, const Vec3&, double);
template const char* kind_name<2>(const EvalSet<2>&);
template const char* kind_name<3>(const EvalSet<3>&);

}  // namespace kelvin
