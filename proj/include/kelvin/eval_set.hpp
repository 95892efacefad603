#pragma once

#include <cstddef>
#include <type_traits>
#include <variant>

#include "kelvin/quadrature.hpp"
#include "kelvin/vec.hpp"

namespace kelvin {

template <std::size_t D>
struct PointSet {
    Vec<D> point;
};

/// Midpoints of an inscribed N-gon of the circle (center, radius).
struct CircleSet {
    Vec2 center;
    double radius = 1.0;
    int count = 1024;
    double phase = 0.0;
};

template <std::size_t D>
struct SegmentSet {
    Vec<D> a;
    Vec<D> b;
    int subdivisions = 1;
};

template <std::size_t D>
struct RectangleSet {
    Vec<D> corner;
    Vec<D> e1;
    Vec<D> e2;
    int n1 = 1;
    int n2 = 1;
};

/// Where a field is sampled for norms: a point, a circle (2D only), a segment
/// or a parallelogram patch.
template <std::size_t D>
using EvalSet = std::conditional_t<
    D == 2, std::variant<PointSet<2>, CircleSet, SegmentSet<2>, RectangleSet<2>>,
    std::variant<PointSet<3>, SegmentSet<3>, RectangleSet<3>>>;

template <std::size_t D>
QuadratureNodes<D> eval_nodes(const EvalSet<D>& set);

/// True when the set touches the sphere/circle |x - center| = radius, i.e.
/// samples lie on both sides of (or on) the force-carrying boundary.
template <std::size_t D>
bool crosses_boundary(const EvalSet<D>& set, const Vec<D>& center, double radius);

template <std::size_t D>
const char* kind_name(const EvalSet<D>& set);

}  // namespace kelvin
