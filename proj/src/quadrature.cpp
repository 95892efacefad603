#include "kelvin/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "kelvin/errors.hpp"

namespace kelvin {
namespace {

// Rethrows f's failure with the element index prepended, keeping the error kind.
template <class F>
double eval_element(const char* kind, std::size_t index, F&& f) {
    try {
        return f();
    } catch (const SingularityError& e) {
        std::ostringstream msg;
        msg << kind << ' ' << index << ": " << e.what();
        throw SingularityError(msg.str(), e.station(), e.distance());
    } catch (const Error& e) {
        std::ostringstream msg;
        msg << kind << ' ' << index << ": " << e.what();
        throw Error(msg.str());
    }
}

void require_count(const char* what, int n, int min) {
    if (n < min) {
        std::ostringstream msg;
        msg << what << " must be at least " << min << ", got " << n;
        throw ParameterError(msg.str());
    }
}

template <std::size_t D>
std::vector<Vec<D>> sample(const VectorFn<D>& field, std::span<const Vec<D>> points) {
    std::vector<Vec<D>> out;
    out.reserve(points.size());
    for (std::size_t j = 0; j < points.size(); ++j) {
        Vec<D> v;
        eval_element("sample", j, [&] {
            v = field(points[j]);
            return 0.0;
        });
        out.push_back(v);
    }
    return out;
}

}  // namespace

template <std::size_t D>
QuadratureResult midpoint_polyline(const ScalarFn<D>& f, std::span<const Vec<D>> vertices) {
    const std::size_t m = vertices.size();
    if (m < 3) throw ParameterError("a closed polygon needs at least 3 vertices");
    QuadratureResult r;
    r.element_count = m;
    for (std::size_t j = 0; j < m; ++j) {
        const Vec<D>& a = vertices[j];
        const Vec<D>& b = vertices[(j + 1) % m];
        const double len = distance(a, b);
        r.value += eval_element("segment", j, [&] { return f((a + b) * 0.5); }) * len;
        r.h = std::max(r.h, len);
    }
    return r;
}

QuadratureResult midpoint_triangles(const ScalarFn<3>& f, const SurfaceMesh3D& mesh) {
    const auto v = mesh.vertices();
    const auto tris = mesh.triangles();
    QuadratureResult r;
    r.element_count = tris.size();
    for (std::size_t j = 0; j < tris.size(); ++j) {
        const auto& [a, b, c] = tris[j];
        const Vec3 centroid = (v[a] + v[b] + v[c]) / 3.0;
        const double area = 0.5 * norm(cross(v[b] - v[a], v[c] - v[a]));
        r.value += eval_element("triangle", j, [&] { return f(centroid); }) * area;
        r.h = std::max({r.h, distance(v[a], v[b]), distance(v[b], v[c]), distance(v[c], v[a])});
    }
    return r;
}

QuadratureNodes<2> circle_nodes(const Vec2& center, double radius, int count, double phase) {
    require_count("circle sample count", count, 3);
    if (!(radius > 0.0)) throw ParameterError("sample circle radius must be positive");
    QuadratureNodes<2> q;
    q.points.reserve(static_cast<std::size_t>(count));
    q.weights.reserve(static_cast<std::size_t>(count));
    auto vertex = [&](int j) {
        const double angle = 2.0 * std::numbers::pi * (j + phase) / count;
        return center + radius * Vec2{{std::cos(angle), std::sin(angle)}};
    };
    for (int j = 0; j < count; ++j) {
        const Vec2 a = vertex(j);
        const Vec2 b = vertex(j + 1);
        q.points.push_back((a + b) * 0.5);
        q.weights.push_back(distance(a, b));
    }
    q.measure = 2.0 * std::numbers::pi * radius;
    return q;
}

template <std::size_t D>
QuadratureNodes<D> point_nodes(const Vec<D>& x) {
    return {{x}, {1.0}, 1.0};
}

template <std::size_t D>
QuadratureNodes<D> segment_nodes(const Vec<D>& a, const Vec<D>& b, int subdivisions) {
    require_count("segment subdivisions", subdivisions, 1);
    const double len = distance(a, b);
    if (!(len > 0.0)) throw ParameterError("segment endpoints coincide");
    QuadratureNodes<D> q;
    const Vec<D> step = (b - a) / subdivisions;
    for (int j = 0; j < subdivisions; ++j) {
        q.points.push_back(a + (j + 0.5) * step);
        q.weights.push_back(len / subdivisions);
    }
    q.measure = len;
    return q;
}

template <std::size_t D>
QuadratureNodes<D> rectangle_nodes(const Vec<D>& corner, const Vec<D>& e1, const Vec<D>& e2,
                                   int n1, int n2) {
    require_count("rectangle subdivisions", std::min(n1, n2), 1);
    double area;
    if constexpr (D == 2) {
        area = std::abs(e1[0] * e2[1] - e1[1] * e2[0]);
    } else {
        area = norm(cross(e1, e2));
    }
    if (!(area > 1e-14 * norm(e1) * norm(e2))) throw ParameterError("rectangle edges are parallel");
    QuadratureNodes<D> q;
    const double w = area / (static_cast<double>(n1) * n2);
    for (int j = 0; j < n2; ++j)
        for (int i = 0; i < n1; ++i) {
            q.points.push_back(corner + ((i + 0.5) / n1) * e1 + ((j + 0.5) / n2) * e2);
            q.weights.push_back(w);
        }
    q.measure = area;
    return q;
}

template <std::size_t D>
L2Norm l2_norm(std::span<const Vec<D>> values, const QuadratureNodes<D>& nodes) {
    if (values.size() != nodes.weights.size())
        throw ParameterError("value count does not match quadrature node count");
    double s = 0.0;
    for (std::size_t j = 0; j < values.size(); ++j) s += dot(values[j], values[j]) * nodes.weights[j];
    L2Norm n;
    n.plain = std::sqrt(s);
    n.rms = n.plain / std::sqrt(nodes.measure);
    return n;
}

L2Norm l2_norm_circle(const VectorFn<2>& field, const Vec2& center, double radius, int count) {
    require_count("circle sample count", count, 8);
    const auto nodes = circle_nodes(center, radius, count);
    const auto values = sample<2>(field, nodes.points);
    return l2_norm<2>(values, nodes);
}

template <std::size_t D>
L2Norm l2_norm_segment(const VectorFn<D>& field, const Vec<D>& a, const Vec<D>& b,
                       int subdivisions) {
    const auto nodes = segment_nodes(a, b, subdivisions);
    const auto values = sample<D>(field, nodes.points);
    return l2_norm<D>(values, nodes);
}

L2Norm l2_norm_rectangle(const VectorFn<3>& field, const Vec3& corner, const Vec3& e1,
                         const Vec3& e2, int n1, int n2) {
    const auto nodes = rectangle_nodes(corner, e1, e2, n1, n2);
    const auto values = sample<3>(field, nodes.points);
    return l2_norm<3>(values, nodes);
}

double std_normal_component(std::span<const Vec2> values, std::span<const Vec2> points,
                            const Vec2& center) {
    if (values.size() != points.size() || values.empty())
        throw ParameterError("std needs matching, nonempty value and point lists");
    std::vector<double> normal(values.size());
    for (std::size_t j = 0; j < values.size(); ++j) {
        const Vec2 radial = points[j] - center;
        normal[j] = dot(values[j], radial) / norm(radial);
    }
    double mean = 0.0;
    for (double x : normal) mean += x;
    mean /= static_cast<double>(normal.size());
    double var = 0.0;
    for (double x : normal) var += (x - mean) * (x - mean);
    return std::sqrt(var / static_cast<double>(normal.size()));
}

double std_normal_component(const VectorFn<2>& field, const Vec2& center, double radius,
                            int count) {
    require_count("circle sample count", count, 8);
    const auto nodes = circle_nodes(center, radius, count);
    const auto values = sample<2>(field, nodes.points);
    return std_normal_component(values, nodes.points, center);
}

double richardson_q(double n_h, double n_h2, double n_h4) {
    const double num = std::abs(n_h - n_h2);
    const double den = std::abs(n_h2 - n_h4);
    const double scale = std::max({std::abs(n_h), std::abs(n_h2), std::abs(n_h4)});
    if (!(den > 8.0 * std::numeric_limits<double>::epsilon() * scale)) {
        std::ostringstream msg;
        msg << "Richardson denominator |" << n_h2 << " - " << n_h4
            << "| is at the rounding-noise floor";
        throw ParameterError(msg.str());
    }
    return std::log2(num / den);
}

std::vector<ConvergenceRow> convergence_rows(std::span<const int> resolutions,
                                             std::span<const double> norms) {
    if (resolutions.size() != norms.size())
        throw ParameterError("resolution and norm lists differ in length");
    std::vector<ConvergenceRow> rows(norms.size());
    for (std::size_t i = 0; i < norms.size(); ++i) {
        rows[i].resolution = resolutions[i];
        rows[i].norm = norms[i];
        if (i + 2 < norms.size()) {
            try {
                rows[i].q = richardson_q(norms[i], norms[i + 1], norms[i + 2]);
            } catch (const ParameterError&) {
            }
        }
    }
    return rows;
}

template QuadratureResult midpoint_polyline<2>(const ScalarFn<2>&, std::span<const Vec2>);
template QuadratureResult midpoint_polyline<3>(const ScalarFn<3>&, std::span<const Vec3>);
template QuadratureNodes<2> point_nodes<2>(const Vec2&);
template QuadratureNodes<3> point_nodes<3>(const Vec3&);
template QuadratureNodes<2> segment_nodes<2>(const Vec2&, const Vec2&, int);
template QuadratureNodes<3> segment_nodes<3>(const Vec3&, const Vec3&, int);
template QuadratureNodes<2> rectangle_nodes<2>(const Vec2&, const Vec2&, const Vec2&, int, int);
template QuadratureNodes<3> rectangle_nodes<3>(const Vec3&, const Vec3&, const Vec3&, int, int);
template L2Norm l2_norm<2>(std::span<const Vec2>, const QuadratureNodes<2>&);
template L2Norm l2_norm<3>(std::span<const Vec3>, const QuadratureNodes<3>&);
template L2Norm l2_norm_segment<2>(const VectorFn<2>&, const Vec2&, const Vec2&, int);
template L2Norm l2_norm_segment<3>(const VectorFn<3>&, const Vec3&, const Vec3&, int);

}  // namespace kelvin
