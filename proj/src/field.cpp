#include "kelvin/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "kelvin/errors.hpp"
#include "kelvin/greens.hpp"

namespace kelvin {

template <std::size_t D>
double min_station_distance(std::span<const ForceStation<D>> stations, const Vec<D>& x) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& st : stations) best = std::min(best, distance(x, st.position));
    return best;
}

template <std::size_t D>
FieldSample<D> field_sum(std::span<const ForceStation<D>> stations, const Material& mat,
                         const Vec<D>& x, double min_clearance) {
    FieldSample<D> out;
    out.point = x;
    out.min_station_distance = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < stations.size(); ++j) {
        const auto& st = stations[j];
        const double r = distance(x, st.position);
        if (!(r >= min_clearance)) {
            std::ostringstream msg;
            msg << "evaluation point lies " << r << " from station " << j
                << " (clearance " << min_clearance << ")";
            throw SingularityError(msg.str(), j, r);
        }
        out.min_station_distance = std::min(out.min_station_distance, r);
        const Mat<D> g = greens<D>(x, st.position, mat, 0.0);
        out.displacement += (st.magnitude * st.measure) * (g * st.normal);
    }
    return out;
}

FieldSample2 field_sum(const BoundaryMesh2D& mesh, const Material& mat, const Vec2& x) {
    return field_sum<2>(mesh.stations(), mat, x, field_clearance(mesh));
}

FieldSample3 field_sum(const SurfaceMesh3D& mesh, const Material& mat, const Vec3& x) {
    return field_sum<3>(mesh.stations(), mat, x, field_clearance(mesh));
}

template <std::size_t D>
std::vector<FieldSample<D>> evaluate_serial(std::span<const ForceStation<D>> stations,
                                            const Material& mat, std::span<const Vec<D>> points,
                                            double min_clearance) {
    std::vector<FieldSample<D>> out;
    out.reserve(points.size());
    for (const auto& x : points) out.push_back(field_sum<D>(stations, mat, x, min_clearance));
    return out;
}

template <std::size_t D>
std::vector<FieldSample<D>> evaluate_parallel(std::span<const ForceStation<D>> stations,
                                              const Material& mat, std::span<const Vec<D>> points,
                                              double min_clearance) {
    const auto n = static_cast<std::ptrdiff_t>(points.size());
    std::vector<FieldSample<D>> out(points.size());
    std::vector<char> failed(points.size(), 0);

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            out[i] = field_sum<D>(stations, mat, points[i], min_clearance);
        } catch (...) {
            failed[i] = 1;
        }
    }

    const auto bad = std::find(failed.begin(), failed.end(), 1);
    if (bad != failed.end()) {
        // Re-run the first failure outside the parallel region to rethrow it.
        const auto i = static_cast<std::size_t>(bad - failed.begin());
        field_sum<D>(stations, mat, points[i], min_clearance);
    }
    return out;
}

template <std::size_t D>
std::vector<Vec<D>> grid_points(const GridSpec<D>& grid) {
    if (grid.n1 < 1 || grid.n2 < 1) {
        std::ostringstream msg;
        msg << "grid counts must be at least 1, got " << grid.n1 << " x " << grid.n2;
        throw ParameterError(msg.str());
    }
    auto frac = [](int i, int n) { return n == 1 ? 0.0 : static_cast<double>(i) / (n - 1); };
    std::vector<Vec<D>> pts;
    pts.reserve(static_cast<std::size_t>(grid.n1) * static_cast<std::size_t>(grid.n2));
    for (int j = 0; j < grid.n2; ++j)
        for (int i = 0; i < grid.n1; ++i)
            pts.push_back(grid.corner + frac(i, grid.n1) * grid.e1 + frac(j, grid.n2) * grid.e2);
    return pts;
}

template <class Mesh, std::size_t D>
GridResult<D> field_grid(const Mesh& mesh, const Material& mat, const GridSpec<D>& grid) {
    const double clearance = field_clearance(mesh);
    GridResult<D> result;
    std::vector<Vec<D>> keep;
    for (const auto& p : grid_points(grid)) {
        if (min_station_distance<D>(mesh.stations(), p) >= clearance)
            keep.push_back(p);
        else
            result.skipped.push_back(p);
    }
    result.samples = evaluate(mesh, mat, std::span<const Vec<D>>(keep));
    return result;
}

namespace {

template <std::size_t D>
auto build_mesh(const RoundBoundary<D>& b, int resolution) {
    if constexpr (D == 2) {
        return make_circle_boundary(b.center, b.radius, resolution, b.magnitude);
    } else {
        return make_icosphere(b.center, b.radius, resolution, b.magnitude);
    }
}

}  // namespace

template <std::size_t D>
std::vector<OracleResult<D>> field_integral_oracle(const RoundBoundary<D>& boundary,
                                                   const Material& mat,
                                                   std::span<const Vec<D>> points,
                                                   const OracleOptions& options) {
    if (!(options.rel_tol > 0.0)) throw ParameterError("oracle tolerance must be positive");
    if (!boundary.magnitude) throw ParameterError("oracle boundary needs a magnitude function");

    const double clearance = kFieldClearanceFactor * boundary.radius;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double gap = std::abs(distance(points[i], boundary.center) - boundary.radius);
        if (gap < clearance) {
            std::ostringstream msg;
            msg << "oracle point " << i << " lies " << gap << " from the boundary (clearance "
                << clearance << ")";
            throw SingularityError(msg.str(), i, gap);
        }
    }

    const int first = D == 2 ? options.start_segments : options.start_level;
    const int last = D == 2 ? options.max_segments : options.max_level;
    auto next = [](int r) { return D == 2 ? 2 * r : r + 1; };

    const std::size_t n = points.size();
    // rows[i] is the previous row of point i's Romberg tableau.
    std::vector<std::vector<Vec<D>>> rows(n);
    std::vector<OracleResult<D>> results(n);
    std::vector<bool> done(n, false);
    std::size_t remaining = n;

    for (int res = first; remaining > 0; res = next(res)) {
        if (res > last) {
            std::ostringstream msg;
            msg << "boundary integral oracle did not reach relative tolerance " << options.rel_tol
                << " by resolution " << last << " (" << remaining << " points unconverged)";
            throw ConvergenceError(msg.str());
        }
        const auto mesh = build_mesh<D>(boundary, res);
        std::vector<Vec<D>> todo;
        std::vector<std::size_t> index;
        for (std::size_t i = 0; i < n; ++i)
            if (!done[i]) {
                todo.push_back(points[i]);
                index.push_back(i);
            }
        const auto samples = evaluate_parallel<D>(mesh.stations(), mat, todo, clearance);

        for (std::size_t k = 0; k < todo.size(); ++k) {
            const std::size_t i = index[k];
            auto& prev = rows[i];
            std::vector<Vec<D>> row{samples[k].displacement};
            double factor = 1.0;
            for (std::size_t j = 1; j <= prev.size(); ++j) {
                factor *= 4.0;
                row.push_back(row[j - 1] + (row[j - 1] - prev[j - 1]) / (factor - 1.0));
            }
            auto& out = results[i];
            out.sample.point = points[i];
            out.sample.displacement = row.back();
            out.sample.min_station_distance = samples[k].min_station_distance;
            out.final_resolution = res;
            if (!prev.empty()) {
                const double change = norm(row.back() - prev.back());
                out.error_estimate = change;
                if (change <= options.rel_tol * norm(row.back())) {
                    done[i] = true;
                    --remaining;
                }
            }
            prev = std::move(row);
        }
    }
    return results;
}

template <class Mesh, std::size_t D>
std::vector<TraceSample<D>> boundary_trace_export(const Mesh& mesh,
                                                  std::span<const Vec<D>> eval_boundary,
                                                  const Material& mat) {
    const auto samples = evaluate(mesh, mat, eval_boundary);
    std::vector<TraceSample<D>> out;
    out.reserve(samples.size());
    for (const auto& s : samples) out.push_back({s.point, -s.displacement});
    return out;
}

#define KELVIN_INSTANTIATE(D)                                                                   \
    template double min_station_distance<D>(std::span<const ForceStation<D>>, const Vec<D>&);   \
    template FieldSample<D> field_sum<D>(std::span<const ForceStation<D>>, const Material&,     \
                                         const Vec<D>&, double);                                \
    template std::vector<FieldSample<D>> evaluate_serial<D>(                                    \
        std::span<const ForceStation<D>>, const Material&, std::span<const Vec<D>>, double);    \
    template std::vector<FieldSample<D>> evaluate_parallel<D>(                                  \
        std::span<const ForceStation<D>>, const Material&, std::span<const Vec<D>>, double);    \
    template std::vector<Vec<D>> grid_points<D>(const GridSpec<D>&);                            \
    template std::vector<OracleResult<D>> field_integral_oracle<D>(                             \
        const RoundBoundary<D>&, const Material&, std::span<const Vec<D>>, const OracleOptions&);

KELVIN_INSTANTIATE(2)
KELVIN_INSTANTIATE(3)
#undef KELVIN_INSTANTIATE

template GridResult<2> field_grid<BoundaryMesh2D, 2>(const BoundaryMesh2D&, const Material&,
                                                     const GridSpec<2>&);
template GridResult<3> field_grid<SurfaceMesh3D, 3>(const SurfaceMesh3D&, const Material&,
                                                    const GridSpec<3>&);
template std::vector<TraceSample<2>> boundary_trace_export<BoundaryMesh2D, 2>(
    const BoundaryMesh2D&, std::span<const Vec2>, const Material&);
template std::vector<TraceSample<3>> boundary_trace_export<SurfaceMesh3D, 3>(
    const SurfaceMesh3D&, std::span<const Vec3>, const Material&);

}  // namespace kelvin
