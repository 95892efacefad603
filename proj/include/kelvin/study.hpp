#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "kelvin/eval_set.hpp"
#include "kelvin/field.hpp"
#include "kelvin/quadrature.hpp"

namespace kelvin {

inline constexpr const char* kToolVersion = "kelvin 1.0.0";

template <std::size_t D>
struct NamedEvalSet {
    std::string name;
    EvalSet<D> set;
    /// Circle sets only: sample count chosen by the runner (max(1024, 8 m_max)).
    bool auto_count = false;
};

/// Quasi-uniform (Fibonacci) points on a sphere.
struct SphereSample {
    Vec3 center;
    double radius = 1.0;
    int count = 256;
};

std::vector<Vec3> sphere_points(const SphereSample& s);

/// Outer boundary for trace export: an explicit point list, the midpoints of
/// an inscribed N-gon (2D, count 0 = the study's norm sample count) or a
/// sampled sphere (3D).
template <std::size_t D>
struct TraceSpec {
    std::vector<Vec<D>> points;
    std::optional<CircleSet> circle;
    std::optional<SphereSample> sphere;
};

/// Everything needed to re-run a study bit-exactly. 3D defaults use a 0.1
/// cell radius.
struct StudyConfig {
    int dimension = 2;
    double young_modulus = 1.0e7;
    double poisson_ratio = 0.25;
    double magnitude = 1.0e3;
    std::vector<double> center{0.0, 0.0};
    double radius = 0.3;
    /// Segment counts m (2D) or icosphere refinement levels (3D).
    std::vector<int> resolutions{10, 20, 40, 80};
    /// Resolutions appended after the last one (doublings in 2D, levels in 3D)
    /// so that every listed row gets a Richardson q.
    int extra_resolutions = 2;
    bool project_vertices = true;
    NormVariant norm_variant = NormVariant::rms;
    std::filesystem::path output_dir = "out";

    std::vector<NamedEvalSet<2>> eval_sets_2d;
    std::vector<NamedEvalSet<3>> eval_sets_3d;

    std::optional<GridSpec<2>> grid_2d;
    std::optional<GridSpec<3>> grid_3d;
    std::optional<TraceSpec<2>> trace_2d;
    std::optional<TraceSpec<3>> trace_3d;
    /// Mesh resolution for `field` and `trace`; defaults to the last listed resolution.
    std::optional<int> field_resolution;
};

StudyConfig default_config(int dimension);

/// Builds a config from JSON, filling every missing key from default_config().
/// `dimension` overrides/sets the dimension when the JSON lacks one.
/// Throws ConfigError naming the offending key.
StudyConfig parse_config(const nlohmann::json& j, std::optional<int> dimension = std::nullopt);
StudyConfig load_config(const std::filesystem::path& path,
                        std::optional<int> dimension = std::nullopt);

/// Fully resolved config; parse_config(to_json(c)) reproduces c.
nlohmann::json to_json(const StudyConfig& config);

/// Throws ConfigError when resolutions are not strictly increasing, a 2D
/// resolution is below 3, a 3D level is negative, or there are no eval sets.
void validate(const StudyConfig& config);

/// Resolutions actually computed: the listed ones plus extra_resolutions.
std::vector<int> study_resolutions(const StudyConfig& config);

struct EvalSetReport {
    std::string name;
    std::string kind;
    bool theory_violating = false;  ///< set crosses the force-carrying boundary
    double min_clearance = 0.0;     ///< smallest sample-to-station distance seen
    int sample_count = 0;
    std::vector<L2Norm> norms;
    std::vector<ConvergenceRow> rows;
    std::vector<std::optional<double>> std_unaligned;  ///< circle sets, N+1 samples
    std::vector<std::string> errors;  ///< per row; empty when the row evaluated cleanly
};

struct StudyReport {
    StudyConfig config;
    std::vector<EvalSetReport> sets;
    std::vector<int> resolutions;
    std::vector<std::size_t> station_counts;
    std::vector<double> mesh_h;
    double wall_seconds = 0.0;
    int threads = 1;

    /// False when any row failed to evaluate.
    bool ok() const;
};

StudyReport run_study2d(const StudyConfig& config);
StudyReport run_study3d(const StudyConfig& config);

/// `resolution,norm_plain,norm_rms,q,std`, one row per computed resolution.
std::string render_table_csv(const EvalSetReport& set);

/// Deterministic metadata: config echo, version, mesh mapping, flags, tables.
nlohmann::json report_json(const StudyReport& report);

/// Writes table CSVs, report.json and timing.json into config.output_dir.
/// Returns the files written.
std::vector<std::filesystem::path> write_study(const StudyReport& report);

/// `x,y[,z],nx,ny[,nz],Q,measure`
template <std::size_t D>
std::string render_mesh_csv(std::span<const ForceStation<D>> stations);

/// `x,y[,z],ux,uy[,uz],clearance`
template <std::size_t D>
std::string render_field_csv(std::span<const FieldSample<D>> samples);

/// `x,y[,z],vx,vy[,vz]`
template <std::size_t D>
std::string render_trace_csv(std::span<const TraceSample<D>> samples);

struct FieldRun {
    std::size_t written = 0;
    std::size_t skipped = 0;
    std::vector<std::filesystem::path> files;
};

/// Field grid export: field.csv, boundary.csv and skipped.csv.
FieldRun run_field(const StudyConfig& config);

/// Trace export: trace.csv.
FieldRun run_trace(const StudyConfig& config);

}  // namespace kelvin
