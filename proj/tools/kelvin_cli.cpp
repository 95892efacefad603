// kelvin: convergence studies and field exports for point forces on a
// discretized cell boundary in an infinite linear-elastic medium.

#include <omp.h>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kelvin/csv.hpp"
#include "kelvin/errors.hpp"
#include "kelvin/greens.hpp"
#include "kelvin/material.hpp"
#include "kelvin/study.hpp"

namespace {

constexpr const char* kUnits =
    "Units (annotation only, no conversion is performed):\n"
    "  E  Young's modulus       kg/(um min^2)   default 1.0e7\n"
    "  nu Poisson's ratio       -               default 0.25\n"
    "  Q  force magnitude       kg um/min^2     default 1.0e3\n"
    "  R  sample circle radius  um              default 0.5\n"
    "  eps cell radius          um              default 0.3 (2D), 0.1 (3D)\n";

struct Common {
    std::string config;
    std::string out;
    std::string norm;
    std::string resolutions;
    std::optional<int> resolution;
    bool seedless = false;
};

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t pos = 0;
        const double x = std::stod(item, &pos);
        if (pos != item.size()) throw kelvin::ConfigError("cannot parse number '" + item + "'");
        v.push_back(x);
    }
    return v;
}

kelvin::StudyConfig resolve(const Common& c, int dimension) {
    kelvin::StudyConfig cfg = c.config.empty() ? kelvin::default_config(dimension)
                                               : kelvin::load_config(c.config, dimension);
    if (!c.out.empty()) cfg.output_dir = c.out;
    if (!c.norm.empty()) {
        if (c.norm == "plain")
            cfg.norm_variant = kelvin::NormVariant::plain;
        else if (c.norm == "rms")
            cfg.norm_variant = kelvin::NormVariant::rms;
        else
            throw kelvin::ConfigError("--norm: expected plain or rms");
    }
    if (!c.resolutions.empty()) {
        cfg.resolutions.clear();
        for (double r : parse_list(c.resolutions)) cfg.resolutions.push_back(static_cast<int>(r));
    }
    if (c.resolution) cfg.field_resolution = *c.resolution;
    kelvin::validate(cfg);
    return cfg;
}

int dimension_of(const std::string& config_path, int fallback) {
    if (config_path.empty()) return fallback;
    // Peek at the dimension key; full validation happens in load_config.
    const auto cfg = kelvin::load_config(config_path);
    return cfg.dimension;
}

void print_study(const kelvin::StudyReport& report, const std::vector<std::filesystem::path>& files) {
    for (const auto& s : report.sets) {
        std::cout << "# " << s.name << " (" << s.kind << ", " << s.sample_count << " samples"
                  << (s.theory_violating ? ", THEORY-VIOLATING: crosses the cell boundary" : "")
                  << ", min clearance " << kelvin::format_number(s.min_clearance) << ")\n"
                  << kelvin::render_table_csv(s);
        for (std::size_t k = 0; k < s.errors.size(); ++k)
            if (!s.errors[k].empty())
                std::cout << "  error at resolution " << s.rows[k].resolution << ": " << s.errors[k]
                          << '\n';
    }
    std::cout << "wall time " << report.wall_seconds << " s on " << report.threads
              << " thread(s)\n";
    for (const auto& f : files) std::cout << "wrote " << f.string() << '\n';
}

void add_common(CLI::App* cmd, Common& c, bool with_resolution) {
    cmd->add_option("--config", c.config, "JSON config file (missing keys take the defaults)");
    cmd->add_option("--out", c.out, "output directory");
    cmd->add_option("--norm", c.norm, "norm variant used for q: plain or rms")
        ->check(CLI::IsMember({"plain", "rms"}));
    cmd->add_option("--resolutions", c.resolutions,
                    "comma-separated segment counts (2D) or refinement levels (3D)");
    if (with_resolution)
        cmd->add_option("--resolution", c.resolution, "mesh resolution for the export");
    cmd->add_flag("--seedless", c.seedless, "no-op: nothing in this tool is random");
}

}  // namespace

int main(int argc, char** argv) {
    if (const char* env = std::getenv("KELVIN_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) omp_set_num_threads(n);
    }

    CLI::App app{"Displacement fields of point forces on a discretized cell boundary, and "
                 "discrete-vs-continuous convergence studies.\n\n" +
                 std::string(kUnits) +
                 "\nEnvironment: KELVIN_THREADS caps the number of OpenMP threads."};
    app.require_subcommand(1);

    Common s2, s3, fld, trc;
    auto* study2d = app.add_subcommand("study2d", "2D convergence table (norm, q, STD per m)");
    add_common(study2d, s2, false);
    auto* study3d = app.add_subcommand("study3d", "3D convergence tables per evaluation set");
    add_common(study3d, s3, false);
    auto* field = app.add_subcommand("field", "displacement field on a grid, plus mesh dump");
    add_common(field, fld, true);
    int field_dim = 2;
    field->add_option("--dim", field_dim, "dimension when no config is given")
        ->check(CLI::IsMember({2, 3}));
    auto* trace = app.add_subcommand("trace", "negated field on an outer boundary");
    add_common(trace, trc, true);
    int trace_dim = 2;
    trace->add_option("--dim", trace_dim, "dimension when no config is given")
        ->check(CLI::IsMember({2, 3}));

    auto* greens = app.add_subcommand("greens", "print G(x, x') for a material");
    std::string gx, gxp;
    double ge = 1.0e7, gnu = 0.25;
    greens->add_option("--x", gx, "field point, e.g. 1,0 or 2,0,0")->required();
    greens->add_option("--xp", gxp, "source point")->required();
    greens->add_option("--E", ge, "Young's modulus");
    greens->add_option("--nu", gnu, "Poisson's ratio");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*study2d) {
            const auto report = kelvin::run_study2d(resolve(s2, 2));
            print_study(report, kelvin::write_study(report));
            return report.ok() ? 0 : 1;
        }
        if (*study3d) {
            const auto report = kelvin::run_study3d(resolve(s3, 3));
            print_study(report, kelvin::write_study(report));
            return report.ok() ? 0 : 1;
        }
        if (*field) {
            const auto cfg = resolve(fld, dimension_of(fld.config, field_dim));
            const auto run = kelvin::run_field(cfg);
            std::cout << run.written << " samples written, " << run.skipped
                      << " skipped (clearance)\n";
            for (const auto& f : run.files) std::cout << "wrote " << f.string() << '\n';
            return 0;
        }
        if (*trace) {
            const auto cfg = resolve(trc, dimension_of(trc.config, trace_dim));
            const auto run = kelvin::run_trace(cfg);
            std::cout << run.written << " trace points written\n";
            for (const auto& f : run.files) std::cout << "wrote " << f.string() << '\n';
            return 0;
        }
        if (*greens) {
            const auto x = parse_list(gx);
            const auto xp = parse_list(gxp);
            if (x.size() != xp.size() || (x.size() != 2 && x.size() != 3))
                throw kelvin::ConfigError("--x and --xp need 2 or 3 matching coordinates");
            const auto mat = kelvin::make_material(ge, gnu);
            auto print = [](const auto& g, std::size_t d) {
                for (std::size_t i = 0; i < d; ++i) {
                    for (std::size_t j = 0; j < d; ++j)
                        std::cout << (j ? "," : "") << kelvin::format_number(g(i, j));
                    std::cout << '\n';
                }
            };
            if (x.size() == 2)
                print(kelvin::greens_2d({{x[0], x[1]}}, {{xp[0], xp[1]}}, mat), 2);
            else
                print(kelvin::greens_3d({{x[0], x[1], x[2]}}, {{xp[0], xp[1], xp[2]}}, mat), 3);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
