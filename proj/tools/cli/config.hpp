#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "layerfield/harmonic.hpp"
#include "layerfield/report.hpp"
#include "layerfield/transform.hpp"

namespace layerfield::cli {

enum class Method { series, asymptotic, oracle };
std::string to_string(Method m);
Method method_from_string(const std::string& name);

struct Geometry {
    std::optional<double> l, k, a1, a2, lambda1, lambda2, R;
};

/// Exactly one of modes or a sample file. Planar modes are {omega, A, phi};
/// disk modes are {n, a, b}. Planar configs may add boundary point sources
/// {t, q}. Sample files become Poisson sources (planar) or a Fourier
/// projection up to max_mode (disk).
struct BoundarySpec {
    HalfPlaneField planar;
    DiskField disk;
    std::optional<std::filesystem::path> samples;
    bool from_modes = false;
};

/// Planar grids: x in [x0, x1] with nx nodes, y in [y0, y1] with ny nodes.
/// Radial grids: r in [r0, r1] with nr nodes, ntheta angles 2 pi j / ntheta.
struct GridSpec {
    double lo1 = 0.0, hi1 = 1.0;
    double lo2 = -1.0, hi2 = 1.0;
    std::size_t n1 = 21, n2 = 21;
};

struct Tolerances {
    double pde = 1e-6;
    double boundary = 1e-8;
    double value_jump = 1e-8;
    double flux_jump = 1e-8;
};

/// Thickness sweep for compare: each value replaces l (planar) or R (radial).
/// `hold` is "k" (default) or "robin_h"; the latter rescales k per value so
/// that the Robin parameter of the first sweep value is kept.
struct SweepSpec {
    std::string parameter;
    std::vector<double> values;
    std::string hold = "k";
};

enum class SolutionSource { method, model, grid_csv };

struct RunConfig {
    ProblemKind problem = ProblemKind::strip;
    Geometry geometry;
    BoundarySpec boundary;
    std::vector<Method> methods{Method::series};
    Truncation truncation = TailTol{};
    std::optional<std::size_t> fixed_terms; ///< J, when given
    GridSpec grid;
    std::optional<std::filesystem::path> output;
    std::optional<std::filesystem::path> table;
    Tolerances tolerances;
    std::optional<SweepSpec> sweep;
    SamplePlan samples;
    SolutionSource solution = SolutionSource::method;
    std::optional<std::filesystem::path> solution_grid;
    std::filesystem::path base_dir; ///< relative paths resolve against the config's directory

    Method method() const { return methods.front(); }
    bool radial() const { return is_radial(problem); }
    double tail_tol() const;
};

/// Parses and validates a config; unknown keys anywhere raise ValidationError.
RunConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

/// Geometry and field objects derived from a validated config.
PlanarLayerConfig planar_layers(const RunConfig& cfg);
RadialLayerConfig radial_layers(const RunConfig& cfg);
double strip_width(const RunConfig& cfg);
double annulus_radius(const RunConfig& cfg);

} // namespace layerfield::cli
