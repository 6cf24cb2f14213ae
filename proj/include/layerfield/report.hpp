#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>

#include "layerfield/fd.hpp"
#include "layerfield/transform.hpp"

namespace layerfield {

struct ErrorReport {
    double max_pde_residual = 0.0;
    double max_boundary_mismatch = 0.0;
    double max_value_jump = 0.0; ///< coupled problems only
    double max_flux_jump = 0.0;  ///< k * flux1 - flux2 at the interface
    std::optional<double> lemma_bound;
    std::size_t interior_samples = 0;
    std::size_t boundary_samples = 0;
    std::size_t interface_samples = 0;
};

/// Problem data the checks are measured against. `boundary` is the model
/// field on the data boundary (x = 0, resp. r = 1).
struct ProblemSpec {
    ProblemKind kind = ProblemKind::strip;
    std::function<double(Point2)> boundary;
    double l = 1.0;
    double R = 0.5;
    double k = 1.0;
    double a1 = 1.0;
    double a2 = 1.0;
};

struct SamplePlan {
    std::size_t interior = 200; ///< per layer
    std::size_t boundary = 100;
    std::size_t interface = 100;
    std::uint64_t seed = 12345;
    double step = 0.0;       ///< stencil step; 0 picks min(width / 32, 0.025)
    double y_lo = -3.0;      ///< planar sampling window in y
    double y_hi = 3.0;
    double outer_extent = 3.0; ///< planar layer 2 sampled on l < x < l + outer_extent
};

/// Maxima over random samples of: sixth-order stencil PDE residual (with the
/// a^2 u_xx + u_yy operator per planar layer), boundary mismatch, interface
/// value jump and flux jump. Flux uses closed-form gradients when present,
/// otherwise one-sided fourth-order differences from inside each layer.
ErrorReport residual_report(const LayeredSolution& solution, const ProblemSpec& spec,
                            const SamplePlan& plan = {});

enum class GridCheckOrder { second, fourth, sixth };

/// Same checks on node values of a tensor grid. `second` applies the 3-point
/// stencils a finite-difference solver satisfies; `fourth` and `sixth` use
/// 5- and 7-point stencils (spectral in theta on a uniform full circle) for
/// grids sampled from a continuous solution. Interface values and slopes are
/// extrapolated from the nearest 2 * reach + 1 node lines on each side.
/// Stencils never straddle the interface.
ErrorReport grid_report(const GridSolution& grid, const ProblemSpec& spec,
                        GridCheckOrder order = GridCheckOrder::second);

} // namespace layerfield
