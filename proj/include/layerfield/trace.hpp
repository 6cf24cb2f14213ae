#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include "layerfield/harmonic.hpp"

namespace layerfield {

/// Boundary samples: y on the line x = 0, or theta on the unit circle.
struct BoundaryTrace {
    std::vector<double> abscissae;
    std::vector<double> values;
    double window_lo = 0.0;
    double window_hi = 0.0;

    /// Builds a trace whose window is [front, back]; abscissae must be
    /// strictly increasing and match values in length.
    static BoundaryTrace from_samples(std::vector<double> abscissae, std::vector<double> values);

    std::size_t size() const noexcept { return abscissae.size(); }
};

/// Two numeric columns (abscissa, value); a non-numeric first line is
/// treated as a header.
BoundaryTrace read_trace_csv(const std::filesystem::path& path);

/// Discrete Fourier projection of uniform samples on [0, 2 pi) onto modes
/// 0..max_mode. Needs at least 2 * max_mode + 1 samples.
DiskField disk_from_boundary(const BoundaryTrace& trace, std::size_t max_mode);

struct PoissonValue {
    double value = 0.0;
    /// Bound on the contribution of the boundary outside the sampled window.
    double tail_bound = 0.0;
};

/// Trapezoid-rule half-plane Poisson integral of the trace at p (p.x > 0).
/// The tail outside the window is bounded assuming |f| beyond each end does
/// not exceed the last sampled magnitude. Throws ValidationError if the
/// samples grow towards the window ends, ConvergenceError when the tail bound
/// exceeds tol.
PoissonValue halfplane_poisson_eval(const BoundaryTrace& trace, Point2 p, double tol);

/// The trapezoid Poisson integral viewed as a half-plane field: one
/// boundary source per sample with strength weight_i * f_i.
HalfPlaneField poisson_field(const BoundaryTrace& trace);

/// Rejects traces whose magnitude in the outer quarters exceeds the peak of
/// the inner half (non-integrable growth such as f(t) = t).
void check_trace_decay(const BoundaryTrace& trace);

} // namespace layerfield
