#pragma once

#include <cstddef>
#include <functional>

#include "layerfield/harmonic.hpp"
#include "layerfield/transform.hpp"

namespace layerfield {

/// A ladder of terms t_0, t_1, ... with a bound on the absolute tail.
struct Ladder {
    std::function<double(std::size_t)> term;
    /// tail(J) >= sum_{j >= J} |t_j|.
    std::function<double(std::size_t)> tail;
};

/// t_j = rho^j f(j) with |f| <= sup_bound.
Ladder geometric_ladder(double rho, std::function<double(std::size_t)> f, double sup_bound);

struct BruteSum {
    double value = 0.0;
    double tail_bound = 0.0;
    std::size_t terms = 0;
};

/// Sums exactly `terms` terms (long double accumulation). Throws
/// ConvergenceError when the remaining tail exceeds required_tail.
BruteSum brute_series(const Ladder& ladder, std::size_t terms, double required_tail = 1e-12);

/// Smallest J with tail(J) <= required_tail, found by doubling and
/// bisection, then summed. Throws ConvergenceError past max_terms.
BruteSum brute_series_auto(const Ladder& ladder, std::size_t max_terms, double required_tail = 1e-12);

inline constexpr std::size_t kBruteMaxTerms = 200'000;

/// Layered solutions evaluated point by point with brute_series_auto.
/// No gradients are attached; reports fall back to finite differences.
LayeredSolution brute_halfplane_coupled(const HalfPlaneField& field, const PlanarLayerConfig& cfg,
                                        std::size_t max_terms = kBruteMaxTerms);
LayeredSolution brute_strip(const HalfPlaneField& field, double l,
                            std::size_t max_terms = kBruteMaxTerms);
LayeredSolution brute_disk_coupled(const DiskField& field, const RadialLayerConfig& cfg,
                                   std::size_t max_terms = kBruteMaxTerms);
LayeredSolution brute_annulus(const DiskField& field, double R, std::size_t max_terms = kBruteMaxTerms);

/// Closed-form sums of the image ladders on mode inputs: every mode is
/// rescaled by its geometric-series factor. Boundary sources are rejected.
LayeredSolution mode_exact_strip(const HalfPlaneField& field, double l);
LayeredSolution mode_exact_halfplane(const HalfPlaneField& field, const PlanarLayerConfig& cfg);
/// Requires a_0 = 0: a constant boundary value is not a sum of paired images.
LayeredSolution mode_exact_annulus(const DiskField& field, double R);
LayeredSolution mode_exact_disk(const DiskField& field, const RadialLayerConfig& cfg);

} // namespace layerfield
