#pragma once

#include <functional>

#include "layerfield/harmonic.hpp"
#include "layerfield/transform.hpp"

namespace layerfield {

/// Leading-order thin-layer approximation. `bound`, when set, returns a
/// rigorous bound on |approximation - exact series| at a point; it is
/// only available where a variation estimate applies (small-k and the
/// single-region problems).
struct Approximation {
    LayeredSolution solution;
    std::function<double(Point2)> bound;
    double robin_h = 0.0;

    double value(Point2 p) const { return solution.value(p); }
};

/// k in (0, 1): h = ln(rho) / (2l) < 0, u_3 the Robin link of the field.
///   u1 ~ (u3(x) - rho u3(2l - x)) / 2l,  u2 ~ (1 - rho) u3(x') / 2l.
Approximation thm1_halfplane_small_k(const HalfPlaneField& field, const PlanarLayerConfig& cfg);

/// k > 1: q = -rho, h = ln(q) / (2l). Images are paired two reflections at a
/// time so the ladder becomes a positive one with step 4l.
Approximation thm2_halfplane_large_k(const HalfPlaneField& field, const PlanarLayerConfig& cfg);

/// u ~ (u2(2l - x) - u2(x)) / 2l with u2 the Neumann link.
Approximation thm3_strip(const HalfPlaneField& field, double l);

/// k in (0, 1), s = ln(1 / R^2), h = ln(rho) / (2 ln R) > 0:
///   u1 ~ (u3(p) - rho u3(K p)) / s,  u2 ~ (1 - rho) u3(p) / s,
/// where K is the inversion in the circle of radius R.
Approximation thm4_disk_small_k(const DiskField& field, const RadialLayerConfig& cfg);

/// k > 1, q = (k - 1) / (k + 1) = R^{2h}; images paired with step R^4.
Approximation thm4_disk_large_k(const DiskField& field, const RadialLayerConfig& cfg);

/// u ~ (u2(p) - u2(K p)) / s with u2 the disk Neumann link (needs a_0 = 0).
Approximation thm5_annulus(const DiskField& field, double R);

/// Picks the small-k or large-k branch. k = 1 needs no approximation: the
/// one-term series is exact and is returned as is.
Approximation asymptotic_halfplane(const HalfPlaneField& field, const PlanarLayerConfig& cfg);
Approximation asymptotic_disk(const DiskField& field, const RadialLayerConfig& cfg);

} // namespace layerfield
