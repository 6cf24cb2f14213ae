#pragma once

#include "layerfield/harmonic.hpp"

namespace layerfield {

enum class LinkKind { robin, neumann };

/// A half-plane field obtained from a model field by one of the link
/// integrals along the x direction:
///
///   robin:   v(x, y) = int_0^inf e^{h e} u(x + e, y) de      (h < 0)
///            so that dv/dx + h v + u = 0;
///   neumann: v(x, y) = -int_0^inf u(x + e, y) de
///            so that dv/dx = u.
///
/// Modes map in closed form (factor 1/(omega - h), resp. -1/omega). Sources
/// use exp-sinh quadrature for the Robin link and the logarithmic potential
/// (q / 2 pi) ln(x^2 + (y - t)^2) for the Neumann link, which is defined up
/// to a constant that cancels in every difference the approximators take.
class PlanarLinkField {
public:
    PlanarLinkField(HalfPlaneField base, LinkKind kind, double h = 0.0);

    const HalfPlaneField& base() const noexcept { return base_; }
    LinkKind kind() const noexcept { return kind_; }
    double h() const noexcept { return h_; }

    double value(Point2 p) const;
    Vec2 gradient(Point2 p) const;

private:
    HalfPlaneField base_;
    HalfPlaneField scaled_modes_;
    LinkKind kind_;
    double h_;
};

/// Robin link in the half-plane; requires h < 0.
PlanarLinkField robin_link_halfplane(const HalfPlaneField& field, double h);

/// Neumann link in the half-plane (d/dx of the result equals the input).
PlanarLinkField neumann_link_halfplane(const HalfPlaneField& field);

/// v = int_0^1 e^{h-1} u(e x, e y) de: mode n is divided by n + h, so
/// (r d/dr) v + h v = u. Requires n + h > 0 for every present mode.
DiskField robin_link_disk(const DiskField& field, double h);

/// v = int_0^1 u(e x, e y) / e de: mode n is divided by n, so (r d/dr) v = u.
/// Throws ValidationError when a_0 != 0 (Neumann data must be mean-free).
DiskField neumann_link_disk(const DiskField& field);

Evaluator make_evaluator(const PlanarLinkField& field);

} // namespace layerfield
