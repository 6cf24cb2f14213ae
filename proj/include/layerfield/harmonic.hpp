#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "layerfield/geometry.hpp"

namespace layerfield {

/// A * exp(-omega x) * cos(omega y + phi); harmonic for any omega.
struct PlanarMode {
    double amplitude = 1.0;
    double frequency = 1.0;
    double phase = 0.0;
};

/// Point charge on the boundary line x = 0 seen through the half-plane
/// Poisson kernel: (q / pi) * x / (x^2 + (y - t)^2).
struct BoundarySource {
    double location = 0.0;
    double strength = 0.0;
};

/// Model harmonic function on the right half-plane x >= 0, built from
/// decaying modes and Poisson sources.
///
/// The envelope functions give bounds that hold uniformly in y for every
/// abscissa x' >= x. They drive the truncation of the image ladders.
class HalfPlaneField {
public:
    HalfPlaneField() = default;
    HalfPlaneField(std::vector<PlanarMode> modes, std::vector<BoundarySource> sources = {});

    static HalfPlaneField single_mode(double amplitude, double frequency, double phase = 0.0);

    const std::vector<PlanarMode>& modes() const noexcept { return modes_; }
    const std::vector<BoundarySource>& sources() const noexcept { return sources_; }
    bool empty() const noexcept { return modes_.empty() && sources_.empty(); }
    bool modes_only() const noexcept { return sources_.empty(); }

    /// Value at p; requires p.x >= 0 (p.x > 0 when sources are present).
    double value(Point2 p) const;
    Vec2 gradient(Point2 p) const;

    /// sup_y |u(x', y)| for x' >= x.
    double envelope(double x) const;
    /// Integral of envelope over [x, inf); +inf when not integrable.
    double envelope_integral(double x) const;
    /// sup_y |du/dx (x', y)| for x' >= x.
    double slope_envelope(double x) const;
    double slope_envelope_integral(double x) const;

private:
    void check_domain(Point2 p) const;

    std::vector<PlanarMode> modes_;
    std::vector<BoundarySource> sources_;
};

/// Harmonic polynomial on the unit disk:
/// a0/2 + sum_{n=1..N} r^n (a_n cos n theta + b_n sin n theta).
///
/// Internally u = a0/2 + Re P(z) with P(z) = sum (a_n - i b_n) z^n, so
/// gradients and the Euler operator r d/dr come from P'.
class DiskField {
public:
    DiskField() = default;
    /// cosines holds a_0..a_N; sines holds b_1..b_N (sines may be shorter).
    DiskField(std::vector<double> cosines, std::vector<double> sines);

    /// r^n cos(n theta) (or sin when `sine` is set); n = 0 gives the constant 1.
    static DiskField mode(std::size_t n, double coefficient = 1.0, bool sine = false);

    std::size_t degree() const noexcept { return a_.empty() ? 0 : a_.size() - 1; }
    double a(std::size_t n) const noexcept { return n < a_.size() ? a_[n] : 0.0; }
    double b(std::size_t n) const noexcept { return (n >= 1 && n < b_.size() + 1) ? b_[n - 1] : 0.0; }
    bool is_zero() const noexcept;

    double value(PolarPoint p) const;
    double value(Point2 p) const;
    Vec2 gradient(Point2 p) const;
    /// (r d/dr) u, the operator L_0 of the coupling condition.
    double radial_derivative(PolarPoint p) const;
    double radial_derivative(Point2 p) const;

    /// sup |u| over the closed disk of radius r (r <= 1).
    double envelope(double r) const;

    /// New field with every mode of order n multiplied by scale(n).
    DiskField map_modes(const std::function<double(std::size_t)>& scale) const;

private:
    void check_domain(double r) const;
    std::complex<double> poly(std::complex<double> z) const;
    std::complex<double> poly_derivative(std::complex<double> z) const;

    std::vector<double> a_;
    std::vector<double> b_;
};

/// Inversion across the circle of radius sqrt(rho2): (r, theta) -> (rho2 / r, theta).
PolarPoint kelvin_argument(PolarPoint p, double rho2);

/// c p / |p|^2: the image of p under inversion in the circle of radius sqrt(c).
Point2 kelvin_point(Point2 p, double c);
/// Gradient of p -> u(kelvin_point(p, c)) given grad u at the image point.
Vec2 kelvin_pullback(Point2 p, double c, Vec2 g);

/// Closed-form (r d/dr) u, exposed as a free function for symmetry with eval.
double radial_derivative(const DiskField& field, PolarPoint p);

/// A scalar field on a region. Gradient may be empty, in which case
/// callers fall back to finite differences.
struct Evaluator {
    std::function<double(Point2)> value;
    std::function<Vec2(Point2)> gradient;
    std::function<bool(Point2)> contains;

    double operator()(Point2 p) const { return value(p); }
    bool has_gradient() const noexcept { return static_cast<bool>(gradient); }
};

Evaluator make_evaluator(const HalfPlaneField& field);
Evaluator make_evaluator(const DiskField& field);

enum class StencilOrder { second, sixth };

/// Discrete a^2 u_xx + u_yy at p. The second-order variant is the classic
/// 5-point stencil; the sixth-order one uses 7 points per axis and is what
/// the residual reports use, since the plain stencil bottoms out near 1e-7.
/// Throws ValidationError when a stencil node leaves the evaluator's region.
double laplacian_residual(const Evaluator& u, Point2 p, double step,
                          double anisotropy = 1.0,
                          StencilOrder order = StencilOrder::second);

/// Central-difference gradient with step h.
Vec2 fd_gradient(const std::function<double(Point2)>& u, Point2 p, double h);

} // namespace layerfield
