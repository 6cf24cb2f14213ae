#include "layerfield/harmonic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "layerfield/error.hpp"

namespace layerfield {

void require_finite(Point2 p) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
        throw ValidationError("point has non-finite coordinates");
}

PolarPoint make_polar(double r, double theta) {
    if (!std::isfinite(r) || r < 0.0 || !std::isfinite(theta))
        throw ValidationError("polar point needs finite r >= 0 and finite theta");
    return {r, normalize_angle(theta)};
}

// ---------------------------------------------------------------------------
// HalfPlaneField

HalfPlaneField::HalfPlaneField(std::vector<PlanarMode> modes, std::vector<BoundarySource> sources)
    : modes_(std::move(modes)), sources_(std::move(sources)) {
    for (const auto& m : modes_) {
        if (!(m.frequency > 0.0) || !std::isfinite(m.frequency))
            throw ValidationError("half-plane mode frequency must be positive and finite");
        if (!std::isfinite(m.amplitude) || !std::isfinite(m.phase))
            throw ValidationError("half-plane mode amplitude and phase must be finite");
    }
    for (const auto& s : sources_) {
        if (!std::isfinite(s.location) || !std::isfinite(s.strength))
            throw ValidationError("boundary source must have finite location and strength");
    }
}

HalfPlaneField HalfPlaneField::single_mode(double amplitude, double frequency, double phase) {
    return HalfPlaneField({PlanarMode{amplitude, frequency, phase}});
}

void HalfPlaneField::check_domain(Point2 p) const {
    require_finite(p);
    if (p.x < 0.0)
        throw ValidationError("half-plane field evaluated at x < 0");
    if (p.x == 0.0 && !sources_.empty()) {
        for (const auto& s : sources_)
            if (s.strength != 0.0 && p.y == s.location)
                throw ValidationError("half-plane field evaluated on a boundary source");
    }
}

double HalfPlaneField::value(Point2 p) const {
    check_domain(p);
    double sum = 0.0;
    for (const auto& m : modes_)
        sum += m.amplitude * std::exp(-m.frequency * p.x) * std::cos(m.frequency * p.y + m.phase);
    if (p.x > 0.0) {
        for (const auto& s : sources_) {
            const double dy = p.y - s.location;
            sum += s.strength / std::numbers::pi * p.x / (p.x * p.x + dy * dy);
        }
    }
    return sum;
}

Vec2 HalfPlaneField::gradient(Point2 p) const {
    check_domain(p);
    Vec2 g;
    for (const auto& m : modes_) {
        const double e = m.amplitude * std::exp(-m.frequency * p.x);
        const double arg = m.frequency * p.y + m.phase;
        g.x -= m.frequency * e * std::cos(arg);
        g.y -= m.frequency * e * std::sin(arg);
    }
    if (p.x > 0.0) {
        for (const auto& s : sources_) {
            const double dy = p.y - s.location;
            const double d2 = p.x * p.x + dy * dy;
            const double c = s.strength / std::numbers::pi;
            g.x += c * (dy * dy - p.x * p.x) / (d2 * d2);
            g.y += c * (-2.0 * p.x * dy) / (d2 * d2);
        }
    }
    return g;
}

namespace {

double source_mass(const std::vector<BoundarySource>& sources) {
    double q = 0.0;
    for (const auto& s : sources) q += std::abs(s.strength);
    return q / std::numbers::pi;
}

} // namespace

// sup_y x/(x^2+y^2) = 1/(2x); sup_y |d/dx x/(x^2+y^2)| = 1/x^2.
double HalfPlaneField::envelope(double x) const {
    double e = 0.0;
    for (const auto& m : modes_) e += std::abs(m.amplitude) * std::exp(-m.frequency * x);
    const double q = source_mass(sources_);
    if (q > 0.0) e += x > 0.0 ? q / x : std::numeric_limits<double>::infinity();
    return e;
}

double HalfPlaneField::envelope_integral(double x) const {
    double e = 0.0;
    for (const auto& m : modes_)
        e += std::abs(m.amplitude) * std::exp(-m.frequency * x) / m.frequency;
    if (source_mass(sources_) > 0.0) return std::numeric_limits<double>::infinity();
    return e;
}

double HalfPlaneField::slope_envelope(double x) const {
    double e = 0.0;
    for (const auto& m : modes_)
        e += std::abs(m.amplitude) * m.frequency * std::exp(-m.frequency * x);
    const double q = source_mass(sources_);
    if (q > 0.0) e += x > 0.0 ? q / (x * x) : std::numeric_limits<double>::infinity();
    return e;
}

double HalfPlaneField::slope_envelope_integral(double x) const {
    double e = 0.0;
    for (const auto& m : modes_) e += std::abs(m.amplitude) * std::exp(-m.frequency * x);
    const double q = source_mass(sources_);
    if (q > 0.0) e += x > 0.0 ? q / x : std::numeric_limits<double>::infinity();
    return e;
}

// ---------------------------------------------------------------------------
// DiskField

DiskField::DiskField(std::vector<double> cosines, std::vector<double> sines)
    : a_(std::move(cosines)), b_(std::move(sines)) {
    if (a_.empty()) a_.push_back(0.0);
    if (b_.size() + 1 > a_.size()) a_.resize(b_.size() + 1, 0.0);
    b_.resize(a_.size() - 1, 0.0);
    for (double v : a_)
        if (!std::isfinite(v)) throw ValidationError("disk field coefficient is not finite");
    for (double v : b_)
        if (!std::isfinite(v)) throw ValidationError("disk field coefficient is not finite");
}

DiskField DiskField::mode(std::size_t n, double coefficient, bool sine) {
    std::vector<double> a(n + 1, 0.0);
    std::vector<double> b(n, 0.0);
    if (n == 0) {
        if (sine) throw ValidationError("there is no sine mode of order 0");
        a[0] = 2.0 * coefficient;
    } else if (sine) {
        b[n - 1] = coefficient;
    } else {
        a[n] = coefficient;
    }
    return DiskField(std::move(a), std::move(b));
}

bool DiskField::is_zero() const noexcept {
    return std::all_of(a_.begin(), a_.end(), [](double v) { return v == 0.0; }) &&
           std::all_of(b_.begin(), b_.end(), [](double v) { return v == 0.0; });
}

void DiskField::check_domain(double r) const {
    if (!std::isfinite(r) || r < 0.0 || r > 1.0 + 1e-12)
        throw ValidationError("disk field evaluated outside the closed unit disk");
}

std::complex<double> DiskField::poly(std::complex<double> z) const {
    std::complex<double> acc = 0.0;
    for (std::size_t n = degree(); n >= 1; --n) acc = (acc + std::complex<double>(a(n), -b(n))) * z;
    return acc;
}

std::complex<double> DiskField::poly_derivative(std::complex<double> z) const {
    std::complex<double> acc = 0.0;
    for (std::size_t n = degree(); n >= 1; --n) {
        acc = acc * z + static_cast<double>(n) * std::complex<double>(a(n), -b(n));
    }
    return acc;
}

double DiskField::value(Point2 p) const {
    require_finite(p);
    check_domain(std::hypot(p.x, p.y));
    return 0.5 * a(0) + poly({p.x, p.y}).real();
}

double DiskField::value(PolarPoint p) const {
    return value(to_cartesian(p));
}

Vec2 DiskField::gradient(Point2 p) const {
    require_finite(p);
    check_domain(std::hypot(p.x, p.y));
    const auto d = poly_derivative({p.x, p.y});
    return {d.real(), -d.imag()};
}

double DiskField::radial_derivative(Point2 p) const {
    require_finite(p);
    check_domain(std::hypot(p.x, p.y));
    const std::complex<double> z{p.x, p.y};
    return (z * poly_derivative(z)).real();
}

double DiskField::radial_derivative(PolarPoint p) const {
    return radial_derivative(to_cartesian(p));
}

double DiskField::envelope(double r) const {
    double e = 0.5 * std::abs(a(0));
    double rn = 1.0;
    for (std::size_t n = 1; n <= degree(); ++n) {
        rn *= r;
        e += rn * std::hypot(a(n), b(n));
    }
    return e;
}

DiskField DiskField::map_modes(const std::function<double(std::size_t)>& scale) const {
    std::vector<double> a = a_;
    std::vector<double> b = b_;
    for (std::size_t n = 0; n < a.size(); ++n)
        if (a[n] != 0.0) a[n] *= scale(n);
    for (std::size_t n = 1; n <= b.size(); ++n)
        if (b[n - 1] != 0.0) b[n - 1] *= scale(n);
    return DiskField(std::move(a), std::move(b));
}

PolarPoint kelvin_argument(PolarPoint p, double rho2) {
    if (!(rho2 > 0.0) || !std::isfinite(rho2))
        throw ValidationError("inversion radius squared must be positive");
    if (!(p.r > 0.0))
        throw ValidationError("inversion is singular at the origin");
    return {rho2 / p.r, p.theta};
}

double radial_derivative(const DiskField& field, PolarPoint p) {
    return field.radial_derivative(p);
}

Evaluator make_evaluator(const HalfPlaneField& field) {
    return {[field](Point2 p) { return field.value(p); },
            [field](Point2 p) { return field.gradient(p); },
            [](Point2 p) { return p.x >= 0.0; }};
}

Evaluator make_evaluator(const DiskField& field) {
    return {[field](Point2 p) { return field.value(p); },
            [field](Point2 p) { return field.gradient(p); },
            [](Point2 p) { return std::hypot(p.x, p.y) <= 1.0; }};
}

// ---------------------------------------------------------------------------
// stencils

namespace {

// Central second-derivative weights, offsets 0..3 (symmetric).
constexpr double second_order_w[] = {-2.0, 1.0};
constexpr double sixth_order_w[] = {-490.0 / 180.0, 270.0 / 180.0, -27.0 / 180.0, 2.0 / 180.0};

} // namespace

double laplacian_residual(const Evaluator& u, Point2 p, double step, double anisotropy,
                          StencilOrder order) {
    if (!(step > 0.0)) throw ValidationError("stencil step must be positive");
    const bool sixth = order == StencilOrder::sixth;
    const int reach = sixth ? 3 : 1;
    const double* w = sixth ? sixth_order_w : second_order_w;

    for (int i = -reach; i <= reach; ++i) {
        const Point2 qx{p.x + i * step, p.y};
        const Point2 qy{p.x, p.y + i * step};
        if (u.contains && (!u.contains(qx) || !u.contains(qy)))
            throw ValidationError("stencil leaves the evaluator's region; shrink the step");
    }

    const double centre = u.value(p);
    double uxx = w[0] * centre;
    double uyy = w[0] * centre;
    for (int i = 1; i <= reach; ++i) {
        uxx += w[i] * (u.value({p.x + i * step, p.y}) + u.value({p.x - i * step, p.y}));
        uyy += w[i] * (u.value({p.x, p.y + i * step}) + u.value({p.x, p.y - i * step}));
    }
    return (anisotropy * anisotropy * uxx + uyy) / (step * step);
}

Vec2 fd_gradient(const std::function<double(Point2)>& u, Point2 p, double h) {
    return {(u({p.x + h, p.y}) - u({p.x - h, p.y})) / (2.0 * h),
            (u({p.x, p.y + h}) - u({p.x, p.y - h})) / (2.0 * h)};
}

// Gradient of p -> u(c p / |p|^2) given grad u at the image point.
Vec2 kelvin_pullback(Point2 p, double c, Vec2 g) {
    const double r2 = p.x * p.x + p.y * p.y;
    const double pg = p.x * g.x + p.y * g.y;
    return {c * (g.x / r2 - 2.0 * p.x * pg / (r2 * r2)), c * (g.y / r2 - 2.0 * p.y * pg / (r2 * r2))};
}

Point2 kelvin_point(Point2 p, double c) {
    const double r2 = p.x * p.x + p.y * p.y;
    if (r2 == 0.0) throw ValidationError("inversion is undefined at the origin");
    return {c * p.x / r2, c * p.y / r2};
}

} // namespace layerfield
