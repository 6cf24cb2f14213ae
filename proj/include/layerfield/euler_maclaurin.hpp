#pragma once

#include <functional>
#include <optional>

namespace layerfield {

/// Highest number of Bernoulli correction terms accepted.
inline constexpr int kMaxEmOrder = 5;
/// Highest order allowed when derivatives come from finite differences.
inline constexpr int kMaxFiniteDifferenceEmOrder = 3;

/// A profile f on a ray [x, inf).
///
/// `derivative(m, x)` returns f^(m)(x); when empty, central differences are
/// used (which evaluate f slightly left of x). `transform(h, x)` returns
/// the weighted integral of e^{h e} f(x + e) over e in [0, inf); when
/// empty it is computed by exp-sinh quadrature.
struct RayProfile {
    std::function<double(double)> value;
    std::function<double(int, double)> derivative;
    std::function<double(double, double)> transform;
};

/// A profile f on (0, 1].
///
/// `euler_derivative(m, r)` returns (r d/dr)^m f at r. `transform(h, r)`
/// returns the integral of e^{h-1} f(r e) over e in (0, 1].
struct LogProfile {
    std::function<double(double)> value;
    std::function<double(int, double)> euler_derivative;
    std::function<double(double, double)> transform;
};

/// A e^{-decay x} with closed-form derivatives and transforms.
RayProfile exponential_profile(double amplitude, double decay);
/// c x^n with closed-form Euler derivatives and transforms.
LogProfile power_profile(double coefficient, int power);

/// sum_{j>=0} f(step j) ~ (1/step) int f + f(0)/2
///     - sum_{k=1..K} B_2k step^{2k-1} / (2k)! f^{(2k-1)}(0).
double em_ray_sum(const RayProfile& f, double step, int order);

/// sum_{j>=0} f(R^{2j}) via the ray expansion of t -> f(e^{-t}) with step
/// ln(1/R^2). Requires f(0) = 0 so that int_0^1 f(x)/x dx is finite.
double em_log_sum(const LogProfile& f, double R, int order);

/// sum_{j>=0} e^{2hlj} f(x + 2lj) for h < 0, expanded with the operator
/// L_h = h + d/dx.
double weighted_ray_asym(const RayProfile& f, double x, double l, double h, int order);

/// sum_{j>=0} (-e^{2hl})^j f(x + 2lj): the alternating ladder of the k > 1
/// regime. Carries the (2^{2k} - 1) factors and no integral term.
double weighted_ray_asym_alt(const RayProfile& f, double x, double l, double h, int order);

/// sum_{j>=0} R^{2hj} f(r R^{2j}) for h > 0, expanded with h + r d/dr.
double weighted_radial_asym(const LogProfile& f, double r, double R, double h, int order);

/// sum_{j>=0} (-R^{2h})^j f(r R^{2j}).
double weighted_radial_asym_alt(const LogProfile& f, double r, double R, double h, int order);

/// Integral of e^{h e} f(x + e) over [0, inf), closed form when available.
double ray_transform(const RayProfile& f, double h, double x);
/// Integral of e^{h-1} f(r e) over (0, 1], closed form when available.
double log_transform(const LogProfile& f, double h, double r);

} // namespace layerfield
