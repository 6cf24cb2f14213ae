#include "layerfield/euler_maclaurin.hpp"

#include <cmath>
#include <limits>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "layerfield/bernoulli.hpp"
#include "layerfield/error.hpp"

namespace layerfield {

namespace {

constexpr double kQuadratureTol = 1e-13;

void check_order(int order, bool closed_form_derivatives) {
    if (order < 0 || order > kMaxEmOrder)
        throw ValidationError("Euler-Maclaurin order must lie in [0, " + std::to_string(kMaxEmOrder) +
                              "]");
    if (!closed_form_derivatives && order > kMaxFiniteDifferenceEmOrder)
        throw CapabilityError("finite-difference derivatives support at most order " +
                              std::to_string(kMaxFiniteDifferenceEmOrder));
}

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

double binomial(int n, int k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

// Second-order central differences for derivatives 0..5.
double central_derivative(const std::function<double(double)>& g, int m, double x) {
    if (m == 0) return g(x);
    const double d = std::max(1.0, std::abs(x)) *
                     std::pow(std::numeric_limits<double>::epsilon(), 1.0 / (m + 2));
    const auto at = [&](int i) { return g(x + i * d); };
    switch (m) {
    case 1: return (at(1) - at(-1)) / (2.0 * d);
    case 2: return (at(1) - 2.0 * at(0) + at(-1)) / (d * d);
    case 3: return (at(2) - 2.0 * at(1) + 2.0 * at(-1) - at(-2)) / (2.0 * d * d * d);
    case 4: return (at(2) - 4.0 * at(1) + 6.0 * at(0) - 4.0 * at(-1) + at(-2)) / std::pow(d, 4);
    case 5:
        return (at(3) - 4.0 * at(2) + 5.0 * at(1) - 5.0 * at(-1) + 4.0 * at(-2) - at(-3)) /
               (2.0 * std::pow(d, 5));
    default: throw CapabilityError("finite-difference derivative order above 5");
    }
}

double ray_derivative(const RayProfile& f, int m, double x) {
    if (f.derivative) return f.derivative(m, x);
    return central_derivative(f.value, m, x);
}

double euler_derivative(const LogProfile& f, int m, double r) {
    if (f.euler_derivative) return f.euler_derivative(m, r);
    const auto g = [&f, r](double t) { return f.value(r * std::exp(t)); };
    return central_derivative(g, m, 0.0);
}

// (c + D)^m applied through the binomial expansion.
double shifted_power(const std::function<double(int)>& derivative, double c, int m) {
    double acc = 0.0;
    for (int i = 0; i <= m; ++i) acc += binomial(m, i) * std::pow(c, m - i) * derivative(i);
    return acc;
}

// sum_{k=1..K} B_2k step^{2k-1} / (2k)! * [2^{2k} - 1 when alternating] * D(2k-1)
double bernoulli_terms(int order, double step, bool alternating,
                       const std::function<double(int)>& odd_derivative) {
    double acc = 0.0;
    for (int k = 1; k <= order; ++k) {
        double c = bernoulli_value(2 * k) * std::pow(step, 2 * k - 1) / factorial(2 * k);
        if (alternating) c *= std::pow(2.0, 2 * k) - 1.0;
        acc += c * odd_derivative(2 * k - 1);
    }
    return acc;
}

void require_positive(double v, const char* what) {
    if (!std::isfinite(v) || !(v > 0.0)) throw ValidationError(std::string(what) + " must be positive");
}

void require_radius(double R) {
    if (!std::isfinite(R) || !(R > 0.0) || !(R < 1.0))
        throw ValidationError("R must lie in (0, 1)");
}

} // namespace

RayProfile exponential_profile(double amplitude, double decay) {
    require_positive(decay, "decay rate");
    RayProfile p;
    p.value = [=](double x) { return amplitude * std::exp(-decay * x); };
    p.derivative = [=](int m, double x) { return amplitude * std::pow(-decay, m) * std::exp(-decay * x); };
    p.transform = [=](double h, double x) {
        if (!(h < decay)) throw ValidationError("weighted integral diverges (h >= decay)");
        return amplitude * std::exp(-decay * x) / (decay - h);
    };
    return p;
}

LogProfile power_profile(double coefficient, int power) {
    if (power < 0) throw ValidationError("power profile needs a non-negative power");
    LogProfile p;
    p.value = [=](double x) { return coefficient * std::pow(x, power); };
    p.euler_derivative = [=](int m, double r) {
        return coefficient * std::pow(static_cast<double>(power), m) * std::pow(r, power);
    };
    p.transform = [=](double h, double r) {
        if (!(power + h > 0.0)) throw ValidationError("weighted integral diverges (n + h <= 0)");
        return coefficient * std::pow(r, power) / (power + h);
    };
    return p;
}

double ray_transform(const RayProfile& f, double h, double x) {
    if (f.transform) return f.transform(h, x);
    boost::math::quadrature::exp_sinh<double> integrator;
    const auto integrand = [&](double e) { return std::exp(h * e) * f.value(x + e); };
    return integrator.integrate(integrand, 0.0, std::numeric_limits<double>::infinity(),
                                kQuadratureTol);
}

double log_transform(const LogProfile& f, double h, double r) {
    if (f.transform) return f.transform(h, r);
    boost::math::quadrature::tanh_sinh<double> integrator;
    const auto integrand = [&](double e) { return std::pow(e, h - 1.0) * f.value(r * e); };
    return integrator.integrate(integrand, 0.0, 1.0, kQuadratureTol);
}

double em_ray_sum(const RayProfile& f, double step, int order) {
    require_positive(step, "step");
    check_order(order, static_cast<bool>(f.derivative));
    const auto d = [&](int m) { return ray_derivative(f, m, 0.0); };
    return ray_transform(f, 0.0, 0.0) / step + 0.5 * f.value(0.0) - bernoulli_terms(order, step, false, d);
}

double em_log_sum(const LogProfile& f, double R, int order) {
    require_radius(R);
    check_order(order, static_cast<bool>(f.euler_derivative));
    const double at_one = f.value(1.0);
    if (std::abs(f.value(0.0)) > 1e-12 * std::max(1.0, std::abs(at_one)))
        throw ValidationError("int_0^1 f(x)/x dx diverges: f(0) != 0");
    const double step = std::log(1.0 / (R * R));
    // g(t) = f(e^{-t}) has g^(m)(0) = (-1)^m (r d/dr)^m f(1); odd m flips the sign.
    const auto d = [&](int m) { return euler_derivative(f, m, 1.0); };
    return log_transform(f, 0.0, 1.0) / step + 0.5 * at_one + bernoulli_terms(order, step, false, d);
}

double weighted_ray_asym(const RayProfile& f, double x, double l, double h, int order) {
    require_positive(l, "layer thickness");
    if (!(h < 0.0)) throw ValidationError("weighted ray expansion needs h < 0");
    check_order(order, static_cast<bool>(f.derivative));
    const auto lh = [&](int m) {
        return shifted_power([&](int i) { return ray_derivative(f, i, x); }, h, m);
    };
    const double step = 2.0 * l;
    return ray_transform(f, h, x) / step + 0.5 * f.value(x) - bernoulli_terms(order, step, false, lh);
}

double weighted_ray_asym_alt(const RayProfile& f, double x, double l, double h, int order) {
    require_positive(l, "layer thickness");
    if (!(h < 0.0)) throw ValidationError("weighted ray expansion needs h < 0");
    check_order(order, static_cast<bool>(f.derivative));
    const auto lh = [&](int m) {
        return shifted_power([&](int i) { return ray_derivative(f, i, x); }, h, m);
    };
    return 0.5 * f.value(x) - bernoulli_terms(order, 2.0 * l, true, lh);
}

double weighted_radial_asym(const LogProfile& f, double r, double R, double h, int order) {
    require_radius(R);
    if (!(h > 0.0)) throw ValidationError("weighted radial expansion needs h > 0");
    check_order(order, static_cast<bool>(f.euler_derivative));
    const double step = std::log(1.0 / (R * R));
    const auto op = [&](int m) {
        return shifted_power([&](int i) { return euler_derivative(f, i, r); }, h, m);
    };
    return log_transform(f, h, r) / step + 0.5 * f.value(r) + bernoulli_terms(order, step, false, op);
}

double weighted_radial_asym_alt(const LogProfile& f, double r, double R, double h, int order) {
    require_radius(R);
    if (!(h > 0.0)) throw ValidationError("weighted radial expansion needs h > 0");
    check_order(order, static_cast<bool>(f.euler_derivative));
    const double step = std::log(1.0 / (R * R));
    const auto op = [&](int m) {
        return shifted_power([&](int i) { return euler_derivative(f, i, r); }, h, m);
    };
    return 0.5 * f.value(r) + bernoulli_terms(order, step, true, op);
}

} // namespace layerfield
