#pragma once

#include <cmath>
#include <numbers>

namespace layerfield {

/// Cartesian point in plate coordinates.
struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

/// Polar point; theta is kept in [0, 2*pi).
struct PolarPoint {
    double r = 0.0;
    double theta = 0.0;
};

/// Cartesian gradient (d/dx, d/dy).
struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline double normalize_angle(double theta) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double t = std::fmod(theta, two_pi);
    if (t < 0.0) t += two_pi;
    if (t >= two_pi) t = 0.0;
    return t;
}

inline PolarPoint to_polar(Point2 p) {
    return {std::hypot(p.x, p.y), normalize_angle(std::atan2(p.y, p.x))};
}

inline Point2 to_cartesian(PolarPoint p) {
    return {p.r * std::cos(p.theta), p.r * std::sin(p.theta)};
}

/// Throws ValidationError unless both coordinates are finite.
void require_finite(Point2 p);

/// Throws ValidationError unless r is finite and non-negative.
PolarPoint make_polar(double r, double theta);

} // namespace layerfield
