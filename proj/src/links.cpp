#include "layerfield/links.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "layerfield/error.hpp"

namespace layerfield {

namespace {

HalfPlaneField scale_modes(const HalfPlaneField& field, LinkKind kind, double h) {
    std::vector<PlanarMode> modes = field.modes();
    for (auto& m : modes) {
        if (kind == LinkKind::robin) {
            if (!(m.frequency - h > 0.0))
                throw ValidationError("Robin link diverges: omega - h <= 0");
            m.amplitude /= m.frequency - h;
        } else {
            m.amplitude /= -m.frequency;
        }
    }
    return HalfPlaneField(std::move(modes));
}

double ray_integral(const std::function<double(double)>& g) {
    boost::math::quadrature::exp_sinh<double> integrator;
    return integrator.integrate(g, 0.0, std::numeric_limits<double>::infinity(), 1e-13);
}

} // namespace

PlanarLinkField::PlanarLinkField(HalfPlaneField base, LinkKind kind, double h)
    : base_(std::move(base)), kind_(kind), h_(h) {
    if (kind_ == LinkKind::robin && !base_.sources().empty() && !(h_ < 0.0))
        throw ValidationError("Robin link of boundary sources needs h < 0");
    scaled_modes_ = scale_modes(base_, kind_, h_);
}

double PlanarLinkField::value(Point2 p) const {
    double v = scaled_modes_.value(p);
    if (base_.sources().empty()) return v;
    if (!(p.x > 0.0)) throw ValidationError("linked source field needs x > 0");
    for (const auto& s : base_.sources()) {
        const double dy = p.y - s.location;
        if (kind_ == LinkKind::neumann) {
            v += s.strength / (2.0 * std::numbers::pi) * std::log(p.x * p.x + dy * dy);
        } else {
            const double h = h_;
            v += s.strength / std::numbers::pi * ray_integral([&](double e) {
                     const double x = p.x + e;
                     return std::exp(h * e) * x / (x * x + dy * dy);
                 });
        }
    }
    return v;
}

Vec2 PlanarLinkField::gradient(Point2 p) const {
    if (base_.sources().empty()) return scaled_modes_.gradient(p);
    if (kind_ == LinkKind::robin) {
        // d/dx v = -h v - u; d/dy by quadrature of the kernel's y-derivative.
        Vec2 g = scaled_modes_.gradient(p);
        HalfPlaneField src({}, base_.sources());
        double vs = 0.0;
        for (const auto& s : base_.sources()) {
            const double dy = p.y - s.location;
            const double h = h_;
            vs += s.strength / std::numbers::pi * ray_integral([&](double e) {
                      const double x = p.x + e;
                      return std::exp(h * e) * x / (x * x + dy * dy);
                  });
            g.y += s.strength / std::numbers::pi * ray_integral([&](double e) {
                       const double x = p.x + e;
                       const double d2 = x * x + dy * dy;
                       return std::exp(h * e) * (-2.0 * x * dy) / (d2 * d2);
                   });
        }
        g.x += -h_ * vs - src.value(p);
        return g;
    }
    Vec2 g = scaled_modes_.gradient(p);
    for (const auto& s : base_.sources()) {
        const double dy = p.y - s.location;
        const double d2 = p.x * p.x + dy * dy;
        g.x += s.strength / std::numbers::pi * p.x / d2;
        g.y += s.strength / std::numbers::pi * dy / d2;
    }
    return g;
}

PlanarLinkField robin_link_halfplane(const HalfPlaneField& field, double h) {
    if (!std::isfinite(h) || !(h < 0.0)) throw ValidationError("half-plane Robin link needs h < 0");
    return PlanarLinkField(field, LinkKind::robin, h);
}

PlanarLinkField neumann_link_halfplane(const HalfPlaneField& field) {
    return PlanarLinkField(field, LinkKind::neumann);
}

DiskField robin_link_disk(const DiskField& field, double h) {
    if (!std::isfinite(h)) throw ValidationError("Robin parameter must be finite");
    return field.map_modes([h](std::size_t n) {
        const double d = static_cast<double>(n) + h;
        if (!(d > 0.0)) throw ValidationError("Robin link diverges: n + h <= 0");
        return 1.0 / d;
    });
}

DiskField neumann_link_disk(const DiskField& field) {
    if (field.a(0) != 0.0)
        throw ValidationError("Neumann link needs mean-free boundary data (a_0 = 0)");
    return field.map_modes([](std::size_t n) { return 1.0 / static_cast<double>(n); });
}

Evaluator make_evaluator(const PlanarLinkField& field) {
    return {[field](Point2 p) { return field.value(p); },
            [field](Point2 p) { return field.gradient(p); },
            [](Point2 p) { return p.x >= 0.0; }};
}

} // namespace layerfield
