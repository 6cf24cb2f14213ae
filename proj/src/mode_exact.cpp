#include <cmath>

#include "layerfield/error.hpp"
#include "layerfield/oracle.hpp"

namespace layerfield {

namespace {

HalfPlaneField rescale(const HalfPlaneField& field, const std::function<double(double)>& factor) {
    if (!field.modes_only()) throw ValidationError("closed-form oracle supports mode inputs only");
    std::vector<PlanarMode> modes = field.modes();
    for (auto& m : modes) m.amplitude *= factor(m.frequency);
    return HalfPlaneField(std::move(modes));
}

Evaluator region_evaluator(std::function<double(Point2)> value, std::function<Vec2(Point2)> gradient,
                           const std::function<Region(Point2)>& classify, Region region) {
    return {std::move(value), std::move(gradient),
            [classify, region](Point2 p) { return classify(p) == region; }};
}

// u(p) - w u(image(p)) where image is the mirror x -> 2l - x.
Evaluator mirrored(const HalfPlaneField& c, double l, double w,
                   const std::function<Region(Point2)>& classify) {
    return region_evaluator(
        [=](Point2 p) { return c.value(p) - w * c.value({2.0 * l - p.x, p.y}); },
        [=](Point2 p) {
            const Vec2 a = c.gradient(p);
            const Vec2 b = c.gradient({2.0 * l - p.x, p.y});
            return Vec2{a.x + w * b.x, a.y - w * b.y};
        },
        classify, Region::layer1);
}

// u(p) - w u(K p) with K the inversion in the circle of radius R.
Evaluator inverted(const DiskField& c, double R2, double w, const std::function<Region(Point2)>& classify) {
    return region_evaluator(
        [=](Point2 p) { return c.value(p) - w * c.value(kelvin_point(p, R2)); },
        [=](Point2 p) {
            const Vec2 a = c.gradient(p);
            const Vec2 b = kelvin_pullback(p, R2, c.gradient(kelvin_point(p, R2)));
            return Vec2{a.x - w * b.x, a.y - w * b.y};
        },
        classify, Region::layer1);
}

} // namespace

LayeredSolution mode_exact_strip(const HalfPlaneField& field, double l) {
    if (!std::isfinite(l) || !(l > 0.0)) throw ValidationError("strip width l must be positive");
    const HalfPlaneField c = rescale(field, [l](double w) { return 1.0 / -std::expm1(-2.0 * w * l); });
    LayeredSolution sol;
    sol.kind = ProblemKind::strip;
    sol.classify = planar_classifier(sol.kind, l);
    sol.layer1 = mirrored(c, l, 1.0, sol.classify);
    return sol;
}

LayeredSolution mode_exact_halfplane(const HalfPlaneField& field, const PlanarLayerConfig& cfg) {
    cfg.validate();
    const double l = cfg.l;
    const double rho = cfg.rho();
    const double stretch = cfg.a1 / cfg.a2;
    const HalfPlaneField c =
        rescale(field, [=](double w) { return 1.0 / (1.0 - rho * std::exp(-2.0 * w * l)); });

    LayeredSolution sol;
    sol.kind = ProblemKind::halfplane_coupled;
    sol.classify = planar_classifier(sol.kind, l);
    sol.layer1 = mirrored(c, l, rho, sol.classify);
    sol.layer2 = region_evaluator(
        [=](Point2 p) { return (1.0 - rho) * c.value({stretch * (p.x - l) + l, p.y}); },
        [=](Point2 p) {
            const Vec2 g = c.gradient({stretch * (p.x - l) + l, p.y});
            return Vec2{(1.0 - rho) * stretch * g.x, (1.0 - rho) * g.y};
        },
        sol.classify, Region::layer2);
    return sol;
}

LayeredSolution mode_exact_annulus(const DiskField& field, double R) {
    if (!std::isfinite(R) || !(R > 0.0) || !(R < 1.0))
        throw ValidationError("inner radius R must lie in (0, 1)");
    if (field.a(0) != 0.0)
        throw ValidationError("closed-form annulus oracle does not support the constant mode");
    const double R2 = R * R;
    const DiskField c = field.map_modes([R2](std::size_t n) {
        return n == 0 ? 0.0 : 1.0 / -std::expm1(static_cast<double>(n) * std::log(R2));
    });
    LayeredSolution sol;
    sol.kind = ProblemKind::annulus;
    sol.classify = radial_classifier(sol.kind, R);
    sol.layer1 = inverted(c, R2, 1.0, sol.classify);
    return sol;
}

LayeredSolution mode_exact_disk(const DiskField& field, const RadialLayerConfig& cfg) {
    cfg.validate();
    const double R2 = cfg.R * cfg.R;
    const double rho = cfg.rho();
    const DiskField c = field.map_modes([=](std::size_t n) {
        return 1.0 / (1.0 - rho * std::pow(R2, static_cast<double>(n)));
    });
    LayeredSolution sol;
    sol.kind = ProblemKind::disk_coupled;
    sol.classify = radial_classifier(sol.kind, cfg.R);
    sol.layer1 = inverted(c, R2, rho, sol.classify);
    sol.layer2 = region_evaluator(
        [=](Point2 p) { return (1.0 - rho) * c.value(p); },
        [=](Point2 p) {
            const Vec2 g = c.gradient(p);
            return Vec2{(1.0 - rho) * g.x, (1.0 - rho) * g.y};
        },
        sol.classify, Region::layer2);
    return sol;
}

} // namespace layerfield
