#include "layerfield/theorems.hpp"

#include <cmath>
#include <limits>

#include "layerfield/error.hpp"
#include "layerfield/links.hpp"
#include "layerfield/variation.hpp"

namespace layerfield {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// V_0^inf of e^{h e} u(x + e, y).
double ray_variation(const HalfPlaneField& field, double h, Point2 p) {
    if (field.empty()) return 0.0;
    return total_variation([&](double e) { return std::exp(h * e) * field.value({p.x + e, p.y}); },
                           0.0, kInf)
        .value;
}

// V_0^1 of e^h u(e p).
double radial_variation(const DiskField& field, double h, Point2 p) {
    if (field.is_zero()) return 0.0;
    return total_variation(
               [&](double e) { return std::pow(e, h) * field.value(Point2{e * p.x, e * p.y}); }, 0.0,
               1.0)
        .value;
}

Vec2 reflect_x(Vec2 g) { return {-g.x, g.y}; }

template <class F>
Evaluator evaluator_from(F value, std::function<Vec2(Point2)> gradient,
                         const std::function<Region(Point2)>& classify, Region region) {
    return {std::move(value), std::move(gradient),
            [classify, region](Point2 p) { return classify(p) == region; }};
}

void require_small_k(double k) {
    if (!(k > 0.0 && k < 1.0)) throw ValidationError("small-k branch needs 0 < k < 1");
}

void require_large_k(double k) {
    if (!(k > 1.0) || !std::isfinite(k)) throw ValidationError("large-k branch needs k > 1");
}

} // namespace

Approximation thm1_halfplane_small_k(const HalfPlaneField& field, const PlanarLayerConfig& cfg) {
    cfg.validate();
    require_small_k(cfg.k);
    const double l = cfg.l;
    const double rho = cfg.rho();
    const double h = cfg.robin_h();
    const double stretch = cfg.a1 / cfg.a2;
    const PlanarLinkField u3 = robin_link_halfplane(field, h);
    const double c = 1.0 / (2.0 * l);

    Approximation out;
    out.robin_h = h;
    LayeredSolution& sol = out.solution;
    sol.kind = ProblemKind::halfplane_coupled;
    sol.classify = planar_classifier(sol.kind, l);
    sol.truncation = {0, 0.0, 0.0};

    sol.layer1 = evaluator_from(
        [=](Point2 p) { return c * (u3.value(p) - rho * u3.value({2.0 * l - p.x, p.y})); },
        [=](Point2 p) {
            const Vec2 a = u3.gradient(p);
            const Vec2 b = reflect_x(u3.gradient({2.0 * l - p.x, p.y}));
            return Vec2{c * (a.x - rho * b.x), c * (a.y - rho * b.y)};
        },
        sol.classify, Region::layer1);
    sol.layer2 = evaluator_from(
        [=](Point2 p) { return (1.0 - rho) * c * u3.value({stretch * (p.x - l) + l, p.y}); },
        [=](Point2 p) {
            const Vec2 g = u3.gradient({stretch * (p.x - l) + l, p.y});
            return Vec2{(1.0 - rho) * c * stretch * g.x, (1.0 - rho) * c * g.y};
        },
        sol.classify, Region::layer2);

    const auto classify = sol.classify;
    out.bound = [=](Point2 p) {
        switch (classify(p)) {
        case Region::layer1:
            return ray_variation(field, h, p) + rho * ray_variation(field, h, {2.0 * l - p.x, p.y});
        case Region::layer2:
            return (1.0 - rho) * ray_variation(field, h, {stretch * (p.x - l) + l, p.y});
        default: throw ValidationError("point outside the layered half-plane");
        }
    };
    return out;
}

Approximation thm2_halfplane_large_k(const HalfPlaneField& field, const PlanarLayerConfig& cfg) {
    cfg.validate();
    require_large_k(cfg.k);
    const double l = cfg.l;
    const double q = -cfg.rho();
    const double h = std::log(q) / (2.0 * l);
    const double stretch = cfg.a1 / cfg.a2;
    const PlanarLinkField u3 = robin_link_halfplane(field, h);
    const double c = 1.0 / (4.0 * l);

    // A(x) ~ sum_j (-q)^j u(x + 2lj) ~ (u3(x) - q u3(x + 2l)) / 4l.
    const auto A = [=](Point2 p) { return c * (u3.value(p) - q * u3.value({p.x + 2.0 * l, p.y})); };
    const auto dA = [=](Point2 p) {
        const Vec2 a = u3.gradient(p);
        const Vec2 b = u3.gradient({p.x + 2.0 * l, p.y});
        return Vec2{c * (a.x - q * b.x), c * (a.y - q * b.y)};
    };

    Approximation out;
    out.robin_h = h;
    LayeredSolution& sol = out.solution;
    sol.kind = ProblemKind::halfplane_coupled;
    sol.classify = planar_classifier(sol.kind, l);
    sol.truncation = {0, 0.0, 0.0};
    sol.layer1 = evaluator_from(
        [=](Point2 p) { return A(p) + q * A({2.0 * l - p.x, p.y}); },
        [=](Point2 p) {
            const Vec2 a = dA(p);
            const Vec2 b = reflect_x(dA({2.0 * l - p.x, p.y}));
            return Vec2{a.x + q * b.x, a.y + q * b.y};
        },
        sol.classify, Region::layer1);
    sol.layer2 = evaluator_from(
        [=](Point2 p) { return (1.0 + q) * A({stretch * (p.x - l) + l, p.y}); },
        [=](Point2 p) {
            const Vec2 g = dA({stretch * (p.x - l) + l, p.y});
            return Vec2{(1.0 + q) * stretch * g.x, (1.0 + q) * g.y};
        },
        sol.classify, Region::layer2);
    return out;
}

Approximation thm3_strip(const HalfPlaneField& field, double l) {
    if (!std::isfinite(l) || !(l > 0.0)) throw ValidationError("strip width l must be positive");
    const PlanarLinkField u2 = neumann_link_halfplane(field);
    const double c = 1.0 / (2.0 * l);

    Approximation out;
    LayeredSolution& sol = out.solution;
    sol.kind = ProblemKind::strip;
    sol.classify = planar_classifier(sol.kind, l);
    sol.truncation = {0, 0.0, 0.0};
    sol.layer1 = evaluator_from(
        [=](Point2 p) { return c * (u2.value({2.0 * l - p.x, p.y}) - u2.value(p)); },
        [=](Point2 p) {
            const Vec2 a = reflect_x(u2.gradient({2.0 * l - p.x, p.y}));
            const Vec2 b = u2.gradient(p);
            return Vec2{c * (a.x - b.x), c * (a.y - b.y)};
        },
        sol.classify, Region::layer1);

    const auto classify = sol.classify;
    out.bound = [=](Point2 p) {
        if (classify(p) != Region::layer1) throw ValidationError("point outside the strip");
        if (field.empty()) return 0.0;
        return total_variation(
                   [&](double e) {
                       return field.value({p.x + e, p.y}) - field.value({2.0 * l - p.x + e, p.y});
                   },
                   0.0, kInf)
            .value;
    };
    return out;
}

Approximation thm4_disk_small_k(const DiskField& field, const RadialLayerConfig& cfg) {
    cfg.validate();
    require_small_k(cfg.k);
    const double R2 = cfg.R * cfg.R;
    const double s = std::log(1.0 / R2);
    const double rho = cfg.rho();
    const double h = cfg.robin_h();
    const DiskField u3 = robin_link_disk(field, h);

    Approximation out;
    out.robin_h = h;
    LayeredSolution& sol = out.solution;
    sol.kind = ProblemKind::disk_coupled;
    sol.classify = radial_classifier(sol.kind, cfg.R);
    sol.truncation = {0, 0.0, 0.0};
    sol.layer1 = evaluator_from(
        [=](Point2 p) { return (u3.value(p) - rho * u3.value(kelvin_point(p, R2))) / s; },
        [=](Point2 p) {
            const Vec2 a = u3.gradient(p);
            const Vec2 b = kelvin_pullback(p, R2, u3.gradient(kelvin_point(p, R2)));
            return Vec2{(a.x - rho * b.x) / s, (a.y - rho * b.y) / s};
        },
        sol.classify, Region::layer1);
    sol.layer2 = evaluator_from(
        [=](Point2 p) { return (1.0 - rho) * u3.value(p) / s; },
        [=](Point2 p) {
            const Vec2 g = u3.gradient(p);
            return Vec2{(1.0 - rho) * g.x / s, (1.0 - rho) * g.y / s};
        },
        sol.classify, Region::layer2);

    const auto classify = sol.classify;
    out.bound = [=](Point2 p) {
        switch (classify(p)) {
        case Region::layer1:
            return radial_variation(field, h, p) + rho * radial_variation(field, h, kelvin_point(p, R2));
        case Region::layer2: return (1.0 - rho) * radial_variation(field, h, p);
        default: throw ValidationError("point outside the unit disk");
        }
    };
    return out;
}

Approximation thm4_disk_large_k(const DiskField& field, const RadialLayerConfig& cfg) {
    cfg.validate();
    require_large_k(cfg.k);
    const double R2 = cfg.R * cfg.R;
    const double s = std::log(1.0 / R2);
    const double q = -cfg.rho();
    const double h = std::log(q) / (2.0 * std::log(cfg.R));
    const DiskField u3 = robin_link_disk(field, h);
    const double c = 1.0 / (2.0 * s);

    // A(p) ~ sum_j (-q)^j u(R^{2j} p) ~ (u3(p) - q u3(R^2 p)) / 2s.
    const auto A = [=](Point2 p) { return c * (u3.value(p) - q * u3.value(Point2{R2 * p.x, R2 * p.y})); };
    const auto dA = [=](Point2 p) {
        const Vec2 a = u3.gradient(p);
        const Vec2 b = u3.gradient(Point2{R2 * p.x, R2 * p.y});
        return Vec2{c * (a.x - q * R2 * b.x), c * (a.y - q * R2 * b.y)};
    };

    Approximation out;
    out.robin_h = h;
    LayeredSolution& sol = out.solution;
    sol.kind = ProblemKind::disk_coupled;
    sol.classify = radial_classifier(sol.kind, cfg.R);
    sol.truncation = {0, 0.0, 0.0};
    sol.layer1 = evaluator_from(
        [=](Point2 p) { return A(p) + q * A(kelvin_point(p, R2)); },
        [=](Point2 p) {
            const Vec2 a = dA(p);
            const Vec2 b = kelvin_pullback(p, R2, dA(kelvin_point(p, R2)));
            return Vec2{a.x + q * b.x, a.y + q * b.y};
        },
        sol.classify, Region::layer1);
    sol.layer2 = evaluator_from(
        [=](Point2 p) { return (1.0 + q) * A(p); },
        [=](Point2 p) {
            const Vec2 g = dA(p);
            return Vec2{(1.0 + q) * g.x, (1.0 + q) * g.y};
        },
        sol.classify, Region::layer2);
    return out;
}

Approximation thm5_annulus(const DiskField& field, double R) {
    if (!std::isfinite(R) || !(R > 0.0) || !(R < 1.0))
        throw ValidationError("inner radius R must lie in (0, 1)");
    const double R2 = R * R;
    const double s = std::log(1.0 / R2);
    const DiskField u2 = neumann_link_disk(field);

    Approximation out;
    LayeredSolution& sol = out.solution;
    sol.kind = ProblemKind::annulus;
    sol.classify = radial_classifier(sol.kind, R);
    sol.truncation = {0, 0.0, 0.0};
    sol.layer1 = evaluator_from(
        [=](Point2 p) { return (u2.value(p) - u2.value(kelvin_point(p, R2))) / s; },
        [=](Point2 p) {
            const Vec2 a = u2.gradient(p);
            const Vec2 b = kelvin_pullback(p, R2, u2.gradient(kelvin_point(p, R2)));
            return Vec2{(a.x - b.x) / s, (a.y - b.y) / s};
        },
        sol.classify, Region::layer1);

    const auto classify = sol.classify;
    out.bound = [=](Point2 p) {
        if (classify(p) != Region::layer1) throw ValidationError("point outside the annulus");
        if (field.is_zero()) return 0.0;
        const Point2 kp = kelvin_point(p, R2);
        return total_variation(
                   [&](double e) {
                       return field.value(Point2{e * p.x, e * p.y}) - field.value(Point2{e * kp.x, e * kp.y});
                   },
                   0.0, 1.0)
            .value;
    };
    return out;
}

Approximation asymptotic_halfplane(const HalfPlaneField& field, const PlanarLayerConfig& cfg) {
    cfg.validate();
    if (cfg.k < 1.0) return thm1_halfplane_small_k(field, cfg);
    if (cfg.k > 1.0) return thm2_halfplane_large_k(field, cfg);
    Approximation out;
    out.solution = halfplane_coupled(field, cfg, MaxTerms{1});
    out.bound = [](Point2) { return 0.0; };
    return out;
}

Approximation asymptotic_disk(const DiskField& field, const RadialLayerConfig& cfg) {
    cfg.validate();
    if (cfg.k < 1.0) return thm4_disk_small_k(field, cfg);
    if (cfg.k > 1.0) return thm4_disk_large_k(field, cfg);
    Approximation out;
    out.solution = disk_coupled(field, cfg, MaxTerms{1});
    out.bound = [](Point2) { return 0.0; };
    return out;
}

} // namespace layerfield
