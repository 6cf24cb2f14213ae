#include <cmath>
#include <string>

#include "layerfield/error.hpp"
#include "layerfield/oracle.hpp"

namespace layerfield {

Ladder geometric_ladder(double rho, std::function<double(std::size_t)> f, double sup_bound) {
    if (!(std::abs(rho) < 1.0)) throw ValidationError("geometric ladder needs |rho| < 1");
    const double a = std::abs(rho);
    Ladder ladder;
    ladder.term = [rho, f = std::move(f)](std::size_t j) {
        return std::pow(rho, static_cast<double>(j)) * f(j);
    };
    ladder.tail = [a, sup_bound](std::size_t J) {
        if (a == 0.0) return J == 0 ? sup_bound : 0.0;
        return sup_bound * std::pow(a, static_cast<double>(J)) / (1.0 - a);
    };
    return ladder;
}

BruteSum brute_series(const Ladder& ladder, std::size_t terms, double required_tail) {
    BruteSum out;
    out.terms = terms;
    out.tail_bound = ladder.tail(terms);
    if (!(out.tail_bound <= required_tail))
        throw ConvergenceError("arbiter insufficient: tail bound " + std::to_string(out.tail_bound) +
                                   " after " + std::to_string(terms) + " terms",
                               out.tail_bound);
    long double acc = 0.0L;
    for (std::size_t j = 0; j < terms; ++j) acc += static_cast<long double>(ladder.term(j));
    out.value = static_cast<double>(acc);
    return out;
}

BruteSum brute_series_auto(const Ladder& ladder, std::size_t max_terms, double required_tail) {
    std::size_t hi = 1;
    while (!(ladder.tail(hi) <= required_tail)) {
        if (hi >= max_terms) return brute_series(ladder, max_terms, required_tail); // throws
        hi = std::min(hi * 2, max_terms);
    }
    std::size_t lo = hi / 2;
    while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (ladder.tail(mid) <= required_tail) hi = mid;
        else lo = mid;
    }
    return brute_series(ladder, hi, required_tail);
}

namespace {

constexpr double kArbiterTail = 1e-13;

double sum_abs_modes(const DiskField& field, bool skip_constant) {
    double s = skip_constant ? 0.0 : std::abs(field.a(0)) / 2.0;
    for (std::size_t n = 1; n <= field.degree(); ++n) s += std::abs(field.a(n)) + std::abs(field.b(n));
    return s;
}

} // namespace

LayeredSolution brute_halfplane_coupled(const HalfPlaneField& field, const PlanarLayerConfig& cfg,
                                        std::size_t max_terms) {
    cfg.validate();
    const double l = cfg.l;
    const double rho = cfg.rho();
    const double a = std::abs(rho);
    const double stretch = cfg.a1 / cfg.a2;

    LayeredSolution sol;
    sol.kind = ProblemKind::halfplane_coupled;
    sol.classify = planar_classifier(sol.kind, l);
    const auto classify = sol.classify;

    sol.layer1.value = [=](Point2 p) {
        Ladder ladder;
        ladder.term = [&](std::size_t j) {
            const double s = 2.0 * l * static_cast<double>(j);
            return std::pow(rho, static_cast<double>(j)) *
                   (field.value({p.x + s, p.y}) - rho * field.value({2.0 * l - p.x + s, p.y}));
        };
        ladder.tail = [&](std::size_t J) {
            const double env = field.envelope(std::max(p.x, 0.0) + 2.0 * l * static_cast<double>(J));
            if (a == 0.0) return J == 0 ? env : 0.0;
            return (1.0 + a) * env * std::pow(a, static_cast<double>(J)) / (1.0 - a);
        };
        return brute_series_auto(ladder, max_terms, kArbiterTail).value;
    };
    sol.layer1.contains = [classify](Point2 p) { return classify(p) == Region::layer1; };

    sol.layer2.value = [=](Point2 p) {
        const double base = stretch * (p.x - l) + l;
        Ladder ladder;
        ladder.term = [&](std::size_t j) {
            return (1.0 - rho) * std::pow(rho, static_cast<double>(j)) *
                   field.value({base + 2.0 * l * static_cast<double>(j), p.y});
        };
        ladder.tail = [&](std::size_t J) {
            const double env = field.envelope(base + 2.0 * l * static_cast<double>(J));
            if (a == 0.0) return J == 0 ? env : 0.0;
            return (1.0 - rho) * env * std::pow(a, static_cast<double>(J)) / (1.0 - a);
        };
        return brute_series_auto(ladder, max_terms, kArbiterTail).value;
    };
    sol.layer2.contains = [classify](Point2 p) { return classify(p) == Region::layer2; };
    return sol;
}

LayeredSolution brute_strip(const HalfPlaneField& field, double l, std::size_t max_terms) {
    if (!std::isfinite(l) || !(l > 0.0)) throw ValidationError("strip width l must be positive");
    LayeredSolution sol;
    sol.kind = ProblemKind::strip;
    sol.classify = planar_classifier(sol.kind, l);
    const auto classify = sol.classify;
    sol.layer1.value = [=](Point2 p) {
        Ladder ladder;
        ladder.term = [&](std::size_t j) {
            const double s = 2.0 * l * static_cast<double>(j);
            return field.value({p.x + s, p.y}) - field.value({2.0 * l - p.x + s, p.y});
        };
        // Both images of pair j sit at abscissa >= x + 2lj.
        ladder.tail = [&](std::size_t J) {
            const double x0 = std::max(p.x, 0.0) + 2.0 * l * static_cast<double>(J);
            return 2.0 * (field.envelope(x0) + field.envelope_integral(x0) / (2.0 * l));
        };
        return brute_series_auto(ladder, max_terms, kArbiterTail).value;
    };
    sol.layer1.contains = [classify](Point2 p) { return classify(p) == Region::layer1; };
    return sol;
}

LayeredSolution brute_disk_coupled(const DiskField& field, const RadialLayerConfig& cfg,
                                   std::size_t max_terms) {
    cfg.validate();
    const double rho = cfg.rho();
    const double a = std::abs(rho);
    const double R2 = cfg.R * cfg.R;

    LayeredSolution sol;
    sol.kind = ProblemKind::disk_coupled;
    sol.classify = radial_classifier(sol.kind, cfg.R);
    const auto classify = sol.classify;

    // Every image argument of index j >= J lies in the disk of radius R^{2J}.
    const auto geometric_tail = [=](std::size_t J, double weight) {
        const double env = field.envelope(std::pow(R2, static_cast<double>(J)));
        if (a == 0.0) return J == 0 ? weight * env : 0.0;
        return weight * env * std::pow(a, static_cast<double>(J)) / (1.0 - a);
    };

    sol.layer1.value = [=](Point2 p) {
        const Point2 kp = kelvin_point(p, R2);
        Ladder ladder;
        ladder.term = [&](std::size_t j) {
            const double s = std::pow(R2, static_cast<double>(j));
            return std::pow(rho, static_cast<double>(j)) *
                   (field.value(Point2{s * p.x, s * p.y}) - rho * field.value(Point2{s * kp.x, s * kp.y}));
        };
        ladder.tail = [&](std::size_t J) { return geometric_tail(J, 1.0 + a); };
        return brute_series_auto(ladder, max_terms, kArbiterTail).value;
    };
    sol.layer1.contains = [classify](Point2 p) { return classify(p) == Region::layer1; };

    sol.layer2.value = [=](Point2 p) {
        Ladder ladder;
        ladder.term = [&](std::size_t j) {
            const double s = std::pow(R2, static_cast<double>(j));
            return (1.0 - rho) * std::pow(rho, static_cast<double>(j)) * field.value(Point2{s * p.x, s * p.y});
        };
        ladder.tail = [&](std::size_t J) { return geometric_tail(J, 1.0 - rho); };
        return brute_series_auto(ladder, max_terms, kArbiterTail).value;
    };
    sol.layer2.contains = [classify](Point2 p) { return classify(p) == Region::layer2; };
    return sol;
}

LayeredSolution brute_annulus(const DiskField& field, double R, std::size_t max_terms) {
    if (!std::isfinite(R) || !(R > 0.0) || !(R < 1.0))
        throw ValidationError("inner radius R must lie in (0, 1)");
    const double R2 = R * R;
    const double amp = sum_abs_modes(field, true);
    std::size_t lowest = 0;
    for (std::size_t n = 1; n <= field.degree() && lowest == 0; ++n)
        if (field.a(n) != 0.0 || field.b(n) != 0.0) lowest = n;

    LayeredSolution sol;
    sol.kind = ProblemKind::annulus;
    sol.classify = radial_classifier(sol.kind, R);
    const auto classify = sol.classify;
    sol.layer1.value = [=](Point2 p) {
        const Point2 kp = kelvin_point(p, R2);
        Ladder ladder;
        ladder.term = [&](std::size_t j) {
            const double s = std::pow(R2, static_cast<double>(j));
            return field.value(Point2{s * p.x, s * p.y}) - field.value(Point2{s * kp.x, s * kp.y});
        };
        // Non-constant modes decay at least like R^{2 J n_min}; the constant cancels in each pair.
        ladder.tail = [&](std::size_t J) {
            if (lowest == 0) return 0.0;
            const double q = std::pow(R2, static_cast<double>(lowest));
            return 2.0 * amp * std::pow(q, static_cast<double>(J)) / (1.0 - q);
        };
        return brute_series_auto(ladder, max_terms, kArbiterTail).value;
    };
    sol.layer1.contains = [classify](Point2 p) { return classify(p) == Region::layer1; };
    return sol;
}

} // namespace layerfield
