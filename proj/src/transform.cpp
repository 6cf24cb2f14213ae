#include "layerfield/transform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "layerfield/error.hpp"
#include "layerfield/summation.hpp"

namespace layerfield {

namespace {

constexpr double kBoundarySlack = 1e-12;

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

double reflection_ratio(double k) { return (1.0 - k) / (1.0 + k); }

} // namespace

// ---------------------------------------------------------------------------
// configs

PlanarLayerConfig PlanarLayerConfig::make(double l, std::optional<double> k, double a1, double a2,
                                          std::optional<double> lambda1,
                                          std::optional<double> lambda2) {
    PlanarLayerConfig cfg;
    cfg.l = l;
    cfg.a1 = a1;
    cfg.a2 = a2;
    cfg.lambda1 = lambda1;
    cfg.lambda2 = lambda2;
    if (k) {
        cfg.k = *k;
    } else if (lambda1 && lambda2) {
        if (!positive_finite(*lambda1) || !positive_finite(*lambda2) || !positive_finite(a1) ||
            !positive_finite(a2))
            throw ValidationError("conductivities and coefficients must be positive");
        cfg.k = (*lambda1 / *lambda2) * (a2 / a1);
    } else {
        throw ValidationError("planar config needs k or both conductivities lambda1, lambda2");
    }
    cfg.validate();
    return cfg;
}

void PlanarLayerConfig::validate() const {
    if (!positive_finite(l)) throw ValidationError("layer thickness l must be positive");
    if (!positive_finite(k)) throw ValidationError("coupling ratio k must be positive");
    if (!positive_finite(a1) || !positive_finite(a2))
        throw ValidationError("coefficients a1, a2 must be positive");
    if (lambda1.has_value() != lambda2.has_value())
        throw ValidationError("give both conductivities or neither");
    if (lambda1) {
        if (!positive_finite(*lambda1) || !positive_finite(*lambda2))
            throw ValidationError("conductivities must be positive");
        const double derived = (*lambda1 / *lambda2) * (a2 / a1);
        if (std::abs(derived - k) > 1e-12 * std::max(1.0, std::abs(k)))
            throw ValidationError("k disagrees with (lambda1/lambda2)(a2/a1)");
    }
}

double PlanarLayerConfig::rho() const { return reflection_ratio(k); }

double PlanarLayerConfig::robin_h() const {
    const double r = rho();
    if (r == 0.0) throw ValidationError("Robin parameter undefined for k = 1 (rho = 0)");
    return std::log(std::abs(r)) / (2.0 * l);
}

RadialLayerConfig RadialLayerConfig::make(double R, double k) {
    RadialLayerConfig cfg{R, k};
    cfg.validate();
    return cfg;
}

void RadialLayerConfig::validate() const {
    if (!std::isfinite(R) || !(R > 0.0) || !(R < 1.0))
        throw ValidationError("inner radius R must lie in (0, 1)");
    if (!positive_finite(k)) throw ValidationError("coupling ratio k must be positive");
}

double RadialLayerConfig::rho() const { return reflection_ratio(k); }

double RadialLayerConfig::robin_h() const {
    const double r = rho();
    if (r == 0.0) throw ValidationError("Robin parameter undefined for k = 1 (rho = 0)");
    return std::log(std::abs(r)) / (2.0 * std::log(R));
}

// ---------------------------------------------------------------------------
// names and regions

std::string to_string(ProblemKind kind) {
    switch (kind) {
    case ProblemKind::halfplane_coupled: return "halfplane_coupled";
    case ProblemKind::strip: return "strip";
    case ProblemKind::disk_coupled: return "disk_coupled";
    case ProblemKind::annulus: return "annulus";
    }
    return "?";
}

std::string to_string(Region region) {
    switch (region) {
    case Region::layer1: return "1";
    case Region::layer2: return "2";
    case Region::outside: return "outside";
    }
    return "?";
}

ProblemKind problem_kind_from_string(const std::string& name) {
    for (auto k : {ProblemKind::halfplane_coupled, ProblemKind::strip, ProblemKind::disk_coupled,
                   ProblemKind::annulus})
        if (to_string(k) == name) return k;
    throw ValidationError("unknown problem '" + name + "'");
}

bool is_radial(ProblemKind kind) noexcept {
    return kind == ProblemKind::disk_coupled || kind == ProblemKind::annulus;
}

std::function<Region(Point2)> planar_classifier(ProblemKind kind, double l) {
    const bool two_layers = kind == ProblemKind::halfplane_coupled;
    return [l, two_layers](Point2 p) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y) || p.x < -kBoundarySlack) return Region::outside;
        if (p.x <= l + kBoundarySlack * l) return Region::layer1;
        return two_layers ? Region::layer2 : Region::outside;
    };
}

std::function<Region(Point2)> radial_classifier(ProblemKind kind, double R) {
    const bool two_layers = kind == ProblemKind::disk_coupled;
    return [R, two_layers](Point2 p) {
        const double r = std::hypot(p.x, p.y);
        if (!std::isfinite(r) || r > 1.0 + kBoundarySlack) return Region::outside;
        if (r >= R * (1.0 - kBoundarySlack)) return Region::layer1;
        return two_layers ? Region::layer2 : Region::outside;
    };
}

double LayeredSolution::value(Point2 p) const {
    const Region region = classify(p);
    if (region == Region::outside) throw ValidationError("point lies outside the problem domain");
    return evaluator(region).value(p);
}

const Evaluator& LayeredSolution::evaluator(Region region) const {
    if (region == Region::layer1) return layer1;
    if (region == Region::layer2 && layer2.value) return layer2;
    throw ValidationError("no evaluator for region " + to_string(region));
}

// ---------------------------------------------------------------------------
// truncation

std::size_t geometric_tail_terms(double rho, double tol, double sup_bound) {
    if (!std::isfinite(rho) || !(std::abs(rho) < 1.0))
        throw ValidationError("geometric tail needs |rho| < 1");
    if (!positive_finite(tol) || !positive_finite(sup_bound))
        throw ValidationError("tolerance and sup bound must be positive");
    const double q = std::abs(rho);
    if (q == 0.0) return 1;
    const auto tail = [&](double j) { return sup_bound * std::pow(q, j) / (1.0 - q); };
    const double estimate = std::log(tol * (1.0 - q) / sup_bound) / std::log(q);
    if (!(estimate < 1e15)) throw ConvergenceError("tail tolerance unreachable", tail(1e15));
    auto j = static_cast<std::size_t>(std::max(1.0, std::ceil(estimate)));
    // Settle rounding in the logarithms.
    while (j > 1 && tail(static_cast<double>(j - 1)) <= tol) --j;
    while (tail(static_cast<double>(j)) > tol) ++j;
    return j;
}

namespace {

TruncationInfo resolve_weighted(double rho, double derived_sup, const Truncation& trunc) {
    const double q = std::abs(rho);
    TruncationInfo info;
    if (const auto* fixed = std::get_if<MaxTerms>(&trunc)) {
        if (fixed->terms == 0) throw ValidationError("MaxTerms needs at least one term");
        info.terms = fixed->terms;
        info.sup_bound = derived_sup;
    } else {
        const auto& tt = std::get<TailTol>(trunc);
        if (!positive_finite(tt.tol)) throw ValidationError("tail tolerance must be positive");
        if (tt.sup_bound < 0.0) throw ValidationError("sup bound must be non-negative");
        info.sup_bound = tt.sup_bound > 0.0 ? tt.sup_bound : derived_sup;
        if (info.sup_bound == 0.0 || q == 0.0) {
            info.terms = 1;
        } else {
            info.terms = geometric_tail_terms(rho, tt.tol, info.sup_bound);
            if (info.terms > kMaxSeriesTerms) {
                const double achieved = info.sup_bound * std::pow(q, kMaxSeriesTerms) / (1.0 - q);
                throw ConvergenceError("tail tolerance not reachable within the term cap", achieved);
            }
        }
    }
    info.tail_bound =
        q == 0.0 ? 0.0 : info.sup_bound * std::pow(q, static_cast<double>(info.terms)) / (1.0 - q);
    return info;
}

// Smallest J >= 1 with tail(J) <= tol for a non-increasing tail bound.
TruncationInfo resolve_unweighted(const std::function<double(std::size_t)>& tail, double sup,
                                  const Truncation& trunc) {
    TruncationInfo info;
    info.sup_bound = sup;
    if (const auto* fixed = std::get_if<MaxTerms>(&trunc)) {
        if (fixed->terms == 0) throw ValidationError("MaxTerms needs at least one term");
        info.terms = fixed->terms;
        info.tail_bound = tail(info.terms);
        return info;
    }
    const double tol = std::get<TailTol>(trunc).tol;
    if (!positive_finite(tol)) throw ValidationError("tail tolerance must be positive");
    std::size_t hi = 1;
    while (!(tail(hi) <= tol)) {
        if (hi >= kMaxSeriesTerms)
            throw ConvergenceError("tail tolerance not reachable within the term cap",
                                   tail(kMaxSeriesTerms));
        hi = std::min(hi * 2, kMaxSeriesTerms);
    }
    std::size_t lo = hi / 2; // tail(lo) > tol or lo == 0
    while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (tail(mid) <= tol) hi = mid;
        else lo = mid;
    }
    info.terms = std::max<std::size_t>(hi, 1);
    info.tail_bound = tail(info.terms);
    return info;
}

} // namespace

double weighted_sup_bound(const HalfPlaneField& field, const PlanarLayerConfig& cfg) {
    return (1.0 + std::abs(cfg.rho())) * field.envelope(2.0 * cfg.l);
}

double weighted_sup_bound(const DiskField& field, const RadialLayerConfig& cfg) {
    return (1.0 + std::abs(cfg.rho())) * field.envelope(cfg.R * cfg.R);
}

// ---------------------------------------------------------------------------
// planar ladders

LayeredSolution halfplane_coupled(const HalfPlaneField& field, const PlanarLayerConfig& cfg,
                                  const Truncation& trunc) {
    cfg.validate();
    const double rho = cfg.rho();
    const TruncationInfo info = resolve_weighted(rho, weighted_sup_bound(field, cfg), trunc);
    const std::size_t terms = info.terms;
    const double l = cfg.l;
    const double stretch = cfg.a1 / cfg.a2;
    const double transmit = 1.0 - rho; // == 2k / (k + 1)

    LayeredSolution sol;
    sol.kind = ProblemKind::halfplane_coupled;
    sol.truncation = info;
    sol.classify = planar_classifier(sol.kind, l);
    const auto classify = sol.classify;

    sol.layer1.value = [=](Point2 p) {
        CompensatedSum s;
        double w = 1.0;
        for (std::size_t j = 0; j < terms; ++j) {
            const double shift = 2.0 * l * static_cast<double>(j);
            s += w * field.value({p.x + shift, p.y});
            s += -w * rho * field.value({2.0 * l - p.x + shift, p.y});
            w *= rho;
            if (w == 0.0) break;
        }
        return s.value();
    };
    sol.layer1.gradient = [=](Point2 p) {
        CompensatedSum gx, gy;
        double w = 1.0;
        for (std::size_t j = 0; j < terms; ++j) {
            const double shift = 2.0 * l * static_cast<double>(j);
            const Vec2 g1 = field.gradient({p.x + shift, p.y});
            const Vec2 g2 = field.gradient({2.0 * l - p.x + shift, p.y});
            gx += w * g1.x;
            gx += w * rho * g2.x;
            gy += w * g1.y;
            gy += -w * rho * g2.y;
            w *= rho;
            if (w == 0.0) break;
        }
        return Vec2{gx.value(), gy.value()};
    };
    sol.layer1.contains = [classify](Point2 p) { return classify(p) == Region::layer1; };

    sol.layer2.value = [=](Point2 p) {
        CompensatedSum s;
        double w = 1.0;
        const double base = stretch * (p.x - l) + l;
        for (std::size_t j = 0; j < terms; ++j) {
            s += w * field.value({base + 2.0 * l * static_cast<double>(j), p.y});
            w *= rho;
            if (w == 0.0) break;
        }
        return transmit * s.value();
    };
    sol.layer2.gradient = [=](Point2 p) {
        CompensatedSum gx, gy;
        double w = 1.0;
        const double base = stretch * (p.x - l) + l;
        for (std::size_t j = 0; j < terms; ++j) {
            const Vec2 g = field.gradient({base + 2.0 * l * static_cast<double>(j), p.y});
            gx += w * stretch * g.x;
            gy += w * g.y;
            w *= rho;
            if (w == 0.0) break;
        }
        return Vec2{transmit * gx.value(), transmit * gy.value()};
    };
    sol.layer2.contains = [classify](Point2 p) { return classify(p) == Region::layer2; };
    return sol;
}

LayeredSolution strip_dirichlet(const HalfPlaneField& field, double l, const Truncation& trunc) {
    if (!positive_finite(l)) throw ValidationError("strip width l must be positive");

    // Pairs j >= J have both arguments >= 2lJ and differ by at most 2l in x.
    const auto tail = [field, l](std::size_t j) {
        const double a = 2.0 * l * static_cast<double>(j);
        const double by_value = 2.0 * (field.envelope(a) + field.envelope_integral(a) / (2.0 * l));
        const double by_slope =
            2.0 * l * (field.slope_envelope(a) + field.slope_envelope_integral(a) / (2.0 * l));
        return std::min(by_value, by_slope);
    };
    const TruncationInfo info =
        field.empty() ? TruncationInfo{1, 0.0, 0.0} : resolve_unweighted(tail, field.envelope(0.0), trunc);
    const std::size_t terms = info.terms;

    LayeredSolution sol;
    sol.kind = ProblemKind::strip;
    sol.truncation = info;
    sol.classify = planar_classifier(sol.kind, l);
    const auto classify = sol.classify;

    sol.layer1.value = [=](Point2 p) {
        CompensatedSum s;
        for (std::size_t j = 0; j < terms; ++j) {
            const double shift = 2.0 * l * static_cast<double>(j);
            s += field.value({p.x + shift, p.y}) - field.value({2.0 * l - p.x + shift, p.y});
        }
        return s.value();
    };
    sol.layer1.gradient = [=](Point2 p) {
        CompensatedSum gx, gy;
        for (std::size_t j = 0; j < terms; ++j) {
            const double shift = 2.0 * l * static_cast<double>(j);
            const Vec2 g1 = field.gradient({p.x + shift, p.y});
            const Vec2 g2 = field.gradient({2.0 * l - p.x + shift, p.y});
            gx += g1.x + g2.x;
            gy += g1.y - g2.y;
        }
        return Vec2{gx.value(), gy.value()};
    };
    sol.layer1.contains = [classify](Point2 p) { return classify(p) == Region::layer1; };
    return sol;
}

// ---------------------------------------------------------------------------
// radial ladders

LayeredSolution disk_coupled(const DiskField& field, const RadialLayerConfig& cfg,
                             const Truncation& trunc) {
    cfg.validate();
    const double rho = cfg.rho();
    const double R2 = cfg.R * cfg.R;
    const TruncationInfo info = resolve_weighted(rho, weighted_sup_bound(field, cfg), trunc);
    const std::size_t terms = info.terms;
    const double transmit = 1.0 - rho;

    LayeredSolution sol;
    sol.kind = ProblemKind::disk_coupled;
    sol.truncation = info;
    sol.classify = radial_classifier(sol.kind, cfg.R);
    const auto classify = sol.classify;

    sol.layer1.value = [=](Point2 p) {
        CompensatedSum s;
        double w = 1.0, scale = 1.0;
        for (std::size_t j = 0; j < terms; ++j) {
            s += w * field.value(Point2{p.x * scale, p.y * scale});
            s += -w * rho * field.value(kelvin_point(p, scale * R2));
            w *= rho;
            scale *= R2;
            if (w == 0.0) break;
        }
        return s.value();
    };
    sol.layer1.gradient = [=](Point2 p) {
        CompensatedSum gx, gy;
        double w = 1.0, scale = 1.0;
        for (std::size_t j = 0; j < terms; ++j) {
            const Vec2 g1 = field.gradient(Point2{p.x * scale, p.y * scale});
            const double c = scale * R2;
            const Vec2 g2 = kelvin_pullback(p, c, field.gradient(kelvin_point(p, c)));
            gx += w * scale * g1.x;
            gx += -w * rho * g2.x;
            gy += w * scale * g1.y;
            gy += -w * rho * g2.y;
            w *= rho;
            scale *= R2;
            if (w == 0.0) break;
        }
        return Vec2{gx.value(), gy.value()};
    };
    sol.layer1.contains = [classify](Point2 p) { return classify(p) == Region::layer1; };

    sol.layer2.value = [=](Point2 p) {
        CompensatedSum s;
        double w = 1.0, scale = 1.0;
        for (std::size_t j = 0; j < terms; ++j) {
            s += w * field.value(Point2{p.x * scale, p.y * scale});
            w *= rho;
            scale *= R2;
            if (w == 0.0) break;
        }
        return transmit * s.value();
    };
    sol.layer2.gradient = [=](Point2 p) {
        CompensatedSum gx, gy;
        double w = 1.0, scale = 1.0;
        for (std::size_t j = 0; j < terms; ++j) {
            const Vec2 g = field.gradient(Point2{p.x * scale, p.y * scale});
            gx += w * scale * g.x;
            gy += w * scale * g.y;
            w *= rho;
            scale *= R2;
            if (w == 0.0) break;
        }
        return Vec2{transmit * gx.value(), transmit * gy.value()};
    };
    sol.layer2.contains = [classify](Point2 p) { return classify(p) == Region::layer2; };
    return sol;
}

LayeredSolution annulus_dirichlet(const DiskField& field, double R, const Truncation& trunc) {
    if (!std::isfinite(R) || !(R > 0.0) || !(R < 1.0))
        throw ValidationError("inner radius R must lie in (0, 1)");
    const double R2 = R * R;

    const auto tail = [field, R2](std::size_t j) {
        double t = 0.0;
        for (std::size_t n = 1; n <= field.degree(); ++n) {
            const double c = std::hypot(field.a(n), field.b(n));
            if (c == 0.0) continue;
            const double q = std::pow(R2, static_cast<double>(n));
            t += 2.0 * c * std::pow(q, static_cast<double>(j)) / (1.0 - q);
        }
        return t;
    };
    const TruncationInfo info = resolve_unweighted(tail, field.envelope(1.0), trunc);
    const std::size_t terms = info.terms;

    LayeredSolution sol;
    sol.kind = ProblemKind::annulus;
    sol.truncation = info;
    sol.classify = radial_classifier(sol.kind, R);
    const auto classify = sol.classify;

    sol.layer1.value = [=](Point2 p) {
        CompensatedSum s;
        double scale = 1.0;
        for (std::size_t j = 0; j < terms; ++j) {
            s += field.value(Point2{p.x * scale, p.y * scale}) -
                 field.value(kelvin_point(p, scale * R2));
            scale *= R2;
        }
        return s.value();
    };
    sol.layer1.gradient = [=](Point2 p) {
        CompensatedSum gx, gy;
        double scale = 1.0;
        for (std::size_t j = 0; j < terms; ++j) {
            const Vec2 g1 = field.gradient(Point2{p.x * scale, p.y * scale});
            const double c = scale * R2;
            const Vec2 g2 = kelvin_pullback(p, c, field.gradient(kelvin_point(p, c)));
            gx += scale * g1.x - g2.x;
            gy += scale * g1.y - g2.y;
            scale *= R2;
        }
        return Vec2{gx.value(), gy.value()};
    };
    sol.layer1.contains = [classify](Point2 p) { return classify(p) == Region::layer1; };
    return sol;
}

// ---------------------------------------------------------------------------
// diagnostics

std::string to_string(Recommendation rec) {
    return rec == Recommendation::series ? "series" : "asymptotic";
}

RegimeReport convergence_diagnostic(double rho, const DiagnosticOptions& opts) {
    RegimeReport report;
    report.rho = rho;
    report.terms_needed = geometric_tail_terms(rho, opts.tol, opts.sup_bound);
    report.recommendation =
        report.terms_needed > opts.threshold ? Recommendation::asymptotic : Recommendation::series;
    return report;
}

RegimeReport convergence_diagnostic(const PlanarLayerConfig& cfg, const DiagnosticOptions& opts) {
    cfg.validate();
    return convergence_diagnostic(cfg.rho(), opts);
}

RegimeReport convergence_diagnostic(const RadialLayerConfig& cfg, const DiagnosticOptions& opts) {
    cfg.validate();
    return convergence_diagnostic(cfg.rho(), opts);
}

} // namespace layerfield
