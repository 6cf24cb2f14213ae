#include "cli/engine.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <thread>

#include "cli/commands.hpp"
#include "layerfield/error.hpp"
#include "layerfield/oracle.hpp"

namespace layerfield::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = (i + 1 == n) ? b : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    return v;
}

// Static striding keeps each node's work independent of the thread count.
template <typename F>
void parallel_for(std::size_t n, std::size_t threads, F&& f) {
    threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(n, 1));
    if (threads == 1) {
        for (std::size_t k = 0; k < n; ++k) f(k);
        return;
    }
    std::exception_ptr failure;
    std::mutex lock;
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t)
        pool.emplace_back([&, t] {
            try {
                for (std::size_t k = t; k < n; k += threads) f(k);
            } catch (...) {
                const std::lock_guard<std::mutex> guard(lock);
                if (!failure) failure = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

std::function<Region(Point2)> classifier(const RunConfig& cfg) {
    if (cfg.radial()) return radial_classifier(cfg.problem, *cfg.geometry.R);
    return planar_classifier(cfg.problem, *cfg.geometry.l);
}

Evaluation sample(const LayeredSolution& sol, const Nodes& nodes, std::size_t threads,
                  const std::function<double(Point2)>& bound = {}) {
    Evaluation ev;
    ev.values.assign(nodes.size(), kNaN);
    ev.regions.assign(nodes.size(), Region::outside);
    if (bound) ev.bounds.assign(nodes.size(), kNaN);
    parallel_for(nodes.size(), threads, [&](std::size_t k) {
        const Point2 p = nodes.point(k);
        const Region r = sol.classify(p);
        ev.regions[k] = r;
        if (r == Region::outside) return;
        ev.values[k] = sol.evaluator(r).value(p);
        if (bound) ev.bounds[k] = bound(p);
    });
    return ev;
}

bool same(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); }

// Finite-difference oracle on exactly the configured grid.
GridSolution fd_grid(const RunConfig& cfg, const Nodes& nodes) {
    const auto& g = cfg.grid;
    switch (cfg.problem) {
    case ProblemKind::strip: {
        const double l = *cfg.geometry.l;
        if (!same(g.lo1, 0.0) || !same(g.hi1, l))
            throw ValidationError("the strip oracle solves on the grid itself: grid.x must be [0, l]");
        const auto& f = cfg.boundary.planar;
        if (!f.modes_only())
            throw ValidationError("the strip oracle needs mode boundary data (point sources have no nodal trace)");
        const LayeredSolution lateral = mode_exact_strip(f, l);
        return fd_strip([&](double y) { return f.value({0.0, y}); },
                        [&](Point2 p) { return lateral.value(p); }, l, g.lo2, g.hi2, g.n1, g.n2);
    }
    case ProblemKind::annulus: {
        const double R = *cfg.geometry.R;
        if (!same(g.lo1, R) || !same(g.hi1, 1.0))
            throw ValidationError("the annulus oracle solves on the grid itself: grid.r must be [R, 1]");
        return fd_annulus(circle_trace(cfg.boundary.disk), R, g.n1, g.n2);
    }
    case ProblemKind::disk_coupled:
        if (!same(g.lo1, 0.0) || !same(g.hi1, 1.0))
            throw ValidationError("the coupled disk oracle solves on the grid itself: grid.r must be [0, 1]");
        return fd_disk_coupled(circle_trace(cfg.boundary.disk), radial_layers(cfg), g.n1, g.n2);
    case ProblemKind::halfplane_coupled: break;
    }
    (void)nodes;
    throw ValidationError("no finite-difference oracle for the coupled half-plane");
}

LayeredSolution halfplane_oracle(const RunConfig& cfg) {
    const auto& f = cfg.boundary.planar;
    const auto layers = planar_layers(cfg);
    return f.modes_only() ? mode_exact_halfplane(f, layers) : brute_halfplane_coupled(f, layers);
}

RunConfig with_thickness(const RunConfig& base, double value, std::optional<double> robin_h) {
    RunConfig cfg = base;
    auto& g = cfg.geometry;
    if (cfg.radial()) g.R = value;
    else g.l = value;
    if (robin_h) {
        // Keep the sign of rho (small-k vs large-k branch) and the Robin parameter.
        const double rho0 = cfg.radial() ? radial_layers(base).rho() : planar_layers(base).rho();
        const double mag = cfg.radial() ? std::pow(value, 2.0 * *robin_h) : std::exp(2.0 * *robin_h * value);
        const double rho = std::copysign(mag, rho0);
        g.k = (1.0 - rho) / (1.0 + rho);
        g.lambda1.reset();
        g.lambda2.reset();
    }
    // Revalidate the modified geometry.
    if (cfg.problem == ProblemKind::halfplane_coupled) planar_layers(cfg);
    else if (cfg.problem == ProblemKind::disk_coupled) radial_layers(cfg);
    else if (cfg.problem == ProblemKind::strip) strip_width(cfg);
    else annulus_radius(cfg);
    return cfg;
}

double max_pair_diff(const Evaluation& a, const Evaluation& b, std::size_t* rows = nullptr) {
    double worst = 0.0;
    std::size_t n = 0;
    for (std::size_t k = 0; k < a.values.size(); ++k) {
        if (std::isnan(a.values[k]) || std::isnan(b.values[k])) continue;
        worst = std::max(worst, std::abs(a.values[k] - b.values[k]));
        ++n;
    }
    if (rows) *rows = n;
    return worst;
}

} // namespace

Point2 Nodes::point(std::size_t k) const {
    const double a = axis1[k / axis2.size()], b = axis2[k % axis2.size()];
    return polar ? to_cartesian(make_polar(a, b)) : Point2{a, b};
}

Nodes make_nodes(const RunConfig& cfg) {
    const auto& g = cfg.grid;
    Nodes n;
    n.polar = cfg.radial();
    n.axis1 = linspace(g.lo1, g.hi1, g.n1);
    if (n.polar) {
        for (std::size_t j = 0; j < g.n2; ++j)
            n.axis2.push_back(2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(g.n2));
    } else {
        n.axis2 = linspace(g.lo2, g.hi2, g.n2);
    }
    return n;
}

LayeredSolution series_solution(const RunConfig& cfg) {
    const Truncation trunc = cfg.fixed_terms ? Truncation{MaxTerms{*cfg.fixed_terms}} : cfg.truncation;
    LayeredSolution sol;
    switch (cfg.problem) {
    case ProblemKind::halfplane_coupled: sol = halfplane_coupled(cfg.boundary.planar, planar_layers(cfg), trunc); break;
    case ProblemKind::strip: sol = strip_dirichlet(cfg.boundary.planar, *cfg.geometry.l, trunc); break;
    case ProblemKind::disk_coupled: sol = disk_coupled(cfg.boundary.disk, radial_layers(cfg), trunc); break;
    case ProblemKind::annulus: sol = annulus_dirichlet(cfg.boundary.disk, *cfg.geometry.R, trunc); break;
    }
    if (cfg.fixed_terms && std::holds_alternative<TailTol>(cfg.truncation) &&
        sol.truncation.tail_bound > std::get<TailTol>(cfg.truncation).tol)
        throw ConvergenceError("tail bound at J = " + std::to_string(*cfg.fixed_terms) + " exceeds truncation.tol",
                               sol.truncation.tail_bound);
    return sol;
}

Approximation asymptotic_solution(const RunConfig& cfg) {
    switch (cfg.problem) {
    case ProblemKind::halfplane_coupled: return asymptotic_halfplane(cfg.boundary.planar, planar_layers(cfg));
    case ProblemKind::strip: return thm3_strip(cfg.boundary.planar, *cfg.geometry.l);
    case ProblemKind::disk_coupled: return asymptotic_disk(cfg.boundary.disk, radial_layers(cfg));
    case ProblemKind::annulus: return thm5_annulus(cfg.boundary.disk, *cfg.geometry.R);
    }
    throw ValidationError("unknown problem");
}

Evaluation evaluate(const RunConfig& cfg, Method method, const Nodes& nodes, std::size_t threads) {
    switch (method) {
    case Method::series: return sample(series_solution(cfg), nodes, threads);
    case Method::asymptotic: {
        const Approximation a = asymptotic_solution(cfg);
        return sample(a.solution, nodes, threads, a.bound);
    }
    case Method::oracle: {
        if (cfg.problem == ProblemKind::halfplane_coupled) return sample(halfplane_oracle(cfg), nodes, threads);
        const GridSolution g = fd_grid(cfg, nodes);
        Evaluation ev;
        ev.values = g.values;
        const auto cls = classifier(cfg);
        for (std::size_t k = 0; k < nodes.size(); ++k) ev.regions.push_back(cls(nodes.point(k)));
        return ev;
    }
    }
    throw ValidationError("unknown method");
}

RegimeSummary regimes(const RunConfig& cfg) {
    RegimeSummary r;
    const DiagnosticOptions defaults;
    r.tol = cfg.tail_tol();
    r.threshold = defaults.threshold;
    const auto decide = [&](std::size_t terms) {
        r.terms = terms;
        r.recommendation = terms > r.threshold ? Recommendation::asymptotic : Recommendation::series;
    };
    if (cfg.problem == ProblemKind::halfplane_coupled || cfg.problem == ProblemKind::disk_coupled) {
        double rho = 0.0, M = 0.0;
        if (cfg.problem == ProblemKind::halfplane_coupled) {
            const auto layers = planar_layers(cfg);
            rho = layers.rho();
            M = weighted_sup_bound(cfg.boundary.planar, layers);
        } else {
            const auto layers = radial_layers(cfg);
            rho = layers.rho();
            M = weighted_sup_bound(cfg.boundary.disk, layers);
        }
        r.rho = rho;
        r.sup_bound = M;
        if (rho == 0.0 || M == 0.0) {
            decide(1);
        } else {
            DiagnosticOptions opts;
            opts.tol = r.tol;
            opts.sup_bound = M;
            decide(convergence_diagnostic(rho, opts).terms_needed);
        }
        return r;
    }
    // Single-region ladders have no reflection ratio; J comes from the series' own tail bound.
    RunConfig tol_cfg = cfg;
    tol_cfg.fixed_terms.reset();
    tol_cfg.truncation = TailTol{r.tol};
    try {
        const LayeredSolution sol = series_solution(tol_cfg);
        r.sup_bound = sol.truncation.sup_bound;
        decide(sol.truncation.terms);
    } catch (const ConvergenceError&) {
        r.recommendation = Recommendation::asymptotic;
    }
    return r;
}

std::optional<double> loglog_slope(const std::vector<double>& thickness, const std::vector<double>& err) {
    if (thickness.size() != err.size() || thickness.size() < 2) return std::nullopt;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = static_cast<double>(thickness.size());
    for (std::size_t i = 0; i < thickness.size(); ++i) {
        if (!(thickness[i] > 0.0) || !(err[i] > 0.0)) return std::nullopt;
        const double x = std::log(thickness[i]), y = std::log(err[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double den = n * sxx - sx * sx;
    if (den == 0.0) return std::nullopt;
    return (n * sxy - sx * sy) / den;
}

Comparison compare(const RunConfig& cfg, std::size_t threads) {
    Comparison c;
    c.nodes = make_nodes(cfg);
    for (auto m : cfg.methods) c.evals.push_back(evaluate(cfg, m, c.nodes, threads));
    for (std::size_t a = 0; a < cfg.methods.size(); ++a) {
        const auto& b = c.evals[a].bounds;
        if (b.empty()) {
            c.max_bound.emplace_back();
            continue;
        }
        double worst = 0.0;
        for (double v : b)
            if (!std::isnan(v)) worst = std::max(worst, v);
        c.max_bound.emplace_back(worst);
    }
    for (std::size_t a = 0; a < cfg.methods.size(); ++a)
        for (std::size_t b = a + 1; b < cfg.methods.size(); ++b) {
            PairDiff p{a, b, max_pair_diff(c.evals[a], c.evals[b], &c.rows)};
            c.max_abs_diff = std::max(c.max_abs_diff, p.max_abs_diff);
            c.pairs.push_back(p);
        }

    if (cfg.sweep) {
        for (auto m : cfg.methods)
            if (m == Method::oracle && cfg.problem != ProblemKind::halfplane_coupled)
                throw ValidationError("sweeps cannot use the finite-difference oracle (its grid is tied to the geometry)");
        std::optional<double> h;
        if (cfg.sweep->hold == "robin_h") {
            const RunConfig first = with_thickness(cfg, cfg.sweep->values.front(), std::nullopt);
            h = cfg.radial() ? radial_layers(first).robin_h() : planar_layers(first).robin_h();
        }
        std::vector<double> t, e;
        for (double v : cfg.sweep->values) {
            const RunConfig sc = with_thickness(cfg, v, h);
            std::vector<Evaluation> evs;
            for (auto m : sc.methods) evs.push_back(evaluate(sc, m, c.nodes, threads));
            SweepRow row;
            row.value = v;
            row.thickness = sc.radial() ? 1.0 - v : v;
            row.k = sc.geometry.k;
            for (std::size_t a = 0; a < evs.size(); ++a)
                for (std::size_t b = a + 1; b < evs.size(); ++b)
                    row.max_abs_diff = std::max(row.max_abs_diff, max_pair_diff(evs[a], evs[b]));
            t.push_back(row.thickness);
            e.push_back(row.max_abs_diff);
            c.sweep.push_back(row);
        }
        c.thickness_order = loglog_slope(t, e);
    }
    return c;
}

void write_comparison_csv(std::ostream& os, const RunConfig& cfg, const Comparison& cmp) {
    os << (cmp.nodes.polar ? "r,theta,region" : "x,y,region");
    const std::size_t m = cfg.methods.size();
    for (std::size_t a = 0; a < m; ++a) os << ",u_" << a << '_' << to_string(cfg.methods[a]);
    for (const auto& p : cmp.pairs) os << ",d_" << p.a << '_' << p.b;
    for (std::size_t a = 0; a < m; ++a)
        if (!cmp.evals[a].bounds.empty()) os << ",bound_" << a;
    os << '\n';
    const auto& n = cmp.nodes;
    for (std::size_t k = 0; k < n.size(); ++k) {
        const Region r = cmp.evals.front().regions[k];
        os << format_double(n.axis1[k / n.axis2.size()]) << ',' << format_double(n.axis2[k % n.axis2.size()]) << ','
           << (r == Region::layer1 ? "1" : r == Region::layer2 ? "2" : "outside");
        for (std::size_t a = 0; a < m; ++a) os << ',' << format_double(cmp.evals[a].values[k]);
        for (const auto& p : cmp.pairs)
            os << ',' << format_double(std::abs(cmp.evals[p.a].values[k] - cmp.evals[p.b].values[k]));
        for (std::size_t a = 0; a < m; ++a)
            if (!cmp.evals[a].bounds.empty()) os << ',' << format_double(cmp.evals[a].bounds[k]);
        os << '\n';
    }
}

ProblemSpec problem_spec(const RunConfig& cfg) {
    ProblemSpec s;
    s.kind = cfg.problem;
    if (cfg.radial()) {
        const DiskField f = cfg.boundary.disk;
        s.boundary = [f](Point2 p) { return f.value(p); };
        s.R = *cfg.geometry.R;
        if (cfg.problem == ProblemKind::disk_coupled) s.k = radial_layers(cfg).k;
    } else {
        const HalfPlaneField f = cfg.boundary.planar;
        s.boundary = [f](Point2 p) { return f.value(p); };
        s.l = *cfg.geometry.l;
        if (cfg.problem == ProblemKind::halfplane_coupled) {
            const auto layers = planar_layers(cfg);
            s.k = layers.k;
            s.a1 = layers.a1;
            s.a2 = layers.a2;
        }
    }
    return s;
}

Verification verify(const RunConfig& cfg, std::size_t threads) {
    Verification v;
    const ProblemSpec spec = problem_spec(cfg);
    std::array<double, 4> allowance{}; // pde, boundary, value jump, flux jump
    const bool coupled = cfg.problem == ProblemKind::halfplane_coupled || cfg.problem == ProblemKind::disk_coupled;
    switch (cfg.solution) {
    case SolutionSource::model: {
        v.source = "model";
        LayeredSolution sol;
        sol.kind = cfg.problem;
        sol.classify = classifier(cfg);
        sol.layer1 = cfg.radial() ? make_evaluator(cfg.boundary.disk) : make_evaluator(cfg.boundary.planar);
        if (coupled) sol.layer2 = sol.layer1;
        v.report = residual_report(sol, spec, cfg.samples);
        break;
    }
    case SolutionSource::grid_csv: {
        v.source = "grid_csv:" + to_string(cfg.method());
        const GridSolution g = read_grid_csv(*cfg.solution_grid, cfg.problem);
        // Solver grids satisfy the 5-point equations; sampled continuous
        // solutions are checked with the high-order stencils.
        if (cfg.method() == Method::oracle && cfg.problem != ProblemKind::halfplane_coupled) {
            v.report = grid_report(g, spec, GridCheckOrder::second);
        } else {
            v.report = grid_report(g, spec, GridCheckOrder::sixth);
            const ErrorReport lower = grid_report(g, spec, GridCheckOrder::fourth);
            allowance = {std::abs(v.report.max_pde_residual - lower.max_pde_residual), 0.0,
                         std::abs(v.report.max_value_jump - lower.max_value_jump),
                         std::abs(v.report.max_flux_jump - lower.max_flux_jump)};
        }
        break;
    }
    case SolutionSource::method: {
        v.source = to_string(cfg.method());
        switch (cfg.method()) {
        case Method::series: v.report = residual_report(series_solution(cfg), spec, cfg.samples); break;
        case Method::asymptotic: {
            const Approximation a = asymptotic_solution(cfg);
            v.report = residual_report(a.solution, spec, cfg.samples);
            if (a.bound) {
                const Nodes nodes = make_nodes(cfg);
                const Evaluation ev = sample(a.solution, nodes, threads, a.bound);
                double worst = 0.0;
                for (double b : ev.bounds)
                    if (!std::isnan(b)) worst = std::max(worst, b);
                v.report.lemma_bound = worst;
            }
            break;
        }
        case Method::oracle:
            if (cfg.problem == ProblemKind::halfplane_coupled)
                v.report = residual_report(halfplane_oracle(cfg), spec, cfg.samples);
            else
                v.report = grid_report(fd_grid(cfg, make_nodes(cfg)), spec, GridCheckOrder::second);
            break;
        }
        break;
    }
    }
    const auto& t = cfg.tolerances;
    const auto& r = v.report;
    const auto check = [&](const char* name, double value, double tol, double extra, std::size_t samples) {
        v.checks.push_back({name, value, tol, extra, samples > 0 && value <= tol + extra});
    };
    check("pde_residual", r.max_pde_residual, t.pde, allowance[0], r.interior_samples);
    check("boundary_mismatch", r.max_boundary_mismatch, t.boundary, allowance[1], r.boundary_samples);
    if (coupled) {
        check("value_jump", r.max_value_jump, t.value_jump, allowance[2], r.interface_samples);
        check("flux_jump", r.max_flux_jump, t.flux_jump, allowance[3], r.interface_samples);
    }
    v.pass = std::all_of(v.checks.begin(), v.checks.end(), [](const Check& c) { return c.pass; });
    return v;
}

} // namespace layerfield::cli
