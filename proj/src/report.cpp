#include "layerfield/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "layerfield/error.hpp"

namespace layerfield {

namespace {

constexpr int kReach = 3; // sixth-order stencil half-width

double default_step(double width, double requested) {
    const double cap = width / (2.0 * (kReach + 1));
    const double step = requested > 0.0 ? requested : std::min(width / 32.0, 0.025);
    return std::min(step, cap);
}

// One-sided fourth-order derivative along direction dir from samples f(i h).
double one_sided(const std::function<double(double)>& f, double h) {
    return (-25.0 * f(0.0) + 48.0 * f(h) - 36.0 * f(2.0 * h) + 16.0 * f(3.0 * h) - 3.0 * f(4.0 * h)) /
           (12.0 * h);
}

double directional(const Evaluator& ev, Point2 p, Vec2 dir, double h) {
    if (ev.has_gradient()) {
        const Vec2 g = ev.gradient(p);
        return g.x * dir.x + g.y * dir.y;
    }
    // Differentiate from inside the region: dir points into it.
    return one_sided([&](double t) { return ev.value({p.x + t * dir.x, p.y + t * dir.y}); }, h);
}

class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : gen_(seed) {}
    double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(gen_); }

private:
    std::mt19937_64 gen_;
};

void require_samples(const SamplePlan& plan) {
    if (plan.interior == 0 && plan.boundary == 0 && plan.interface == 0)
        throw ValidationError("sample plan is empty");
    if (!(plan.y_hi > plan.y_lo)) throw ValidationError("sample window needs y_lo < y_hi");
    if (!(plan.outer_extent > 0.0)) throw ValidationError("outer extent must be positive");
}

void planar_report(const LayeredSolution& sol, const ProblemSpec& spec, const SamplePlan& plan,
                   ErrorReport& rep) {
    const bool coupled = spec.kind == ProblemKind::halfplane_coupled;
    const double l = spec.l;
    Sampler rng(plan.seed);

    const double h1 = default_step(l, plan.step);
    const double m1 = kReach * h1 * (1.0 + 1e-9);
    for (std::size_t i = 0; i < plan.interior; ++i) {
        const Point2 p{rng.uniform(m1, l - m1), rng.uniform(plan.y_lo, plan.y_hi)};
        rep.max_pde_residual = std::max(
            rep.max_pde_residual,
            std::abs(laplacian_residual(sol.layer1, p, h1, spec.a1, StencilOrder::sixth)));
        ++rep.interior_samples;
    }
    if (coupled) {
        const double h2 = default_step(plan.outer_extent, plan.step);
        const double m2 = kReach * h2 * (1.0 + 1e-9);
        for (std::size_t i = 0; i < plan.interior; ++i) {
            const Point2 p{rng.uniform(l + m2, l + plan.outer_extent), rng.uniform(plan.y_lo, plan.y_hi)};
            rep.max_pde_residual = std::max(
                rep.max_pde_residual,
                std::abs(laplacian_residual(sol.layer2, p, h2, spec.a2, StencilOrder::sixth)));
            ++rep.interior_samples;
        }
    }

    for (std::size_t i = 0; i < plan.boundary; ++i) {
        const double y = rng.uniform(plan.y_lo, plan.y_hi);
        const Point2 p{0.0, y};
        rep.max_boundary_mismatch =
            std::max(rep.max_boundary_mismatch, std::abs(sol.layer1.value(p) - spec.boundary(p)));
        ++rep.boundary_samples;
        if (!coupled) {
            rep.max_boundary_mismatch = std::max(rep.max_boundary_mismatch, std::abs(sol.layer1.value({l, y})));
            ++rep.boundary_samples;
        }
    }

    if (!coupled) return;
    const double hf = std::min(h1, l / 8.0);
    for (std::size_t i = 0; i < plan.interface; ++i) {
        const Point2 p{l, rng.uniform(plan.y_lo, plan.y_hi)};
        rep.max_value_jump = std::max(rep.max_value_jump, std::abs(sol.layer1.value(p) - sol.layer2.value(p)));
        const double f1 = -directional(sol.layer1, p, {-1.0, 0.0}, hf);
        const double f2 = directional(sol.layer2, p, {1.0, 0.0}, hf);
        rep.max_flux_jump = std::max(rep.max_flux_jump, std::abs(spec.k * f1 - f2));
        ++rep.interface_samples;
    }
}

Point2 polar_point(double r, double t) { return {r * std::cos(t), r * std::sin(t)}; }

void radial_report(const LayeredSolution& sol, const ProblemSpec& spec, const SamplePlan& plan,
                   ErrorReport& rep) {
    const bool coupled = spec.kind == ProblemKind::disk_coupled;
    const double R = spec.R;
    const double two_pi = 2.0 * std::numbers::pi;
    Sampler rng(plan.seed);

    const double h1 = default_step(1.0 - R, plan.step);
    const double m1 = kReach * h1 * (1.0 + 1e-9);
    for (std::size_t i = 0; i < plan.interior; ++i) {
        const Point2 p = polar_point(rng.uniform(R + m1, 1.0 - m1), rng.uniform(0.0, two_pi));
        rep.max_pde_residual = std::max(
            rep.max_pde_residual, std::abs(laplacian_residual(sol.layer1, p, h1, 1.0, StencilOrder::sixth)));
        ++rep.interior_samples;
    }
    if (coupled) {
        const double h2 = default_step(R, plan.step);
        const double m2 = kReach * h2 * (1.0 + 1e-9);
        for (std::size_t i = 0; i < plan.interior; ++i) {
            // Area-uniform radius on the core disk shrunk by the stencil reach.
            const double r = (R - m2) * std::sqrt(rng.uniform(0.0, 1.0));
            const Point2 p = polar_point(r, rng.uniform(0.0, two_pi));
            rep.max_pde_residual = std::max(
                rep.max_pde_residual,
                std::abs(laplacian_residual(sol.layer2, p, h2, 1.0, StencilOrder::sixth)));
            ++rep.interior_samples;
        }
    }

    for (std::size_t i = 0; i < plan.boundary; ++i) {
        const double t = rng.uniform(0.0, two_pi);
        const Point2 p = polar_point(1.0, t);
        rep.max_boundary_mismatch =
            std::max(rep.max_boundary_mismatch, std::abs(sol.layer1.value(p) - spec.boundary(p)));
        ++rep.boundary_samples;
        if (!coupled) {
            rep.max_boundary_mismatch =
                std::max(rep.max_boundary_mismatch, std::abs(sol.layer1.value(polar_point(R, t))));
            ++rep.boundary_samples;
        }
    }

    if (!coupled) return;
    const double hf = std::min(h1, R) / 8.0;
    for (std::size_t i = 0; i < plan.interface; ++i) {
        const double t = rng.uniform(0.0, two_pi);
        const Point2 p = polar_point(R, t);
        const Vec2 out{std::cos(t), std::sin(t)};
        rep.max_value_jump = std::max(rep.max_value_jump, std::abs(sol.layer1.value(p) - sol.layer2.value(p)));
        // L0 = r d/dr; layer 1 (the shell) lies outward of the interface.
        const double l1 = R * directional(sol.layer1, p, out, hf);
        const double l2 = -R * directional(sol.layer2, p, {-out.x, -out.y}, hf);
        rep.max_flux_jump = std::max(rep.max_flux_jump, std::abs(spec.k * l1 - l2));
        ++rep.interface_samples;
    }
}

} // namespace

ErrorReport residual_report(const LayeredSolution& solution, const ProblemSpec& spec, const SamplePlan& plan) {
    require_samples(plan);
    if (solution.kind != spec.kind) throw ValidationError("solution and problem kinds differ");
    if (!spec.boundary) throw ValidationError("problem spec needs boundary data");
    ErrorReport rep;
    if (is_radial(spec.kind)) {
        if (!(spec.R > 0.0 && spec.R < 1.0)) throw ValidationError("inner radius R must lie in (0, 1)");
        radial_report(solution, spec, plan, rep);
    } else {
        if (!(spec.l > 0.0)) throw ValidationError("layer thickness l must be positive");
        planar_report(solution, spec, plan, rep);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// grid checks

namespace {

// Finite-difference weights for derivatives 0..2 at x0 from nodes xs
// (Fornberg's recursion); w[m][i] multiplies f(xs[i]) for the m-th derivative.
std::array<std::vector<double>, 3> fd_weights(const std::vector<double>& xs, double x0) {
    const std::size_t n = xs.size();
    std::array<std::vector<double>, 3> w;
    for (auto& row : w) row.assign(n, 0.0);
    w[0][0] = 1.0;
    double c1 = 1.0, c4 = xs[0] - x0;
    for (std::size_t i = 1; i < n; ++i) {
        const std::size_t mn = std::min<std::size_t>(i, 2);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = xs[i] - x0;
        for (std::size_t j = 0; j < i; ++j) {
            const double c3 = xs[i] - xs[j];
            c2 *= c3;
            if (j + 1 == i) {
                for (std::size_t k = mn; k >= 1; --k)
                    w[k][i] = c1 * (static_cast<double>(k) * w[k - 1][i - 1] - c5 * w[k][i - 1]) / c2;
                w[0][i] = -c1 * c5 * w[0][i - 1] / c2;
            }
            for (std::size_t k = mn; k >= 1; --k)
                w[k][j] = (c4 * w[k][j] - static_cast<double>(k) * w[k - 1][j]) / c3;
            w[0][j] = c4 * w[0][j] / c3;
        }
        c1 = c2;
    }
    return w;
}

bool near(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); }

bool uniform_full_circle(const std::vector<double>& t) {
    const double n = static_cast<double>(t.size());
    for (std::size_t j = 0; j < t.size(); ++j)
        if (std::abs(t[j] - 2.0 * std::numbers::pi * static_cast<double>(j) / n) > 1e-12) return false;
    return true;
}

// d^2/dtheta^2 of the trigonometric interpolant of one ring of samples.
std::vector<double> spectral_second(const std::vector<double>& f) {
    const std::size_t n = f.size();
    const double w = 2.0 * std::numbers::pi / static_cast<double>(n);
    std::vector<double> out(n, 0.0);
    for (std::size_t m = 1; 2 * m <= n; ++m) {
        double c = 0.0, s = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double arg = w * static_cast<double>((m * j) % n);
            c += f[j] * std::cos(arg);
            s += f[j] * std::sin(arg);
        }
        // The Nyquist mode (2m = n) carries no sine part and half weight.
        const double scale = (2 * m == n ? 1.0 : 2.0) / static_cast<double>(n);
        const double mm = static_cast<double>(m * m);
        for (std::size_t j = 0; j < n; ++j) {
            const double arg = w * static_cast<double>((m * j) % n);
            out[j] -= mm * scale * (c * std::cos(arg) + (2 * m == n ? 0.0 : s * std::sin(arg)));
        }
    }
    return out;
}

} // namespace

ErrorReport grid_report(const GridSolution& g, const ProblemSpec& spec, GridCheckOrder order) {
    if (!spec.boundary) throw ValidationError("problem spec needs boundary data");
    const std::size_t n1 = g.n1(), n2 = g.n2();
    if (n1 < 3 || n2 < 3 || g.values.size() != n1 * n2) throw ValidationError("grid must be at least 3 x 3");
    const bool radial = is_radial(spec.kind);
    if (radial != g.polar()) throw ValidationError("grid coordinates do not match the problem geometry");
    const bool coupled = spec.kind == ProblemKind::halfplane_coupled || spec.kind == ProblemKind::disk_coupled;
    const double iface = radial ? spec.R : spec.l;
    const auto& a = g.axis1;
    const auto& b = g.axis2;
    const std::size_t reach = order == GridCheckOrder::second ? 1 : order == GridCheckOrder::fourth ? 2 : 3;

    // Layer of a node by its first coordinate; nodes on the interface belong to layer 1.
    const auto layer = [&](double s) -> int {
        if (radial) {
            if (s > 1.0 + 1e-12) return 0;
            if (s >= iface - 1e-12 * iface) return 1;
            return coupled ? 2 : 0;
        }
        if (s < -1e-12) return 0;
        if (s <= iface + 1e-12 * iface) return 1;
        return coupled ? 2 : 0;
    };
    // Layer of the open segment between two node lines.
    const auto segment_layer = [&](std::size_t i) { return layer(0.5 * (a[i] + a[i + 1])); };

    // High-order checks on a full uniform circle differentiate spectrally in theta.
    const bool spectral = radial && order != GridCheckOrder::second && uniform_full_circle(b);

    ErrorReport rep;
    std::vector<double> xs, ts, ring, ring_tt;
    for (std::size_t i = reach; i + reach < n1; ++i) {
        const int li = layer(a[i]);
        if (li == 0 || near(a[i], iface) || (radial && a[i] <= 0.0)) continue;
        bool same = true;
        for (std::size_t m = i - reach; m < i + reach; ++m) same = same && segment_layer(m) == li;
        if (!same) continue;
        xs.assign(a.begin() + static_cast<std::ptrdiff_t>(i - reach),
                  a.begin() + static_cast<std::ptrdiff_t>(i + reach + 1));
        const auto wr = fd_weights(xs, a[i]);
        const double c = radial ? 1.0 : (li == 1 ? spec.a1 : spec.a2);
        if (spectral) {
            ring.resize(n2);
            for (std::size_t j = 0; j < n2; ++j) ring[j] = g.at(i, j);
            ring_tt = spectral_second(ring);
        }
        for (std::size_t j = 0; j < n2; ++j) {
            if (!radial && (j < reach || j + reach >= n2)) continue;
            // Angular offsets unwrap the periodic axis around theta_j.
            ts.resize(2 * reach + 1);
            std::vector<std::size_t> cols(2 * reach + 1);
            for (std::size_t m = 0; m <= 2 * reach; ++m) {
                const std::ptrdiff_t off = static_cast<std::ptrdiff_t>(m) - static_cast<std::ptrdiff_t>(reach);
                const std::ptrdiff_t jj = static_cast<std::ptrdiff_t>(j) + off;
                if (radial) {
                    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(n2);
                    const std::ptrdiff_t wrapped = ((jj % n) + n) % n;
                    cols[m] = static_cast<std::size_t>(wrapped);
                    const double period = 2.0 * std::numbers::pi * static_cast<double>((jj - wrapped) / n);
                    ts[m] = b[cols[m]] + period;
                } else {
                    cols[m] = static_cast<std::size_t>(jj);
                    ts[m] = b[cols[m]];
                }
            }
            const auto wt = fd_weights(ts, b[j]);
            double d11 = 0.0, d1 = 0.0, d22 = 0.0;
            for (std::size_t m = 0; m <= 2 * reach; ++m) {
                const double ur = g.at(i - reach + m, j);
                d11 += wr[2][m] * ur;
                d1 += wr[1][m] * ur;
                d22 += wt[2][m] * g.at(i, cols[m]);
            }
            if (spectral) d22 = ring_tt[j];
            const double res = radial ? d11 + d1 / a[i] + d22 / (a[i] * a[i]) : c * c * d11 + d22;
            rep.max_pde_residual = std::max(rep.max_pde_residual, std::abs(res));
            ++rep.interior_samples;
        }
    }

    for (std::size_t i = 0; i < n1; ++i) {
        const bool data_edge = radial ? near(a[i], 1.0) : near(a[i], 0.0);
        const bool zero_edge = !coupled && near(a[i], iface);
        if (!data_edge && !zero_edge) continue;
        for (std::size_t j = 0; j < n2; ++j) {
            const double target = data_edge ? spec.boundary(g.point(i, j)) : 0.0;
            rep.max_boundary_mismatch = std::max(rep.max_boundary_mismatch, std::abs(g.at(i, j) - target));
            ++rep.boundary_samples;
        }
    }

    if (coupled) {
        // Nearest node lines on each side; both sides may use a node on the interface.
        const std::size_t need = 2 * reach + 1;
        std::vector<std::size_t> side1, side2;
        for (std::size_t i = 0; i < n1; ++i) {
            if (near(a[i], iface)) {
                side1.push_back(i);
                side2.push_back(i);
            } else if (layer(a[i]) == 1) {
                side1.push_back(i);
            } else if (layer(a[i]) == 2) {
                side2.push_back(i);
            }
        }
        const auto closest = [&](std::vector<std::size_t> idx) {
            std::sort(idx.begin(), idx.end(),
                      [&](std::size_t p, std::size_t q) { return std::abs(a[p] - iface) < std::abs(a[q] - iface); });
            idx.resize(std::min(need, idx.size()));
            return idx;
        };
        const auto s1 = closest(side1), s2 = closest(side2);
        if (s1.size() < need || s2.size() < need)
            throw ValidationError("grid needs " + std::to_string(need) + " node lines on each side of the interface");
        std::vector<double> x1, x2;
        for (std::size_t m = 0; m < need; ++m) {
            x1.push_back(a[s1[m]]);
            x2.push_back(a[s2[m]]);
        }
        const auto w1 = fd_weights(x1, iface), w2 = fd_weights(x2, iface);
        const double scale = radial ? iface : 1.0;
        for (std::size_t j = 0; j < n2; ++j) {
            double v1 = 0.0, d1 = 0.0, v2 = 0.0, d2 = 0.0;
            for (std::size_t m = 0; m < need; ++m) {
                v1 += w1[0][m] * g.at(s1[m], j);
                d1 += w1[1][m] * g.at(s1[m], j);
                v2 += w2[0][m] * g.at(s2[m], j);
                d2 += w2[1][m] * g.at(s2[m], j);
            }
            rep.max_value_jump = std::max(rep.max_value_jump, std::abs(v1 - v2));
            rep.max_flux_jump = std::max(rep.max_flux_jump, std::abs(spec.k * scale * d1 - scale * d2));
            ++rep.interface_samples;
        }
    }
    return rep;
}

} // namespace layerfield
