#include "layerfield/fd.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "layerfield/error.hpp"

namespace layerfield {

Point2 GridSolution::point(std::size_t i, std::size_t j) const {
    if (polar()) return to_cartesian(make_polar(axis1[i], axis2[j]));
    return {axis1[i], axis2[j]};
}

std::function<double(double)> circle_trace(const DiskField& field) {
    return [field](double theta) { return field.value(PolarPoint{1.0, theta}); };
}

namespace {

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = (i + 1 == n) ? b : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    return v;
}

std::vector<double> angles(std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t j = 0; j < n; ++j) v[j] = 2.0 * std::numbers::pi * static_cast<double>(j) / n;
    return v;
}

// Piecewise conductivity: inner below the interface radius, outer above.
struct Conductivity {
    double interface = -1.0;
    double outer = 1.0;

    double at(double r) const { return r > interface ? outer : 1.0; }
    // Midpoint rule for the integral of kappa / r over the cell [r - dr/2, r + dr/2],
    // with kappa split at the interface. The exact log integral is not
    // consistent on the first ring next to the origin.
    double angular(double r, double dr) const {
        const double lo = r - 0.5 * dr, hi = r + 0.5 * dr;
        if (hi <= interface) return dr / r;
        if (lo >= interface) return outer * dr / r;
        return ((interface - lo) + outer * (hi - interface)) / r;
    }
};

// Conservative polar scheme on r_in <= r <= 1. r_in = 0 adds a single origin
// unknown whose balance makes it the mean of the first ring; otherwise the
// inner circle carries u = 0.
GridSolution polar_solve(ProblemKind kind, const std::function<double(double)>& outer, double r_in,
                         const Conductivity& kappa, std::size_t nr, std::size_t nt) {
    if (nr < 3 || nt < 4) throw ValidationError("polar grid needs nr >= 3 and ntheta >= 4");
    const bool origin = r_in == 0.0;
    const double dr = (1.0 - r_in) / static_cast<double>(nr - 1);
    const double dt = 2.0 * std::numbers::pi / static_cast<double>(nt);

    GridSolution g;
    g.kind = kind;
    g.axis1 = linspace(r_in, 1.0, nr);
    g.axis2 = angles(nt);
    g.values.assign(nr * nt, 0.0);

    std::vector<double> boundary(nt);
    for (std::size_t j = 0; j < nt; ++j) {
        boundary[j] = outer(g.axis2[j]);
        if (!std::isfinite(boundary[j])) throw ValidationError("boundary data must be finite");
    }

    // Unknowns: optional origin, then rings 1..nr-2.
    const std::size_t offset = origin ? 1 : 0;
    const std::size_t n = offset + (nr - 2) * nt;
    const auto idx = [&](std::size_t i, std::size_t j) { return offset + (i - 1) * nt + (j % nt); };

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(5 * n + nt);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    if (origin) {
        for (std::size_t j = 0; j < nt; ++j) trip.emplace_back(0, idx(1, j), 1.0);
        trip.emplace_back(0, 0, -static_cast<double>(nt));
    }
    for (std::size_t i = 1; i + 1 < nr; ++i) {
        const double r = g.axis1[i];
        const double rm = r - 0.5 * dr, rp = r + 0.5 * dr;
        const double a_out = kappa.at(r + 0.25 * dr) * rp * dt / dr;
        const double a_in = kappa.at(r - 0.25 * dr) * rm * dt / dr;
        const double b = kappa.angular(r, dr) / dt;
        for (std::size_t j = 0; j < nt; ++j) {
            const auto row = static_cast<Eigen::Index>(idx(i, j));
            trip.emplace_back(row, row, -(a_out + a_in + 2.0 * b));
            trip.emplace_back(row, idx(i, j + 1), b);
            trip.emplace_back(row, idx(i, j + nt - 1), b);
            if (i + 2 < nr) trip.emplace_back(row, idx(i + 1, j), a_out);
            else rhs[row] -= a_out * boundary[j];
            if (i > 1) trip.emplace_back(row, idx(i - 1, j), a_in);
            else if (origin) trip.emplace_back(row, 0, a_in);
            // else: inner Dirichlet value 0
        }
    }
    Eigen::SparseMatrix<double> A(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    A.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.analyzePattern(A);
    lu.factorize(A);
    if (lu.info() != Eigen::Success) throw SolverError("sparse LU factorization failed");
    const Eigen::VectorXd x = lu.solve(rhs);
    if (lu.info() != Eigen::Success) throw SolverError("sparse LU solve failed");

    for (std::size_t j = 0; j < nt; ++j) g.values[(nr - 1) * nt + j] = boundary[j];
    for (std::size_t i = 1; i + 1 < nr; ++i)
        for (std::size_t j = 0; j < nt; ++j) g.values[i * nt + j] = x[static_cast<Eigen::Index>(idx(i, j))];
    if (origin)
        for (std::size_t j = 0; j < nt; ++j) g.values[j] = x[0];

    // Residual as the size of a Jacobi update.
    const Eigen::VectorXd res = A * x - rhs;
    double worst = 0.0;
    for (Eigen::Index k = 0; k < res.size(); ++k)
        worst = std::max(worst, std::abs(res[k] / A.coeff(k, k)));
    g.residual = worst;
    return g;
}

} // namespace

GridSolution fd_strip(const std::function<double(double)>& left,
                      const std::function<double(Point2)>& lateral, double l, double y0, double y1,
                      std::size_t nx, std::size_t ny, const SorOptions& opts) {
    if (!std::isfinite(l) || !(l > 0.0)) throw ValidationError("strip width l must be positive");
    if (!(y1 > y0) || !std::isfinite(y0) || !std::isfinite(y1))
        throw ValidationError("strip window needs y0 < y1");
    if (nx < 3 || ny < 3) throw ValidationError("strip grid needs at least 3 x 3 nodes");

    GridSolution g;
    g.kind = ProblemKind::strip;
    g.axis1 = linspace(0.0, l, nx);
    g.axis2 = linspace(y0, y1, ny);
    g.values.assign(nx * ny, 0.0);
    auto u = [&](std::size_t i, std::size_t j) -> double& { return g.values[i * ny + j]; };

    double scale = 0.0;
    for (std::size_t j = 0; j < ny; ++j) {
        u(0, j) = left(g.axis2[j]);
        u(nx - 1, j) = 0.0;
        scale = std::max(scale, std::abs(u(0, j)));
    }
    for (std::size_t i = 1; i + 1 < nx; ++i) {
        u(i, 0) = lateral(g.point(i, 0));
        u(i, ny - 1) = lateral(g.point(i, ny - 1));
        scale = std::max({scale, std::abs(u(i, 0)), std::abs(u(i, ny - 1))});
    }
    if (!std::isfinite(scale)) throw ValidationError("strip boundary data must be finite");
    if (scale == 0.0) return g;

    // Start from the linear profile between the two long edges.
    for (std::size_t i = 1; i + 1 < nx; ++i)
        for (std::size_t j = 1; j + 1 < ny; ++j)
            u(i, j) = u(0, j) * (1.0 - g.axis1[i] / l);

    const double hx = l / static_cast<double>(nx - 1);
    const double hy = (y1 - y0) / static_cast<double>(ny - 1);
    const double cx = 1.0 / (hx * hx), cy = 1.0 / (hy * hy);
    const double diag = 2.0 * (cx + cy);
    const double pi = std::numbers::pi;
    const double rho_j = (hy * hy * std::cos(pi / static_cast<double>(nx - 1)) +
                          hx * hx * std::cos(pi / static_cast<double>(ny - 1))) /
                         (hx * hx + hy * hy);
    const double omega = 2.0 / (1.0 + std::sqrt(1.0 - rho_j * rho_j));
    const double target = opts.tol * scale;

    for (std::size_t it = 1; it <= opts.max_iterations; ++it) {
        double worst = 0.0;
        for (std::size_t i = 1; i + 1 < nx; ++i) {
            for (std::size_t j = 1; j + 1 < ny; ++j) {
                const double gs = (cx * (u(i - 1, j) + u(i + 1, j)) + cy * (u(i, j - 1) + u(i, j + 1))) / diag;
                const double d = gs - u(i, j);
                worst = std::max(worst, std::abs(d));
                u(i, j) += omega * d;
            }
        }
        if (worst <= target) {
            g.iterations = it;
            double res = 0.0;
            for (std::size_t i = 1; i + 1 < nx; ++i)
                for (std::size_t j = 1; j + 1 < ny; ++j) {
                    const double gs =
                        (cx * (u(i - 1, j) + u(i + 1, j)) + cy * (u(i, j - 1) + u(i, j + 1))) / diag;
                    res = std::max(res, std::abs(gs - u(i, j)));
                }
            g.residual = res;
            return g;
        }
    }
    throw SolverError("SOR did not converge within " + std::to_string(opts.max_iterations) + " iterations");
}

GridSolution fd_annulus(const std::function<double(double)>& outer, double R, std::size_t nr,
                        std::size_t ntheta) {
    if (!std::isfinite(R) || !(R > 0.0) || !(R < 1.0))
        throw ValidationError("inner radius R must lie in (0, 1)");
    return polar_solve(ProblemKind::annulus, outer, R, Conductivity{}, nr, ntheta);
}

GridSolution fd_disk_coupled(const std::function<double(double)>& outer, const RadialLayerConfig& cfg,
                             std::size_t nr, std::size_t ntheta) {
    cfg.validate();
    if (nr < 3) throw ValidationError("polar grid needs nr >= 3");
    const double steps = cfg.R * static_cast<double>(nr - 1);
    if (std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps))
        throw ValidationError("interface radius R must lie on a grid circle: R (nr - 1) must be integral");
    return polar_solve(ProblemKind::disk_coupled, outer, 0.0, Conductivity{cfg.R, cfg.k}, nr, ntheta);
}

} // namespace layerfield
