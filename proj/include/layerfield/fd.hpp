#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "layerfield/geometry.hpp"
#include "layerfield/harmonic.hpp"
#include "layerfield/transform.hpp"

namespace layerfield {

/// Node values on a tensor grid. axis1 is x (Cartesian) or r (polar),
/// axis2 is y or theta; values are stored row-major, values[i * n2 + j].
/// Polar grids are periodic in theta (theta_j = 2 pi j / n2).
struct GridSolution {
    ProblemKind kind = ProblemKind::strip;
    std::vector<double> axis1;
    std::vector<double> axis2;
    std::vector<double> values;
    double residual = 0.0;      ///< max-norm of the discrete Laplacian, scaled to a node update
    std::size_t iterations = 0; ///< 0 for direct solves

    std::size_t n1() const noexcept { return axis1.size(); }
    std::size_t n2() const noexcept { return axis2.size(); }
    double at(std::size_t i, std::size_t j) const { return values[i * axis2.size() + j]; }
    /// Cartesian location of node (i, j).
    Point2 point(std::size_t i, std::size_t j) const;
    bool polar() const noexcept { return is_radial(kind); }
};

struct SorOptions {
    double tol = 1e-13;          ///< on the update size, relative to the data scale
    std::size_t max_iterations = 100'000;
};

/// Dirichlet strip 0 <= x <= l, y0 <= y <= y1 on an nx x ny grid:
/// u = left(y) at x = 0, u = 0 at x = l, u = lateral(p) on y = y0 and y = y1.
/// Successive over-relaxation with the optimal factor of the Jacobi
/// spectral radius. Throws SolverError past max_iterations.
GridSolution fd_strip(const std::function<double(double)>& left,
                      const std::function<double(Point2)>& lateral, double l, double y0, double y1,
                      std::size_t nx, std::size_t ny, const SorOptions& opts = {});

/// Annulus R <= r <= 1 with u = outer(theta) at r = 1 and u = 0 at r = R;
/// conservative polar 5-point scheme solved directly (sparse LU).
GridSolution fd_annulus(const std::function<double(double)>& outer, double R, std::size_t nr,
                        std::size_t ntheta);

/// Coupled disk: conductivity k on R < r < 1, 1 on r < R, u = outer(theta)
/// at r = 1. R must coincide with a grid radius (R (nr - 1) integral). The
/// interface row is a finite-volume flux balance across r = R, so value
/// continuity and k-weighted flux continuity hold discretely.
GridSolution fd_disk_coupled(const std::function<double(double)>& outer, const RadialLayerConfig& cfg,
                             std::size_t nr, std::size_t ntheta);

/// Boundary values theta -> field(1, theta).
std::function<double(double)> circle_trace(const DiskField& field);

} // namespace layerfield
