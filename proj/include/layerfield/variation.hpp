#pragma once

#include <cstddef>
#include <functional>

namespace layerfield {

struct TVEstimate {
    double value = 0.0;
    std::size_t intervals = 0;       ///< grid resolution of the accepted estimate
    std::size_t monotone_segments = 0;
};

struct TVOptions {
    std::size_t initial_intervals = 64;
    std::size_t max_intervals = std::size_t{1} << 20;
    double rel_tol = 1e-3;
};

/// Sum of |f(t_{i+1}) - f(t_i)| on nested uniform grids, doubled until the
/// relative change drops below rel_tol. An infinite upper end is handled
/// through t = lo + u / (1 - u), which leaves the variation unchanged.
/// Throws EstimationError if the estimate has not settled at max_intervals.
TVEstimate total_variation(const std::function<double(double)>& f, double lo, double hi,
                           const TVOptions& opts = {});

/// 2l * V_0^inf(f): bounds |int_0^inf f - 2l sum_j f(2lj)|.
double lemma2_bound(const std::function<double(double)>& f, double l, const TVOptions& opts = {});

/// ln(1/R^2) * V_0^1(f): bounds |int_0^1 f(x)/x dx - ln(1/R^2) sum_j f(R^{2j})|.
double lemma1_bound(const std::function<double(double)>& f, double R, const TVOptions& opts = {});

} // namespace layerfield
