#include "layerfield/variation.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "layerfield/error.hpp"

namespace layerfield {

namespace {

struct GridPass {
    double variation = 0.0;
    std::size_t segments = 0;
};

GridPass sample_variation(const std::function<double(double)>& f, double lo, double hi,
                          std::size_t n) {
    const bool ray = std::isinf(hi);
    GridPass pass;
    double prev = f(lo);
    int prev_sign = 0;
    // On a ray the point u = 1 (t = inf) is dropped; nested grids keep the
    // estimate non-decreasing under refinement.
    const std::size_t last = ray ? n - 1 : n;
    for (std::size_t i = 1; i <= last; ++i) {
        const double u = static_cast<double>(i) / static_cast<double>(n);
        const double t = ray ? lo + u / (1.0 - u) : lo + (hi - lo) * u;
        const double cur = f(t);
        const double d = cur - prev;
        pass.variation += std::abs(d);
        const int sign = (d > 0.0) - (d < 0.0);
        if (sign != 0 && sign != prev_sign) {
            ++pass.segments;
            prev_sign = sign;
        }
        prev = cur;
    }
    return pass;
}

} // namespace

TVEstimate total_variation(const std::function<double(double)>& f, double lo, double hi,
                           const TVOptions& opts) {
    if (!std::isfinite(lo) || !(hi > lo) || (std::isinf(hi) && hi < 0.0))
        throw ValidationError("total variation needs an interval lo < hi with finite lo");
    if (opts.initial_intervals < 2 || opts.max_intervals < opts.initial_intervals)
        throw ValidationError("bad total-variation grid options");

    std::size_t n = opts.initial_intervals;
    GridPass coarse = sample_variation(f, lo, hi, n);
    while (n < opts.max_intervals) {
        const std::size_t fine_n = n * 2;
        const GridPass fine = sample_variation(f, lo, hi, fine_n);
        const double change = std::abs(fine.variation - coarse.variation);
        n = fine_n;
        coarse = fine;
        if (change <= opts.rel_tol * fine.variation || fine.variation < 1e-300)
            return {fine.variation, n, fine.segments};
    }
    throw EstimationError("total variation did not stabilise under grid refinement");
}

double lemma2_bound(const std::function<double(double)>& f, double l, const TVOptions& opts) {
    if (!std::isfinite(l) || !(l > 0.0)) throw ValidationError("l must be positive");
    return 2.0 * l * total_variation(f, 0.0, std::numeric_limits<double>::infinity(), opts).value;
}

double lemma1_bound(const std::function<double(double)>& f, double R, const TVOptions& opts) {
    if (!std::isfinite(R) || !(R > 0.0) || !(R < 1.0)) throw ValidationError("R must lie in (0, 1)");
    return std::log(1.0 / (R * R)) * total_variation(f, 0.0, 1.0, opts).value;
}

} // namespace layerfield
