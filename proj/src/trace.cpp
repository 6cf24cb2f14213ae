#include "layerfield/trace.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "layerfield/error.hpp"

namespace layerfield {

BoundaryTrace BoundaryTrace::from_samples(std::vector<double> abscissae, std::vector<double> values) {
    if (abscissae.size() != values.size())
        throw ValidationError("trace abscissae and values differ in length");
    if (abscissae.size() < 2)
        throw ValidationError("trace needs at least two samples");
    for (std::size_t i = 0; i < abscissae.size(); ++i) {
        if (!std::isfinite(abscissae[i]) || !std::isfinite(values[i]))
            throw ValidationError("trace contains non-finite samples");
        if (i > 0 && !(abscissae[i] > abscissae[i - 1]))
            throw ValidationError("trace abscissae must be strictly increasing");
    }
    BoundaryTrace t;
    t.window_lo = abscissae.front();
    t.window_hi = abscissae.back();
    t.abscissae = std::move(abscissae);
    t.values = std::move(values);
    return t;
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& text, double& out) {
    const std::string s = trim(text);
    if (s.empty()) return false;
    const auto* first = s.data();
    const auto* last = s.data() + s.size();
    if (*first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

} // namespace

BoundaryTrace read_trace_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open trace file " + path.string());

    std::vector<double> xs, vs;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto comma = line.find(',');
        double x = 0.0, v = 0.0;
        const bool ok = comma != std::string::npos && parse_double(line.substr(0, comma), x) &&
                        parse_double(line.substr(comma + 1), v);
        if (!ok) {
            if (lineno == 1) continue; // header
            throw ValidationError("malformed trace line " + std::to_string(lineno) + " in " +
                                  path.string());
        }
        xs.push_back(x);
        vs.push_back(v);
    }
    return BoundaryTrace::from_samples(std::move(xs), std::move(vs));
}

DiskField disk_from_boundary(const BoundaryTrace& trace, std::size_t max_mode) {
    const std::size_t m = trace.size();
    if (m < 2 * max_mode + 1)
        throw ValidationError("undersampled trace: need at least 2N+1 samples for N modes");
    const double dtheta = 2.0 * std::numbers::pi / static_cast<double>(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (std::abs(trace.abscissae[i] - dtheta * static_cast<double>(i)) > 1e-9)
            throw ValidationError("disk trace must be a uniform grid theta_i = 2 pi i / M");
    }

    std::vector<double> a(max_mode + 1, 0.0), b(max_mode, 0.0);
    for (std::size_t n = 0; n <= max_mode; ++n) {
        double sc = 0.0, ss = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double arg = static_cast<double>(n) * trace.abscissae[i];
            sc += trace.values[i] * std::cos(arg);
            ss += trace.values[i] * std::sin(arg);
        }
        a[n] = 2.0 * sc / static_cast<double>(m);
        if (n > 0) b[n - 1] = 2.0 * ss / static_cast<double>(m);
    }
    return DiskField(std::move(a), std::move(b));
}

void check_trace_decay(const BoundaryTrace& trace) {
    const double lo = trace.window_lo, hi = trace.window_hi;
    const double centre = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    double inner = 0.0, outer = 0.0;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const double d = std::abs(trace.abscissae[i] - centre);
        const double v = std::abs(trace.values[i]);
        if (d <= 0.5 * half) inner = std::max(inner, v);
        else if (d >= 0.75 * half) outer = std::max(outer, v);
    }
    if (outer > inner * (1.0 + 1e-9) + 1e-300)
        throw ValidationError(
            "boundary trace grows towards the window ends; the data must be integrable "
            "against 1/(1+y^2)");
}

namespace {

std::vector<double> trapezoid_weights(const std::vector<double>& t) {
    std::vector<double> w(t.size(), 0.0);
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        const double h = t[i + 1] - t[i];
        w[i] += 0.5 * h;
        w[i + 1] += 0.5 * h;
    }
    return w;
}

} // namespace

PoissonValue halfplane_poisson_eval(const BoundaryTrace& trace, Point2 p, double tol) {
    require_finite(p);
    if (!(p.x > 0.0)) throw ValidationError("Poisson integral needs a point with x > 0");
    check_trace_decay(trace);

    const auto w = trapezoid_weights(trace.abscissae);
    double sum = 0.0;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const double dy = p.y - trace.abscissae[i];
        sum += w[i] * trace.values[i] * p.x / (p.x * p.x + dy * dy);
    }
    sum /= std::numbers::pi;

    // (1/pi) * integral over the two omitted half-lines of the kernel.
    const double right = 0.5 - std::atan((trace.window_hi - p.y) / p.x) / std::numbers::pi;
    const double left = 0.5 - std::atan((p.y - trace.window_lo) / p.x) / std::numbers::pi;
    const double tail = std::abs(trace.values.back()) * right + std::abs(trace.values.front()) * left;
    if (tail > tol)
        throw ConvergenceError("trace window too small: omitted tail bound exceeds tolerance", tail);
    return {sum, tail};
}

HalfPlaneField poisson_field(const BoundaryTrace& trace) {
    check_trace_decay(trace);
    const auto w = trapezoid_weights(trace.abscissae);
    std::vector<BoundarySource> sources;
    sources.reserve(trace.size());
    for (std::size_t i = 0; i < trace.size(); ++i)
        if (trace.values[i] != 0.0) sources.push_back({trace.abscissae[i], w[i] * trace.values[i]});
    return HalfPlaneField({}, std::move(sources));
}

} // namespace layerfield
