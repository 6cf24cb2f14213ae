#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "layerfield/bernoulli.hpp"
#include "layerfield/error.hpp"
#include "layerfield/euler_maclaurin.hpp"
#include "layerfield/fd.hpp"
#include "layerfield/links.hpp"
#include "layerfield/oracle.hpp"
#include "layerfield/report.hpp"
#include "layerfield/theorems.hpp"
#include "layerfield/trace.hpp"
#include "layerfield/transform.hpp"
#include "layerfield/variation.hpp"

namespace py = pybind11;
using namespace layerfield;

namespace {

// Vectorised evaluation over matching x / y arrays; points outside every
// region come back as NaN.
template <class F>
py::array_t<double> map_points(py::array_t<double> xs, py::array_t<double> ys, F&& f) {
    auto x = xs.unchecked<1>();
    auto y = ys.unchecked<1>();
    if (x.shape(0) != y.shape(0)) throw ValidationError("x and y must have the same length");
    py::array_t<double> out(x.shape(0));
    auto o = out.mutable_unchecked<1>();
    for (py::ssize_t i = 0; i < x.shape(0); ++i) o(i) = f(Point2{x(i), y(i)});
    return out;
}

double value_or_nan(const LayeredSolution& s, Point2 p) {
    return s.classify(p) == Region::outside ? std::nan("") : s.value(p);
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Layered-medium harmonic solvers: image series, thin-layer approximations and oracles.";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
    py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());
    py::register_exception<CapabilityError>(m, "CapabilityError", base.ptr());
    py::register_exception<EstimationError>(m, "EstimationError", base.ptr());
    py::register_exception<SolverError>(m, "SolverError", base.ptr());

    py::class_<Point2>(m, "Point2")
        .def(py::init<double, double>(), py::arg("x"), py::arg("y"))
        .def_readwrite("x", &Point2::x)
        .def_readwrite("y", &Point2::y);

    py::class_<PlanarMode>(m, "PlanarMode")
        .def(py::init<double, double, double>(), py::arg("amplitude") = 1.0, py::arg("frequency") = 1.0,
             py::arg("phase") = 0.0)
        .def_readwrite("amplitude", &PlanarMode::amplitude)
        .def_readwrite("frequency", &PlanarMode::frequency)
        .def_readwrite("phase", &PlanarMode::phase);

    py::class_<BoundarySource>(m, "BoundarySource")
        .def(py::init<double, double>(), py::arg("location"), py::arg("strength"))
        .def_readwrite("location", &BoundarySource::location)
        .def_readwrite("strength", &BoundarySource::strength);

    py::class_<HalfPlaneField>(m, "HalfPlaneField")
        .def(py::init<std::vector<PlanarMode>, std::vector<BoundarySource>>(), py::arg("modes"),
             py::arg("sources") = std::vector<BoundarySource>{})
        .def_static("single_mode", &HalfPlaneField::single_mode, py::arg("amplitude"), py::arg("frequency"),
                    py::arg("phase") = 0.0)
        .def("value", [](const HalfPlaneField& f, double x, double y) { return f.value({x, y}); })
        .def("envelope", &HalfPlaneField::envelope)
        .def_property_readonly("modes", &HalfPlaneField::modes)
        .def_property_readonly("sources", &HalfPlaneField::sources);

    py::class_<DiskField>(m, "DiskField")
        .def(py::init<std::vector<double>, std::vector<double>>(), py::arg("cosines"),
             py::arg("sines") = std::vector<double>{})
        .def_static("mode", &DiskField::mode, py::arg("n"), py::arg("coefficient") = 1.0, py::arg("sine") = false)
        .def("value", [](const DiskField& f, double x, double y) { return f.value(Point2{x, y}); })
        .def("value_polar", [](const DiskField& f, double r, double t) { return f.value(PolarPoint{r, t}); })
        .def("a", &DiskField::a)
        .def("b", &DiskField::b)
        .def_property_readonly("degree", &DiskField::degree);

    py::class_<PlanarLayerConfig>(m, "PlanarLayerConfig")
        .def(py::init(&PlanarLayerConfig::make), py::arg("l"), py::arg("k") = py::none(), py::arg("a1") = 1.0,
             py::arg("a2") = 1.0, py::arg("lambda1") = py::none(), py::arg("lambda2") = py::none())
        .def_readonly("l", &PlanarLayerConfig::l)
        .def_readonly("k", &PlanarLayerConfig::k)
        .def("rho", &PlanarLayerConfig::rho)
        .def("robin_h", &PlanarLayerConfig::robin_h);

    py::class_<RadialLayerConfig>(m, "RadialLayerConfig")
        .def(py::init(&RadialLayerConfig::make), py::arg("R"), py::arg("k"))
        .def_readonly("R", &RadialLayerConfig::R)
        .def_readonly("k", &RadialLayerConfig::k)
        .def("rho", &RadialLayerConfig::rho)
        .def("robin_h", &RadialLayerConfig::robin_h);

    py::class_<MaxTerms>(m, "MaxTerms").def(py::init<std::size_t>(), py::arg("terms"));
    py::class_<TailTol>(m, "TailTol")
        .def(py::init<double, double>(), py::arg("tol") = 1e-10, py::arg("sup_bound") = 0.0);

    py::enum_<Region>(m, "Region")
        .value("layer1", Region::layer1)
        .value("layer2", Region::layer2)
        .value("outside", Region::outside);

    py::class_<TruncationInfo>(m, "TruncationInfo")
        .def_readonly("terms", &TruncationInfo::terms)
        .def_readonly("tail_bound", &TruncationInfo::tail_bound)
        .def_readonly("sup_bound", &TruncationInfo::sup_bound);

    py::class_<LayeredSolution>(m, "LayeredSolution")
        .def("value", [](const LayeredSolution& s, double x, double y) { return s.value({x, y}); })
        .def("region", [](const LayeredSolution& s, double x, double y) { return s.classify({x, y}); })
        .def("evaluate",
             [](const LayeredSolution& s, py::array_t<double> x, py::array_t<double> y) {
                 return map_points(x, y, [&](Point2 p) { return value_or_nan(s, p); });
             })
        .def_property_readonly("kind", [](const LayeredSolution& s) { return to_string(s.kind); })
        .def_readonly("truncation", &LayeredSolution::truncation);

    py::class_<Approximation>(m, "Approximation")
        .def("value", [](const Approximation& a, double x, double y) { return a.value({x, y}); })
        .def("bound",
             [](const Approximation& a, double x, double y) -> std::optional<double> {
                 if (!a.bound) return std::nullopt;
                 return a.bound({x, y});
             })
        .def("evaluate",
             [](const Approximation& a, py::array_t<double> x, py::array_t<double> y) {
                 return map_points(x, y, [&](Point2 p) { return value_or_nan(a.solution, p); });
             })
        .def_readonly("robin_h", &Approximation::robin_h)
        .def_readonly("solution", &Approximation::solution);

    m.def("halfplane_coupled", &halfplane_coupled, py::arg("field"), py::arg("config"),
          py::arg("truncation") = Truncation{TailTol{}});
    m.def("strip_dirichlet", &strip_dirichlet, py::arg("field"), py::arg("l"),
          py::arg("truncation") = Truncation{TailTol{}});
    m.def("disk_coupled", &disk_coupled, py::arg("field"), py::arg("config"),
          py::arg("truncation") = Truncation{TailTol{}});
    m.def("annulus_dirichlet", &annulus_dirichlet, py::arg("field"), py::arg("R"),
          py::arg("truncation") = Truncation{TailTol{}});
    m.def("geometric_tail_terms", &geometric_tail_terms, py::arg("rho"), py::arg("tol"), py::arg("sup_bound"));

    m.def(
        "convergence_diagnostic",
        [](double rho, double tol, double sup_bound, std::size_t threshold) {
            const auto r = convergence_diagnostic(rho, DiagnosticOptions{tol, sup_bound, threshold});
            py::dict d;
            d["rho"] = r.rho;
            d["terms_needed"] = r.terms_needed;
            d["recommendation"] = to_string(r.recommendation);
            return d;
        },
        py::arg("rho"), py::arg("tol") = 1e-10, py::arg("sup_bound") = 1.0, py::arg("threshold") = 1000);

    m.def("thm1_halfplane_small_k", &thm1_halfplane_small_k);
    m.def("thm2_halfplane_large_k", &thm2_halfplane_large_k);
    m.def("thm3_strip", &thm3_strip);
    m.def("thm4_disk_small_k", &thm4_disk_small_k);
    m.def("thm4_disk_large_k", &thm4_disk_large_k);
    m.def("thm5_annulus", &thm5_annulus);
    m.def("asymptotic_halfplane", &asymptotic_halfplane);
    m.def("asymptotic_disk", &asymptotic_disk);

    m.def("mode_exact_strip", &mode_exact_strip);
    m.def("mode_exact_halfplane", &mode_exact_halfplane);
    m.def("mode_exact_annulus", &mode_exact_annulus);
    m.def("mode_exact_disk", &mode_exact_disk);
    m.def("brute_halfplane_coupled", &brute_halfplane_coupled, py::arg("field"), py::arg("config"),
          py::arg("max_terms") = kBruteMaxTerms);
    m.def("brute_disk_coupled", &brute_disk_coupled, py::arg("field"), py::arg("config"),
          py::arg("max_terms") = kBruteMaxTerms);

    py::class_<GridSolution>(m, "GridSolution")
        .def_readonly("axis1", &GridSolution::axis1)
        .def_readonly("axis2", &GridSolution::axis2)
        .def_readonly("residual", &GridSolution::residual)
        .def_readonly("iterations", &GridSolution::iterations)
        .def("values", [](const GridSolution& g) {
            py::array_t<double> a({g.n1(), g.n2()});
            std::copy(g.values.begin(), g.values.end(), a.mutable_data());
            return a;
        });

    m.def("fd_strip", [](std::function<double(double)> left, std::function<double(double, double)> lateral, double l,
                         double y0, double y1, std::size_t nx, std::size_t ny) {
        return fd_strip(left, [&](Point2 p) { return lateral(p.x, p.y); }, l, y0, y1, nx, ny);
    });
    m.def("fd_annulus", [](const DiskField& f, double R, std::size_t nr, std::size_t nt) {
        return fd_annulus(circle_trace(f), R, nr, nt);
    });
    m.def("fd_disk_coupled", [](const DiskField& f, const RadialLayerConfig& cfg, std::size_t nr, std::size_t nt) {
        return fd_disk_coupled(circle_trace(f), cfg, nr, nt);
    });

    py::class_<ErrorReport>(m, "ErrorReport")
        .def_readonly("max_pde_residual", &ErrorReport::max_pde_residual)
        .def_readonly("max_boundary_mismatch", &ErrorReport::max_boundary_mismatch)
        .def_readonly("max_value_jump", &ErrorReport::max_value_jump)
        .def_readonly("max_flux_jump", &ErrorReport::max_flux_jump)
        .def_readonly("interior_samples", &ErrorReport::interior_samples);

    m.def(
        "residual_report_halfplane",
        [](const LayeredSolution& s, const HalfPlaneField& f, const PlanarLayerConfig& cfg) {
            ProblemSpec spec{s.kind, [f](Point2 p) { return f.value(p); }, cfg.l, 0.5, cfg.k, cfg.a1, cfg.a2};
            return residual_report(s, spec);
        },
        py::arg("solution"), py::arg("field"), py::arg("config"));
    m.def(
        "residual_report_disk",
        [](const LayeredSolution& s, const DiskField& f, const RadialLayerConfig& cfg) {
            ProblemSpec spec{s.kind, [f](Point2 p) { return f.value(p); }, 1.0, cfg.R, cfg.k};
            return residual_report(s, spec);
        },
        py::arg("solution"), py::arg("field"), py::arg("config"));

    m.def("bernoulli", [](std::size_t n) {
        const Rational q = bernoulli(n);
        return py::make_tuple(py::int_(py::str(numerator(q).str())), py::int_(py::str(denominator(q).str())));
    }, "B_n as a (numerator, denominator) pair.");
    m.def("bernoulli_value", &bernoulli_value);
    m.def(
        "em_exponential_ray_sum",
        [](double amplitude, double decay, double step, int order) {
            return em_ray_sum(exponential_profile(amplitude, decay), step, order);
        },
        py::arg("amplitude"), py::arg("decay"), py::arg("step"), py::arg("order"));
    m.def("total_variation",
          [](std::function<double(double)> f, double lo, double hi) { return total_variation(f, lo, hi).value; });
    m.def("lemma1_bound", [](std::function<double(double)> f, double R) { return lemma1_bound(f, R); });
    m.def("lemma2_bound", [](std::function<double(double)> f, double l) { return lemma2_bound(f, l); });

    m.def(
        "disk_from_samples",
        [](std::vector<double> theta, std::vector<double> values, std::size_t max_mode) {
            return disk_from_boundary(BoundaryTrace::from_samples(std::move(theta), std::move(values)), max_mode);
        },
        py::arg("theta"), py::arg("values"), py::arg("max_mode") = 16);
}
