#include <doctest.h>

#include <cmath>
#include <numbers>

#include "layerfield/error.hpp"
#include "layerfield/fd.hpp"
#include "layerfield/oracle.hpp"
#include "layerfield/report.hpp"

using namespace layerfield;

namespace {

double max_grid_error(const GridSolution& g, const LayeredSolution& exact) {
    double worst = 0.0;
    for (std::size_t i = 0; i < g.n1(); ++i)
        for (std::size_t j = 0; j < g.n2(); ++j)
            worst = std::max(worst, std::abs(g.at(i, j) - exact.value(g.point(i, j))));
    return worst;
}

GridSolution strip_grid(const HalfPlaneField& f, double l, std::size_t nx, std::size_t ny) {
    const auto exact = mode_exact_strip(f, l);
    return fd_strip([&](double y) { return f.value({0.0, y}); },
                    [exact](Point2 p) { return exact.value(p); }, l, -1.0, 1.0, nx, ny);
}

} // namespace

TEST_SUITE("oracle") {

TEST_CASE("brute ladder sums") {
    const auto ladder = geometric_ladder(1.0 / 3.0, [](std::size_t j) { return std::exp(-0.2 * j); }, 1.0);
    const auto s = brute_series(ladder, 60);
    CHECK(s.value == doctest::Approx(1.0 / (1.0 - std::exp(-0.2) / 3.0)).epsilon(1e-15));
    CHECK(s.value == doctest::Approx(1.375346030405595).epsilon(1e-14));
    CHECK(s.tail_bound <= 1e-28);
    CHECK(s.terms == 60);

    const auto zero = geometric_ladder(0.0, [](std::size_t) { return 0.7; }, 0.7);
    CHECK(brute_series(zero, 5).value == 0.7);

    const auto slow = geometric_ladder(0.99, [](std::size_t) { return 1.0; }, 1.0);
    CHECK_THROWS_AS(brute_series(slow, 1000), ConvergenceError);
    CHECK_THROWS_AS(brute_series_auto(slow, 1000), ConvergenceError);

    const auto auto_sum = brute_series_auto(ladder, 1000, 1e-14);
    CHECK(auto_sum.tail_bound <= 1e-14);
    CHECK(brute_series(ladder, auto_sum.terms - 1, 1.0).tail_bound > 1e-14);
}

TEST_CASE("cap J and 2J agree within the tail bound") {
    for (double rho : {0.5, -0.8, 0.9}) {
        const auto ladder = geometric_ladder(rho, [](std::size_t j) { return std::cos(0.3 * j); }, 1.0);
        const auto a = brute_series(ladder, 300);
        const auto b = brute_series(ladder, 600);
        CHECK(std::abs(a.value - b.value) <= a.tail_bound + 1e-16);
    }
}

TEST_CASE("closed-form mode solutions") {
    const auto f = HalfPlaneField::single_mode(1.0, 1.0);
    CHECK(mode_exact_strip(f, 0.5).value({0.25, 0.0}) ==
          doctest::Approx(std::sinh(0.25) / std::sinh(0.5)).epsilon(1e-14));
    CHECK(mode_exact_strip(f, 0.5).value({0.25, 0.0}) == doctest::Approx(0.484771814570107293).epsilon(1e-14));
    CHECK(mode_exact_annulus(DiskField::mode(1), 0.7).value({0.85, 0.0}) ==
          doctest::Approx(0.536332179930795848).epsilon(1e-14));
    CHECK_THROWS_AS(mode_exact_annulus(DiskField::mode(0), 0.7), ValidationError);
    const auto hom = mode_exact_disk(DiskField::mode(1), RadialLayerConfig::make(0.7, 1.0));
    for (Point2 p : {Point2{0.3, 0.2}, Point2{0.8, -0.1}}) CHECK(hom.value(p) == doctest::Approx(p.x).epsilon(1e-15));
    CHECK_THROWS_AS(mode_exact_strip(HalfPlaneField({}, {{0.0, 1.0}}), 0.5), ValidationError);

    const auto cfg = PlanarLayerConfig::make(0.5, 0.5);
    const auto hp = mode_exact_halfplane(f, cfg);
    const auto series = halfplane_coupled(f, cfg, TailTol{1e-14});
    for (Point2 p : {Point2{0.2, 0.3}, Point2{0.7, -1.0}, Point2{2.0, 0.5}})
        CHECK(hp.value(p) == doctest::Approx(series.value(p)).epsilon(1e-12));
    const auto dcfg = RadialLayerConfig::make(0.7, 0.5);
    CHECK(mode_exact_disk(DiskField::mode(2), dcfg).value(to_cartesian(PolarPoint{0.85, 0.3})) ==
          doctest::Approx(0.548802777118584238).epsilon(1e-13));
}

TEST_CASE("strip solver converges at second order") {
    const auto f = HalfPlaneField::single_mode(1.0, 1.0);
    const auto exact = mode_exact_strip(f, 0.5);
    const auto coarse = strip_grid(f, 0.5, 33, 129);
    const auto fine = strip_grid(f, 0.5, 65, 257);
    const double ec = max_grid_error(coarse, exact), ef = max_grid_error(fine, exact);
    CHECK(ec / ef >= 3.5);
    CHECK(ec / ef <= 4.5);
    CHECK(fine.residual <= 1e-10);
    const double h = 0.5 / 64.0;
    CHECK(ef <= 0.1 * h * h);
}

TEST_CASE("strip solver trivial data") {
    const auto zero = fd_strip([](double) { return 0.0; }, [](Point2) { return 0.0; }, 0.5, -1.0, 1.0, 9, 17);
    for (double v : zero.values) CHECK(v == 0.0);
    const auto lin = fd_strip([](double) { return 2.0; }, [](Point2 p) { return 2.0 * (1.0 - p.x / 0.5); }, 0.5,
                              -1.0, 1.0, 17, 33);
    for (std::size_t i = 0; i < lin.n1(); ++i)
        for (std::size_t j = 0; j < lin.n2(); ++j)
            CHECK(lin.at(i, j) == doctest::Approx(2.0 * (1.0 - lin.axis1[i] / 0.5)).scale(1.0).epsilon(1e-11));
    SorOptions tight;
    tight.max_iterations = 3;
    CHECK_THROWS_AS(fd_strip([](double y) { return std::cos(y); }, [](Point2) { return 0.0; }, 0.5, -1.0, 1.0,
                             33, 129, tight),
                    SolverError);
    CHECK_THROWS_AS(fd_strip([](double) { return 1.0; }, [](Point2) { return 0.0; }, -1.0, 0.0, 1.0, 9, 9),
                    ValidationError);
}

TEST_CASE("annulus solver") {
    const DiskField f = DiskField::mode(1);
    const auto exact = mode_exact_annulus(f, 0.7);
    const auto coarse = fd_annulus(circle_trace(f), 0.7, 13, 64);
    const auto fine = fd_annulus(circle_trace(f), 0.7, 25, 128);
    const double ratio = max_grid_error(coarse, exact) / max_grid_error(fine, exact);
    CHECK(ratio >= 3.2);
    CHECK(ratio <= 4.8);
    CHECK(fine.residual <= 1e-10);

    const auto zero = fd_annulus([](double) { return 0.0; }, 0.7, 9, 16);
    for (double v : zero.values) CHECK(v == 0.0);
    const auto one = fd_annulus([](double) { return 1.0; }, 0.5, 41, 16);
    double worst = 0.0;
    for (std::size_t i = 0; i < one.n1(); ++i)
        worst = std::max(worst, std::abs(one.at(i, 3) - std::log(one.axis1[i] / 0.5) / std::log(2.0)));
    CHECK(worst <= 1e-3);
    CHECK_THROWS_AS(fd_annulus([](double) { return 1.0; }, 1.2, 9, 16), ValidationError);
}

TEST_CASE("coupled disk solver") {
    const DiskField f = DiskField::mode(1);
    const auto cfg = RadialLayerConfig::make(0.7, 0.5);
    const auto exact = mode_exact_disk(f, cfg);
    const auto coarse = fd_disk_coupled(circle_trace(f), cfg, 21, 64);
    const auto fine = fd_disk_coupled(circle_trace(f), cfg, 41, 128);
    const double ratio = max_grid_error(coarse, exact) / max_grid_error(fine, exact);
    CHECK(ratio >= 3.2);
    CHECK(ratio <= 4.8);

    // k = 1 has no interface: same as the single-region solve with any interface radius.
    const auto a = fd_disk_coupled(circle_trace(DiskField::mode(2)), RadialLayerConfig::make(0.5, 1.0), 21, 32);
    const auto b = fd_disk_coupled(circle_trace(DiskField::mode(2)), RadialLayerConfig::make(0.25, 1.0), 21, 32);
    for (std::size_t k = 0; k < a.values.size(); ++k) CHECK(a.values[k] == doctest::Approx(b.values[k]).scale(1.0).epsilon(1e-12));

    const auto zero = fd_disk_coupled([](double) { return 0.0; }, cfg, 11, 16);
    for (double v : zero.values) CHECK(v == 0.0);
    CHECK_THROWS_AS(fd_disk_coupled(circle_trace(f), RadialLayerConfig::make(0.73, 0.5), 11, 16), ValidationError);
}

TEST_CASE("residual reports") {
    const DiskField f = DiskField::mode(1);
    const auto cfg = RadialLayerConfig::make(0.7, 0.5);
    ProblemSpec spec;
    spec.kind = ProblemKind::disk_coupled;
    spec.boundary = [f](Point2 p) { return f.value(p); };
    spec.R = 0.7;
    spec.k = 0.5;
    const auto rep = residual_report(disk_coupled(f, cfg, TailTol{1e-10}), spec);
    CHECK(rep.max_pde_residual <= 1e-8);
    CHECK(rep.max_boundary_mismatch <= 1e-8);
    CHECK(rep.max_value_jump <= 1e-8);
    CHECK(rep.max_flux_jump <= 1e-8);
    CHECK(rep.interior_samples == 400); // both layers
    CHECK(rep.boundary_samples == 100);
    CHECK(rep.interface_samples == 100);

    const auto exact = residual_report(mode_exact_disk(f, cfg), spec);
    CHECK(exact.max_boundary_mismatch <= 1e-12);
    CHECK(exact.max_value_jump <= 1e-12);
    CHECK(exact.max_flux_jump <= 1e-12);

    const auto hf = HalfPlaneField::single_mode(1.0, 1.0);
    ProblemSpec strip;
    strip.kind = ProblemKind::strip;
    strip.boundary = [hf](Point2 p) { return hf.value(p); };
    strip.l = 0.5;
    const auto good = residual_report(mode_exact_strip(hf, 0.5), strip);
    CHECK(good.max_boundary_mismatch <= 1e-12);
    CHECK(good.max_pde_residual <= 1e-6);

    LayeredSolution wrong;
    wrong.kind = ProblemKind::strip;
    wrong.classify = planar_classifier(ProblemKind::strip, 0.5);
    wrong.layer1 = Evaluator{[hf](Point2 p) { return hf.value(p); }, {}, {}};
    const auto bad = residual_report(wrong, strip);
    CHECK(bad.max_boundary_mismatch >= 0.1);

    ProblemSpec coupled;
    coupled.kind = ProblemKind::halfplane_coupled;
    coupled.boundary = strip.boundary;
    coupled.l = 0.5;
    coupled.k = 0.5;
    const auto hp = residual_report(mode_exact_halfplane(hf, PlanarLayerConfig::make(0.5, 0.5)), coupled);
    CHECK(hp.max_pde_residual <= 1e-6);
    CHECK(hp.max_value_jump <= 1e-12);
    CHECK(hp.max_flux_jump <= 1e-12);
}

TEST_CASE("grid report on a solver output") {
    const auto f = HalfPlaneField::single_mode(1.0, 1.0);
    const auto g = strip_grid(f, 0.5, 33, 129);
    ProblemSpec strip;
    strip.kind = ProblemKind::strip;
    strip.boundary = [f](Point2 p) { return f.value(p); };
    strip.l = 0.5;
    const auto rep = grid_report(g, strip);
    CHECK(rep.max_boundary_mismatch <= 1e-14);
    CHECK(rep.max_pde_residual <= 1e-6);
    CHECK(rep.interior_samples > 0);
}

}

TEST_SUITE("oracle") {

TEST_CASE("sixth-order grid report on sampled series solutions") {
    const DiskField f = DiskField::mode(2);
    const auto cfg = RadialLayerConfig::make(0.7, 0.5);
    const auto sol = disk_coupled(f, cfg, TailTol{1e-13});
    GridSolution g;
    g.kind = ProblemKind::disk_coupled;
    for (int i = 0; i <= 40; ++i) g.axis1.push_back(i / 40.0);
    for (int j = 0; j < 64; ++j) g.axis2.push_back(2.0 * std::numbers::pi * j / 64.0);
    for (std::size_t i = 0; i < g.n1(); ++i)
        for (std::size_t j = 0; j < g.n2(); ++j) g.values.push_back(sol.value(g.point(i, j)));
    ProblemSpec spec;
    spec.kind = ProblemKind::disk_coupled;
    spec.boundary = [f](Point2 p) { return f.value(p); };
    spec.R = 0.7;
    spec.k = 0.5;
    const auto hi = grid_report(g, spec, GridCheckOrder::sixth);
    CHECK(hi.max_pde_residual <= 1e-6);
    CHECK(hi.max_boundary_mismatch <= 1e-14);
    CHECK(hi.max_value_jump <= 1e-12);
    CHECK(hi.max_flux_jump <= 1e-6);
    const auto lo = grid_report(g, spec, GridCheckOrder::second);
    CHECK(lo.max_pde_residual > hi.max_pde_residual);

    const auto hf = HalfPlaneField::single_mode(1.0, 2.0);
    const auto pcfg = PlanarLayerConfig::make(0.5, 4.0);
    const auto psol = halfplane_coupled(hf, pcfg, TailTol{1e-13});
    GridSolution pg;
    pg.kind = ProblemKind::halfplane_coupled;
    for (int i = 0; i <= 60; ++i) pg.axis1.push_back(i / 40.0);
    for (int j = 0; j <= 40; ++j) pg.axis2.push_back(-1.0 + j / 20.0);
    for (std::size_t i = 0; i < pg.n1(); ++i)
        for (std::size_t j = 0; j < pg.n2(); ++j) pg.values.push_back(psol.value(pg.point(i, j)));
    ProblemSpec pspec;
    pspec.kind = ProblemKind::halfplane_coupled;
    pspec.boundary = [hf](Point2 p) { return hf.value(p); };
    pspec.l = 0.5;
    pspec.k = 4.0;
    const auto prep = grid_report(pg, pspec, GridCheckOrder::sixth);
    CHECK(prep.max_pde_residual <= 1e-5);
    CHECK(prep.max_value_jump <= 1e-12);
    CHECK(prep.max_flux_jump <= 1e-6);
    CHECK(prep.max_boundary_mismatch <= 1e-14);
}

}
