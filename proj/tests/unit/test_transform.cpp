#include <doctest.h>

#include <cmath>

#include "layerfield/error.hpp"
#include "layerfield/transform.hpp"

using namespace layerfield;

TEST_SUITE("transform") {

TEST_CASE("config derivation and validation") {
    const auto c = PlanarLayerConfig::make(0.1, std::nullopt, 1.0, 2.0, 3.0, 1.5);
    CHECK(c.k == doctest::Approx(4.0));
    CHECK(c.rho() == doctest::Approx(-0.6));
    CHECK_THROWS_AS(PlanarLayerConfig::make(0.1, 3.0, 1.0, 2.0, 3.0, 1.5), ValidationError);
    CHECK_THROWS_AS(PlanarLayerConfig::make(-0.1, 1.0), ValidationError);
    CHECK_THROWS_AS(RadialLayerConfig::make(1.2, 0.5), ValidationError);
    CHECK_THROWS_AS(PlanarLayerConfig::make(0.1, 1.0).robin_h(), ValidationError);
    const auto half = PlanarLayerConfig::make(0.1, 0.5);
    CHECK(std::exp(2.0 * half.robin_h() * 0.1) == doctest::Approx(half.rho()).epsilon(1e-12));
    const auto rad = RadialLayerConfig::make(0.9, 0.5);
    CHECK(std::pow(0.9, 2.0 * rad.robin_h()) == doctest::Approx(rad.rho()).epsilon(1e-12));
}

TEST_CASE("coupled half-plane on a mode matches the geometric sum") {
    const auto f = HalfPlaneField::single_mode(1.0, 1.0);
    const auto cfg = PlanarLayerConfig::make(0.5, 0.5);
    const auto sol = halfplane_coupled(f, cfg, TailTol{1e-14});
    // Closed forms from high-precision summation.
    CHECK(sol.value({0.3, 0.2}) == doctest::Approx(0.642625152587085569).epsilon(1e-13));
    CHECK(sol.value({0.9, 0.2}) == doctest::Approx(0.302771340575210266).epsilon(1e-13));
    CHECK(sol.truncation.tail_bound <= 1e-14);
    CHECK(sol.classify({0.3, 0.0}) == Region::layer1);
    CHECK(sol.classify({0.7, 0.0}) == Region::layer2);
    CHECK(sol.classify({-0.7, 0.0}) == Region::outside);
    CHECK_THROWS_AS(sol.value({-1.0, 0.0}), ValidationError);
}

TEST_CASE("k = 1 leaves the field unchanged") {
    const auto f = HalfPlaneField::single_mode(0.7, 1.5, 0.2);
    const auto sol = halfplane_coupled(f, PlanarLayerConfig::make(0.3, 1.0), TailTol{1e-12});
    CHECK(sol.truncation.terms == 1);
    for (double x : {0.1, 0.5, 2.0}) CHECK(sol.value({x, 0.4}) == doctest::Approx(f.value({x, 0.4})));
}

TEST_CASE("strip and annulus closed forms") {
    const auto f = HalfPlaneField::single_mode(1.0, 1.0);
    const auto strip = strip_dirichlet(f, 0.5, TailTol{1e-13});
    CHECK(strip.value({0.25, 0.0}) == doctest::Approx(0.484771814570107293).epsilon(1e-12));
    CHECK(std::abs(strip.value({0.5, 0.3})) <= 1e-15);

    const auto ann = annulus_dirichlet(DiskField::mode(1), 0.7, TailTol{1e-13});
    CHECK(ann.value({0.85, 0.0}) == doctest::Approx(0.536332179930795848).epsilon(1e-12));
    // The constant mode is paired with its own image and cancels.
    const auto c = annulus_dirichlet(DiskField({2.0}, {}), 0.7, MaxTerms{5});
    CHECK(c.value({0.85, 0.0}) == 0.0);
}

TEST_CASE("coupled disk closed form") {
    const auto f = DiskField::mode(2);
    const auto cfg = RadialLayerConfig::make(0.7, 0.5);
    const auto sol = disk_coupled(f, cfg, TailTol{1e-14});
    const Point2 p1 = to_cartesian(PolarPoint{0.85, 0.3});
    const Point2 p2 = to_cartesian(PolarPoint{0.5, 0.3});
    CHECK(sol.value(p1) == doctest::Approx(0.548802777118584238).epsilon(1e-13));
    CHECK(sol.value(p2) == doctest::Approx(0.149522739032153030).epsilon(1e-13));
}

TEST_CASE("geometric tail terms") {
    CHECK(geometric_tail_terms(0.0, 1e-10, 1.0) == 1);
    CHECK(geometric_tail_terms(0.5, 1e-10, 1.0) == 35);
    CHECK(geometric_tail_terms(0.99, 1e-8, 1.0) == 2292);
    CHECK(geometric_tail_terms(-0.5, 1e-10, 1.0) == 35);
    CHECK_THROWS_AS(geometric_tail_terms(1.0, 1e-10, 1.0), ValidationError);
    // Minimality: one term fewer misses the tolerance.
    const auto J = geometric_tail_terms(0.9, 1e-9, 2.0);
    CHECK(2.0 * std::pow(0.9, J) / 0.1 <= 1e-9);
    CHECK(2.0 * std::pow(0.9, J - 1) / 0.1 > 1e-9);
}

TEST_CASE("truncation honours the tail tolerance") {
    const auto f = HalfPlaneField::single_mode(1.0, 1.0);
    const auto cfg = PlanarLayerConfig::make(0.05, 0.1);
    const auto sol = halfplane_coupled(f, cfg, TailTol{1e-10});
    CHECK(sol.truncation.tail_bound <= 1e-10);
    CHECK(sol.truncation.terms ==
          geometric_tail_terms(cfg.rho(), 1e-10, weighted_sup_bound(f, cfg)));
    const auto fixed = halfplane_coupled(f, cfg, MaxTerms{7});
    CHECK(fixed.truncation.terms == 7);
    CHECK_THROWS_AS(halfplane_coupled(f, cfg, TailTol{-1.0}), ValidationError);
}

TEST_CASE("regime diagnostic") {
    const auto one = convergence_diagnostic(PlanarLayerConfig::make(0.1, 1.0));
    CHECK(one.rho == 0.0);
    CHECK(one.terms_needed == 1);
    CHECK(one.recommendation == Recommendation::series);
    const auto half = convergence_diagnostic(PlanarLayerConfig::make(0.1, 0.5));
    CHECK(half.rho == doctest::Approx(1.0 / 3.0));
    CHECK(half.recommendation == Recommendation::series);
    const auto thin = convergence_diagnostic(PlanarLayerConfig::make(0.01, 0.01));
    CHECK(thin.recommendation == Recommendation::asymptotic);
    CHECK(to_string(Region::layer2) == "2");
    CHECK(problem_kind_from_string("disk_coupled") == ProblemKind::disk_coupled);
    CHECK_THROWS_AS(problem_kind_from_string("sphere"), ValidationError);
}

}
