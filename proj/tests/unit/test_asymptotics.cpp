#include <doctest.h>

#include <cmath>
#include <numbers>

#include "layerfield/bernoulli.hpp"
#include "layerfield/error.hpp"
#include "layerfield/euler_maclaurin.hpp"
#include "layerfield/variation.hpp"

using namespace layerfield;

namespace {

const double kGeom = 1.0 / -std::expm1(-0.1); // sum_j e^{-0.1 j}

RayProfile fd_only(RayProfile p) {
    p.derivative = nullptr;
    return p;
}

} // namespace

TEST_SUITE("bernoulli") {

TEST_CASE("exact values") {
    CHECK(to_string(bernoulli(0)) == "1");
    CHECK(to_string(bernoulli(1)) == "-1/2");
    CHECK(to_string(bernoulli(2)) == "1/6");
    CHECK(to_string(bernoulli(4)) == "-1/30");
    CHECK(to_string(bernoulli(6)) == "1/42");
    CHECK(to_string(bernoulli(12)) == "-691/2730");
    CHECK(bernoulli(3) == 0);
    CHECK(bernoulli_value(10) == doctest::Approx(5.0 / 66.0).epsilon(1e-15));
}

TEST_CASE("recurrence identity and signs") {
    for (std::size_t m = 1; m <= 12; ++m) {
        Rational acc = 0;
        Rational binom = 1; // C(m+1, j)
        for (std::size_t j = 0; j <= m; ++j) {
            acc += binom * bernoulli(j);
            binom = binom * Rational(static_cast<long>(m + 1 - j)) / Rational(static_cast<long>(j + 1));
        }
        CHECK(acc == 0);
    }
    for (std::size_t m = 1; m <= 6; ++m) {
        CHECK(bernoulli(2 * m + 1) == 0);
        const bool positive = bernoulli(2 * m) > 0;
        CHECK(positive == (m % 2 == 1));
    }
    CHECK_THROWS_AS(bernoulli(kMaxBernoulliIndex + 1), CapabilityError);
    CHECK_THROWS_AS(BernoulliTable(4).exact(6), CapabilityError);
}

}

TEST_SUITE("euler_maclaurin") {

TEST_CASE("ray sum of e^{-x}") {
    const auto f = exponential_profile(1.0, 1.0);
    const double e0 = std::abs(em_ray_sum(f, 0.1, 0) - kGeom);
    const double e1 = std::abs(em_ray_sum(f, 0.1, 1) - kGeom);
    const double e2 = std::abs(em_ray_sum(f, 0.1, 2) - kGeom);
    CHECK(em_ray_sum(f, 0.1, 0) == doctest::Approx(10.5).epsilon(1e-15));
    CHECK(e0 == doctest::Approx(8.33194e-3).epsilon(1e-4));
    CHECK(e1 == doctest::Approx(1.3889e-6).epsilon(1e-3));
    CHECK(e2 <= 1e-8);
    CHECK(e0 > e1);
    CHECK(e1 > e2);
}

TEST_CASE("order improvement stays within twice the first omitted term") {
    const auto f = exponential_profile(1.0, 1.0);
    for (double step : {0.05, 0.1, 0.2}) {
        const double exact = 1.0 / -std::expm1(-step);
        double prev = INFINITY;
        for (int K = 0; K <= 2; ++K) {
            const double err = std::abs(em_ray_sum(f, step, K) - exact);
            const double omitted = std::abs(em_ray_sum(f, step, K + 1) - em_ray_sum(f, step, K));
            CHECK(err < prev);
            CHECK(err <= 2.0 * omitted);
            prev = err;
        }
    }
}

TEST_CASE("finite-difference derivatives and capability limits") {
    const auto f = fd_only(exponential_profile(1.0, 1.0));
    CHECK(em_ray_sum(f, 0.1, 1) == doctest::Approx(kGeom).epsilon(1e-6));
    CHECK_THROWS_AS(em_ray_sum(f, 0.1, 4), CapabilityError);
    CHECK_THROWS_AS(em_ray_sum(exponential_profile(1.0, 1.0), 0.1, 6), ValidationError);
    RayProfile zero{[](double) { return 0.0; }, [](int, double) { return 0.0; }, nullptr};
    CHECK(em_ray_sum(zero, 0.1, 2) == 0.0);
}

TEST_CASE("logarithmic sums") {
    CHECK(em_log_sum(power_profile(1.0, 1), 0.9, 2) == doctest::Approx(1.0 / (1.0 - 0.81)).epsilon(1e-6 / 5.26));
    CHECK(std::abs(em_log_sum(power_profile(1.0, 2), 0.9, 2) - 1.0 / (1.0 - 0.81 * 0.81)) <= 1e-6);
    CHECK(em_log_sum(power_profile(0.0, 1), 0.9, 2) == 0.0);
    CHECK_THROWS_AS(em_log_sum(power_profile(1.0, 0), 0.9, 2), ValidationError);
    // Quadrature and finite-difference fallbacks.
    LogProfile sq{[](double x) { return x * x; }, nullptr, nullptr};
    CHECK(std::abs(em_log_sum(sq, 0.9, 2) - 1.0 / (1.0 - 0.81 * 0.81)) <= 1e-5);
}

TEST_CASE("weighted ray expansion, small k") {
    const double rho = 1.0 / 3.0, l = 0.1;
    const double h = std::log(rho) / (2.0 * l);
    CHECK(h == doctest::Approx(-5.4930614).epsilon(1e-7));
    const double exact = 1.0 / (1.0 - rho * std::exp(-0.2));
    CHECK(exact == doctest::Approx(1.375346030405595).epsilon(1e-14));
    const auto f = exponential_profile(1.0, 1.0);
    CHECK(std::abs(weighted_ray_asym(f, 0.0, l, h, 2) - exact) <= 1e-3);
    CHECK(std::abs(weighted_ray_asym(f, 0.0, l, h, 3) - exact) <
          std::abs(weighted_ray_asym(f, 0.0, l, h, 1) - exact));
    const RayProfile zero{[](double) { return 0.0; }, [](int, double) { return 0.0; },
                          [](double, double) { return 0.0; }};
    CHECK(weighted_ray_asym(zero, 0.0, l, h, 2) == 0.0);
    CHECK_THROWS_AS(weighted_ray_asym(f, 0.0, l, 0.5, 2), ValidationError);
    // Quadrature fallback for the weighted integral.
    RayProfile q = f;
    q.transform = nullptr;
    CHECK(weighted_ray_asym(q, 0.0, l, h, 2) == doctest::Approx(weighted_ray_asym(f, 0.0, l, h, 2)).epsilon(1e-10));
}

TEST_CASE("weighted ray expansion, large k (alternating ladder)") {
    const double l = 0.1, q = 0.5;
    const double h = std::log(q) / (2.0 * l);
    const double exact = 1.0 / (1.0 + q * std::exp(-0.2));
    CHECK(exact == doctest::Approx(0.7095392129298093).epsilon(1e-14));
    const auto f = exponential_profile(1.0, 1.0);
    const double e2 = std::abs(weighted_ray_asym_alt(f, 0.0, l, h, 2) - exact);
    const double e3 = std::abs(weighted_ray_asym_alt(f, 0.0, l, h, 3) - exact);
    CHECK(e3 <= 1e-3);
    CHECK(e3 < e2);
    // At K = 2 the miss is bounded by the first omitted correction.
    const double omitted = std::abs(weighted_ray_asym_alt(f, 0.0, l, h, 3) - weighted_ray_asym_alt(f, 0.0, l, h, 2));
    CHECK(e2 <= omitted);
}

TEST_CASE("weighted radial expansion") {
    const double R = 0.9, rho = 1.0 / 3.0;
    const double h = std::log(rho) / (2.0 * std::log(R));
    CHECK(h == doctest::Approx(5.2135863).epsilon(1e-7));
    const double exact = 1.0 / (1.0 - rho * R * R);
    const auto f = power_profile(1.0, 1);
    const double v = weighted_radial_asym(f, 1.0, R, h, 2);
    CHECK(std::abs(v - exact) <= 2e-2);
    CHECK(std::abs(v - exact) <= 1.5e-4);

    const double k = 0.3, r2 = (1.0 - k) / (1.0 + k), R2 = 0.95;
    const double h2 = std::log(r2) / (2.0 * std::log(R2));
    const double exact2 = 1.0 / (1.0 - r2 * std::pow(R2, 4));
    CHECK(exact2 == doctest::Approx(1.781198592510574).epsilon(1e-14));
    const auto g = power_profile(1.0, 2);
    const double diff = std::abs(weighted_radial_asym(g, 1.0, R2, h2, 2) - exact2);
    const double omitted = std::abs(weighted_radial_asym(g, 1.0, R2, h2, 3) - weighted_radial_asym(g, 1.0, R2, h2, 2));
    CHECK(diff <= omitted);

    // Alternating variant: sum (-q)^j f(r R^{2j}).
    const double qa = 0.5, ha = std::log(qa) / (2.0 * std::log(R));
    const double exact_alt = 1.0 / (1.0 + qa * R * R);
    CHECK(std::abs(weighted_radial_asym_alt(f, 1.0, R, ha, 3) - exact_alt) <= 1e-3);
}

}

TEST_SUITE("variation") {

TEST_CASE("total variation of reference profiles") {
    CHECK(total_variation([](double x) { return std::exp(-x); }, 0.0, INFINITY).value ==
          doctest::Approx(1.0).epsilon(1e-3));
    const auto s = total_variation([](double x) { return std::sin(x); }, 0.0, 2.0 * std::numbers::pi);
    CHECK(s.value == doctest::Approx(4.0).epsilon(1e-3));
    CHECK(s.monotone_segments == 3);
    CHECK(total_variation([](double) { return 2.0; }, 0.0, 1.0).value == 0.0);
    CHECK_THROWS_AS(total_variation([](double x) { return std::sin(1.0 / (x + 1e-300)); }, 0.0, 1.0,
                                    TVOptions{64, 1024, 1e-3}),
                    EstimationError);
}

TEST_CASE("lemma bounds hold on the planar family") {
    const double pi = std::numbers::pi;
    struct Case {
        std::function<double(double)> f;
        double integral;
        std::function<double(double)> sum; // sum_j f(a j) as a function of a
    };
    const Case cases[] = {
        {[](double x) { return std::exp(-x); }, 1.0, [](double a) { return 1.0 / -std::expm1(-a); }},
        {[](double x) { return std::exp(-x) * std::cos(x); }, 0.5,
         [](double a) {
             // Re 1 / (1 - e^{(-1+i) a})
             const double er = std::exp(-a) * std::cos(a), ei = std::exp(-a) * std::sin(a);
             return (1.0 - er) / ((1.0 - er) * (1.0 - er) + ei * ei);
         }},
        {[](double x) { return 1.0 / (1.0 + x * x); }, pi / 2.0,
         [pi](double a) { return 0.5 * (1.0 + (pi / a) / std::tanh(pi / a)); }},
    };
    int held = 0;
    for (const auto& c : cases) {
        for (double l : {0.05, 0.1, 0.5}) {
            const double actual = std::abs(c.integral - 2.0 * l * c.sum(2.0 * l));
            const double bound = lemma2_bound(c.f, l);
            CHECK(actual <= bound);
            held += actual <= bound;
        }
    }
    CHECK(held == 9);
    CHECK(lemma2_bound([](double x) { return std::exp(-x); }, 0.05) == doctest::Approx(0.1).epsilon(1e-3));
    CHECK(lemma2_bound([](double) { return 0.0; }, 0.05) == 0.0);
}

TEST_CASE("lemma bounds hold on the radial family") {
    int held = 0;
    for (int n : {1, 2, 3}) {
        for (double R : {0.8, 0.9, 0.95}) {
            const double s = std::log(1.0 / (R * R));
            const double actual = std::abs(1.0 / n - s / (1.0 - std::pow(R, 2 * n)));
            const double bound = lemma1_bound([n](double x) { return std::pow(x, n); }, R);
            CHECK(actual <= bound);
            held += actual <= bound;
        }
    }
    CHECK(held == 9);
}

}
