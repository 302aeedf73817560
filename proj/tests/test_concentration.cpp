#include <catch2/catch_amalgamated.hpp>

#include "freeobs/concentration.hpp"

using namespace freeobs;

TEST_CASE("maximal threshold frozen value and scaling") {
    CHECK(maximal_threshold(4, 100, 0.1, 1.0) == Catch::Approx(1.661544600343645).epsilon(1e-12));
    // Threshold scales with sqrt(sigma^2).
    CHECK(maximal_threshold(4, 100, 0.1, 4.0) ==
          Catch::Approx(2.0 * maximal_threshold(4, 100, 0.1, 1.0)).epsilon(1e-12));
    CHECK_THROWS_AS(maximal_threshold(0, 100, 0.1, 1.0), DomainError);
    CHECK_THROWS_AS(maximal_threshold(101, 100, 0.1, 1.0), DomainError);
    CHECK_THROWS_AS(maximal_threshold(4, 100, 0.3, 1.0), DomainError);
    CHECK_THROWS_AS(maximal_threshold(4, 100, 0.1, 0.0), DomainError);
}

TEST_CASE("maximal bound frozen values") {
    CHECK(maximal_bound(0.1) == Catch::Approx(0.910456277631088).epsilon(1e-12));
    CHECK(maximal_bound(0.01) == Catch::Approx(0.12875796157736083).epsilon(1e-12));
}

TEST_CASE("phi is minimized at 1") {
    CHECK(phi(1.0) == 1.0);
    CHECK(phi(4.0) == Catch::Approx(1.125).epsilon(1e-12));
    for (double x : {0.1, 0.5, 2.0, 10.0, 100.0}) CHECK(phi(x) >= 1.0);
    CHECK_THROWS_AS(phi(0.0), DomainError);
}

TEST_CASE("interval threshold reduces to the maximal form at T1 = T2") {
    // With T1 = T2 = t, phi(1) = 1: sqrt((2 s2/t) log(1/delta)).
    double v = interval_threshold(10, 10, 10, 0.05, 1.0);
    CHECK(v == Catch::Approx(std::sqrt(0.2 * std::log(20.0))).epsilon(1e-12));
    // Wider interval -> larger threshold at the same t.
    CHECK(interval_threshold(10, 10, 40, 0.05, 1.0) > v);
    CHECK_THROWS_AS(interval_threshold(5, 10, 40, 0.05, 1.0), DomainError);
}

TEST_CASE("binomial lower-tail bounds dominate the exact tail") {
    // n = 20, p = 0.3, alpha = 0.1: the bounded event is
    // P{Bin(20, 0.3) <= 4} = 0.107086... (independent oracle); both bounds
    // must dominate it.
    double kl = binomial_lower_tail_bound(20, 0.3, 0.1);
    double simple = binomial_lower_tail_bound_simple(20, 0.3, 0.1);
    CHECK(kl == Catch::Approx(0.6365779373840773).epsilon(1e-12));
    CHECK(simple == Catch::Approx(0.6211451576154515).epsilon(1e-12));
    CHECK(kl >= 0.10708680450373086);
    CHECK(simple >= 0.10708680450373086);
    CHECK(binomial_lower_tail_bound(10, 0.5, 0.6) == 0.0);
    CHECK(binomial_lower_tail_bound(10, 0.5, 0.0) == 1.0);
    CHECK_THROWS_AS(binomial_lower_tail_bound(0, 0.5, 0.1), DomainError);
    CHECK_THROWS_AS(binomial_lower_tail_bound_simple(10, 0.7, 0.1), DomainError);
}

TEST_CASE("mc crossing probability stays within the analytic bound") {
    for (auto family : {MartingaleSpec::Family::Gaussian, MartingaleSpec::Family::Bernoulli}) {
        MartingaleSpec spec;
        spec.family = family;
        spec.horizon = 100;
        RngStream rng(2024, family == MartingaleSpec::Family::Gaussian ? 0 : 1);
        auto e = mc_crossing_probability(spec, 0.1, 20000, rng);
        CHECK(e.bound == maximal_bound(0.1));
        CHECK(e.within_bound());
        CHECK(e.estimate >= 0.0);
        CHECK(e.estimate <= 1.0);
    }
    MartingaleSpec spec;
    RngStream rng(0, 0);
    CHECK_THROWS_AS(mc_crossing_probability(spec, 0.1, 100, rng), DomainError);
}

TEST_CASE("binary threshold and deviation check") {
    CHECK(binary_t2_threshold(0.5, 100, 1.0) ==
          Catch::Approx(std::log(100.0) - 50.0 + std::sqrt(250.0 * std::log(100.0))).epsilon(1e-12));
    RngStream rng(7, 0);
    auto r = binary_t2_check(0.5, 100, 1.0, 20000, rng);
    CHECK(r.bound == Catch::Approx(1e-4).epsilon(1e-12));
    CHECK(r.pass);
    CHECK_THROWS_AS(binary_t2_check(1.5, 100, 1.0, 100, rng), DomainError);
}
