#include <catch2/catch_amalgamated.hpp>

#include "freeobs/bounds.hpp"
#include "freeobs/lambert.hpp"

using namespace freeobs;

namespace {
// Means 2, 1.8, 0.5, 0.2 -> gaps in arm order; sorted for the active bounds.
const std::vector<double> kGaps4 = {0.0, 0.2, 1.5, 1.8};
const std::vector<double> kGaps5Sorted = {0.0, 0.2, 0.5, 1.0, 1.5};
}  // namespace

TEST_CASE("gap validation") {
    std::vector<double> no_zero = {0.1, 0.2};
    std::vector<double> two_zero = {0.0, 0.0, 0.5};
    std::vector<double> negative = {0.0, -0.1};
    std::vector<double> p = {0.5, 0.5};
    CHECK_THROWS_AS(lb_passive_simple(100.0, no_zero, 0.1, p), DomainError);
    CHECK_THROWS_AS(lb_passive_simple(100.0, negative, 0.1, p), DomainError);
    std::vector<double> p3 = {0.3, 0.3, 0.4};
    CHECK_THROWS_AS(lb_passive_simple(100.0, two_zero, 0.1, p3), DomainError);
    std::vector<double> unsorted = {0.0, 1.5, 0.2};
    CHECK_THROWS_AS(lb_active_simple(100.0, unsorted, 0.1), DomainError);
}

TEST_CASE("h_i and eta_i frozen values on the four-arm instance") {
    CHECK(h_i_main(1e4, kGaps4, 1, 0.2) == Catch::Approx(0.8016286622852469).epsilon(1e-12));
    CHECK(eta_i(1e4, kGaps4, 1, 0.2) == Catch::Approx(-0.10213857001255479).epsilon(1e-10));
    CHECK(h_i(1e4, kGaps4, 2, 1.5) == Catch::Approx(3.831714111113735).epsilon(1e-10));
    CHECK(h_i(1e6, kGaps4, 1, 0.2) == Catch::Approx(4.975279630489893).epsilon(1e-10));
    CHECK_THROWS_AS(h_i(2.0, kGaps4, 1, 0.2), DomainError);
    CHECK_THROWS_AS(h_i(1e4, kGaps4, 0, 0.0), DomainError);
}

TEST_CASE("eta_i vanishes as T grows") {
    double prev = std::abs(eta_i(1e3, kGaps4, 1, 0.2));
    for (double T : {1e5, 1e7, 1e9}) {
        double cur = std::abs(eta_i(T, kGaps4, 1, 0.2));
        CHECK(cur < prev);
        prev = cur;
    }
    // eta decays like 1/log T: eta(T) * log(T) stays bounded.
    CHECK(prev < 0.02);
    double scaled_lo = std::abs(eta_i(1e6, kGaps4, 1, 0.2)) * std::log(1e6);
    double scaled_hi = std::abs(eta_i(1e12, kGaps4, 1, 0.2)) * std::log(1e12);
    CHECK(scaled_hi < 3.0 * scaled_lo);
    CHECK(scaled_lo < 3.0 * scaled_hi);
}

TEST_CASE("h_i_main grows logarithmically in T") {
    double prev = h_i_main(1e3, kGaps4, 2, 1.5);
    for (double T : {1e4, 1e5, 1e6, 1e8}) {
        double cur = h_i_main(T, kGaps4, 2, 1.5);
        CHECK(cur > prev);
        prev = cur;
    }
}

TEST_CASE("passive lower bounds: monotone form dominates the fixed-horizon form") {
    auto p = optimal_passive_distribution(kGaps4);
    for (double eps : {1e-2, 1e-3, 1e-4}) {
        for (double T : {1e3, 1e4, 1e5, 1e6, 1e7}) {
            double simple = lb_passive_simple(T, kGaps4, eps, p);
            double theorem = lb_passive_theorem(T, kGaps4, eps, p);
            CHECK(simple >= 0.0);
            CHECK(theorem >= simple - 1e-9);
        }
    }
}

TEST_CASE("passive monotone lower bound is non-decreasing in T") {
    auto p = optimal_passive_distribution(kGaps4);
    for (double eps : {1e-2, 1e-3}) {
        double prev = 0.0;
        for (double T = 1e2; T <= 1e8; T *= 2.0) {
            double cur = lb_passive_theorem(T, kGaps4, eps, p);
            CHECK(cur >= prev - 1e-9);
            prev = std::max(prev, cur);
        }
    }
}

TEST_CASE("passive lower bound becomes void when free observations dominate") {
    std::vector<double> p = {0.0, 1.0};
    std::vector<double> gaps = {0.0, 0.5};
    // Large eps: the eps*p*T*Delta term swamps the log term at every stage.
    CHECK(lb_passive_simple(1e6, gaps, 0.5, p) == 0.0);
}

TEST_CASE("optimal passive distribution is proportional to inverse gaps") {
    auto p = optimal_passive_distribution(kGaps4);
    CHECK(p[0] == 0.0);
    CHECK(p[1] == Catch::Approx(0.8035714285714286).epsilon(1e-12));
    CHECK(p[2] == Catch::Approx(0.10714285714285714).epsilon(1e-12));
    CHECK(p[3] == Catch::Approx(0.08928571428571429).epsilon(1e-12));
    double sum = 0.0;
    for (double x : p) sum += x;
    CHECK(sum == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("active t_k is the last crossing of the tail-demand inequality") {
    SubLogConstants c;
    for (double eps : {1e-2, 1e-3}) {
        for (int k = 2; k <= 4; ++k) {
            std::int64_t tk = active_t_k(k, kGaps5Sorted, eps, c);
            if (tk == 0) continue;
            auto excess = [&](std::int64_t t) {
                double s = 0.0;
                for (int j = k; j < 5; ++j)
                    s += h_i(static_cast<double>(t), kGaps5Sorted, j, kGaps5Sorted[j], c) /
                         (2.0 * kGaps5Sorted[j] * kGaps5Sorted[j]);
                return s - eps * static_cast<double>(t);
            };
            CHECK(excess(tk) > 0.0);
            CHECK(excess(tk + 1) <= 0.0);
        }
    }
}

TEST_CASE("active lower bounds are non-negative and the k-range is respected") {
    for (double T : {1e3, 1e5, 1e7}) {
        CHECK(lb_active_simple(T, kGaps5Sorted, 1e-3) >= 0.0);
        CHECK(lb_active_theorem(T, kGaps5Sorted, 1e-3) >= 0.0);
    }
    // K = 2 leaves no admissible k in [2, K-1]: the monotone bound is void.
    std::vector<double> g2 = {0.0, 0.5};
    CHECK(lb_active_theorem(1e6, g2, 1e-3) == 0.0);
}

TEST_CASE("ucb passive upper bound: coefficient and envelope") {
    std::vector<double> p = {0.25, 0.25, 0.25, 0.25};
    auto b = ub_ucb_passive(kGaps4, 0.1, p);
    // 24 (1/0.2 + 1/1.5 + 1/1.8) = 149.333...
    CHECK(b.logT_coeff == Catch::Approx(24.0 * (1.0 / 0.2 + 1.0 / 1.5 + 1.0 / 1.8)).epsilon(1e-12));
    CHECK(b.finite > 0.0);
    // The applicable bound is the envelope minimum.
    double T_small = 10.0, T_huge = 1e30;
    CHECK(b.at(T_small) == Catch::Approx(b.logT_coeff * std::log(T_small)));
    CHECK(b.at(T_huge) == b.finite);
    // Sub-optimal arm with zero observation probability breaks the bound.
    std::vector<double> p_bad = {1.0, 0.0, 0.0, 0.0};
    CHECK_THROWS_AS(ub_ucb_passive(kGaps4, 0.1, p_bad), DomainError);
}

TEST_CASE("complexity constant H frozen values") {
    CHECK(H_i_rho(kGaps5Sorted, 1, 0.5) == Catch::Approx(68.33333333333333).epsilon(1e-12));
    CHECK(H_i_rho(kGaps5Sorted, 2, 0.5) == Catch::Approx(15.333333333333332).epsilon(1e-12));
    CHECK(H_i_rho(kGaps5Sorted, 3, 0.5) == Catch::Approx(4.666666666666667).epsilon(1e-12));
    CHECK(H_i_rho(kGaps5Sorted, 4, 0.5) == Catch::Approx(2.2222222222222223).epsilon(1e-12));
    // Equal sub-optimal gaps Delta = 0.5, K = 5: H = K / Delta^2 = 20 for any i.
    std::vector<double> eq = {0.0, 0.5, 0.5, 0.5, 0.5};
    CHECK(H_i_rho(eq, 2, 0.5) == Catch::Approx(20.0).epsilon(1e-12));
    CHECK_THROWS_AS(H_i_rho(kGaps5Sorted, 0, 0.5), DomainError);
    CHECK_THROWS_AS(H_i_rho(kGaps5Sorted, 1, 1.5), DomainError);
}

TEST_CASE("active upper bound decreases in eps and includes the 51K term") {
    auto big = ub_active(kGaps5Sorted, 1e-4, 0.5);
    auto small = ub_active(kGaps5Sorted, 1e-1, 0.5);
    CHECK(big.main > small.main);
    CHECK(small.main > 51.0 * 5.0);
    CHECK(big.total() >= big.main);
}

TEST_CASE("epsilon_star frozen value") {
    CHECK(epsilon_star(4, 0.2, 1e4) == Catch::Approx(0.01).epsilon(1e-12));
    CHECK_THROWS_AS(epsilon_star(1, 0.2, 1e4), DomainError);
    CHECK_THROWS_AS(epsilon_star(4, 0.0, 1e4), DomainError);
}

TEST_CASE("lambert w identities") {
    CHECK(lambert_w(0.0) == 0.0);
    CHECK(lambert_w(M_E) == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(lambert_w(-1.0 / M_E) == Catch::Approx(-1.0).margin(1e-6));
    CHECK(lambert_w(100.0) == Catch::Approx(3.38563014029005).epsilon(1e-12));
    CHECK(lambert_w(2.0) == Catch::Approx(0.8526055020137255).epsilon(1e-12));
    for (double x : {-0.3, -0.1, 0.01, 0.5, 1.0, 3.0, 10.0, 1e3, 1e8}) {
        double w = lambert_w(x);
        CHECK(w * std::exp(w) == Catch::Approx(x).margin(1e-9));
    }
    CHECK_THROWS_AS(lambert_w(-1.0), DomainError);
}

TEST_CASE("lambert w sandwich: log x - log log x <= W(x) <= log x for x >= e") {
    for (double x : {3.0, 10.0, 100.0, 1e4, 1e8}) {
        double w = lambert_w(x);
        CHECK(w <= std::log(x) + 1e-12);
        CHECK(w >= std::log(x) - std::log(std::log(x)) - 1e-12);
    }
}

TEST_CASE("secondary-branch lower bound") {
    // Frozen reference values of W_{-1}(-e^{-u-1}).
    CHECK(lambert_w_minus1_lb(0.5) <= -2.357676673945899);
    CHECK(lambert_w_minus1_lb(1.0) <= -3.1461932206205825);
    CHECK(lambert_w_minus1_lb(2.0) <= -4.505241495792883);
    CHECK(lambert_w_minus1_lb(1.0) == Catch::Approx(-2.0 - std::sqrt(2.0)).epsilon(1e-12));
    CHECK_THROWS_AS(lambert_w_minus1_lb(0.0), DomainError);
}
