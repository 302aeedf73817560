#include <catch2/catch_amalgamated.hpp>

#include "freeobs/experiment.hpp"
#include "freeobs/oracle.hpp"

using namespace freeobs;

TEST_CASE("oracle on point-mass arms is fully deterministic") {
    // FTL pulls each arm once (regret 0.5 from arm 1), then always pulls the
    // better arm: total expected regret is exactly the one forced pull.
    auto inst = make_instance({PointMass{1.0}, PointMass{0.5}});
    double r = brute_force_expected_regret(inst, FreeObsSchedule::none(), OracleFtlRobin{}, 10);
    CHECK(r == Catch::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("oracle horizon zero gives zero regret") {
    auto inst = make_instance({Bernoulli{0.9}, Bernoulli{0.1}});
    CHECK(brute_force_expected_regret(inst, FreeObsSchedule::none(), OracleFtlRobin{}, 0) == 0.0);
    CHECK_THROWS_AS(
        brute_force_expected_regret(inst, FreeObsSchedule::none(), OracleFtlRobin{}, -1),
        DomainError);
}

TEST_CASE("oracle frozen value: ftl with active free observations") {
    // K = 2 Bernoulli(0.9)/Bernoulli(0.1), free observation every second
    // round, T = 4. Exact rational enumeration gives 11019/12500.
    auto inst = make_instance({Bernoulli{0.9}, Bernoulli{0.1}});
    double r = brute_force_expected_regret(inst, FreeObsSchedule::deterministic(0.5),
                                           OracleFtlRobin{}, 4);
    CHECK(r == Catch::Approx(11019.0 / 12500.0).epsilon(1e-12));
}

TEST_CASE("oracle agrees with the simulator on ftl (mc comparison)") {
    auto inst = make_instance({Bernoulli{0.9}, Bernoulli{0.1}});
    double exact = brute_force_expected_regret(inst, FreeObsSchedule::deterministic(0.5),
                                               OracleFtlRobin{}, 4);
    ExperimentConfig cfg;
    cfg.instance = inst;
    cfg.schedule = FreeObsSchedule::deterministic(0.5);
    cfg.observer = ObserverMode::active();
    cfg.policy_name = "ftl_robin";
    cfg.horizon = 4;
    cfg.checkpoints = {4};
    cfg.seed = 31415;
    const int n = 40000;
    double sum = 0.0, sumsq = 0.0;
    for (int rep = 0; rep < n; ++rep) {
        double v = run_single(cfg, rep).regret.back();
        sum += v;
        sumsq += v * v;
    }
    double mean = sum / n;
    double se = std::sqrt(std::max(0.0, sumsq / n - mean * mean) / n);
    CHECK(std::abs(mean - exact) <= 4.0 * se);
}

TEST_CASE("oracle agrees with the simulator on passive ucb (mc comparison)") {
    auto inst = make_instance({Bernoulli{0.9}, Bernoulli{0.1}});
    std::vector<double> p = {0.5, 0.5};
    double exact = brute_force_expected_regret(inst, FreeObsSchedule::deterministic(0.5),
                                               OracleUcbPassive{}, 5, p);
    ExperimentConfig cfg;
    cfg.instance = inst;
    cfg.schedule = FreeObsSchedule::deterministic(0.5);
    cfg.observer = ObserverMode::passive(p);
    cfg.policy_name = "ucb_passive";
    cfg.horizon = 5;
    cfg.checkpoints = {5};
    cfg.seed = 27182;
    const int n = 40000;
    double sum = 0.0, sumsq = 0.0;
    for (int rep = 0; rep < n; ++rep) {
        double v = run_single(cfg, rep).regret.back();
        sum += v;
        sumsq += v * v;
    }
    double mean = sum / n;
    double se = std::sqrt(std::max(0.0, sumsq / n - mean * mean) / n);
    CHECK(std::abs(mean - exact) <= 4.0 * se);
}

TEST_CASE("oracle rejects unsupported inputs") {
    auto gauss = make_instance({Gaussian{1.0}, Gaussian{0.0}});
    CHECK_THROWS_AS(
        brute_force_expected_regret(gauss, FreeObsSchedule::none(), OracleFtlRobin{}, 3),
        TooLarge);
    auto inst = make_instance({Bernoulli{0.9}, Bernoulli{0.1}});
    CHECK_THROWS_AS(brute_force_expected_regret(inst, FreeObsSchedule::static_random(0.5),
                                                OracleFtlRobin{}, 3),
                    TooLarge);
    // Tiny leaf budget trips the guard.
    CHECK_THROWS_AS(brute_force_expected_regret(inst, FreeObsSchedule::none(), OracleFtlRobin{},
                                                12, std::nullopt, 10),
                    TooLarge);
}
