#ifndef FREEOBS_ORACLE_HPP
#define FREEOBS_ORACLE_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "freeobs/bandit.hpp"
#include "freeobs/environment.hpp"
#include "freeobs/errors.hpp"
#include "freeobs/policies.hpp"

namespace freeobs {

// Exact expected pseudo-regret by exhaustive enumeration of the outcome tree,
// for finite-support arms (Bernoulli / PointMass) and small horizons.
// Argmax ties are marginalized by branching over every maximizer at equal
// weight, matching the uniform-random tie-break of the simulated policies.
//
// An oracle policy is a small value type with:
//   void reset(int K);
//   std::vector<int> pull_candidates(const ObservationCounters&) const;
//   std::vector<int> free_candidates(const ObservationCounters&) const;  // active only
//   void on_free(int arm);   // state update after a delivered free obs
// Copies of the policy carry the branch-local state during recursion.

struct OracleFtlRobin {
    int K = 0;
    int robin = 0;

    void reset(int num_arms) {
        K = num_arms;
        robin = 0;
    }

    std::vector<int> pull_candidates(const ObservationCounters& c) const {
        if (c.t < K) return {static_cast<int>(c.t)};
        std::vector<int> best;
        double top = -1e300;
        for (int a = 0; a < K; ++a) {
            double m = c.combined_mean(a);
            if (m > top) {
                top = m;
                best = {a};
            } else if (m == top) {
                best.push_back(a);
            }
        }
        return best;
    }

    std::vector<int> free_candidates(const ObservationCounters&) const { return {robin}; }

    void on_free(int /*arm*/) { robin = (robin + 1) % K; }
};

struct OracleUcbPassive {
    int K = 0;

    void reset(int num_arms) { K = num_arms; }

    std::vector<int> pull_candidates(const ObservationCounters& c) const {
        if (c.t < K) return {static_cast<int>(c.t)};
        std::vector<int> best;
        double top = -1e300;
        for (int a = 0; a < K; ++a) {
            double v = ucb_passive_index(c.combined_mean(a), c.obs(a), c.t + 1);
            if (v > top) {
                top = v;
                best = {a};
            } else if (v == top) {
                best.push_back(a);
            }
        }
        return best;
    }

    std::vector<int> free_candidates(const ObservationCounters&) const { return {}; }

    void on_free(int /*arm*/) {}
};

namespace detail {

// (value, probability) support of one arm's reward distribution.
inline std::vector<std::pair<double, double>> reward_support(const ArmSpec& a) {
    if (const auto* b = std::get_if<Bernoulli>(&a)) {
        std::vector<std::pair<double, double>> s;
        if (b->mean < 1.0) s.push_back({0.0, 1.0 - b->mean});
        if (b->mean > 0.0) s.push_back({1.0, b->mean});
        return s;
    }
    if (const auto* pm = std::get_if<PointMass>(&a)) return {{pm->value, 1.0}};
    throw TooLarge("brute force oracle supports only finite-support arms");
}

template <class OP>
struct OracleRecursion {
    const ProblemInstance& inst;
    const FreeObsSchedule& schedule;
    const std::optional<std::vector<double>>& passive_p;
    std::int64_t horizon;
    std::int64_t leaf_budget;
    std::int64_t visited = 0;

    double go(std::int64_t t, ObservationCounters& c, OP& policy, double regret) {
        if (++visited > leaf_budget) throw TooLarge("oracle outcome tree exceeds leaf budget");
        if (t > horizon) return regret;

        auto pulls = policy.pull_candidates(c);
        double w_pull = 1.0 / static_cast<double>(pulls.size());
        double total = 0.0;
        for (int arm : pulls) {
            for (auto [reward, pr] : reward_support(inst.arms[arm])) {
                ObservationCounters c2 = c;
                c2.record_pull(arm, reward);
                double r2 = regret + inst.gaps[arm];
                RngStream dummy(0, 0);  // deterministic schedules only, never consulted
                if (free_obs_available(schedule, t, dummy)) {
                    total += w_pull * pr * branch_free(t, c2, policy, r2);
                } else {
                    OP p2 = policy;
                    total += w_pull * pr * go(t + 1, c2, p2, r2);
                }
            }
        }
        return total;
    }

    double branch_free(std::int64_t t, ObservationCounters& c, OP& policy, double regret) {
        std::vector<std::pair<int, double>> arms;  // (arm, prob of being observed)
        if (passive_p) {
            for (int a = 0; a < inst.num_arms(); ++a)
                if ((*passive_p)[a] > 0.0) arms.push_back({a, (*passive_p)[a]});
        } else {
            auto cand = policy.free_candidates(c);
            double w = 1.0 / static_cast<double>(cand.size());
            for (int a : cand) arms.push_back({a, w});
        }
        double total = 0.0;
        for (auto [arm, w] : arms) {
            for (auto [reward, pr] : reward_support(inst.arms[arm])) {
                ObservationCounters c2 = c;
                c2.record_free(arm, reward);
                OP p2 = policy;
                p2.on_free(arm);
                total += w * pr * go(t + 1, c2, p2, regret);
            }
        }
        return total;
    }
};

}  // namespace detail

// passive_p set: passive observer drawing f_t from that vector. Unset: active
// observer, the policy's free_candidates pick f_t.
template <class OP>
double brute_force_expected_regret(const ProblemInstance& inst, const FreeObsSchedule& schedule,
                                   OP policy, std::int64_t horizon,
                                   std::optional<std::vector<double>> passive_p = std::nullopt,
                                   std::int64_t leaf_budget = 1000000) {
    if (schedule.kind == FreeObsSchedule::Kind::StaticRandom)
        throw TooLarge("oracle supports deterministic or no-free-obs schedules only");
    if (horizon < 0) throw DomainError("oracle: horizon must be >= 0");
    policy.reset(inst.num_arms());
    ObservationCounters c(inst.num_arms());
    detail::OracleRecursion<OP> rec{inst, schedule, passive_p, horizon, leaf_budget};
    return rec.go(1, c, policy, 0.0);
}

}  // namespace freeobs

#endif
