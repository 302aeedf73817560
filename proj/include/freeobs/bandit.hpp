#ifndef FREEOBS_BANDIT_HPP
#define FREEOBS_BANDIT_HPP

#include <algorithm>
#include <cstdint>
#include <variant>
#include <vector>

#include "freeobs/errors.hpp"
#include "freeobs/rng.hpp"

namespace freeobs {

// One arm's reward distribution.
struct Gaussian {
    double mean;
    double variance = 1.0;
};
struct Bernoulli {
    double mean;
};
struct PointMass {
    double value;
};

using ArmSpec = std::variant<Gaussian, Bernoulli, PointMass>;

inline double arm_mean(const ArmSpec& a) {
    return std::visit([](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PointMass>)
            return s.value;
        else
            return s.mean;
    }, a);
}

inline void validate_arm(const ArmSpec& a) {
    if (const auto* g = std::get_if<Gaussian>(&a)) {
        if (!(g->variance > 0.0)) throw InvalidArm("Gaussian variance must be positive");
    } else if (const auto* b = std::get_if<Bernoulli>(&a)) {
        if (!(b->mean >= 0.0 && b->mean <= 1.0))
            throw InvalidArm("Bernoulli mean must lie in [0,1]");
    }
}

// A bandit problem: arm distributions plus the derived means, best mean and
// gap vector. Gaps are always recomputed from the means, never stored
// independently. Arm order is preserved as given.
struct ProblemInstance {
    std::vector<ArmSpec> arms;
    std::vector<double> mu;
    double mu_star = 0.0;
    std::vector<double> gaps;

    int num_arms() const { return static_cast<int>(arms.size()); }
};

inline ProblemInstance make_instance(std::vector<ArmSpec> arms) {
    if (arms.size() < 2) throw EmptyInstance("an instance needs at least 2 arms");
    ProblemInstance inst;
    inst.arms = std::move(arms);
    for (const auto& a : inst.arms) {
        validate_arm(a);
        inst.mu.push_back(arm_mean(a));
    }
    inst.mu_star = *std::max_element(inst.mu.begin(), inst.mu.end());
    for (double m : inst.mu) inst.gaps.push_back(inst.mu_star - m);
    return inst;
}

inline double sample_reward(const ProblemInstance& inst, int arm, RngStream& rng) {
    if (arm < 0 || arm >= inst.num_arms()) throw IndexOutOfRange("sample_reward: bad arm index");
    return std::visit([&rng](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Gaussian>)
            return rng.gaussian(s.mean, std::sqrt(s.variance));
        else if constexpr (std::is_same_v<T, Bernoulli>)
            return rng.bernoulli(s.mean) ? 1.0 : 0.0;
        else
            return s.value;
    }, inst.arms[arm]);
}

// Pseudo-regret added by one pull: the pulled arm's gap. Free observations
// never go through here; they cost nothing.
inline double pseudo_regret_increment(const ProblemInstance& inst, int pulled_arm) {
    if (pulled_arm < 0 || pulled_arm >= inst.num_arms())
        throw IndexOutOfRange("pseudo_regret_increment: bad arm index");
    return inst.gaps[pulled_arm];
}

// Per-arm pull / free-observation counters with reward sums kept separately
// per source, so policies can use pull-only, free-only or combined estimates.
// Invariant: O_i = N_i + F_i, and t equals the total number of pulls.
struct ObservationCounters {
    std::int64_t t = 0;
    std::vector<std::int64_t> pulls;
    std::vector<std::int64_t> frees;
    std::vector<double> pull_sum;
    std::vector<double> free_sum;

    explicit ObservationCounters(int num_arms)
        : pulls(num_arms, 0), frees(num_arms, 0), pull_sum(num_arms, 0.0), free_sum(num_arms, 0.0) {}

    int num_arms() const { return static_cast<int>(pulls.size()); }
    std::int64_t obs(int i) const { return pulls[i] + frees[i]; }

    double combined_mean(int i) const { return (pull_sum[i] + free_sum[i]) / static_cast<double>(obs(i)); }
    double pull_mean(int i) const { return pull_sum[i] / static_cast<double>(pulls[i]); }
    double free_mean(int i) const { return free_sum[i] / static_cast<double>(frees[i]); }

    void record_pull(int arm, double reward) {
        check(arm);
        pulls[arm] += 1;
        pull_sum[arm] += reward;
        t += 1;
    }

    // Does not advance t: a free observation is not a stage.
    void record_free(int arm, double reward) {
        check(arm);
        frees[arm] += 1;
        free_sum[arm] += reward;
    }

private:
    void check(int arm) const {
        if (arm < 0 || arm >= num_arms()) throw IndexOutOfRange("counters: bad arm index");
    }
};

}  // namespace freeobs

#endif
