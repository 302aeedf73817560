#ifndef FREEOBS_ENVIRONMENT_HPP
#define FREEOBS_ENVIRONMENT_HPP

#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "freeobs/bandit.hpp"
#include "freeobs/errors.hpp"
#include "freeobs/rng.hpp"

namespace freeobs {

// When free observations arrive.
struct FreeObsSchedule {
    enum class Kind { None, Deterministic, StaticRandom };
    Kind kind = Kind::None;
    double epsilon = 0.0;

    static FreeObsSchedule none() { return {Kind::None, 0.0}; }
    static FreeObsSchedule deterministic(double eps) {
        check_eps(eps);
        return {Kind::Deterministic, eps};
    }
    static FreeObsSchedule static_random(double eps) {
        check_eps(eps);
        return {Kind::StaticRandom, eps};
    }

private:
    static void check_eps(double eps) {
        if (!(eps > 0.0 && eps <= 1.0)) throw DomainError("epsilon must lie in (0,1]");
    }
};

// Z_t: is a free observation available at stage t?
// The deterministic schedule fires when floor(eps*t) crosses an integer, so
// that exactly floor(eps*T) arrivals happen in T stages for any eps in (0,1].
inline bool free_obs_available(const FreeObsSchedule& s, std::int64_t t, RngStream& rng) {
    switch (s.kind) {
        case FreeObsSchedule::Kind::None:
            return false;
        case FreeObsSchedule::Kind::Deterministic:
            return std::floor(s.epsilon * static_cast<double>(t)) >
                   std::floor(s.epsilon * static_cast<double>(t - 1));
        case FreeObsSchedule::Kind::StaticRandom:
            return rng.bernoulli(s.epsilon);
    }
    return false;
}

// Who picks the freely observed arm.
struct ObserverMode {
    enum class Kind { Passive, Active };
    Kind kind = Kind::Passive;
    std::vector<double> p;  // categorical over arms, Passive only

    static ObserverMode passive(std::vector<double> probs) {
        validate_probs(probs);
        return {Kind::Passive, std::move(probs)};
    }
    static ObserverMode active() { return {Kind::Active, {}}; }

    static void validate_probs(std::span<const double> probs) {
        double sum = 0.0;
        for (double x : probs) {
            if (x < 0.0) throw InvalidDistribution("negative probability");
            sum += x;
        }
        if (std::abs(sum - 1.0) > 1e-9) throw InvalidDistribution("probabilities must sum to 1");
    }
};

inline int passive_draw(std::span<const double> p, RngStream& rng) {
    ObserverMode::validate_probs(p);
    return rng.categorical(p);
}

}  // namespace freeobs

#endif
