#ifndef FREEOBS_POLICIES_HPP
#define FREEOBS_POLICIES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "freeobs/bandit.hpp"
#include "freeobs/errors.hpp"
#include "freeobs/rng.hpp"

namespace freeobs {

struct PolicyDecision {
    int pull = 0;
    // Consulted only in active mode when a free observation is available.
    std::optional<int> free_request;
};

// Uniform decision interface. `step` is called once per stage before the
// pull; reward feedback arrives through the observe_* callbacks after the
// environment has updated its counters.
class Policy {
public:
    virtual ~Policy() = default;
    virtual void reset(int num_arms) = 0;
    virtual PolicyDecision step(const ObservationCounters& c, RngStream& rng) = 0;
    virtual void observe_pull(int /*arm*/, double /*reward*/) {}
    virtual void observe_free(int /*arm*/, double /*reward*/) {}
};

namespace detail {

// Argmax with uniform random tie-break over the maximizing set.
template <class F>
int argmax_tiebreak(std::span<const int> candidates, F&& value, RngStream& rng) {
    double best = -std::numeric_limits<double>::infinity();
    int ties = 0;
    int chosen = candidates.front();
    for (int a : candidates) {
        double v = value(a);
        if (v > best) {
            best = v;
            ties = 1;
            chosen = a;
        } else if (v == best) {
            ++ties;
            if (rng.uniform_int(static_cast<std::uint64_t>(ties)) == 0) chosen = a;
        }
    }
    return chosen;
}

inline std::vector<int> all_arms(int K) {
    std::vector<int> v(static_cast<std::size_t>(K));
    for (int i = 0; i < K; ++i) v[static_cast<std::size_t>(i)] = i;
    return v;
}

}  // namespace detail

// UCB index with an observation count in the exploration radius.
inline double ucb_passive_index(double mean, std::int64_t obs, std::int64_t t) {
    if (obs < 1 || t < 1) throw DomainError("ucb_passive_index: need obs >= 1 and t >= 1");
    return mean + std::sqrt(6.0 * std::log(static_cast<double>(t)) / static_cast<double>(obs));
}

// Pulls the empirical leader using all observations; in active mode requests
// free observations round-robin over all arms.
class FtlRobinPolicy : public Policy {
public:
    void reset(int num_arms) override {
        K_ = num_arms;
        robin_ = 0;
        arms_ = detail::all_arms(K_);
    }

    PolicyDecision step(const ObservationCounters& c, RngStream& rng) override {
        PolicyDecision d;
        d.free_request = robin_;
        if (c.t < K_) {
            d.pull = static_cast<int>(c.t);
            return d;
        }
        d.pull = detail::argmax_tiebreak(arms_, [&](int a) { return c.combined_mean(a); }, rng);
        return d;
    }

    void observe_free(int /*arm*/, double /*reward*/) override { robin_ = (robin_ + 1) % K_; }

private:
    int K_ = 0;
    int robin_ = 0;
    std::vector<int> arms_;
};

// UCB over combined observation counts; purely passive.
class UcbPassivePolicy : public Policy {
public:
    void reset(int num_arms) override {
        K_ = num_arms;
        arms_ = detail::all_arms(K_);
    }

    PolicyDecision step(const ObservationCounters& c, RngStream& rng) override {
        if (c.t < K_) return {static_cast<int>(c.t), std::nullopt};
        std::int64_t t = c.t + 1;
        int pull = detail::argmax_tiebreak(
            arms_, [&](int a) { return ucb_passive_index(c.combined_mean(a), c.obs(a), t); }, rng);
        return {pull, std::nullopt};
    }

private:
    int K_ = 0;
    std::vector<int> arms_;
};

// Plain UCB that discards free observations entirely.
class UcbBaselinePolicy : public Policy {
public:
    void reset(int num_arms) override {
        K_ = num_arms;
        arms_ = detail::all_arms(K_);
    }

    PolicyDecision step(const ObservationCounters& c, RngStream& rng) override {
        if (c.t < K_) return {static_cast<int>(c.t), std::nullopt};
        std::int64_t t = c.t + 1;
        int pull = detail::argmax_tiebreak(
            arms_, [&](int a) { return ucb_passive_index(c.pull_mean(a), c.pulls[a], t); }, rng);
        return {pull, std::nullopt};
    }

private:
    int K_ = 0;
    std::vector<int> arms_;
};

// Heuristic: pull the top UCB index, freely observe the runner-up.
class Ucb1DoublePolicy : public Policy {
public:
    void reset(int num_arms) override {
        if (num_arms < 2) throw DomainError("ucb1_double: needs K >= 2");
        K_ = num_arms;
        arms_ = detail::all_arms(K_);
    }

    PolicyDecision step(const ObservationCounters& c, RngStream& rng) override {
        auto index = [&](int a) {
            if (c.obs(a) == 0) return std::numeric_limits<double>::infinity();
            return ucb_passive_index(c.combined_mean(a), c.obs(a), std::max<std::int64_t>(c.t + 1, 1));
        };
        PolicyDecision d;
        if (c.t < K_)
            d.pull = static_cast<int>(c.t);
        else
            d.pull = detail::argmax_tiebreak(arms_, index, rng);
        std::vector<int> rest;
        for (int a : arms_)
            if (a != d.pull) rest.push_back(a);
        d.free_request = detail::argmax_tiebreak(rest, index, rng);
        return d;
    }

private:
    int K_ = 0;
    std::vector<int> arms_;
};

// Confidence radius of the ETC elimination rule.
inline double etc_radius(double alpha, std::int64_t s, double horizon) {
    if (s < 1) throw DomainError("etc_radius: s must be >= 1");
    double logterm = std::log(horizon / static_cast<double>(s));
    return std::sqrt((2.0 * alpha / static_cast<double>(s)) * std::max(0.0, logterm));
}

enum class EtcCadence { EveryRound, EveryCRounds, PowersOfTwo };

// Explore-Then-Commit elimination over a surviving set, fed one observation
// at a time. Observations are requested round-robin over the surviving arms;
// elimination checks fire at the configured cadence.
class EtcState {
public:
    EtcState() = default;
    EtcState(int num_arms, double alpha, double horizon, EtcCadence cadence = EtcCadence::EveryRound,
             int cadence_C = 10)
        : alpha_(alpha),
          horizon_(horizon),
          cadence_(cadence),
          cadence_C_(cadence_C),
          surviving_(static_cast<std::size_t>(num_arms), 1),
          count_(static_cast<std::size_t>(num_arms), 0),
          sum_(static_cast<std::size_t>(num_arms), 0.0) {}

    int num_arms() const { return static_cast<int>(surviving_.size()); }

    int surviving_count() const {
        int n = 0;
        for (char s : surviving_) n += s;
        return n;
    }

    bool is_surviving(int arm) const { return surviving_[static_cast<std::size_t>(arm)] != 0; }

    std::vector<int> surviving_set() const {
        std::vector<int> out;
        for (int a = 0; a < num_arms(); ++a)
            if (surviving_[static_cast<std::size_t>(a)]) out.push_back(a);
        return out;
    }

    std::int64_t count(int arm) const { return count_[static_cast<std::size_t>(arm)]; }
    double mean(int arm) const {
        return sum_[static_cast<std::size_t>(arm)] / static_cast<double>(count(arm));
    }

    void set_horizon(double horizon) { horizon_ = horizon; }

    // Next arm to observe: round-robin over the surviving set.
    int next_arm() const {
        int a = cursor_;
        while (!surviving_[static_cast<std::size_t>(a)]) a = (a + 1) % num_arms();
        return a;
    }

    void ingest(int arm, double value) {
        if (arm < 0 || arm >= num_arms()) throw IndexOutOfRange("etc: bad arm index");
        count_[static_cast<std::size_t>(arm)] += 1;
        sum_[static_cast<std::size_t>(arm)] += value;
        if (arm == next_arm()) cursor_ = (arm + 1) % num_arms();
        ++total_obs_;
        ++obs_since_check_;
        maybe_check();
    }

private:
    void maybe_check() {
        switch (cadence_) {
            case EtcCadence::EveryRound: {
                std::int64_t lo = std::numeric_limits<std::int64_t>::max();
                std::int64_t hi = 0;
                for (int a = 0; a < num_arms(); ++a) {
                    if (!surviving_[static_cast<std::size_t>(a)]) continue;
                    lo = std::min(lo, count(a));
                    hi = std::max(hi, count(a));
                }
                if (lo == hi && lo > last_round_) {
                    last_round_ = lo;
                    eliminate();
                }
                break;
            }
            case EtcCadence::EveryCRounds:
                if (obs_since_check_ >= static_cast<std::int64_t>(cadence_C_) * surviving_count()) {
                    obs_since_check_ = 0;
                    eliminate();
                }
                break;
            case EtcCadence::PowersOfTwo:
                if (total_obs_ >= next_pow_) {
                    while (next_pow_ <= total_obs_) next_pow_ *= 2;
                    eliminate();
                }
                break;
        }
    }

    // Per-arm radii so the rule stays well defined when counts are unequal
    // (mid-round checks, shared-information feeds). With equal counts this is
    // the common-radius comparison.
    void eliminate() {
        double best = -std::numeric_limits<double>::infinity();
        for (int a = 0; a < num_arms(); ++a) {
            if (!surviving_[static_cast<std::size_t>(a)] || count(a) < 1) continue;
            best = std::max(best, mean(a) - etc_radius(alpha_, count(a), horizon_));
        }
        for (int a = 0; a < num_arms(); ++a) {
            if (!surviving_[static_cast<std::size_t>(a)] || count(a) < 1) continue;
            if (mean(a) + etc_radius(alpha_, count(a), horizon_) < best)
                surviving_[static_cast<std::size_t>(a)] = 0;
        }
    }

    double alpha_ = 1.0;
    double horizon_ = 1.0;
    EtcCadence cadence_ = EtcCadence::EveryRound;
    int cadence_C_ = 10;
    std::vector<char> surviving_;
    std::vector<std::int64_t> count_;
    std::vector<double> sum_;
    int cursor_ = 0;
    std::int64_t total_obs_ = 0;
    std::int64_t obs_since_check_ = 0;
    std::int64_t last_round_ = 0;
    std::int64_t next_pow_ = 1;
};

// OCUCB index over the active set. `counts` and `means` are parallel arrays
// for the active set; `i` indexes into them. The denominator sums
// min{N_j, N_j^rho N_i^(1-rho)} over the active set.
inline double ocucb_index(int i, std::span<const std::int64_t> counts,
                          std::span<const double> means, std::int64_t t, double eta, double rho) {
    for (std::int64_t n : counts)
        if (n < 1) throw DomainError("ocucb_index: all active-set counts must be >= 1");
    double ni = static_cast<double>(counts[static_cast<std::size_t>(i)]);
    double denom = 0.0;
    for (std::size_t j = 0; j < counts.size(); ++j) {
        double nj = static_cast<double>(counts[j]);
        denom += std::min(nj, std::pow(nj, rho) * std::pow(ni, 1.0 - rho));
    }
    double td = static_cast<double>(t);
    double B = std::max({M_E, std::log(td), td * std::log(td) / denom});
    return means[static_cast<std::size_t>(i)] + std::sqrt(2.0 * eta * std::log(B) / ni);
}

struct ActiveParams {
    double alpha = 1.0;
    double rho = 0.5;
    double eta = 2.0;
    double epoch_base = 2.0;
    EtcCadence cadence = EtcCadence::EveryCRounds;
    int cadence_C = 10;
    bool share_info = false;
};

// ETC-OCUCB: epochs of length base^(base^m); OCUCB pulls within the current
// surviving set, restarting from zero each epoch; ETC consumes the free
// observations with a horizon tied to the next epoch length and keeps its
// counts across epochs. With share_info both subroutines ingest every
// observation of their arms.
class EtcOcucbPolicy : public Policy {
public:
    explicit EtcOcucbPolicy(ActiveParams params = {}) : prm_(params) {
        if (!(prm_.epoch_base >= 2.0)) throw DomainError("etc_ocucb: epoch base must be >= 2");
        if (!(prm_.rho >= 0.5 && prm_.rho <= 1.0)) throw DomainError("etc_ocucb: rho in [1/2,1]");
        if (!(prm_.eta > 1.0)) throw DomainError("etc_ocucb: eta must be > 1");
        if (!(prm_.alpha >= 1.0)) throw DomainError("etc_ocucb: alpha must be >= 1");
    }

    void reset(int num_arms) override {
        K_ = num_arms;
        m_ = 0;
        epoch_start_ = 0;
        S_ = detail::all_arms(K_);
        n_.assign(static_cast<std::size_t>(K_), 0);
        sum_.assign(static_cast<std::size_t>(K_), 0.0);
        epoch_pulls_ = 0;
        etc_ = EtcState(K_, prm_.alpha, etc_horizon(0), prm_.cadence, prm_.cadence_C);
    }

    PolicyDecision step(const ObservationCounters& c, RngStream& rng) override {
        advance_epoch_if_needed(c.t);
        PolicyDecision d;
        d.free_request = etc_.next_arm();
        // Per-epoch initialization: each active arm pulled once before the
        // index applies.
        for (int a : S_) {
            if (n_[static_cast<std::size_t>(a)] == 0) {
                d.pull = a;
                return d;
            }
        }
        std::vector<std::int64_t> counts;
        std::vector<double> means;
        counts.reserve(S_.size());
        means.reserve(S_.size());
        for (int a : S_) {
            counts.push_back(n_[static_cast<std::size_t>(a)]);
            means.push_back(sum_[static_cast<std::size_t>(a)] /
                            static_cast<double>(n_[static_cast<std::size_t>(a)]));
        }
        std::int64_t t_local = epoch_pulls_ + 1;
        std::vector<int> slots(S_.size());
        for (std::size_t i = 0; i < S_.size(); ++i) slots[i] = static_cast<int>(i);
        int slot = detail::argmax_tiebreak(
            slots, [&](int s) { return ocucb_index(s, counts, means, t_local, prm_.eta, prm_.rho); },
            rng);
        d.pull = S_[static_cast<std::size_t>(slot)];
        return d;
    }

    void observe_pull(int arm, double reward) override {
        n_[static_cast<std::size_t>(arm)] += 1;
        sum_[static_cast<std::size_t>(arm)] += reward;
        ++epoch_pulls_;
        if (prm_.share_info && etc_.is_surviving(arm)) etc_.ingest(arm, reward);
    }

    void observe_free(int arm, double reward) override {
        etc_.ingest(arm, reward);
        if (prm_.share_info && in_active_set(arm)) {
            n_[static_cast<std::size_t>(arm)] += 1;
            sum_[static_cast<std::size_t>(arm)] += reward;
        }
    }

    int epoch() const { return m_; }
    const std::vector<int>& active_set() const { return S_; }
    const EtcState& etc() const { return etc_; }

    double epoch_length(int m) const {
        return std::pow(prm_.epoch_base, std::pow(prm_.epoch_base, static_cast<double>(m)));
    }

    double etc_horizon(int m) const {
        double d_next = epoch_length(m + 1);
        return std::pow(d_next, 1.5) * std::log(d_next);
    }

private:
    bool in_active_set(int arm) const {
        return std::find(S_.begin(), S_.end(), arm) != S_.end();
    }

    void advance_epoch_if_needed(std::int64_t t) {
        while (static_cast<double>(t - epoch_start_) >= epoch_length(m_)) {
            epoch_start_ += static_cast<std::int64_t>(epoch_length(m_));
            ++m_;
            S_ = etc_.surviving_set();
            n_.assign(static_cast<std::size_t>(K_), 0);
            sum_.assign(static_cast<std::size_t>(K_), 0.0);
            epoch_pulls_ = 0;
            etc_.set_horizon(etc_horizon(m_));
        }
    }

    ActiveParams prm_;
    int K_ = 0;
    int m_ = 0;
    std::int64_t epoch_start_ = 0;
    std::vector<int> S_;
    std::vector<std::int64_t> n_;
    std::vector<double> sum_;
    std::int64_t epoch_pulls_ = 0;
    EtcState etc_;
};

}  // namespace freeobs

#endif
