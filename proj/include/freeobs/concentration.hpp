#ifndef FREEOBS_CONCENTRATION_HPP
#define FREEOBS_CONCENTRATION_HPP

#include <cmath>
#include <cstdint>
#include <vector>

#include "freeobs/errors.hpp"
#include "freeobs/rng.hpp"

namespace freeobs {

// Sub-Gaussian martingale difference family used by the Monte-Carlo
// validators: centered Gaussian increments, or centered Bernoulli(1/2)
// increments (bounded in [-1/2,1/2], 1/4-sub-Gaussian).
struct MartingaleSpec {
    enum class Family { Gaussian, Bernoulli };
    Family family = Family::Gaussian;
    double sigma2 = 1.0;  // Gaussian only; Bernoulli family has sigma2 = 1/4
    std::int64_t horizon = 100;

    double effective_sigma2() const { return family == Family::Gaussian ? sigma2 : 0.25; }
};

// Crossing level sqrt((2 sigma^2 / t) log(T / (delta t))) of the maximal
// inequality.
inline double maximal_threshold(std::int64_t t, std::int64_t T, double delta, double sigma2) {
    if (t < 1 || t > T) throw DomainError("maximal_threshold: need 1 <= t <= T");
    if (!(delta > 0.0 && delta <= 0.2)) throw DomainError("maximal_threshold: delta in (0,0.2]");
    if (!(sigma2 > 0.0)) throw DomainError("maximal_threshold: sigma2 must be positive");
    return std::sqrt((2.0 * sigma2 / static_cast<double>(t)) *
                     std::log(static_cast<double>(T) / (delta * static_cast<double>(t))));
}

// Analytic bound 6 delta sqrt(log(1/delta)) on the crossing probability.
inline double maximal_bound(double delta) { return 6.0 * delta * std::sqrt(std::log(1.0 / delta)); }

struct McEstimate {
    double estimate = 0.0;
    double stderr_ = 0.0;
    double bound = 0.0;

    // One-sided check with 3 sigma slack.
    bool within_bound() const { return estimate - 3.0 * stderr_ <= bound; }
};

// Monte-Carlo estimate of P{exists t <= T : mean(Z_1..Z_t) >= threshold(t)}.
inline McEstimate mc_crossing_probability(const MartingaleSpec& spec, double delta,
                                          std::int64_t trials, RngStream& rng) {
    if (trials < 10000) throw DomainError("mc_crossing_probability: trials must be >= 1e4");
    std::int64_t T = spec.horizon;
    double sigma2 = spec.effective_sigma2();
    std::vector<double> level(static_cast<std::size_t>(T) + 1, 0.0);
    for (std::int64_t t = 1; t <= T; ++t)
        level[static_cast<std::size_t>(t)] =
            static_cast<double>(t) * maximal_threshold(t, T, delta, sigma2);

    std::int64_t crossings = 0;
    double sd = std::sqrt(spec.sigma2);
    for (std::int64_t k = 0; k < trials; ++k) {
        double sum = 0.0;
        for (std::int64_t t = 1; t <= T; ++t) {
            if (spec.family == MartingaleSpec::Family::Gaussian)
                sum += sd * rng.gaussian();
            else
                sum += rng.bernoulli(0.5) ? 0.5 : -0.5;
            if (sum >= level[static_cast<std::size_t>(t)]) {
                ++crossings;
                break;
            }
        }
    }
    McEstimate e;
    e.estimate = static_cast<double>(crossings) / static_cast<double>(trials);
    e.stderr_ = std::sqrt(e.estimate * (1.0 - e.estimate) / static_cast<double>(trials));
    e.bound = maximal_bound(delta);
    return e;
}

// phi(x) = (1 + x + 2 sqrt(x)) / (4 sqrt(x)); phi(1) = 1 and phi >= 1.
inline double phi(double x) {
    if (!(x > 0.0)) throw DomainError("phi: x must be positive");
    double sx = std::sqrt(x);
    return (1.0 + x + 2.0 * sx) / (4.0 * sx);
}

// Crossing level of the interval inequality on [T1, T2].
inline double interval_threshold(std::int64_t t, std::int64_t T1, std::int64_t T2, double delta,
                                 double sigma2) {
    if (T1 < 1 || T2 < T1 || t < T1 || t > T2)
        throw DomainError("interval_threshold: need 1 <= T1 <= t <= T2");
    if (!(delta > 0.0 && delta < 1.0)) throw DomainError("interval_threshold: delta in (0,1)");
    if (!(sigma2 > 0.0)) throw DomainError("interval_threshold: sigma2 must be positive");
    return std::sqrt((2.0 * sigma2 / static_cast<double>(t)) * std::log(1.0 / delta) *
                     phi(static_cast<double>(T2) / static_cast<double>(T1)));
}

// Lower-tail bound for a sum of independent Bernoulli variables with average
// mean p_bar: P{S_n - n p <= -n alpha} <= exp(-n phi*_p(p + alpha)).
inline double binomial_lower_tail_bound(std::int64_t n, double p_bar, double alpha) {
    if (n < 1) throw DomainError("binomial_lower_tail_bound: n must be >= 1");
    if (!(p_bar > 0.0 && p_bar < 1.0)) throw DomainError("binomial_lower_tail_bound: p in (0,1)");
    if (alpha < 0.0) throw DomainError("binomial_lower_tail_bound: alpha must be >= 0");
    double x = p_bar + alpha;
    if (x >= 1.0) return 0.0;
    double kl = x * std::log(x / p_bar) + (1.0 - x) * std::log((1.0 - x) / (1.0 - p_bar));
    return std::exp(-static_cast<double>(n) * kl);
}

// Simplified form exp(-n alpha^2 / (2 p (1-p))), valid for p <= 1/2.
inline double binomial_lower_tail_bound_simple(std::int64_t n, double p_bar, double alpha) {
    if (!(p_bar > 0.0 && p_bar <= 0.5))
        throw DomainError("binomial_lower_tail_bound_simple: p in (0,1/2]");
    if (n < 1 || alpha < 0.0) throw DomainError("binomial_lower_tail_bound_simple: bad arguments");
    return std::exp(-static_cast<double>(n) * alpha * alpha / (2.0 * p_bar * (1.0 - p_bar)));
}

// Threshold of the Y = C log t - sum Z_s deviation bound.
inline double binary_t2_threshold(double p, std::int64_t t, double C) {
    double td = static_cast<double>(t);
    return C * std::log(td) - p * td + std::sqrt(5.0 * p * td * std::log(td));
}

struct BinaryT2Result {
    double estimate = 0.0;
    double stderr_ = 0.0;
    double bound = 0.0;  // 1/t^2
    bool pass = false;
};

// MC check of P{Y >= C log t - p t + sqrt(5 p t log t)} <= 1/t^2, i.e. the
// Bernoulli sum falls short of p t by sqrt(5 p t log t).
inline BinaryT2Result binary_t2_check(double p, std::int64_t t, double C, std::int64_t trials,
                                      RngStream& rng) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("binary_t2_check: p in [0,1]");
    if (t < 2 || trials < 1) throw DomainError("binary_t2_check: bad arguments");
    double td = static_cast<double>(t);
    double cutoff = p * td - std::sqrt(5.0 * p * td * std::log(td));
    std::int64_t hits = 0;
    for (std::int64_t k = 0; k < trials; ++k) {
        std::int64_t sum = 0;
        if (p > 0.0)
            for (std::int64_t s = 0; s < t; ++s)
                if (rng.bernoulli(p)) ++sum;
        if (static_cast<double>(sum) <= cutoff) ++hits;
    }
    BinaryT2Result r;
    r.estimate = static_cast<double>(hits) / static_cast<double>(trials);
    r.stderr_ = std::sqrt(r.estimate * (1.0 - r.estimate) / static_cast<double>(trials));
    r.bound = 1.0 / (td * td);
    r.pass = r.estimate <= r.bound + 3.0 * r.stderr_;
    return r;
}

}  // namespace freeobs

#endif
