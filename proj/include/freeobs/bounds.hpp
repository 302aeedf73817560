#ifndef FREEOBS_BOUNDS_HPP
#define FREEOBS_BOUNDS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "freeobs/errors.hpp"
#include "freeobs/lambert.hpp"

namespace freeobs {

// Constants of the sub-logarithmic algorithm class against which the lower
// bounds are stated. Defaults are the UCB constants.
struct SubLogConstants {
    double C = 8.0;
    double C0 = 1.0 + M_PI * M_PI / 3.0;
};

namespace detail {

inline void check_gaps(std::span<const double> gaps) {
    int zeros = 0;
    for (double g : gaps) {
        if (g < 0.0) throw DomainError("gaps must be non-negative");
        if (g == 0.0) ++zeros;
    }
    if (zeros == 0) throw DomainError("one gap must be zero (the best arm)");
    if (zeros > 1) throw DomainError("tied optimal arms are not supported by bound calculators");
}

inline double sum_positive_gaps(std::span<const double> gaps) {
    double s = 0.0;
    for (double g : gaps)
        if (g > 0.0) s += g;
    return s;
}

inline double sum_inv_positive_gaps(std::span<const double> gaps) {
    double s = 0.0;
    for (double g : gaps)
        if (g > 0.0) s += 1.0 / g;
    return s;
}

// sum over j != i of Delta / (Delta + Delta_j)
inline double sum_ratio(std::span<const double> gaps, int i, double Delta) {
    double s = 0.0;
    for (int j = 0; j < static_cast<int>(gaps.size()); ++j)
        if (j != i) s += Delta / (Delta + gaps[j]);
    return s;
}

// sum over j != i of 1 / (Delta + Delta_j)
inline double sum_inv(std::span<const double> gaps, int i, double Delta) {
    double s = 0.0;
    for (int j = 0; j < static_cast<int>(gaps.size()); ++j)
        if (j != i) s += 1.0 / (Delta + gaps[j]);
    return s;
}

inline void check_sorted(std::span<const double> gaps) {
    if (!std::is_sorted(gaps.begin(), gaps.end()))
        throw DomainError("active-bound calculators require gaps sorted in non-decreasing order");
}

}  // namespace detail

// Correction term of the per-arm pull constraint; goes to zero as O(1/log T).
inline double eta_i(double T, std::span<const double> gaps, int i, double Delta,
                    const SubLogConstants& c = {}) {
    if (!(T >= 3.0)) throw DomainError("eta_i: T must be >= 3");
    if (!(Delta > 0.0)) throw DomainError("eta_i: Delta must be positive");
    double C_K = c.C0 * detail::sum_positive_gaps(gaps);
    double C_Delta = detail::sum_inv_positive_gaps(gaps);
    double logT = std::log(T);
    double sr = detail::sum_ratio(gaps, i, Delta);
    double si = detail::sum_inv(gaps, i, Delta);
    double first = -(1.0 / T) * (C_K + c.C * C_Delta * logT) *
                   std::log(T * Delta * Delta / (C_K * Delta + c.C * logT * sr));
    double second = -std::log(1.0 + C_K / (c.C * logT * si));
    return first + second;
}

// Main logarithmic term of h_i.
inline double h_i_main(double T, std::span<const double> gaps, int i, double Delta,
                       const SubLogConstants& c = {}) {
    if (!(T >= 3.0)) throw DomainError("h_i: T must be >= 3");
    if (!(Delta > 0.0)) throw DomainError("h_i: Delta must be positive");
    double sr = detail::sum_ratio(gaps, i, Delta);
    return std::log(T * Delta * Delta / (2.0 * c.C * std::log(T) * sr));
}

inline double h_i(double T, std::span<const double> gaps, int i, double Delta,
                  const SubLogConstants& c = {}) {
    return h_i_main(T, gaps, i, Delta, c) + eta_i(T, gaps, i, Delta, c);
}

namespace detail {

// One arm's contribution to the fixed-horizon passive bound. The divergence
// constraint is informative only where the main log term is positive; outside
// that region the correction eta is meaningless and the term counts as zero.
inline double passive_term(double T, std::span<const double> gaps, int i, double d, double pe,
                           const SubLogConstants& c) {
    if (T < 3.0) return 0.0;
    double hm = h_i_main(T, gaps, i, d, c);
    if (hm <= 0.0) return 0.0;
    double term = (hm + eta_i(T, gaps, i, d, c)) / (2.0 * d) - pe * T * d;
    return std::max(0.0, term);
}

}  // namespace detail

// Lower bound for a passive observer, fixed-horizon form. Void (0) once T is
// large enough; each summand is clamped at zero.
inline double lb_passive_simple(double T, std::span<const double> gaps, double eps,
                                std::span<const double> p, const SubLogConstants& c = {}) {
    detail::check_gaps(gaps);
    if (gaps.size() != p.size()) throw DomainError("lb_passive_simple: p size mismatch");
    double total = 0.0;
    for (int i = 0; i < static_cast<int>(gaps.size()); ++i) {
        double d = gaps[i];
        if (d == 0.0) continue;
        total += detail::passive_term(T, gaps, i, d, eps * p[i], c);
    }
    return total;
}

// Lower bound for a passive observer using monotonicity of the pull counts:
// the regret at T dominates the fixed-horizon bound at every earlier horizon,
// so each arm contributes the running supremum of its fixed-horizon term over
// T' <= T (a geometric grid plus the endpoint; the term peaks near the switch
// point t_switch = 1/(2 eps p_i Delta_i^2)), together with the plateau value
// the supremum approaches past the switch. Non-decreasing in T by
// construction and pointwise above the fixed-horizon bound.
inline double lb_passive_theorem(double T, std::span<const double> gaps, double eps,
                                 std::span<const double> p, const SubLogConstants& c = {}) {
    detail::check_gaps(gaps);
    if (gaps.size() != p.size()) throw DomainError("lb_passive_theorem: p size mismatch");
    double total = 0.0;
    for (int i = 0; i < static_cast<int>(gaps.size()); ++i) {
        double d = gaps[i];
        if (d == 0.0) continue;
        double pe = eps * p[i];
        double t_switch = (pe > 0.0) ? 1.0 / (2.0 * pe * d * d)
                                     : std::numeric_limits<double>::infinity();
        // Locate the supremum: coarse absolute grid, then a ternary-search
        // refinement around the best bracket, so that once the peak lies
        // inside [3, T] every later horizon reports the same value.
        double best = detail::passive_term(T, gaps, i, d, pe, c);
        double best_t = T;
        for (double t = 3.0; t < T; t *= 1.05) {
            double v = detail::passive_term(t, gaps, i, d, pe, c);
            if (v > best) {
                best = v;
                best_t = t;
            }
        }
        if (best > 0.0) {
            double lo = std::max(3.0, best_t / 1.05);
            double hi = std::min(T, best_t * 1.05);
            for (int it = 0; it < 200 && hi - lo > 1e-9 * hi; ++it) {
                double m1 = lo + (hi - lo) / 3.0;
                double m2 = hi - (hi - lo) / 3.0;
                if (detail::passive_term(m1, gaps, i, d, pe, c) <
                    detail::passive_term(m2, gaps, i, d, pe, c))
                    lo = m1;
                else
                    hi = m2;
            }
            best = std::max(best, detail::passive_term(0.5 * (lo + hi), gaps, i, d, pe, c));
        }
        if (T > t_switch && t_switch >= 3.0 && std::log(t_switch) > 1.0) {
            double sr = detail::sum_ratio(gaps, i, d);
            double plateau = std::log((1.0 / eps) / (4.0 * c.C * p[i] * sr)) -
                             std::log(std::log(t_switch)) + eta_i(t_switch, gaps, i, d, c) - 1.0;
            best = std::max(best, plateau / (2.0 * d));
        }
        total += best;
    }
    return total;
}

// p* proportional to 1/Delta_i on sub-optimal arms, zero weight on the best.
inline std::vector<double> optimal_passive_distribution(std::span<const double> gaps) {
    detail::check_gaps(gaps);
    std::vector<double> p(gaps.size(), 0.0);
    double norm = 0.0;
    for (double g : gaps)
        if (g > 0.0) norm += 1.0 / g;
    for (std::size_t i = 0; i < gaps.size(); ++i)
        if (gaps[i] > 0.0) p[i] = (1.0 / gaps[i]) / norm;
    return p;
}

// Lower bound for an active observer, fixed-horizon form. Gaps must be sorted
// non-decreasing (best arm first).
inline double lb_active_simple(double T, std::span<const double> gaps, double eps,
                               const SubLogConstants& c = {}) {
    detail::check_gaps(gaps);
    detail::check_sorted(gaps);
    int K = static_cast<int>(gaps.size());
    // k = first index (1-based, >= 2) whose tail of free-observation demand
    // fits in the eps*T budget.
    int k = K;  // 1-based
    for (int kk = 2; kk <= K; ++kk) {
        double tail = 0.0;
        for (int j = kk; j < K; ++j) tail += h_i(T, gaps, j, gaps[j], c) / (2.0 * gaps[j] * gaps[j]);
        if (tail <= eps * T) {
            k = kk;
            break;
        }
    }
    double head = 0.0;
    for (int i = 1; i < k; ++i) head += h_i(T, gaps, i, gaps[i], c) / (2.0 * gaps[i]);
    double tail = 0.0;
    for (int j = k; j < K; ++j) tail += h_i(T, gaps, j, gaps[j], c) / (2.0 * gaps[j] * gaps[j]);
    double bound = head - gaps[k - 1] * (eps * T - tail);
    return std::max(0.0, bound);
}

// t_k = max{t >= 1 : sum_{j>k} h_j(t)/(2 Delta_j^2) > eps t}, k 1-based.
// Computed by doubling search for the region where the predicate fails
// followed by integer bisection on the last crossing. Returns 0 when the
// predicate holds nowhere.
inline std::int64_t active_t_k(int k, std::span<const double> gaps, double eps,
                               const SubLogConstants& c = {}) {
    detail::check_gaps(gaps);
    detail::check_sorted(gaps);
    int K = static_cast<int>(gaps.size());
    auto excess = [&](std::int64_t t) {
        double s = 0.0;
        for (int j = k; j < K; ++j)
            s += h_i(static_cast<double>(t), gaps, j, gaps[j], c) / (2.0 * gaps[j] * gaps[j]);
        return s - eps * static_cast<double>(t);
    };
    if (k >= K) return 0;  // empty tail sum, predicate never holds
    // Estimated scale of t_k from the appendix inequality.
    double est = 0.0;
    for (int j = k; j < K; ++j) est += 1.0 / (2.0 * gaps[j] * gaps[j]);
    est /= eps;
    std::int64_t lo = std::max<std::int64_t>(3, static_cast<std::int64_t>(est));
    if (excess(lo) <= 0.0) {
        // Scan [3, lo] for any t where the predicate holds.
        std::int64_t found = 0;
        for (std::int64_t t = lo; t >= 3; t = (t > 16 ? t / 2 : t - 1)) {
            if (excess(t) > 0.0) {
                found = t;
                break;
            }
        }
        if (found == 0) return 0;
        lo = found;
    }
    std::int64_t hi = lo * 2;
    while (excess(hi) > 0.0) hi *= 2;
    while (hi - lo > 1) {
        std::int64_t mid = lo + (hi - lo) / 2;
        if (excess(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

// Lower bound for an active observer using monotonicity: maximum over the
// admissible elimination levels k of the per-arm bracket terms.
inline double lb_active_theorem(double T, std::span<const double> gaps, double eps,
                                const SubLogConstants& c = {}) {
    detail::check_gaps(gaps);
    detail::check_sorted(gaps);
    int K = static_cast<int>(gaps.size());
    double best = 0.0;
    for (int k = 2; k <= K - 1; ++k) {
        std::int64_t tk = active_t_k(k, gaps, eps, c);
        if (static_cast<double>(tk) > T) continue;
        double arg = 0.0;
        for (int j = k; j < K; ++j) arg += 1.0 / (2.0 * gaps[j] * gaps[j]);
        arg /= eps;
        double value = 0.0;
        for (int i = 1; i < k; ++i) {
            double d = gaps[i];
            double num = 0.0;
            for (int j = k; j < K; ++j) num += d * d / (gaps[j] * gaps[j]);
            double sr = detail::sum_ratio(gaps, i, d);
            double bracket = std::log((1.0 / eps) * num / (4.0 * c.C * sr));
            if (arg > 1.0 && std::log(arg) > 0.0) bracket -= std::log(std::log(arg));
            if (arg >= 3.0) bracket += eta_i(arg, gaps, i, d, c);
            value += std::max(0.0, bracket) / d;
        }
        best = std::max(best, value);
    }
    return best;
}

// Regret upper bound for UCB with passive observations: a log(T) envelope and
// a T-independent finite bound. The applicable bound at stage T is the
// smaller of the two.
struct UcbPassiveBound {
    double logT_coeff = 0.0;  // multiply by log(T)
    double finite = 0.0;

    double at(double T) const { return std::min(logT_coeff * std::log(T), finite); }
};

inline UcbPassiveBound ub_ucb_passive(std::span<const double> gaps, double eps,
                                      std::span<const double> p) {
    detail::check_gaps(gaps);
    if (gaps.size() != p.size()) throw DomainError("ub_ucb_passive: p size mismatch");
    UcbPassiveBound b;
    for (int i = 0; i < static_cast<int>(gaps.size()); ++i) {
        double d = gaps[i];
        if (d == 0.0) continue;
        b.logT_coeff += 24.0 / d;
        double pe = eps * p[i];
        if (!(pe > 0.0)) throw DomainError("ub_ucb_passive: eps*p must be positive on sub-optimal arms");
        double first = (24.0 / d) * std::log(50.0 / pe);
        double second = (24.0 / d) *
                        std::max(std::log(1.0 / (M_E * d * d)), std::log(std::log(20.0 / pe)));
        b.finite += first + second;
    }
    return b;
}

// Problem-complexity constant for ETC elimination of arm i (0-based index
// into gaps sorted non-decreasing; must be a sub-optimal arm).
inline double H_i_rho(std::span<const double> gaps, int i, double rho) {
    detail::check_gaps(gaps);
    detail::check_sorted(gaps);
    int K = static_cast<int>(gaps.size());
    if (i < 1 || i >= K) throw DomainError("H_i_rho: i must index a sub-optimal arm");
    if (!(rho >= 0.0 && rho <= 1.0)) throw DomainError("H_i_rho: rho must lie in [0,1]");
    double d = gaps[i];
    if (!(d > 0.0)) throw DomainError("H_i_rho: zero gap");
    double h = static_cast<double>(i + 1) / (d * d);  // i+1 arms have gap <= d
    for (int j = i + 1; j < K; ++j)
        h += 1.0 / (std::pow(d, 2.0 * (1.0 - rho)) * std::pow(gaps[j], 2.0 * rho));
    return h;
}

// Regret upper bound of the active (ETC + OCUCB) algorithm. The doubly
// logarithmic remainder is reported separately with unit constant; the bound
// is stated for rewards in [0,1] and C_eta is a configurable parameter.
struct ActiveBound {
    double main = 0.0;
    double loglog_term = 0.0;

    double total() const { return main + loglog_term; }
};

inline ActiveBound ub_active(std::span<const double> gaps, double eps, double rho,
                             double C_eta = 1.0) {
    detail::check_gaps(gaps);
    detail::check_sorted(gaps);
    int K = static_cast<int>(gaps.size());
    ActiveBound b;
    for (int i = 1; i < K; ++i) {
        double d = gaps[i];
        double H_rho = H_i_rho(gaps, i, rho);
        b.main += C_eta * (4.0 / d) * std::max(std::log(1.0 / eps), 0.5 * std::log(H_rho));
        double H1 = H_i_rho(gaps, i, 1.0);
        double arg = H1 / eps;
        if (arg > M_E) {
            double ll = std::log(std::log(arg));
            b.loglog_term += (1.0 / d) * ll * ll;
        }
    }
    b.main += 51.0 * static_cast<double>(K);
    return b;
}

// Threshold frequency below which free observations stop helping at stage T.
inline double epsilon_star(int K, double Delta, double T) {
    if (!(Delta > 0.0) || !(T > 0.0) || K < 2) throw DomainError("epsilon_star: bad arguments");
    return (1.0 / T) * static_cast<double>(K) / (Delta * Delta);
}

// A sampled bound curve, for CSV emission.
struct BoundCurve {
    std::vector<double> stages;
    std::vector<double> values;
    std::string kind;
};

}  // namespace freeobs

#endif
