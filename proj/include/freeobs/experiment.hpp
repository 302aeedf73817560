#ifndef FREEOBS_EXPERIMENT_HPP
#define FREEOBS_EXPERIMENT_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <memory>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "freeobs/bandit.hpp"
#include "freeobs/bounds.hpp"
#include "freeobs/environment.hpp"
#include "freeobs/errors.hpp"
#include "freeobs/policies.hpp"

namespace freeobs {

inline std::unique_ptr<Policy> make_policy(const std::string& name, const ActiveParams& params) {
    if (name == "ftl_robin") return std::make_unique<FtlRobinPolicy>();
    if (name == "ucb_passive") return std::make_unique<UcbPassivePolicy>();
    if (name == "ucb_baseline") return std::make_unique<UcbBaselinePolicy>();
    if (name == "ucb1_double") return std::make_unique<Ucb1DoublePolicy>();
    if (name == "etc_ocucb") return std::make_unique<EtcOcucbPolicy>(params);
    throw ConfigError("policy.name: unknown policy '" + name + "'");
}

// 100 log-spaced stages plus the horizon itself.
inline std::vector<std::int64_t> default_checkpoints(std::int64_t horizon) {
    std::vector<std::int64_t> cp;
    for (int k = 0; k < 100; ++k) {
        double x = std::pow(static_cast<double>(horizon), static_cast<double>(k) / 100.0);
        std::int64_t s = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::llround(x)));
        if (cp.empty() || s > cp.back()) cp.push_back(s);
    }
    if (cp.empty() || cp.back() != horizon) cp.push_back(horizon);
    return cp;
}

struct ExperimentConfig {
    std::string name;
    ProblemInstance instance;
    FreeObsSchedule schedule;
    ObserverMode observer = ObserverMode::active();
    std::string policy_name = "ucb_passive";
    ActiveParams policy_params;
    std::int64_t horizon = 0;
    int replications = 1;
    std::uint64_t seed = 0;
    std::vector<std::int64_t> checkpoints;  // empty -> default_checkpoints

    void validate() const {
        if (horizon < 1) throw ConfigError("horizon: must be >= 1");
        if (replications < 1) throw ConfigError("replications: must be >= 1");
        if (observer.kind == ObserverMode::Kind::Passive &&
            static_cast<int>(observer.p.size()) != instance.num_arms())
            throw ConfigError("observer.p: length must equal the number of arms");
        if (!std::is_sorted(checkpoints.begin(), checkpoints.end()))
            throw ConfigError("checkpoints: must be sorted");
        for (std::int64_t c : checkpoints)
            if (c < 1 || c > horizon) throw ConfigError("checkpoints: values must lie in [1, horizon]");
    }

    std::vector<std::int64_t> effective_checkpoints() const {
        return checkpoints.empty() ? default_checkpoints(horizon) : checkpoints;
    }
};

struct RegretTrace {
    std::vector<std::int64_t> stages;
    std::vector<double> regret;
    std::vector<std::int64_t> final_pulls;
    std::vector<std::int64_t> final_frees;
};

struct AggregateStats {
    std::vector<std::int64_t> stages;
    std::vector<double> mean, q10, q25, q75, q90;
};

inline RegretTrace run_single(const ExperimentConfig& cfg, int replication_index) {
    cfg.validate();
    const ProblemInstance& inst = cfg.instance;
    const int K = inst.num_arms();
    RngStream rng(cfg.seed, static_cast<std::uint64_t>(replication_index));
    auto policy = make_policy(cfg.policy_name, cfg.policy_params);
    policy->reset(K);
    ObservationCounters counters(K);
    auto checkpoints = cfg.effective_checkpoints();

    RegretTrace trace;
    double regret = 0.0;
    std::size_t cp = 0;
    for (std::int64_t t = 1; t <= cfg.horizon; ++t) {
        PolicyDecision d = policy->step(counters, rng);
        if (d.pull < 0 || d.pull >= K) throw std::logic_error("policy returned bad pull index");
        double reward = sample_reward(inst, d.pull, rng);
        counters.record_pull(d.pull, reward);
        regret += pseudo_regret_increment(inst, d.pull);
        policy->observe_pull(d.pull, reward);

        if (free_obs_available(cfg.schedule, t, rng)) {
            int f;
            if (cfg.observer.kind == ObserverMode::Kind::Passive)
                f = passive_draw(cfg.observer.p, rng);
            else {
                if (!d.free_request) throw std::logic_error("active run needs a free_request");
                f = *d.free_request;
            }
            double fr = sample_reward(inst, f, rng);
            counters.record_free(f, fr);
            policy->observe_free(f, fr);
        }

        while (cp < checkpoints.size() && checkpoints[cp] == t) {
            trace.stages.push_back(t);
            trace.regret.push_back(regret);
            ++cp;
        }
    }
    trace.final_pulls = counters.pulls;
    trace.final_frees = counters.frees;
    return trace;
}

// Nearest-rank quantile on a sorted sample, q in (0,1].
inline double nearest_rank(const std::vector<double>& sorted, double q) {
    std::size_t n = sorted.size();
    std::size_t rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n)));
    if (rank < 1) rank = 1;
    if (rank > n) rank = n;
    return sorted[rank - 1];
}

inline AggregateStats aggregate(const std::vector<RegretTrace>& traces) {
    AggregateStats st;
    st.stages = traces.front().stages;
    std::size_t ncp = st.stages.size();
    std::size_t n = traces.size();
    for (std::size_t c = 0; c < ncp; ++c) {
        std::vector<double> vals(n);
        for (std::size_t r = 0; r < n; ++r) vals[r] = traces[r].regret[c];
        double mean = 0.0;
        for (double v : vals) mean += v;
        mean /= static_cast<double>(n);
        std::sort(vals.begin(), vals.end());
        st.mean.push_back(mean);
        st.q10.push_back(nearest_rank(vals, 0.10));
        st.q25.push_back(nearest_rank(vals, 0.25));
        st.q75.push_back(nearest_rank(vals, 0.75));
        st.q90.push_back(nearest_rank(vals, 0.90));
    }
    return st;
}

inline std::vector<RegretTrace> run_all(const ExperimentConfig& cfg, int jobs = 1) {
    cfg.validate();
    int n = cfg.replications;
    std::vector<RegretTrace> traces(static_cast<std::size_t>(n));
    if (jobs <= 1) {
        for (int r = 0; r < n; ++r) traces[static_cast<std::size_t>(r)] = run_single(cfg, r);
        return traces;
    }
    // Replication-level fan-out; each worker owns whole runs, results land in
    // index order so the aggregate is independent of thread scheduling.
    std::vector<std::thread> workers;
    std::atomic<int> next{0};
    for (int w = 0; w < jobs; ++w) {
        workers.emplace_back([&] {
            for (;;) {
                int r = next.fetch_add(1);
                if (r >= n) return;
                traces[static_cast<std::size_t>(r)] = run_single(cfg, r);
            }
        });
    }
    for (auto& w : workers) w.join();
    return traces;
}

inline AggregateStats run_replicated(const ExperimentConfig& cfg, int jobs = 1) {
    return aggregate(run_all(cfg, jobs));
}

namespace detail {
inline std::string fmt10(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}
}  // namespace detail

inline void emit_csv(const AggregateStats& st, std::ostream& out) {
    out << "t,mean,q10,q25,q75,q90\n";
    for (std::size_t i = 0; i < st.stages.size(); ++i) {
        out << st.stages[i] << ',' << detail::fmt10(st.mean[i]) << ',' << detail::fmt10(st.q10[i])
            << ',' << detail::fmt10(st.q25[i]) << ',' << detail::fmt10(st.q75[i]) << ','
            << detail::fmt10(st.q90[i]) << '\n';
    }
}

inline void emit_csv(const AggregateStats& st, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    emit_csv(st, out);
}

inline void emit_csv(const RegretTrace& trace, std::ostream& out) {
    out << "t,regret\n";
    for (std::size_t i = 0; i < trace.stages.size(); ++i)
        out << trace.stages[i] << ',' << detail::fmt10(trace.regret[i]) << '\n';
}

// Bound curves for an instance at the stages in `stages`. The active-observer
// calculators need gaps in non-decreasing order, so they are evaluated on a
// sorted copy.
inline void emit_bound_curves(const ProblemInstance& inst, double eps,
                              std::span<const double> p, const std::vector<double>& stages,
                              std::ostream& out, const SubLogConstants& consts = {},
                              double rho = 0.5, double C_eta = 1.0) {
    std::vector<double> sorted_gaps = inst.gaps;
    std::sort(sorted_gaps.begin(), sorted_gaps.end());
    UcbPassiveBound ub3 = ub_ucb_passive(inst.gaps, eps, p);
    ActiveBound ub4 = ub_active(sorted_gaps, eps, rho, C_eta);
    out << "T,lb_passive_simple,lb_passive,lb_active_simple,lb_active,ub_passive_logT,"
           "ub_passive_finite,ub_active\n";
    for (double T : stages) {
        out << detail::fmt10(T) << ',' << detail::fmt10(lb_passive_simple(T, inst.gaps, eps, p, consts))
            << ',' << detail::fmt10(lb_passive_theorem(T, inst.gaps, eps, p, consts)) << ','
            << detail::fmt10(lb_active_simple(T, sorted_gaps, eps, consts)) << ','
            << detail::fmt10(lb_active_theorem(T, sorted_gaps, eps, consts)) << ','
            << detail::fmt10(ub3.logT_coeff * std::log(T)) << ',' << detail::fmt10(ub3.finite)
            << ',' << detail::fmt10(ub4.total()) << '\n';
    }
}

struct EpsilonSweepRow {
    double epsilon;
    double mean_final_regret;
};

inline std::vector<EpsilonSweepRow> sweep_epsilon(const ExperimentConfig& base,
                                                  std::span<const double> eps_list, int jobs = 1) {
    std::vector<EpsilonSweepRow> rows;
    for (double eps : eps_list) {
        ExperimentConfig cfg = base;
        if (cfg.schedule.kind == FreeObsSchedule::Kind::None)
            throw ConfigError("schedule.kind: epsilon sweep needs a schedule with epsilon");
        cfg.schedule.epsilon = eps;
        AggregateStats st = run_replicated(cfg, jobs);
        rows.push_back({eps, st.mean.back()});
    }
    return rows;
}

inline void emit_csv(const std::vector<EpsilonSweepRow>& rows, std::ostream& out) {
    out << "epsilon,mean_final_regret\n";
    for (const auto& r : rows)
        out << detail::fmt10(r.epsilon) << ',' << detail::fmt10(r.mean_final_regret) << '\n';
}

}  // namespace freeobs

#endif
