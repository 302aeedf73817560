#ifndef FREEOBS_CLI_HPP
#define FREEOBS_CLI_HPP

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "freeobs/concentration.hpp"
#include "freeobs/config_json.hpp"
#include "freeobs/experiment.hpp"
#include "freeobs/oracle.hpp"

namespace freeobs {

namespace cli_detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config: cannot open file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string out_path_for(const std::string& out, const std::string& name) {
    if (name.empty()) return out;
    std::string stem = out;
    std::string ext = ".csv";
    if (stem.size() >= 4 && stem.substr(stem.size() - 4) == ".csv") stem = stem.substr(0, stem.size() - 4);
    return stem + "_" + name + ext;
}

inline std::ostream& open_or_stdout(std::ofstream& file, const std::string& path) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open output file: " + path);
    return file;
}

inline int run_command(const std::string& config_path, const std::string& out,
                       std::int64_t seed_override, bool has_seed, int jobs) {
    auto configs = parse_config_json(read_file(config_path));
    for (auto& cfg : configs) {
        if (has_seed) cfg.seed = static_cast<std::uint64_t>(seed_override);
        AggregateStats st = run_replicated(cfg, jobs);
        std::string path = out_path_for(out, configs.size() > 1 ? cfg.name : std::string{});
        emit_csv(st, path);
        std::cerr << "wrote " << path << "\n";
    }
    return 0;
}

inline int sweep_command(const std::string& config_path, const std::string& out,
                         const std::vector<double>& eps_list, std::int64_t seed_override,
                         bool has_seed, int jobs) {
    auto configs = parse_config_json(read_file(config_path));
    ExperimentConfig cfg = configs.front();
    if (has_seed) cfg.seed = static_cast<std::uint64_t>(seed_override);
    auto rows = sweep_epsilon(cfg, eps_list, jobs);
    std::ofstream file;
    emit_csv(rows, open_or_stdout(file, out));
    return 0;
}

inline int bounds_command(const std::string& config_path, const std::string& out, double tmin,
                          double tmax, int points, double rho, double c_eta) {
    auto configs = parse_config_json(read_file(config_path));
    const ExperimentConfig& cfg = configs.front();
    if (cfg.schedule.kind == FreeObsSchedule::Kind::None)
        throw ConfigError("config.schedule: bounds need a schedule with epsilon");
    std::vector<double> p;
    if (cfg.observer.kind == ObserverMode::Kind::Passive)
        p = cfg.observer.p;
    else
        p = optimal_passive_distribution(cfg.instance.gaps);
    std::vector<double> stages;
    for (int k = 0; k < points; ++k) {
        double f = points > 1 ? static_cast<double>(k) / (points - 1) : 0.0;
        stages.push_back(std::exp(std::log(tmin) + f * (std::log(tmax) - std::log(tmin))));
    }
    std::ofstream file;
    emit_bound_curves(cfg.instance, cfg.schedule.epsilon, p, stages, open_or_stdout(file, out), {},
                      rho, c_eta);
    return 0;
}

inline int conc_check_command(const std::string& lemma, const std::vector<double>& deltas,
                              const std::vector<std::int64_t>& horizons, std::int64_t trials,
                              std::uint64_t seed, const std::string& out) {
    std::ofstream file;
    std::ostream& os = open_or_stdout(file, out);
    os << "check,family,delta,T,estimate,stderr,bound,pass\n";
    bool all_pass = true;
    std::uint64_t stream = 0;
    auto emit = [&](const std::string& check, const std::string& family, double delta,
                    std::int64_t T, double est, double se, double bound, bool pass) {
        os << check << ',' << family << ',' << detail::fmt10(delta) << ',' << T << ','
           << detail::fmt10(est) << ',' << detail::fmt10(se) << ',' << detail::fmt10(bound) << ','
           << (pass ? "pass" : "FAIL") << '\n';
        all_pass = all_pass && pass;
    };
    if (lemma == "maximal" || lemma == "all") {
        for (auto family : {MartingaleSpec::Family::Gaussian, MartingaleSpec::Family::Bernoulli}) {
            for (std::int64_t T : horizons) {
                for (double delta : deltas) {
                    MartingaleSpec spec;
                    spec.family = family;
                    spec.horizon = T;
                    RngStream rng(seed, stream++);
                    McEstimate e = mc_crossing_probability(spec, delta, trials, rng);
                    emit("maximal", family == MartingaleSpec::Family::Gaussian ? "gaussian" : "bernoulli",
                         delta, T, e.estimate, e.stderr_, e.bound, e.within_bound());
                }
            }
        }
    }
    if (lemma == "binary" || lemma == "all") {
        for (std::int64_t T : horizons) {
            for (double p : {0.1, 0.5}) {
                RngStream rng(seed, stream++);
                BinaryT2Result r = binary_t2_check(p, T, 1.0, trials, rng);
                emit("binary_t2", "bernoulli", p, T, r.estimate, r.stderr_, r.bound, r.pass);
            }
        }
    }
    return all_pass ? 0 : 2;
}

inline int oracle_check_command(std::int64_t mc_runs, std::uint64_t seed) {
    bool all_pass = true;
    auto check = [&](const std::string& name, const ExperimentConfig& cfg, double exact) {
        double sum = 0.0, sumsq = 0.0;
        for (int r = 0; r < mc_runs; ++r) {
            ExperimentConfig c = cfg;
            c.seed = seed;
            double v = run_single(c, r).regret.back();
            sum += v;
            sumsq += v * v;
        }
        double n = static_cast<double>(mc_runs);
        double mean = sum / n;
        double var = std::max(0.0, sumsq / n - mean * mean);
        double se = std::sqrt(var / n);
        bool pass = std::abs(mean - exact) <= 3.0 * se + 1e-12;
        std::cout << name << ": exact=" << detail::fmt10(exact) << " mc=" << detail::fmt10(mean)
                  << " stderr=" << detail::fmt10(se) << (pass ? " pass" : " FAIL") << "\n";
        all_pass = all_pass && pass;
    };

    ProblemInstance inst = make_instance({Bernoulli{0.9}, Bernoulli{0.1}});
    {
        ExperimentConfig cfg;
        cfg.instance = inst;
        cfg.schedule = FreeObsSchedule::deterministic(0.5);
        cfg.observer = ObserverMode::active();
        cfg.policy_name = "ftl_robin";
        cfg.horizon = 4;
        cfg.checkpoints = {4};
        double exact = brute_force_expected_regret(inst, cfg.schedule, OracleFtlRobin{}, 4);
        check("ftl_robin T=4 eps=0.5", cfg, exact);
    }
    {
        ExperimentConfig cfg;
        cfg.instance = inst;
        cfg.schedule = FreeObsSchedule::deterministic(0.5);
        cfg.observer = ObserverMode::passive({0.5, 0.5});
        cfg.policy_name = "ucb_passive";
        cfg.horizon = 5;
        cfg.checkpoints = {5};
        double exact = brute_force_expected_regret(inst, cfg.schedule, OracleUcbPassive{}, 5,
                                                   std::vector<double>{0.5, 0.5});
        check("ucb_passive T=5 eps=0.5", cfg, exact);
    }
    return all_pass ? 0 : 2;
}

}  // namespace cli_detail

inline int cli_main(int argc, const char* const* argv) {
    CLI::App app{"Bandit simulations with occasional free observations"};
    app.require_subcommand(1);

    std::string config_path, out = "-";
    std::int64_t seed = 0;
    int jobs = 1;

    auto* run = app.add_subcommand("run", "Run a replicated experiment and emit regret CSV");
    run->add_option("--config", config_path, "JSON experiment config")->required();
    run->add_option("--out", out, "Output CSV path");
    auto* run_seed = run->add_option("--seed", seed, "Master seed override");
    run->add_option("--jobs", jobs, "Worker threads");

    std::vector<double> eps_list;
    auto* sweep = app.add_subcommand("sweep-epsilon", "Final mean regret for a list of epsilon");
    sweep->add_option("--config", config_path, "JSON experiment config")->required();
    sweep->add_option("--epsilons", eps_list, "Epsilon values")->required();
    sweep->add_option("--out", out, "Output CSV path");
    auto* sweep_seed = sweep->add_option("--seed", seed, "Master seed override");
    sweep->add_option("--jobs", jobs, "Worker threads");

    double tmin = 100.0, tmax = 1e6, rho = 0.5, c_eta = 1.0;
    int points = 50;
    auto* bounds = app.add_subcommand("bounds", "Emit analytic bound curves as CSV");
    bounds->add_option("--config", config_path, "JSON config providing instance/epsilon/p")->required();
    bounds->add_option("--out", out, "Output CSV path");
    bounds->add_option("--tmin", tmin, "Smallest stage");
    bounds->add_option("--tmax", tmax, "Largest stage");
    bounds->add_option("--points", points, "Number of log-spaced stages");
    bounds->add_option("--rho", rho, "OCUCB rho for the active upper bound");
    bounds->add_option("--c-eta", c_eta, "C_eta constant for the active upper bound");

    std::string lemma = "all";
    std::vector<double> deltas = {0.2, 0.1, 0.05, 0.01};
    std::vector<std::int64_t> horizons = {100, 1000};
    std::int64_t trials = 100000;
    auto* conc = app.add_subcommand("conc-check", "Monte-Carlo validation of concentration bounds");
    conc->add_option("--lemma", lemma, "maximal | binary | all");
    conc->add_option("--delta", deltas, "Confidence levels");
    conc->add_option("--horizon", horizons, "Path lengths T");
    conc->add_option("--trials", trials, "Sample paths per check");
    conc->add_option("--seed", seed, "Master seed");
    conc->add_option("--out", out, "Output CSV path");

    std::int64_t mc_runs = 200000;
    auto* oracle = app.add_subcommand("oracle-check", "Brute-force oracle vs Monte-Carlo agreement");
    oracle->add_option("--runs", mc_runs, "Monte-Carlo replications");
    oracle->add_option("--seed", seed, "Master seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (run->parsed())
            return cli_detail::run_command(config_path, out, seed, !run_seed->empty(), jobs);
        if (sweep->parsed())
            return cli_detail::sweep_command(config_path, out, eps_list, seed, !sweep_seed->empty(),
                                            jobs);
        if (bounds->parsed())
            return cli_detail::bounds_command(config_path, out, tmin, tmax, points, rho, c_eta);
        if (conc->parsed())
            return cli_detail::conc_check_command(lemma, deltas, horizons, trials,
                                                  static_cast<std::uint64_t>(seed), out);
        if (oracle->parsed())
            return cli_detail::oracle_check_command(mc_runs, static_cast<std::uint64_t>(seed));
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

}  // namespace freeobs

#endif
