#ifndef FREEOBS_CONFIG_JSON_HPP
#define FREEOBS_CONFIG_JSON_HPP

#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "freeobs/bounds.hpp"
#include "freeobs/errors.hpp"
#include "freeobs/experiment.hpp"

namespace freeobs {

namespace detail {

using json = nlohmann::json;

inline void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                           const std::string& path) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError(path + "." + it.key() + ": unknown field");
}

inline const json& require(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.contains(key)) throw ConfigError(path + "." + key + ": missing required field");
    return obj.at(key);
}

inline ArmSpec parse_arm(const json& j, const std::string& path) {
    std::string kind = require(j, "kind", path).get<std::string>();
    if (kind == "gaussian") {
        reject_unknown(j, {"kind", "mean", "variance"}, path);
        Gaussian g;
        g.mean = require(j, "mean", path).get<double>();
        g.variance = j.value("variance", 1.0);
        return g;
    }
    if (kind == "bernoulli") {
        reject_unknown(j, {"kind", "mean"}, path);
        return Bernoulli{require(j, "mean", path).get<double>()};
    }
    if (kind == "point_mass") {
        reject_unknown(j, {"kind", "value"}, path);
        return PointMass{require(j, "value", path).get<double>()};
    }
    throw ConfigError(path + ".kind: unknown arm kind '" + kind + "'");
}

inline FreeObsSchedule parse_schedule(const json& j, const std::string& path) {
    std::string kind = require(j, "kind", path).get<std::string>();
    if (kind == "none") {
        reject_unknown(j, {"kind"}, path);
        return FreeObsSchedule::none();
    }
    double eps = require(j, "epsilon", path).get<double>();
    reject_unknown(j, {"kind", "epsilon"}, path);
    try {
        if (kind == "deterministic") return FreeObsSchedule::deterministic(eps);
        if (kind == "static_random") return FreeObsSchedule::static_random(eps);
    } catch (const DomainError& e) {
        throw ConfigError(path + ".epsilon: " + e.what());
    }
    throw ConfigError(path + ".kind: unknown schedule kind '" + kind + "'");
}

inline ObserverMode parse_observer(const json& j, const ProblemInstance& inst,
                                   const std::string& path) {
    std::string kind = require(j, "kind", path).get<std::string>();
    if (kind == "active") {
        reject_unknown(j, {"kind"}, path);
        return ObserverMode::active();
    }
    if (kind != "passive") throw ConfigError(path + ".kind: unknown observer kind '" + kind + "'");
    reject_unknown(j, {"kind", "p"}, path);
    const json& p = require(j, "p", path);
    std::vector<double> probs;
    if (p.is_string()) {
        std::string named = p.get<std::string>();
        int K = inst.num_arms();
        if (named == "uniform") {
            probs.assign(static_cast<std::size_t>(K), 1.0 / static_cast<double>(K));
        } else if (named == "optimal") {
            probs = optimal_passive_distribution(inst.gaps);
        } else if (named == "suboptimal") {
            // p proportional to 1/Delta_i^2 on sub-optimal arms.
            probs.assign(static_cast<std::size_t>(K), 0.0);
            double norm = 0.0;
            for (double g : inst.gaps)
                if (g > 0.0) norm += 1.0 / (g * g);
            for (int i = 0; i < K; ++i)
                if (inst.gaps[static_cast<std::size_t>(i)] > 0.0)
                    probs[static_cast<std::size_t>(i)] =
                        1.0 / (inst.gaps[static_cast<std::size_t>(i)] *
                               inst.gaps[static_cast<std::size_t>(i)] * norm);
        } else {
            throw ConfigError(path + ".p: unknown named distribution '" + named + "'");
        }
    } else {
        probs = p.get<std::vector<double>>();
    }
    try {
        return ObserverMode::passive(std::move(probs));
    } catch (const InvalidDistribution& e) {
        throw ConfigError(path + ".p: " + std::string(e.what()));
    }
}

inline ActiveParams parse_policy_params(const json& j, const std::string& path) {
    ActiveParams p;
    p.alpha = j.value("alpha", p.alpha);
    p.rho = j.value("rho", p.rho);
    p.eta = j.value("eta", p.eta);
    p.epoch_base = j.value("epoch_base", p.epoch_base);
    p.cadence_C = j.value("C", p.cadence_C);
    p.share_info = j.value("share_info", p.share_info);
    if (j.contains("cadence")) {
        std::string c = j.at("cadence").get<std::string>();
        if (c == "every_round")
            p.cadence = EtcCadence::EveryRound;
        else if (c == "every_c_rounds")
            p.cadence = EtcCadence::EveryCRounds;
        else if (c == "powers_of_two")
            p.cadence = EtcCadence::PowersOfTwo;
        else
            throw ConfigError(path + ".cadence: unknown cadence '" + c + "'");
    }
    return p;
}

inline ExperimentConfig parse_experiment(const json& j, const std::string& path) {
    reject_unknown(j,
                   {"name", "instance", "schedule", "observer", "policy", "horizon",
                    "replications", "seed", "checkpoints"},
                   path);
    ExperimentConfig cfg;
    cfg.name = j.value("name", std::string{});

    const json& inst = require(j, "instance", path);
    reject_unknown(inst, {"arms"}, path + ".instance");
    const json& arms = require(inst, "arms", path + ".instance");
    std::vector<ArmSpec> specs;
    for (std::size_t i = 0; i < arms.size(); ++i)
        specs.push_back(parse_arm(arms.at(i), path + ".instance.arms[" + std::to_string(i) + "]"));
    try {
        cfg.instance = make_instance(std::move(specs));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(path + ".instance.arms: " + std::string(e.what()));
    }

    cfg.schedule = parse_schedule(require(j, "schedule", path), path + ".schedule");
    cfg.observer = parse_observer(require(j, "observer", path), cfg.instance, path + ".observer");

    const json& pol = require(j, "policy", path);
    reject_unknown(pol, {"name", "alpha", "rho", "eta", "C", "epoch_base", "share_info", "cadence"},
                   path + ".policy");
    cfg.policy_name = require(pol, "name", path + ".policy").get<std::string>();
    try {
        cfg.policy_params = parse_policy_params(pol, path + ".policy");
        make_policy(cfg.policy_name, cfg.policy_params);  // validates name and parameters
    } catch (const DomainError& e) {
        throw ConfigError(path + ".policy: " + std::string(e.what()));
    }

    cfg.horizon = require(j, "horizon", path).get<std::int64_t>();
    cfg.replications = j.value("replications", 1);
    cfg.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("checkpoints")) cfg.checkpoints = j.at("checkpoints").get<std::vector<std::int64_t>>();
    try {
        cfg.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(path + "." + std::string(e.what()));
    }
    return cfg;
}

}  // namespace detail

inline constexpr int kConfigSchemaVersion = 1;

// Parses a config document: either a single experiment object or
// {"experiments": [...]} for a batch. A top-level schema_version is required.
inline std::vector<ExperimentConfig> parse_config_json(const std::string& text) {
    detail::json j;
    try {
        j = detail::json::parse(text);
    } catch (const detail::json::parse_error& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    int version = detail::require(j, "schema_version", "config").get<int>();
    if (version != kConfigSchemaVersion)
        throw ConfigError("config.schema_version: unsupported version " + std::to_string(version));

    std::vector<ExperimentConfig> out;
    if (j.contains("experiments")) {
        detail::reject_unknown(j, {"schema_version", "experiments"}, "config");
        const auto& arr = j.at("experiments");
        if (!arr.is_array() || arr.empty())
            throw ConfigError("config.experiments: must be a non-empty array");
        for (std::size_t i = 0; i < arr.size(); ++i)
            out.push_back(detail::parse_experiment(
                arr.at(i), "config.experiments[" + std::to_string(i) + "]"));
    } else {
        detail::json body = j;
        body.erase("schema_version");
        out.push_back(detail::parse_experiment(body, "config"));
    }
    return out;
}

}  // namespace freeobs

#endif
