#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ebs/simulator.hpp"

// Experiment files: JSON documents describing an instance, the strategies to
// run, the risk level(s) and the Monte-Carlo protocol. The schema is strict;
// unknown keys are rejected so that typos fail loudly.

namespace ebs {

struct Experiment {
    BanditInstance instance;
    std::vector<StrategySpec> strategies;
    std::vector<double> deltas;
    int replications = 1;
    std::uint64_t seed = 0;
    long max_steps = 10'000'000;
    std::optional<TrajectorySpec> trajectory;
};

namespace detail {

using json = nlohmann::json;

inline void require_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* key : allowed) ok = ok || it.key() == key;
        if (!ok)
            throw std::invalid_argument("unknown key \"" + it.key() + "\" in " + where);
    }
}

inline double require_unit_open(const json& v, const std::string& what) {
    if (!v.is_number())
        throw std::invalid_argument(what + " must be a number");
    const double x = v.get<double>();
    if (!(x > 0.0 && x < 1.0))
        throw std::invalid_argument(what + " must lie in (0,1)");
    return x;
}

inline StrategySpec parse_strategy(const json& obj) {
    if (!obj.is_object()) throw std::invalid_argument("strategy entries must be objects");
    require_keys(obj, {"id", "gamma", "threshold", "tracking"}, "strategy");
    StrategySpec spec;
    if (!obj.contains("id") || !obj["id"].is_string())
        throw std::invalid_argument("strategy needs a string \"id\"");
    spec.id = obj["id"].get<std::string>();
    if (!StrategySpec::valid_id(spec.id))
        throw std::invalid_argument("unknown strategy id \"" + spec.id + "\"");
    if (obj.contains("gamma")) spec.gamma = require_unit_open(obj["gamma"], "gamma");
    if (obj.contains("threshold")) {
        const json& th = obj["threshold"];
        if (th.is_string() && th.get<std::string>() == "empirical") {
            spec.threshold_kind = ThresholdSpec::Kind::Empirical;
        } else if (th.is_object()) {
            require_keys(th, {"theoretical"}, "threshold");
            if (!th.contains("theoretical") || !th["theoretical"].is_object())
                throw std::invalid_argument("threshold must be \"empirical\" or {\"theoretical\": {...}}");
            const json& p = th["theoretical"];
            require_keys(p, {"R", "alpha"}, "threshold.theoretical");
            spec.threshold_kind = ThresholdSpec::Kind::Theoretical;
            if (p.contains("R")) {
                if (!p["R"].is_number() || !(p["R"].get<double>() > 0.0))
                    throw std::invalid_argument("threshold R must be a positive number");
                spec.threshold_R = p["R"].get<double>();
            }
            if (p.contains("alpha")) {
                if (!p["alpha"].is_number())
                    throw std::invalid_argument("threshold alpha must be a number");
                spec.threshold_alpha = p["alpha"].get<double>();
                if (!(spec.threshold_alpha >= 1.0 && spec.threshold_alpha <= 2.0))
                    throw std::invalid_argument("threshold alpha must lie in [1,2]");
            }
        } else {
            throw std::invalid_argument("threshold must be \"empirical\" or {\"theoretical\": {...}}");
        }
    }
    if (obj.contains("tracking")) {
        if (!obj["tracking"].is_string())
            throw std::invalid_argument("tracking must be \"C\" or \"D\"");
        const std::string mode = obj["tracking"].get<std::string>();
        if (mode != "C" && mode != "D")
            throw std::invalid_argument("tracking must be \"C\" or \"D\"");
        if (!spec.is_ebs() && !spec.is_tas())
            throw std::invalid_argument("tracking only applies to ebs-*/tas-* strategies");
        const bool wants_d = mode == "D";
        if (wants_d != (spec.tracking() == TrackingMode::D))
            throw std::invalid_argument("tracking \"" + mode + "\" contradicts id \"" +
                                        spec.id + "\"");
    }
    return spec;
}

}  // namespace detail

inline Experiment parse_experiment(const nlohmann::json& doc) {
    using detail::require_keys;
    if (!doc.is_object()) throw std::invalid_argument("experiment file must be a JSON object");
    require_keys(doc,
                 {"instance", "strategies", "delta", "deltas", "replications", "seed",
                  "max_steps", "trajectory"},
                 "experiment");

    if (!doc.contains("instance") || !doc["instance"].is_array())
        throw std::invalid_argument("experiment needs an \"instance\" array of means");
    std::vector<double> means;
    for (const auto& v : doc["instance"]) {
        if (!v.is_number()) throw std::invalid_argument("instance means must be numbers");
        means.push_back(v.get<double>());
    }
    if (means.size() < 2) throw std::invalid_argument("instance needs at least 2 means");

    Experiment exp{BanditInstance(std::move(means)), {}, {}};

    if (!doc.contains("strategies") || !doc["strategies"].is_array() ||
        doc["strategies"].empty())
        throw std::invalid_argument("experiment needs a nonempty \"strategies\" array");
    for (const auto& s : doc["strategies"]) exp.strategies.push_back(detail::parse_strategy(s));

    if (doc.contains("delta") == doc.contains("deltas"))
        throw std::invalid_argument("experiment needs exactly one of \"delta\" or \"deltas\"");
    if (doc.contains("delta")) {
        exp.deltas.push_back(detail::require_unit_open(doc["delta"], "delta"));
    } else {
        if (!doc["deltas"].is_array() || doc["deltas"].empty())
            throw std::invalid_argument("\"deltas\" must be a nonempty array");
        for (const auto& d : doc["deltas"])
            exp.deltas.push_back(detail::require_unit_open(d, "deltas entry"));
    }

    if (doc.contains("replications")) {
        if (!doc["replications"].is_number_integer() || doc["replications"].get<long>() < 1)
            throw std::invalid_argument("replications must be an integer >= 1");
        exp.replications = doc["replications"].get<int>();
    }
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_integer() || doc["seed"].get<long long>() < 0)
            throw std::invalid_argument("seed must be a nonnegative integer");
        exp.seed = doc["seed"].get<std::uint64_t>();
    }
    if (doc.contains("max_steps")) {
        if (!doc["max_steps"].is_number_integer() ||
            doc["max_steps"].get<long>() < exp.instance.num_arms())
            throw std::invalid_argument("max_steps must be an integer >= K");
        exp.max_steps = doc["max_steps"].get<long>();
    }
    if (doc.contains("trajectory")) {
        const auto& tr = doc["trajectory"];
        if (!tr.is_object()) throw std::invalid_argument("trajectory must be an object");
        require_keys(tr, {"stride"}, "trajectory");
        TrajectorySpec spec;
        if (tr.contains("stride")) {
            if (!tr["stride"].is_number_integer() || tr["stride"].get<long>() < 1)
                throw std::invalid_argument("trajectory stride must be an integer >= 1");
            spec.stride = tr["stride"].get<long>();
        }
        exp.trajectory = spec;
    }
    return exp;
}

inline Experiment load_experiment(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open experiment file: " + path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("experiment file is not valid JSON: ") +
                                    e.what());
    }
    return parse_experiment(doc);
}

inline SimulationConfig make_config(const Experiment& exp, const StrategySpec& strategy,
                                    double delta) {
    SimulationConfig config{exp.instance, strategy, delta};
    config.replications = exp.replications;
    config.master_seed = exp.seed;
    config.max_steps = exp.max_steps;
    config.trajectory = exp.trajectory;
    return config;
}

}  // namespace ebs
