#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gftlab/distribution.hpp"
#include "gftlab/errors.hpp"
#include "gftlab/worst_case.hpp"

// Declarative experiment configs (JSON). A config can override the seed,
// trial count, walk horizon, tolerance knobs, the instance list, and the
// sampling strategy of a suite. Instances are written either as distribution
// literals or as constructor invocations:
//
//   {"discrete": [[1, 0.75], [2, 0.25]]}
//   {"uniform": [0, 1]}
//   {"point": 0.5}
//   {"equal_revenue": [1, 8]}
//   {"tight_instance": [0.5, 1]}
//   {"revenue_gap_instance": [10]}
//   {"welfare_gap_instance": [10000, 2, 0.001]}          // optional 4th: grid_ratio
//
// Errors carry the JSON path of the offending entry.

namespace gftlab {

struct StrategyConfig {
    std::string kind;  // "fixed_k" or "adversarial"
    std::optional<std::uint64_t> k;
    std::optional<double> delta;
    std::optional<double> c;
    std::optional<std::uint64_t> t_max;
};

struct ExperimentConfig {
    std::optional<std::string> suite;
    std::vector<Distribution> instances;
    std::optional<StrategyConfig> strategy;
    std::optional<std::uint64_t> trials;
    std::optional<std::uint64_t> t_max;
    std::optional<std::uint64_t> seed;
    std::map<std::string, double> tolerances;
};

namespace detail {

inline double config_number(const nlohmann::json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError(path + ": expected a number");
    return j.get<double>();
}

inline std::uint64_t config_count(const nlohmann::json& j, const std::string& path) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0))
        throw ConfigError(path + ": expected a non-negative integer");
    return j.get<std::uint64_t>();
}

inline std::vector<double> config_number_list(const nlohmann::json& j, const std::string& path,
                                              std::size_t min_len, std::size_t max_len) {
    if (!j.is_array() || j.size() < min_len || j.size() > max_len)
        throw ConfigError(path + ": expected a list of " + std::to_string(min_len) +
                          (max_len > min_len ? ".." + std::to_string(max_len) : "") + " numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(config_number(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

}  // namespace detail

inline Distribution parse_distribution(const nlohmann::json& j, const std::string& path) {
    if (!j.is_object() || j.size() != 1)
        throw ConfigError(path + ": expected an object with exactly one distribution key");
    const std::string key = j.begin().key();
    const nlohmann::json& arg = j.begin().value();
    try {
        if (key == "discrete") {
            if (!arg.is_array() || arg.empty())
                throw ConfigError(path + ".discrete: expected a non-empty list of [value, prob] pairs");
            std::vector<Atom> atoms;
            for (std::size_t i = 0; i < arg.size(); ++i) {
                const std::string entry = path + ".discrete[" + std::to_string(i) + "]";
                const auto pair = detail::config_number_list(arg[i], entry, 2, 2);
                atoms.push_back({pair[0], pair[1]});
            }
            return DiscreteDistribution(std::move(atoms));
        }
        if (key == "uniform") {
            const auto v = detail::config_number_list(arg, path + ".uniform", 2, 2);
            return Uniform(v[0], v[1]);
        }
        if (key == "point") {
            return PointMass(detail::config_number(arg, path + ".point"));
        }
        if (key == "equal_revenue") {
            const auto v = detail::config_number_list(arg, path + ".equal_revenue", 2, 2);
            return EqualRevenue(v[0], v[1]);
        }
        if (key == "tight_instance") {
            const auto v = detail::config_number_list(arg, path + ".tight_instance", 2, 2);
            return tight_instance(v[0], v[1]);
        }
        if (key == "revenue_gap_instance") {
            if (arg.is_number()) return revenue_gap_instance(arg.get<double>());
            const auto v = detail::config_number_list(arg, path + ".revenue_gap_instance", 1, 1);
            return revenue_gap_instance(v[0]);
        }
        if (key == "welfare_gap_instance") {
            const auto v = detail::config_number_list(arg, path + ".welfare_gap_instance", 3, 4);
            const int m = static_cast<int>(v[1]);
            if (static_cast<double>(m) != v[1])
                throw ConfigError(path + ".welfare_gap_instance[1]: tower count must be an integer");
            if (v.size() == 4) return welfare_gap_instance(v[0], m, v[2], v[3]);
            return welfare_gap_instance(v[0], m, v[2]);
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(path + "." + key + ": " + e.what());
    }
    throw ConfigError(path + ": unknown distribution constructor \"" + key + "\"");
}

inline nlohmann::json to_literal(const Distribution& d) {
    if (const auto* disc = std::get_if<DiscreteDistribution>(&d)) {
        nlohmann::json pairs = nlohmann::json::array();
        for (std::size_t i = 0; i < disc->size(); ++i)
            pairs.push_back({disc->value(i), disc->prob(i)});
        return nlohmann::json{{"discrete", pairs}};
    }
    if (const auto* uni = std::get_if<Uniform>(&d))
        return nlohmann::json{{"uniform", {uni->lo, uni->hi}}};
    if (const auto* pt = std::get_if<PointMass>(&d)) return nlohmann::json{{"point", pt->v}};
    const auto& er = std::get<EqualRevenue>(d);
    return nlohmann::json{{"equal_revenue", {er.lo, er.hi}}};
}

inline StrategyConfig parse_strategy(const nlohmann::json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path + ": expected an object");
    StrategyConfig s;
    for (const auto& [key, value] : j.items()) {
        const std::string at = path + "." + key;
        if (key == "kind") {
            if (!value.is_string()) throw ConfigError(at + ": expected \"fixed_k\" or \"adversarial\"");
            s.kind = value.get<std::string>();
        } else if (key == "k") {
            s.k = detail::config_count(value, at);
        } else if (key == "delta") {
            s.delta = detail::config_number(value, at);
        } else if (key == "c") {
            s.c = detail::config_number(value, at);
        } else if (key == "t_max" || key == "T_max") {
            s.t_max = detail::config_count(value, at);
        } else {
            throw ConfigError(at + ": unknown strategy field");
        }
    }
    if (s.kind != "fixed_k" && s.kind != "adversarial")
        throw ConfigError(path + ".kind: expected \"fixed_k\" or \"adversarial\"");
    if (s.kind == "fixed_k" && !s.k) throw ConfigError(path + ": fixed_k strategy needs field k");
    if (s.kind == "adversarial" && !s.delta)
        throw ConfigError(path + ": adversarial strategy needs field delta");
    return s;
}

inline ExperimentConfig parse_config(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config: expected a JSON object");
    ExperimentConfig cfg;
    for (const auto& [key, value] : j.items()) {
        if (key == "suite") {
            if (!value.is_string()) throw ConfigError("suite: expected a string");
            cfg.suite = value.get<std::string>();
        } else if (key == "instances") {
            if (!value.is_array()) throw ConfigError("instances: expected a list");
            for (std::size_t i = 0; i < value.size(); ++i)
                cfg.instances.push_back(
                    parse_distribution(value[i], "instances[" + std::to_string(i) + "]"));
        } else if (key == "strategy") {
            cfg.strategy = parse_strategy(value, "strategy");
        } else if (key == "trials") {
            cfg.trials = detail::config_count(value, "trials");
            if (*cfg.trials < 1) throw ConfigError("trials: must be >= 1");
        } else if (key == "T_max" || key == "t_max") {
            cfg.t_max = detail::config_count(value, key);
            if (*cfg.t_max < 1) throw ConfigError(key + ": must be >= 1");
        } else if (key == "seed") {
            cfg.seed = detail::config_count(value, "seed");
        } else if (key == "tolerances") {
            if (!value.is_object()) throw ConfigError("tolerances: expected an object");
            for (const auto& [name, tol] : value.items()) {
                const double t = detail::config_number(tol, "tolerances." + name);
                if (!(t > 0.0)) throw ConfigError("tolerances." + name + ": must be positive");
                cfg.tolerances[name] = t;
            }
        } else {
            throw ConfigError(key + ": unknown config field");
        }
    }
    return cfg;
}

inline ExperimentConfig load_config(const std::string& filename) {
    std::ifstream in(filename);
    if (!in) throw IoError("cannot open config file: " + filename);
    std::stringstream buffer;
    buffer << in.rdbuf();
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(buffer.str());
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(filename + ": invalid JSON: " + e.what());
    }
    return parse_config(j);
}

}  // namespace gftlab
