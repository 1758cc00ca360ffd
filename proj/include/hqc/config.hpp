#pragma once

// JSON run configurations and the bundled instance presets.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "hqc/model.hpp"
#include "hqc/payoff.hpp"
#include "hqc/qresource.hpp"
#include "hqc/schemes.hpp"

#ifndef HESTON_QCOST_DATA_DIR
#define HESTON_QCOST_DATA_DIR "data/instances"
#endif

namespace hqc {

class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& key, const std::string& why) : std::runtime_error(key + ": " + why), key_(key) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

struct RunConfig {
    std::string name;
    HestonParams model;
    OptionSpec option;
    std::optional<Scheme> scheme;
    std::uint32_t n_steps = 1024;
    std::uint64_t paths = 100000;
    std::uint64_t seed = 1;
    bool allow_feller_violation = false;
    std::map<Scheme, AlgorithmConfig> quantum;  // per-scheme circuit parameters
};

namespace detail {

using nlohmann::json;

inline const json& require(const json& j, const std::string& section, const std::string& key) {
    const std::string full = section.empty() ? key : section + "." + key;
    if (!j.is_object() || !j.contains(key)) throw ConfigError(full, "missing");
    return j.at(key);
}

inline double number(const json& j, const std::string& section, const std::string& key) {
    const json& v = require(j, section, key);
    const std::string full = section.empty() ? key : section + "." + key;
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s == "inf" || s == "+inf" || s == "infinity") return std::numeric_limits<double>::infinity();
        throw ConfigError(full, "expected a number, got '" + s + "'");
    }
    if (!v.is_number()) throw ConfigError(full, "expected a number");
    return v.get<double>();
}

template <class T>
T integer(const json& j, const std::string& section, const std::string& key) {
    const json& v = require(j, section, key);
    const std::string full = section.empty() ? key : section + "." + key;
    if (!v.is_number_integer() || v.get<long long>() < 0) throw ConfigError(full, "expected a nonnegative integer");
    return static_cast<T>(v.get<long long>());
}

inline std::string text(const json& j, const std::string& section, const std::string& key) {
    const json& v = require(j, section, key);
    if (!v.is_string()) throw ConfigError(section.empty() ? key : section + "." + key, "expected a string");
    return v.get<std::string>();
}

inline PpChoice pp_pin(const json& j, const std::string& section) {
    PpChoice c;
    c.m = integer<int>(j, section, "m");
    c.d = integer<int>(j, section, "d");
    if (c.m < 1) throw ConfigError(section + ".m", "must be at least 1");
    c.pinned = true;
    return c;
}

inline AlgorithmConfig algorithm_config(const json& shared, const json& per_scheme, Scheme scheme, OptionKind kind,
                                        const std::string& section) {
    AlgorithmConfig cfg;
    cfg.scheme = scheme;
    cfg.kind = kind;
    auto pick = [&](const std::string& key) -> const json& {
        if (per_scheme.contains(key)) return per_scheme;
        return shared;
    };
    auto num = [&](const std::string& key, double fallback) {
        const json& src = pick(key);
        return src.contains(key) ? number(src, section, key) : fallback;
    };
    cfg.n_steps = integer<std::int64_t>(pick("n_steps"), section, "n_steps");
    cfg.fmt.n = integer<int>(pick("n"), section, "n");
    cfg.fmt.p = integer<int>(pick("p"), section, "p");
    cfg.eps_sin = number(pick("eps_sin"), section, "eps_sin");
    if (scheme == Scheme::strong_euler) {
        cfg.eps_gauss = number(pick("eps_gauss"), section, "eps_gauss");
        cfg.eps_prep = number(pick("eps_prep"), section, "eps_prep");
    }
    cfg.eps_exp = num("eps_exp", cfg.eps_exp);
    cfg.eps_arcsin = num("eps_arcsin", cfg.eps_arcsin);
    cfg.eps_estimate = num("eps_estimate", cfg.eps_estimate);
    cfg.delta_fail = num("delta", cfg.delta_fail);
    cfg.eta = num("eta", cfg.eta);
    if (pick("exp_domain").contains("exp_domain")) {
        const json& dom = pick("exp_domain").at("exp_domain");
        if (!dom.is_array() || dom.size() != 2 || !dom[0].is_number() || !dom[1].is_number()) {
            throw ConfigError(section + ".exp_domain", "expected [lo, hi]");
        }
        cfg.exp_lo = dom[0].get<double>();
        cfg.exp_hi = dom[1].get<double>();
    }
    if (pick("pin_exp").contains("pin_exp")) cfg.exp_pp = pp_pin(pick("pin_exp").at("pin_exp"), section + ".pin_exp");
    if (pick("pin_arcsin").contains("pin_arcsin")) {
        cfg.arcsin_pp = pp_pin(pick("pin_arcsin").at("pin_arcsin"), section + ".pin_arcsin");
    }
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(section, e.what());
    }
    return cfg;
}

}  // namespace detail

/// Builds a run configuration from a parsed JSON document. Missing or
/// malformed keys raise ConfigError naming the key.
inline RunConfig parse_run_config(const nlohmann::json& j) {
    using detail::number;
    if (!j.is_object()) throw ConfigError("<root>", "expected a JSON object");
    RunConfig rc;
    rc.name = j.value("name", std::string{});
    rc.allow_feller_violation = j.value("allow_feller_violation", false);

    const auto& m = detail::require(j, "", "model");
    rc.model.r = number(m, "model", "r");
    rc.model.rho = number(m, "model", "rho");
    rc.model.kappa = number(m, "model", "kappa");
    rc.model.theta = number(m, "model", "theta");
    rc.model.xi = number(m, "model", "xi");
    rc.model.s0 = number(m, "model", "s0");
    rc.model.nu0 = number(m, "model", "nu0");
    try {
        validate(rc.model, rc.allow_feller_violation);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("model." + std::string(e.what()).substr(0, std::string(e.what()).find(':')), e.what());
    }

    const auto& o = detail::require(j, "", "option");
    try {
        rc.option.kind = parse_option_kind(detail::text(o, "option", "kind"));
    } catch (const std::invalid_argument& e) {
        throw ConfigError("option.kind", e.what());
    }
    rc.option.strike = number(o, "option", "strike");
    rc.option.expiry = number(o, "option", "expiry");
    if (o.contains("barrier") && !o.at("barrier").is_null()) rc.option.barrier = number(o, "option", "barrier");
    if (o.contains("z_bound") && !o.at("z_bound").is_null()) rc.option.z_bound = number(o, "option", "z_bound");
    try {
        rc.option.validate();
    } catch (const std::invalid_argument& e) {
        const std::string what = e.what();
        throw ConfigError("option." + what.substr(0, what.find(':')), what);
    }

    if (j.contains("scheme")) {
        try {
            rc.scheme = parse_scheme(detail::text(j, "", "scheme"));
        } catch (const std::invalid_argument& e) {
            throw ConfigError("scheme", e.what());
        }
    }
    if (j.contains("sampling")) {
        const auto& s = j.at("sampling");
        if (s.contains("n_steps")) rc.n_steps = detail::integer<std::uint32_t>(s, "sampling", "n_steps");
        if (s.contains("paths")) rc.paths = detail::integer<std::uint64_t>(s, "sampling", "paths");
        if (s.contains("seed")) rc.seed = detail::integer<std::uint64_t>(s, "sampling", "seed");
        if (rc.n_steps < 1) throw ConfigError("sampling.n_steps", "must be at least 1");
        if (rc.paths < 1) throw ConfigError("sampling.paths", "must be at least 1");
    }
    if (j.contains("quantum")) {
        const auto& q = j.at("quantum");
        for (Scheme s : {Scheme::strong_euler, Scheme::weak_euler}) {
            const std::string key(scheme_name(s));
            if (!q.contains(key)) continue;
            rc.quantum[s] = detail::algorithm_config(q, q.at(key), s, rc.option.kind, "quantum." + key);
        }
    }
    return rc;
}

inline RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open '" + path.string() + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config", std::string("parse error: ") + e.what());
    }
    return parse_run_config(j);
}

inline std::filesystem::path instance_dir() {
    if (const char* env = std::getenv("HESTON_QCOST_DATA")) return env;
    return HESTON_QCOST_DATA_DIR;
}

/// Loads a bundled preset by name (c1..c8, q1..q4).
inline RunConfig load_instance(const std::string& name) {
    const auto path = instance_dir() / (name + ".json");
    if (!std::filesystem::exists(path)) throw ConfigError("instance", "unknown instance '" + name + "'");
    return load_run_config(path);
}

}  // namespace hqc
