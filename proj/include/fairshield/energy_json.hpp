#pragma once

#include <string>

#include <json.hpp>

#include "fairshield/energy.hpp"
#include "fairshield/errors.hpp"

namespace fairshield {

inline std::string domain_name(FairnessDomain d) { return d == FairnessDomain::Unit ? "unit" : "signed"; }

inline FairnessDomain domain_from_name(const std::string& name) {
    if (name == "unit") return FairnessDomain::Unit;
    if (name == "signed") return FairnessDomain::Signed;
    throw ConfigError("unknown fairness domain '" + name + "' (expected \"unit\" or \"signed\")");
}

inline nlohmann::json to_json(const Interval& iv) { return nlohmann::json::array({iv.lo, iv.hi}); }

inline Interval interval_from_json(const nlohmann::json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw ConfigError(path + ": expected an interval [lo, hi]");
    }
    try {
        return Interval(j[0].get<double>(), j[1].get<double>());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

/// {"family": ..., "params": {...}, "domain": "unit"|"signed"}
inline nlohmann::json to_json(const EnergyFunction& zeta) {
    nlohmann::json j;
    j["domain"] = domain_name(zeta.domain());
    std::visit(
        [&](const auto& f) {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, PolynomialEnergy>) {
                j["family"] = "polynomial";
                j["params"] = {{"kappa", f.kappa}, {"alpha", f.alpha}, {"beta", f.beta}};
            } else if constexpr (std::is_same_v<T, ExponentialEnergy>) {
                j["family"] = "exponential";
                j["params"] = {{"kappa", f.kappa}, {"rho", f.rho}, {"sigma", f.sigma}};
            } else if constexpr (std::is_same_v<T, MonotonicEnergy>) {
                j["family"] = "monotonic";
                j["params"] = {{"r", f.r}, {"bias", f.bias}, {"s", to_json(f.running)}, {"l", to_json(f.limit)}};
            } else if constexpr (std::is_same_v<T, IdleEnergy>) {
                j["family"] = "idle";
                j["params"] = {{"pivot", f.pivot}};
            } else {
                j["family"] = "naive";
                j["params"] = {{"s", to_json(f.running)}};
            }
        },
        zeta.family());
    return j;
}

namespace json_detail {

inline void check_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed, const std::string& path) {
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* a : allowed) {
            if (key == a) { ok = true; break; }
        }
        if (!ok) throw ConfigError(path + ": unknown key '" + key + "'");
    }
}

inline double number_at(const nlohmann::json& j, const char* key, const std::string& path) {
    if (!j.contains(key) || !j[key].is_number()) throw ConfigError(path + "." + key + ": expected a number");
    return j[key].get<double>();
}

} // namespace json_detail

inline EnergyFunction energy_from_json(const nlohmann::json& j, const std::string& path = "zeta") {
    using json_detail::check_keys;
    using json_detail::number_at;
    if (!j.is_object()) throw ConfigError(path + ": expected an object");
    check_keys(j, {"family", "params", "domain"}, path);
    if (!j.contains("family") || !j["family"].is_string()) throw ConfigError(path + ".family: expected a string");
    const std::string family = j["family"].get<std::string>();
    const FairnessDomain dom =
        j.contains("domain") ? domain_from_name(j["domain"].get<std::string>()) : FairnessDomain::Unit;
    const nlohmann::json params = j.value("params", nlohmann::json::object());
    const std::string ppath = path + ".params";

    try {
        if (family == "polynomial") {
            check_keys(params, {"kappa", "alpha", "beta"}, ppath);
            return EnergyFunction::polynomial(number_at(params, "kappa", ppath), number_at(params, "alpha", ppath),
                                              number_at(params, "beta", ppath), dom);
        }
        if (family == "exponential") {
            check_keys(params, {"kappa", "rho", "sigma"}, ppath);
            return EnergyFunction::exponential(number_at(params, "kappa", ppath), number_at(params, "rho", ppath),
                                               number_at(params, "sigma", ppath), dom);
        }
        if (family == "monotonic") {
            check_keys(params, {"r", "bias", "s", "l"}, ppath);
            if (!params.contains("s") || !params.contains("l")) throw ConfigError(ppath + ": monotonic needs s and l");
            return EnergyFunction::monotonic(number_at(params, "r", ppath), number_at(params, "bias", ppath),
                                             interval_from_json(params["s"], ppath + ".s"),
                                             interval_from_json(params["l"], ppath + ".l"), dom);
        }
        if (family == "idle") {
            check_keys(params, {"pivot"}, ppath);
            std::optional<double> pivot;
            if (params.contains("pivot")) pivot = number_at(params, "pivot", ppath);
            return EnergyFunction::idle(dom, pivot);
        }
        if (family == "naive") {
            check_keys(params, {"s"}, ppath);
            if (!params.contains("s")) throw ConfigError(ppath + ": naive needs s");
            return EnergyFunction::naive(interval_from_json(params["s"], ppath + ".s"), dom);
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(path + ": " + e.what());
    }
    throw ConfigError(path + ".family: unknown family '" + family + "'");
}

} // namespace fairshield
