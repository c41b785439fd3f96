#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fairshield/analysis.hpp"
#include "fairshield/csv.hpp"
#include "fairshield/energy_json.hpp"
#include "fairshield/errors.hpp"
#include "fairshield/exactdp.hpp"
#include "fairshield/shield.hpp"
#include "fairshield/simkit.hpp"
#include "fairshield/synthesis.hpp"

namespace fairshield::cli {

using nlohmann::json;
using json_detail::check_keys;
using json_detail::number_at;

// Exit codes shared with scripts and CI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSynthesisFail = 3;
inline constexpr int kExitResource = 4;

// ---------------------------------------------------------------------------
// config parsing (strict: unknown keys are rejected, errors carry the path)

inline long integer_at(const json& j, const char* key, const std::string& path) {
    if (!j.contains(key) || !j[key].is_number_integer()) throw ConfigError(path + "." + key + ": expected an integer");
    return j[key].get<long>();
}

inline FairnessTarget target_from_json(const json& j, FairnessDomain dom, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path + ": expected an object");
    check_keys(j, {"tau", "s", "l"}, path);
    if (!j.contains("s") || !j.contains("l")) throw ConfigError(path + ": need s and l");
    try {
        return FairnessTarget(dom, j.contains("tau") ? integer_at(j, "tau", path) : 0,
                              interval_from_json(j["s"], path + ".s"), interval_from_json(j["l"], path + ".l"));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

inline json target_to_json(const FairnessTarget& t) {
    return {{"tau", t.burn_in}, {"s", to_json(t.running)}, {"l", to_json(t.limit)}};
}

inline Setting setting_from_json(const json& j, const std::string& path) {
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
        throw ConfigError(path + ".type: expected \"single\" or \"two_group\"");
    }
    const std::string type = j["type"].get<std::string>();
    if (type == "single") {
        check_keys(j, {"type", "p"}, path);
        return SingleGroupSetting{number_at(j, "p", path)};
    }
    if (type == "two_group") {
        check_keys(j, {"type", "r_a", "p_a", "p_b"}, path);
        return TwoGroupSetting{number_at(j, "r_a", path), number_at(j, "p_a", path), number_at(j, "p_b", path)};
    }
    throw ConfigError(path + ".type: unknown setting '" + type + "'");
}

inline json setting_to_json(const Setting& s) {
    if (const auto* sg = std::get_if<SingleGroupSetting>(&s)) return {{"type", "single"}, {"p", sg->p}};
    const auto& tg = std::get<TwoGroupSetting>(s);
    return {{"type", "two_group"}, {"r_a", tg.r_a}, {"p_a", tg.p_a}, {"p_b", tg.p_b}};
}

inline EnvModel env_from_json(const json& j, const std::string& path) {
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
        throw ConfigError(path + ".type: expected an environment type");
    }
    const std::string type = j["type"].get<std::string>();
    if (type == "single") {
        check_keys(j, {"type", "p"}, path);
        return SingleGroupEnv{number_at(j, "p", path)};
    }
    if (type == "two_group") {
        check_keys(j, {"type", "r_a", "p_a", "p_b"}, path);
        return TwoGroupEnv{number_at(j, "r_a", path), number_at(j, "p_a", path), number_at(j, "p_b", path)};
    }
    if (type == "unknown") {
        check_keys(j, {"type", "p"}, path);
        return UnknownPEnv{number_at(j, "p", path)};
    }
    if (type == "sinusoidal") {
        check_keys(j, {"type", "base", "amplitude", "period"}, path);
        SinusoidalPEnv env;
        if (j.contains("base")) env.base = number_at(j, "base", path);
        if (j.contains("amplitude")) env.amplitude = number_at(j, "amplitude", path);
        if (j.contains("period")) env.period = number_at(j, "period", path);
        return env;
    }
    throw ConfigError(path + ".type: unknown environment '" + type + "'");
}

inline json env_to_json(const EnvModel& env) {
    return std::visit(
        [](const auto& e) -> json {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, SingleGroupEnv>) {
                return {{"type", "single"}, {"p", e.p}};
            } else if constexpr (std::is_same_v<T, UnknownPEnv>) {
                return {{"type", "unknown"}, {"p", e.p}};
            } else if constexpr (std::is_same_v<T, SinusoidalPEnv>) {
                return {{"type", "sinusoidal"}, {"base", e.base}, {"amplitude", e.amplitude}, {"period", e.period}};
            } else {
                return {{"type", "two_group"}, {"r_a", e.r_a}, {"p_a", e.p_a}, {"p_b", e.p_b}};
            }
        },
        env);
}

inline ShieldConfig shield_from_json(const json& j, const std::string& path) {
    if (!j.is_object() || !j.contains("mode") || !j["mode"].is_string()) {
        throw ConfigError(path + ".mode: expected a shield mode");
    }
    const std::string mode = j["mode"].get<std::string>();
    try {
        if (mode == "known") {
            check_keys(j, {"mode", "zeta"}, path);
            if (!j.contains("zeta")) throw ConfigError(path + ": known mode needs zeta");
            return KnownShield{energy_from_json(j["zeta"], path + ".zeta")};
        }
        if (mode == "two_group") {
            check_keys(j, {"mode", "zeta"}, path);
            if (!j.contains("zeta")) throw ConfigError(path + ": two_group mode needs zeta");
            return TwoGroupShield{energy_from_json(j["zeta"], path + ".zeta")};
        }
        if (mode == "adaptive") {
            check_keys(j, {"mode", "mu_star", "sigma"}, path);
            AdaptiveShield s{number_at(j, "mu_star", path)};
            if (j.contains("sigma")) s.sigma = number_at(j, "sigma", path);
            return s;
        }
        if (mode == "naive") {
            check_keys(j, {"mode", "s", "tau"}, path);
            if (!j.contains("s")) throw ConfigError(path + ": naive mode needs s");
            return NaiveShield{interval_from_json(j["s"], path + ".s"),
                               j.contains("tau") ? integer_at(j, "tau", path) : 0};
        }
        if (mode == "idle") {
            check_keys(j, {"mode"}, path);
            return IdleShield{};
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(path + ": " + e.what());
    }
    throw ConfigError(path + ".mode: unknown mode '" + mode + "'");
}

inline json shield_to_json(const ShieldConfig& cfg) {
    return std::visit(
        [](const auto& s) -> json {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, KnownShield>) {
                return {{"mode", "known"}, {"zeta", to_json(s.zeta)}};
            } else if constexpr (std::is_same_v<T, TwoGroupShield>) {
                return {{"mode", "two_group"}, {"zeta", to_json(s.zeta)}};
            } else if constexpr (std::is_same_v<T, AdaptiveShield>) {
                return {{"mode", "adaptive"}, {"mu_star", s.mu_star}, {"sigma", s.sigma}};
            } else if constexpr (std::is_same_v<T, NaiveShield>) {
                return {{"mode", "naive"}, {"s", to_json(s.running)}, {"tau", s.burn_in}};
            } else {
                return {{"mode", "idle"}};
            }
        },
        cfg);
}

inline json load_config(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open config file " + file.string());
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError("config parse error in " + file.string() + ": " + e.what());
    }
    if (!j.is_object()) throw ConfigError("config root must be an object");
    return j;
}

inline void write_file(const std::filesystem::path& file, const std::string& content) {
    std::filesystem::create_directories(file.parent_path().empty() ? "." : file.parent_path());
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    out << content;
}

inline void write_json(const std::filesystem::path& file, const json& j) { write_file(file, j.dump(2) + "\n"); }

// ---------------------------------------------------------------------------
// commands

inline int cmd_analyze(const json& cfg, const std::filesystem::path& out_dir, int /*threads*/) {
    check_keys(cfg, {"setting", "zeta", "target", "eta", "bound_times"}, "config");
    if (!cfg.contains("setting") || !cfg.contains("zeta") || !cfg.contains("target")) {
        throw ConfigError("config: analyze needs setting, zeta and target");
    }
    const Setting setting = setting_from_json(cfg["setting"], "config.setting");
    const FairnessDomain dom = setting_domain(setting);
    const EnergyFunction zeta = energy_from_json(cfg["zeta"], "config.zeta");
    const FairnessTarget target = target_from_json(cfg["target"], dom, "config.target");
    const bool two_group = std::holds_alternative<TwoGroupSetting>(setting);
    std::optional<double> eta;
    if (cfg.contains("eta")) eta = number_at(cfg, "eta", "config");
    if (two_group && !eta) throw ConfigError("config.eta: required for two-group analysis");

    CharacteristicModel model(setting, zeta);
    const double mu_star = find_fixpoint(model);
    const double cost = model.h(mu_star);

    json report;
    report["config"] = {{"setting", setting_to_json(setting)}, {"zeta", to_json(zeta)},
                        {"target", target_to_json(target)}};
    if (eta) report["config"]["eta"] = *eta;
    report["mu_star"] = mu_star;
    report["limit_cost"] = cost;

    json bounds = json::array();
    if (target.running.strictly_contains(mu_star)) {
        TailBoundParams params;
        if (two_group) {
            const auto& tg = std::get<TwoGroupSetting>(setting);
            params = TailBoundParams::two_group(target.running, mu_star, tg.r_min(), *eta);
        } else {
            params = TailBoundParams::single_group(target.running, mu_star);
        }
        report["tau"] = params.burn_in;
        std::vector<long> times;
        if (cfg.contains("bound_times")) {
            if (!cfg["bound_times"].is_array()) throw ConfigError("config.bound_times: expected an array of times");
            for (const auto& v : cfg["bound_times"]) times.push_back(v.get<long>());
        } else {
            for (int i = 0; i < 20; ++i) {
                times.push_back(static_cast<long>(std::llround(params.burn_in * std::pow(100.0, i / 19.0))));
            }
        }
        for (long t : times) {
            if (t < params.burn_in) continue;
            const double raw = tail_bound_raw(t, params);
            bounds.push_back({{"t", t}, {"p_bound", std::min(1.0, raw)}, {"vacuous", raw > 1.0}});
        }
    } else {
        // The fixpoint misses the running target: no valid burn-in, bounds
        // are inapplicable and the report says so.
        report["tau"] = nullptr;
        report["note"] = "mu* lies outside the running target; tail bounds inapplicable";
    }
    report["bounds"] = bounds;
    write_json(out_dir / "report.json", report);
    return kExitOk;
}

inline int cmd_synthesize(const json& cfg, const std::filesystem::path& out_dir, int threads) {
    check_keys(cfg,
               {"measure", "setting", "target", "delta", "epsilon", "eta", "index_tol", "t_dp_cap", "probe_points",
                "exact_limit", "mc_runs", "mc_seed"},
               "config");
    for (const char* key : {"measure", "setting", "target", "delta", "epsilon"}) {
        if (!cfg.contains(key)) throw ConfigError(std::string("config: synthesize needs ") + key);
    }
    const std::string measure = cfg["measure"].get<std::string>();
    if (measure != "P" && measure != "E") throw ConfigError("config.measure: expected \"P\" or \"E\"");

    const Setting setting = setting_from_json(cfg["setting"], "config.setting");
    SynthesisInstance inst{
        measure == "P" ? Measure::Probability : Measure::Expectation,
        setting,
        target_from_json(cfg["target"], setting_domain(setting), "config.target"),
        number_at(cfg, "delta", "config"),
        number_at(cfg, "epsilon", "config"),
    };
    if (cfg.contains("eta")) inst.eta = number_at(cfg, "eta", "config");
    if (cfg.contains("index_tol")) inst.index_tol = number_at(cfg, "index_tol", "config");
    if (cfg.contains("t_dp_cap")) inst.t_dp_cap = integer_at(cfg, "t_dp_cap", "config");
    if (cfg.contains("probe_points")) inst.probe_points = static_cast<int>(integer_at(cfg, "probe_points", "config"));
    if (cfg.contains("exact_limit")) inst.dp_options.exact_limit = integer_at(cfg, "exact_limit", "config");
    if (cfg.contains("mc_runs")) inst.dp_options.mc_runs = integer_at(cfg, "mc_runs", "config");
    if (cfg.contains("mc_seed")) inst.dp_options.mc_seed = cfg["mc_seed"].get<std::uint64_t>();
    inst.threads = threads;

    try {
        inst.check();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    const SynthesisOutcome outcome = synthesize(inst);

    json j;
    j["status"] = outcome.found ? "found" : "fail";
    j["index"] = outcome.index;
    if (outcome.zeta) j["zeta"] = to_json(*outcome.zeta);
    j["condition"] = outcome.condition;
    j["t_dp"] = outcome.t_dp;
    j["iterations"] = outcome.iterations;
    j["config"] = cfg;
    if (inst.two_group()) j["mc_seed"] = inst.dp_options.mc_seed;
    write_json(out_dir / "outcome.json", j);
    return outcome.found ? kExitOk : kExitSynthesisFail;
}

inline int cmd_simulate(const json& cfg, const std::filesystem::path& out_dir,
                        std::optional<std::uint64_t> seed_override, int threads) {
    check_keys(cfg, {"env", "shields", "target", "horizon", "replications", "seed", "grid_max", "compare"}, "config");
    for (const char* key : {"env", "shields", "target", "horizon"}) {
        if (!cfg.contains(key)) throw ConfigError(std::string("config: simulate needs ") + key);
    }
    const EnvModel env = env_from_json(cfg["env"], "config.env");
    const FairnessDomain dom = env_two_group(env) ? FairnessDomain::Signed : FairnessDomain::Unit;
    const FairnessTarget target = target_from_json(cfg["target"], dom, "config.target");
    if (!cfg["shields"].is_array() || cfg["shields"].empty()) {
        throw ConfigError("config.shields: expected a non-empty array");
    }

    std::vector<EngineSpec> engines;
    for (std::size_t i = 0; i < cfg["shields"].size(); ++i) {
        const json& sj = cfg["shields"][i];
        const std::string path = "config.shields[" + std::to_string(i) + "]";
        check_keys(sj, {"label", "engine"}, path);
        if (!sj.contains("label") || !sj.contains("engine")) throw ConfigError(path + ": need label and engine");
        engines.push_back({sj["label"].get<std::string>(), shield_from_json(sj["engine"], path + ".engine")});
        if (shield_two_group(engines.back().shield) != env_two_group(env)) {
            throw ConfigError(path + ": engine mode does not match the environment");
        }
    }

    const long horizon = integer_at(cfg, "horizon", "config");
    const long replications = cfg.contains("replications") ? integer_at(cfg, "replications", "config") : 1000;
    const std::uint64_t seed =
        seed_override ? *seed_override : (cfg.contains("seed") ? cfg["seed"].get<std::uint64_t>() : 1);

    json summary;
    summary["seed"] = seed;
    summary["horizon"] = horizon;
    summary["replications"] = replications;
    summary["env"] = env_to_json(env);
    summary["target"] = target_to_json(target);
    json per_shield = json::object();

    for (const auto& spec : engines) {
        ExperimentConfig ec{env, spec.shield, target, horizon, replications, seed};
        if (cfg.contains("grid_max")) ec.grid_max = integer_at(cfg, "grid_max", "config");
        const EnsembleSummary es = run_ensemble(ec, threads);
        std::ostringstream csv;
        write_ensemble_csv(csv, es);
        write_file(out_dir / (spec.label + ".csv"), csv.str());
        double final_mean = 0.0;
        long defined = 0;
        for (double m : es.final_fairness) {
            if (!std::isnan(m)) { final_mean += m; ++defined; }
        }
        per_shield[spec.label] = {
            {"engine", shield_to_json(spec.shield)},
            {"p_hat", es.p_hat},
            {"p_hat_se", es.p_hat_se},
            {"e_hat", es.e_hat},
            {"e_hat_se", es.e_hat_se},
            {"final_fairness_mean", defined > 0 ? final_mean / defined : 0.0},
            {"grid_subsampled", es.grid_subsampled},
        };
    }
    summary["shields"] = per_shield;

    if (cfg.value("compare", false)) {
        const Comparison comp = compare_engines(env, target, engines, horizon, replications, seed, threads);
        std::ostringstream csv;
        write_comparison_csv(csv, comp);
        write_file(out_dir / "comparison.csv", csv.str());
    }
    write_json(out_dir / "summary.json", summary);
    return kExitOk;
}

inline int cmd_dp(const json& cfg, const std::filesystem::path& out_dir, int threads) {
    check_keys(cfg, {"setting", "zeta", "target", "horizon", "measure", "dump_table", "exact_limit", "mc_runs",
                     "mc_seed", "max_states"},
               "config");
    for (const char* key : {"setting", "zeta", "target", "horizon", "measure"}) {
        if (!cfg.contains(key)) throw ConfigError(std::string("config: dp needs ") + key);
    }
    const Setting setting = setting_from_json(cfg["setting"], "config.setting");
    const EnergyFunction zeta = energy_from_json(cfg["zeta"], "config.zeta");
    const FairnessTarget target = target_from_json(cfg["target"], setting_domain(setting), "config.target");
    const long horizon = integer_at(cfg, "horizon", "config");
    const std::string mstr = cfg["measure"].get<std::string>();
    if (mstr != "P" && mstr != "E") throw ConfigError("config.measure: expected \"P\" or \"E\"");
    const Measure measure = mstr == "P" ? Measure::Probability : Measure::Expectation;
    const bool dump_table = cfg.value("dump_table", false);

    CharacteristicModel model(setting, zeta);
    DPResult result;
    if (model.two_group()) {
        TwoGroupDPOptions opts;
        if (cfg.contains("exact_limit")) opts.exact_limit = integer_at(cfg, "exact_limit", "config");
        if (cfg.contains("mc_runs")) opts.mc_runs = integer_at(cfg, "mc_runs", "config");
        if (cfg.contains("mc_seed")) opts.mc_seed = cfg["mc_seed"].get<std::uint64_t>();
        if (dump_table) throw ConfigError("config.dump_table: value-table dump is available for single-group chains only");
        result = dp_value_two_group(model, target, horizon, measure, opts);
    } else {
        ChainSpec spec(model, target, horizon, measure);
        if (cfg.contains("max_states")) spec.max_states = cfg["max_states"].get<std::uint64_t>();
        if (dump_table) {
            if (horizon > 2000) throw ConfigError("config.dump_table: capped at horizon <= 2000");
            spec.keep_table = true;
        }
        result = dp_value(spec, threads);
    }

    json j;
    j["value"] = result.value;
    j["states"] = result.states;
    j["exact"] = result.exact;
    j["wall_ms"] = result.wall_ms;
    if (!result.exact) {
        j["std_error"] = result.std_error;
        j["mc_runs"] = result.mc_runs;
    }
    j["config"] = cfg;
    write_json(out_dir / "dp.json", j);
    std::cout << (measure == Measure::Probability ? "P = " : "E = ") << fmt12(result.value) << "\n";

    if (dump_table) {
        std::ostringstream csv;
        csv << "t,c,value\n";
        for (const auto& [t, c, v] : result.table) csv << t << ',' << c << ',' << fmt12(v) << '\n';
        write_file(out_dir / "dp_table.csv", csv.str());
    }
    return kExitOk;
}

/// Parses a replay CSV: rows are `decision`, `group,decision`, either with an
/// optional trailing timestamp column; a header line is skipped when present.
inline std::vector<RawInput> parse_replay_csv(std::istream& in, bool two_group) {
    std::vector<RawInput> rows;
    std::string line;
    long lineno = 0;
    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        const auto b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(stripped);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(trim(field));
        if (lineno == 1 && !fields.empty() && (fields[0] == "group" || fields[0] == "decision")) continue;

        const std::size_t expected_min = two_group ? 2 : 1;
        if (fields.size() < expected_min || fields.size() > expected_min + 1) {
            throw ConfigError("replay input line " + std::to_string(lineno) + ": expected " +
                              (two_group ? std::string("group,decision[,timestamp]")
                                         : std::string("decision[,timestamp]")));
        }
        RawInput row;
        std::size_t at = 0;
        if (two_group) {
            const std::string& g = fields[at++];
            if (g == "A" || g == "a") row.group = Group::A;
            else if (g == "B" || g == "b") row.group = Group::B;
            else throw ConfigError("replay input line " + std::to_string(lineno) + ": group must be A or B, got '" + g + "'");
        }
        const std::string& bit = fields[at];
        if (bit == "0") row.bit = 0;
        else if (bit == "1") row.bit = 1;
        else throw ConfigError("replay input line " + std::to_string(lineno) + ": decision must be 0 or 1, got '" + bit + "'");
        rows.push_back(row);
    }
    return rows;
}

inline int cmd_replay(const json& cfg, const std::filesystem::path& out_dir,
                      std::optional<std::uint64_t> seed_override, int /*threads*/) {
    check_keys(cfg, {"engine", "target", "input", "seed"}, "config");
    for (const char* key : {"engine", "target", "input"}) {
        if (!cfg.contains(key)) throw ConfigError(std::string("config: replay needs ") + key);
    }
    const ShieldConfig shield = shield_from_json(cfg["engine"], "config.engine");
    const bool two_group = shield_two_group(shield);
    const FairnessTarget target = target_from_json(
        cfg["target"], two_group ? FairnessDomain::Signed : FairnessDomain::Unit, "config.target");
    const std::uint64_t seed =
        seed_override ? *seed_override : (cfg.contains("seed") ? cfg["seed"].get<std::uint64_t>() : 1);

    const std::string input = cfg["input"].get<std::string>();
    std::ifstream in(input);
    if (!in) throw ConfigError("config.input: cannot open " + input);
    const std::vector<RawInput> rows = parse_replay_csv(in, two_group);
    if (rows.empty()) throw ConfigError("config.input: no data rows in " + input);

    const std::vector<StepRecord> records = run_stream(shield, rows, seed);
    std::ostringstream csv;
    write_trace_csv(csv, records);
    write_file(out_dir / "trace.csv", csv.str());

    const long window_from = std::max<long>(target.burn_in, 1);
    long violations = 0, interventions = 0;
    for (const auto& r : records) {
        if (r.t >= window_from && !std::isnan(r.m) && !target.running.contains(r.m)) ++violations;
        interventions += r.y;
    }
    const StepRecord& third = records[records.size() / 3 == 0 ? 0 : records.size() / 3 - 1];
    const StepRecord& last = records.back();

    json j;
    j["seed"] = seed;
    j["steps"] = records.size();
    j["interventions"] = interventions;
    j["violating_steps"] = violations;
    j["fairness_at_third"] = std::isnan(third.m) ? json() : json(third.m);
    j["fairness_final"] = std::isnan(last.m) ? json() : json(last.m);
    j["cost_final"] = last.nu;
    j["config"] = cfg;
    write_json(out_dir / "summary.json", j);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// dispatch

inline int run_command(const std::string& verb, const json& cfg, const std::filesystem::path& out_dir,
                       std::optional<std::uint64_t> seed_override, int threads) {
    try {
        if (verb == "analyze") return cmd_analyze(cfg, out_dir, threads);
        if (verb == "synthesize") return cmd_synthesize(cfg, out_dir, threads);
        if (verb == "simulate") return cmd_simulate(cfg, out_dir, seed_override, threads);
        if (verb == "dp") return cmd_dp(cfg, out_dir, threads);
        if (verb == "replay") return cmd_replay(cfg, out_dir, seed_override, threads);
        std::cerr << "unknown command: " << verb << "\n";
        return kExitConfig;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ResourceLimitError& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return kExitResource;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace fairshield::cli
