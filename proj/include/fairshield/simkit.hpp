#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fairshield/env.hpp"
#include "fairshield/fairness.hpp"
#include "fairshield/parallel.hpp"
#include "fairshield/rng.hpp"
#include "fairshield/shield.hpp"

namespace fairshield {

/// One seeded ensemble: n independent shielded trajectories of a fixed
/// environment/shield pair, summarized per time on an output grid.
struct ExperimentConfig {
    EnvModel env;
    ShieldConfig shield;
    FairnessTarget target;
    long horizon = 1000;
    long replications = 1000;
    std::uint64_t master_seed = 1;
    long grid_max = 2000;            // cap on the number of reported time points
    std::uint64_t mem_guard = 50'000'000ull;  // cap on stored samples (replications x grid)
};

struct EnsembleSummary {
    std::vector<long> times;
    // pointwise across replications at each grid time
    std::vector<double> fair_q025, fair_mean, fair_q975;
    std::vector<double> cum_viol_mean, cum_viol_sd;
    std::vector<double> cost_mean;
    std::vector<double> viol_rate;  // fraction of runs with M_t outside S at exactly t
    // per-replication endpoints (index = replication)
    std::vector<double> final_fairness;
    std::vector<double> final_cost;
    std::vector<long> total_interventions;
    // empirical violation measures over [max(tau,1), T]
    double p_hat = 0.0, p_hat_se = 0.0;
    double e_hat = 0.0, e_hat_se = 0.0;
    long horizon = 0;
    long replications = 0;
    std::uint64_t master_seed = 0;
    bool grid_subsampled = false;
};

namespace sim_detail {

inline std::vector<long> output_grid(long horizon, long burn_in, long grid_max) {
    std::vector<long> grid;
    if (horizon <= grid_max) {
        grid.reserve(static_cast<std::size_t>(horizon));
        for (long t = 1; t <= horizon; ++t) grid.push_back(t);
        return grid;
    }
    // dense early prefix, then geometric spacing out to the horizon
    const long dense = std::min<long>(100, horizon);
    for (long t = 1; t <= dense; ++t) grid.push_back(t);
    const double lo = std::log(static_cast<double>(dense));
    const double hi = std::log(static_cast<double>(horizon));
    const long pts = grid_max - dense;
    for (long i = 1; i <= pts; ++i) {
        grid.push_back(static_cast<long>(std::llround(std::exp(lo + (hi - lo) * static_cast<double>(i) / pts))));
    }
    grid.push_back(std::max<long>(burn_in, 1));
    grid.push_back(horizon);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

/// Linear-interpolation quantile over the finite entries of a column.
inline double quantile(std::vector<double>& scratch, double q) {
    std::erase_if(scratch, [](double v) { return std::isnan(v); });
    if (scratch.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(scratch.begin(), scratch.end());
    const double pos = q * static_cast<double>(scratch.size() - 1);
    const std::size_t i = static_cast<std::size_t>(pos);
    if (i + 1 >= scratch.size()) return scratch.back();
    const double frac = pos - static_cast<double>(i);
    return scratch[i] * (1.0 - frac) + scratch[i + 1] * frac;
}

struct RepTrace {
    std::vector<double> fair;      // M_t at grid times
    std::vector<double> cum_viol;  // violations in [max(tau,1), t]
    std::vector<double> cost;      // nu_t
    std::vector<char> viol_at;     // M_t outside S at exactly t
    double final_fairness = std::numeric_limits<double>::quiet_NaN();
    double final_cost = 0.0;
    long interventions = 0;
    long violations = 0;
    bool any_violation = false;
};

/// Simulates one replication, sampling the summary rows at the grid times.
inline RepTrace simulate_rep(const ExperimentConfig& cfg, const std::vector<long>& grid, std::uint64_t rep) {
    Rng env_rng(derive_key(cfg.master_seed, {rep, 0}));
    Rng shield_rng(derive_key(cfg.master_seed, {rep, 1}));
    ShieldEngine engine(cfg.shield);
    const long window_from = std::max<long>(cfg.target.burn_in, 1);

    RepTrace trace;
    trace.fair.resize(grid.size());
    trace.cum_viol.resize(grid.size());
    trace.cost.resize(grid.size());
    trace.viol_at.resize(grid.size());

    std::size_t gi = 0;
    StepRecord rec;
    for (long t = 1; t <= cfg.horizon; ++t) {
        rec = engine.step(sample_env(cfg.env, t, env_rng), shield_rng.uniform());
        bool violated = false;
        if (t >= window_from && !std::isnan(rec.m) && !cfg.target.running.contains(rec.m)) {
            violated = true;
            trace.violations += 1;
            trace.any_violation = true;
        }
        if (gi < grid.size() && grid[gi] == t) {
            trace.fair[gi] = rec.m;
            trace.cum_viol[gi] = static_cast<double>(trace.violations);
            trace.cost[gi] = rec.nu;
            trace.viol_at[gi] = violated ? 1 : 0;
            ++gi;
        }
    }
    trace.final_fairness = rec.m;
    trace.final_cost = rec.nu;
    trace.interventions = engine.interventions();
    return trace;
}

} // namespace sim_detail

/// Runs the ensemble. Deterministic in the config: per-replication streams
/// are derived from the master seed and the replication index, and the
/// reduction order is fixed.
inline EnsembleSummary run_ensemble(const ExperimentConfig& cfg, int threads = 0) {
    if (cfg.replications < 1 || cfg.horizon < 1) {
        throw std::invalid_argument("run_ensemble: need replications >= 1 and horizon >= 1");
    }
    std::vector<long> grid = sim_detail::output_grid(cfg.horizon, cfg.target.burn_in, cfg.grid_max);
    bool subsampled = false;
    while (static_cast<std::uint64_t>(cfg.replications) * grid.size() > cfg.mem_guard && grid.size() > 2) {
        // halve the grid, keeping the first and the final time
        std::vector<long> thin;
        for (std::size_t i = 0; i < grid.size(); i += 2) thin.push_back(grid[i]);
        if (thin.back() != grid.back()) thin.push_back(grid.back());
        grid = std::move(thin);
        subsampled = true;
    }

    std::vector<sim_detail::RepTrace> traces(static_cast<std::size_t>(cfg.replications));
    parallel_for(
        traces.size(),
        [&](std::size_t rep) { traces[rep] = sim_detail::simulate_rep(cfg, grid, static_cast<std::uint64_t>(rep)); },
        threads);

    EnsembleSummary out;
    out.times = grid;
    out.horizon = cfg.horizon;
    out.replications = cfg.replications;
    out.master_seed = cfg.master_seed;
    out.grid_subsampled = subsampled;
    const std::size_t g = grid.size();
    const double n = static_cast<double>(cfg.replications);
    out.fair_q025.resize(g);
    out.fair_mean.resize(g);
    out.fair_q975.resize(g);
    out.cum_viol_mean.resize(g);
    out.cum_viol_sd.resize(g);
    out.cost_mean.resize(g);
    out.viol_rate.resize(g);

    std::vector<double> column(traces.size());
    for (std::size_t i = 0; i < g; ++i) {
        double fair_sum = 0.0;
        long fair_n = 0;
        double viol_sum = 0.0, viol_sumsq = 0.0, cost_sum = 0.0, rate_sum = 0.0;
        for (std::size_t r = 0; r < traces.size(); ++r) {
            const double m = traces[r].fair[i];
            column[r] = m;
            if (!std::isnan(m)) {
                fair_sum += m;
                ++fair_n;
            }
            viol_sum += traces[r].cum_viol[i];
            viol_sumsq += traces[r].cum_viol[i] * traces[r].cum_viol[i];
            cost_sum += traces[r].cost[i];
            rate_sum += traces[r].viol_at[i];
        }
        out.fair_mean[i] = fair_n > 0 ? fair_sum / static_cast<double>(fair_n) : std::numeric_limits<double>::quiet_NaN();
        std::vector<double> scratch = column;
        out.fair_q025[i] = sim_detail::quantile(scratch, 0.025);
        scratch = column;
        out.fair_q975[i] = sim_detail::quantile(scratch, 0.975);
        out.cum_viol_mean[i] = viol_sum / n;
        const double var = std::max(0.0, viol_sumsq / n - out.cum_viol_mean[i] * out.cum_viol_mean[i]);
        out.cum_viol_sd[i] = std::sqrt(var);
        out.cost_mean[i] = cost_sum / n;
        out.viol_rate[i] = rate_sum / n;
    }

    out.final_fairness.reserve(traces.size());
    out.final_cost.reserve(traces.size());
    out.total_interventions.reserve(traces.size());
    double any_sum = 0.0, count_sum = 0.0, count_sumsq = 0.0;
    for (const auto& tr : traces) {
        out.final_fairness.push_back(tr.final_fairness);
        out.final_cost.push_back(tr.final_cost);
        out.total_interventions.push_back(tr.interventions);
        any_sum += tr.any_violation ? 1.0 : 0.0;
        count_sum += static_cast<double>(tr.violations);
        count_sumsq += static_cast<double>(tr.violations) * static_cast<double>(tr.violations);
    }
    out.p_hat = any_sum / n;
    out.p_hat_se = std::sqrt(std::max(0.0, out.p_hat * (1.0 - out.p_hat)) / n);
    out.e_hat = count_sum / n;
    const double cvar = std::max(0.0, count_sumsq / n - out.e_hat * out.e_hat);
    out.e_hat_se = std::sqrt(cvar / n);
    return out;
}

struct EmpiricalViolations {
    double p_hat = 0.0, p_hat_se = 0.0;
    double e_hat = 0.0, e_hat_se = 0.0;
};

/// Empirical violation measures over [max(tau,1), T] of explicit fairness
/// trajectories (trajectories[r][t-1] = M_t of run r; NaN steps, where the
/// two-group value is undefined, are not counted).
inline EmpiricalViolations empirical_violations(const std::vector<std::vector<double>>& trajectories,
                                                const FairnessTarget& target) {
    if (trajectories.empty()) throw std::invalid_argument("empirical_violations: no trajectories");
    const std::size_t horizon = trajectories.front().size();
    const long window_from = std::max<long>(target.burn_in, 1);
    if (static_cast<long>(horizon) < window_from) {
        throw std::invalid_argument("empirical_violations: trajectories shorter than the burn-in");
    }
    double any_sum = 0.0, count_sum = 0.0, count_sumsq = 0.0;
    for (const auto& traj : trajectories) {
        if (traj.size() != horizon) throw std::invalid_argument("empirical_violations: trajectories must share the horizon");
        long count = 0;
        for (std::size_t i = static_cast<std::size_t>(window_from) - 1; i < horizon; ++i) {
            const double m = traj[i];
            if (!std::isnan(m) && !target.running.contains(m)) ++count;
        }
        any_sum += count > 0 ? 1.0 : 0.0;
        count_sum += static_cast<double>(count);
        count_sumsq += static_cast<double>(count) * static_cast<double>(count);
    }
    const double n = static_cast<double>(trajectories.size());
    EmpiricalViolations out;
    out.p_hat = any_sum / n;
    out.p_hat_se = std::sqrt(std::max(0.0, out.p_hat * (1.0 - out.p_hat)) / n);
    out.e_hat = count_sum / n;
    out.e_hat_se = std::sqrt(std::max(0.0, count_sumsq / n - out.e_hat * out.e_hat) / n);
    return out;
}

struct EngineSpec {
    std::string label;
    ShieldConfig shield;
};

struct ComparisonRow {
    std::string label;
    double final_fairness_mean = 0.0;
    double p_hat = 0.0;
    double e_hat = 0.0;
    double interventions_mean = 0.0;
};

/// Common-random-numbers comparison: every engine sees the same raw streams
/// and the same per-step intervention draws, so per-replication differences
/// are attributable to the shields alone.
struct Comparison {
    std::vector<ComparisonRow> rows;
    std::vector<std::vector<double>> final_fairness;   // [engine][replication]
    std::vector<std::vector<long>> interventions;      // [engine][replication]
};

inline Comparison compare_engines(const EnvModel& env, const FairnessTarget& target,
                                  const std::vector<EngineSpec>& engines, long horizon, long replications,
                                  std::uint64_t master_seed, int threads = 0) {
    if (engines.empty()) throw std::invalid_argument("compare_engines: no engines");
    const std::size_t k = engines.size();
    const long window_from = std::max<long>(target.burn_in, 1);

    struct RepRow {
        std::vector<double> final_fairness;
        std::vector<long> interventions;
        std::vector<long> violations;
        std::vector<char> any;
    };
    std::vector<RepRow> reps(static_cast<std::size_t>(replications));

    parallel_for(
        reps.size(),
        [&](std::size_t rep) {
            const auto xs = sample_stream(env, horizon, derive_key(master_seed, {rep, 0}));
            const std::uint64_t shield_key = derive_key(master_seed, {rep, 1});
            RepRow row;
            row.final_fairness.resize(k);
            row.interventions.resize(k);
            row.violations.assign(k, 0);
            row.any.assign(k, 0);
            for (std::size_t e = 0; e < k; ++e) {
                const auto records = run_stream(engines[e].shield, xs, shield_key);
                for (const auto& r : records) {
                    if (r.t >= window_from && !std::isnan(r.m) && !target.running.contains(r.m)) {
                        row.violations[e] += 1;
                        row.any[e] = 1;
                    }
                }
                row.final_fairness[e] = records.back().m;
                row.interventions[e] = std::count_if(records.begin(), records.end(),
                                                     [](const StepRecord& r) { return r.y != 0; });
            }
            reps[rep] = std::move(row);
        },
        threads);

    Comparison out;
    out.final_fairness.assign(k, {});
    out.interventions.assign(k, {});
    const double n = static_cast<double>(replications);
    for (std::size_t e = 0; e < k; ++e) {
        ComparisonRow row;
        row.label = engines[e].label;
        double ff = 0.0, viol = 0.0, any = 0.0, iv = 0.0;
        for (const auto& rep : reps) {
            out.final_fairness[e].push_back(rep.final_fairness[e]);
            out.interventions[e].push_back(rep.interventions[e]);
            ff += rep.final_fairness[e];
            viol += static_cast<double>(rep.violations[e]);
            any += rep.any[e];
            iv += static_cast<double>(rep.interventions[e]);
        }
        row.final_fairness_mean = ff / n;
        row.p_hat = any / n;
        row.e_hat = viol / n;
        row.interventions_mean = iv / n;
        out.rows.push_back(std::move(row));
    }
    return out;
}

} // namespace fairshield
