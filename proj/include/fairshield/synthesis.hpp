#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fairshield/analysis.hpp"
#include "fairshield/energy.hpp"
#include "fairshield/errors.hpp"
#include "fairshield/exactdp.hpp"
#include "fairshield/parallel.hpp"

namespace fairshield {

/// Least-invasive-shield search over the steepness-ordered monotonic family
/// built from the setting parameters and the fairness target. The violation
/// condition of a candidate is an exact DP prefix over [tau, T_DP] plus the
/// analytic geometric tail beyond T_DP.
struct SynthesisInstance {
    Measure measure;
    Setting setting;
    FairnessTarget target;
    double delta;
    double epsilon;
    std::optional<double> eta;  // group-count failure split; required iff two-group
    double index_tol = 1e-6;
    long t_dp_cap = 1'000'000;
    int probe_points = 20;
    TwoGroupDPOptions dp_options{};
    int threads = 0;

    bool two_group() const { return std::holds_alternative<TwoGroupSetting>(setting); }

    EnergyFunction family(double r) const {
        const FairnessDomain dom = setting_domain(setting);
        const double bias = std::holds_alternative<SingleGroupSetting>(setting)
                                ? std::get<SingleGroupSetting>(setting).p
                                : std::get<TwoGroupSetting>(setting).d();
        return EnergyFunction::monotonic(r, bias, target.running, target.limit, dom);
    }

    void check() const {
        if (!(delta > 0.0)) throw std::invalid_argument("SynthesisInstance: delta must be > 0");
        if (!(epsilon > 0.0)) throw std::invalid_argument("SynthesisInstance: epsilon must be > 0");
        if (!(index_tol > 0.0 && index_tol < 0.5)) throw std::invalid_argument("SynthesisInstance: bad index_tol");
        if (two_group()) {
            if (!eta) throw std::invalid_argument("SynthesisInstance: two-group synthesis needs eta");
            if (!(*eta > 0.0 && *eta < epsilon)) {
                throw std::invalid_argument("SynthesisInstance: need 0 < eta < epsilon for the tail split");
            }
        }
    }
};

struct SynthesisOutcome {
    bool found = false;
    double index = 0.0;
    std::optional<EnergyFunction> zeta;
    double condition = 0.0;
    long t_dp = 0;
    int iterations = 0;  // binary-search steps (condition calls beyond the bracket setup)
};

namespace synth_detail {

/// Tail parameters that are valid for every member of the family at once:
/// the fixpoint ranges over the limit set, so the per-side distance to the
/// running boundary is smallest at the matching limit endpoint.
inline TailBoundParams conservative_params(const SynthesisInstance& inst) {
    const Interval s = inst.target.running;
    const Interval l = inst.target.limit;
    if (!(l.lo > s.lo && l.hi < s.hi)) {
        throw std::domain_error("synthesis: degenerate rate, the limit set must be strictly inside the running target");
    }
    TailBoundParams p;
    p.dist_lo = l.lo - s.lo;
    p.dist_hi = s.hi - l.hi;
    if (inst.two_group()) {
        const auto& tg = std::get<TwoGroupSetting>(inst.setting);
        p.k = tg.r_min() / 32.0;
        p.burn_in = two_group_tau(*inst.eta, tg.r_min());
        p.eta = *inst.eta;
    } else {
        p.k = 1.0 / 32.0;
        p.burn_in = ceil_guarded(4.0 / std::min(p.dist_lo, p.dist_hi));
    }
    p.rate_lo = std::exp(-p.k * p.dist_lo * p.dist_lo);
    p.rate_hi = std::exp(-p.k * p.dist_hi * p.dist_hi);
    return p;
}

inline double bound_at(long t, const TailBoundParams& p) {
    const double td = static_cast<double>(t);
    return std::pow(p.rate_lo, td) / (1.0 - p.rate_lo) + std::pow(p.rate_hi, td) / (1.0 - p.rate_hi);
}

} // namespace synth_detail

/// Smallest horizon from which the analytic tail is below the tolerance:
/// min { t >= burn-in : Bound(t) <= eps } for a single group, and
/// min { t >= burn-in : Bound(t) <= eps - eta } with the eta split for two
/// groups. Bound uses rates valid for the whole candidate family.
inline long choose_t_dp(const SynthesisInstance& inst) {
    inst.check();
    const TailBoundParams params = synth_detail::conservative_params(inst);
    const double budget = inst.two_group() ? inst.epsilon - *inst.eta : inst.epsilon;
    long start = std::max<long>({params.burn_in, inst.target.burn_in, 1});
    if (synth_detail::bound_at(start, params) <= budget) return start;
    if (synth_detail::bound_at(inst.t_dp_cap, params) > budget) {
        throw ResourceLimitError("choose_t_dp: Bound(t) stays above the tolerance up to the cap of " +
                                 std::to_string(inst.t_dp_cap) + "; reachable minimum " +
                                 std::to_string(synth_detail::bound_at(inst.t_dp_cap, params)));
    }
    long lo = start, hi = inst.t_dp_cap;  // Bound(lo) > budget >= Bound(hi)
    while (hi - lo > 1) {
        const long mid = lo + (hi - lo) / 2;
        if (synth_detail::bound_at(mid, params) <= budget) hi = mid; else lo = mid;
    }
    return hi;
}

/// Violation value of one candidate: exact DP prefix over [tau, T_DP], plus
/// the geometric tail from T_DP + 1 evaluated at the candidate's own
/// fixpoint, plus eta once in the two-group setting. Probability values are
/// clamped to 1 (union bound). A fixpoint outside the running target makes
/// the tail vacuous: the probability condition saturates at 1 and the
/// expectation condition is unbounded.
inline double condition_value(const EnergyFunction& zeta, long t_dp, const SynthesisInstance& inst) {
    CharacteristicModel model(inst.setting, zeta);
    const double mu_star = find_fixpoint(model);
    if (!inst.target.running.strictly_contains(mu_star)) {
        return inst.measure == Measure::Probability ? 1.0 : std::numeric_limits<double>::infinity();
    }

    double prefix;
    if (inst.two_group()) {
        const DPResult dp = dp_value_two_group(model, inst.target, t_dp, inst.measure, inst.dp_options);
        prefix = dp.value + (dp.exact ? 0.0 : 3.0 * dp.std_error);
    } else {
        prefix = dp_value(ChainSpec(model, inst.target, t_dp, inst.measure)).value;
    }

    TailBoundParams params;
    if (inst.two_group()) {
        const auto& tg = std::get<TwoGroupSetting>(inst.setting);
        params = TailBoundParams::two_group(inst.target.running, mu_star, tg.r_min(), *inst.eta);
    } else {
        params = TailBoundParams::single_group(inst.target.running, mu_star);
    }
    double d = prefix + tail_sum(t_dp + 1, params);
    if (inst.two_group()) d += *inst.eta;
    if (inst.measure == Measure::Probability) d = std::min(1.0, d);
    return d;
}

namespace synth_detail {

/// Family-member condition with the limit-fairness guard: a candidate whose
/// fixpoint leaves the limit set cannot satisfy problem condition (i), so the
/// search rejects it outright. The built-in monotonic family always passes.
inline double family_condition(double r, long t_dp, const SynthesisInstance& inst) {
    const EnergyFunction zeta = inst.family(r);
    const double mu_star = find_fixpoint(CharacteristicModel(inst.setting, zeta));
    if (inst.target.limit.distance(mu_star) > 1e-6) {
        throw std::logic_error("synthesize: family member r=" + std::to_string(r) + " has fixpoint " +
                               std::to_string(mu_star) + " outside the limit set");
    }
    return condition_value(zeta, t_dp, inst);
}

} // namespace synth_detail

/// Binary search for the least-steep family member whose condition value
/// meets the budget delta. Returns Fail iff even the steepest member
/// exceeds delta. Before the search, the condition is probed on a grid and
/// required to be non-increasing in the index; a violation aborts with a
/// diagnostic, since the search would be unsound.
inline SynthesisOutcome synthesize(const SynthesisInstance& inst) {
    inst.check();
    SynthesisOutcome out;
    out.t_dp = choose_t_dp(inst);

    const double r_lo = inst.index_tol;
    const double r_hi = 1.0 - inst.index_tol;

    // Fail fast when even the steepest member misses the budget.
    const double d_steepest = synth_detail::family_condition(r_hi, out.t_dp, inst);
    if (d_steepest > inst.delta) {
        out.found = false;
        out.index = r_hi;
        out.condition = d_steepest;
        return out;
    }

    // Probe grid: orientation check and initial bracket.
    const int probes = std::max(2, inst.probe_points);
    std::vector<double> probe_r(static_cast<std::size_t>(probes));
    std::vector<double> probe_d(static_cast<std::size_t>(probes));
    for (int i = 0; i < probes; ++i) {
        probe_r[static_cast<std::size_t>(i)] = r_lo + (r_hi - r_lo) * static_cast<double>(i) / (probes - 1);
    }
    probe_d.back() = d_steepest;
    parallel_for(
        probe_r.size() - 1,
        [&](std::size_t i) { probe_d[i] = synth_detail::family_condition(probe_r[i], out.t_dp, inst); },
        inst.threads);
    for (std::size_t i = 1; i < probe_d.size(); ++i) {
        if (probe_d[i] > probe_d[i - 1] + 1e-9) {
            throw std::logic_error("synthesize: condition is not non-increasing in the family index (probe " +
                                   std::to_string(probe_r[i - 1]) + " -> " + std::to_string(probe_r[i]) +
                                   " rises " + std::to_string(probe_d[i - 1]) + " -> " + std::to_string(probe_d[i]) +
                                   "); binary search would be unsound");
        }
    }
    if (probe_d.front() <= inst.delta) {  // every member is valid
        out.found = true;
        out.index = r_lo;
        out.zeta = inst.family(r_lo);
        out.condition = probe_d.front();
        return out;
    }

    // Bracket the threshold between adjacent probes: d(l) > delta >= d(u).
    std::size_t cut = 1;
    while (probe_d[cut] > inst.delta) ++cut;
    double l = probe_r[cut - 1], u = probe_r[cut];
    double d_u = probe_d[cut];

    while (u - l >= inst.index_tol) {
        const double m = 0.5 * (l + u);
        const double d = synth_detail::family_condition(m, out.t_dp, inst);
        ++out.iterations;
        if (std::abs(d - inst.delta) < inst.epsilon) {
            out.found = true;
            out.index = m;
            out.zeta = inst.family(m);
            out.condition = d;
            return out;
        }
        if (d <= inst.delta) {
            u = m;
            d_u = d;
        } else {
            l = m;
        }
    }
    out.found = true;
    out.index = u;
    out.zeta = inst.family(u);
    out.condition = d_u;
    return out;
}

} // namespace fairshield
