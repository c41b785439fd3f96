#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "fairshield/analysis.hpp"
#include "fairshield/errors.hpp"
#include "fairshield/fairness.hpp"
#include "fairshield/parallel.hpp"
#include "fairshield/rng.hpp"

namespace fairshield {

enum class Measure { Probability, Expectation };

/// Finite-horizon evaluation problem on the acyclic decision chain: states
/// (t, c) with c accepted decisions after t steps, transitions with bias p at
/// the first step and f(c/t) afterwards. gamma(t,c) = 1[c/t outside S] is
/// scored for t in [max(tau,1), T].
struct ChainSpec {
    CharacteristicModel model;
    FairnessTarget target;
    long horizon;
    Measure measure;
    std::uint64_t max_states = 2'000'000'000ull;
    bool keep_table = false;

    ChainSpec(CharacteristicModel m, FairnessTarget tgt, long t, Measure meas)
        : model(std::move(m)), target(std::move(tgt)), horizon(t), measure(meas) {
        if (horizon < 1) throw std::invalid_argument("ChainSpec: horizon must be >= 1");
        if (target.burn_in > horizon) throw std::invalid_argument("ChainSpec: burn-in exceeds the horizon");
    }
};

struct DPResult {
    double value = 0.0;
    std::uint64_t states = 0;
    double wall_ms = 0.0;
    bool exact = true;
    double std_error = 0.0;  // only for the Monte Carlo fallback
    long mc_runs = 0;
    std::vector<std::tuple<long, long, double>> table;  // (t, c, V) rows when requested
};

/// Exact violation measure for the single-group chain by backward induction
/// over time layers. The probability recursion short-circuits at violating
/// states; values match exhaustive path enumeration to full double precision.
inline DPResult dp_value(const ChainSpec& spec, int threads = 0) {
    if (spec.model.two_group()) throw std::invalid_argument("dp_value: single-group models only");
    const auto start = std::chrono::steady_clock::now();
    const long T = spec.horizon;
    const std::uint64_t states = static_cast<std::uint64_t>(T + 1) * static_cast<std::uint64_t>(T + 2) / 2;
    if (states > spec.max_states) {
        throw ResourceLimitError("dp_value: " + std::to_string(states) + " states exceed the budget of " +
                                 std::to_string(spec.max_states));
    }

    const long window_from = std::max<long>(spec.target.burn_in, 1);
    const Interval s = spec.target.running;
    const double p = std::get<SingleGroupSetting>(spec.model.setting).p;
    const bool prob = spec.measure == Measure::Probability;

    DPResult out;
    out.states = states;
    if (spec.keep_table) out.table.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(states, 1u << 24)));

    std::vector<double> next(static_cast<std::size_t>(T) + 2, 0.0);
    std::vector<double> cur(static_cast<std::size_t>(T) + 2, 0.0);
    for (long t = T; t >= 0; --t) {
        cur.assign(static_cast<std::size_t>(t) + 1, 0.0);
        auto eval_state = [&](std::size_t ci) {
            const long c = static_cast<long>(ci);
            const double mu = t == 0 ? 0.0 : static_cast<double>(c) / static_cast<double>(t);
            const bool scored = t >= window_from;
            const double gamma = (scored && !s.contains(mu)) ? 1.0 : 0.0;
            double v;
            if (t == T) {
                v = gamma;
            } else if (prob && gamma == 1.0) {
                v = 1.0;  // a violation already happened; successors are irrelevant
            } else {
                const double q = t == 0 ? p : spec.model.f(mu);
                const double cont = q * next[ci + 1] + (1.0 - q) * next[ci];
                v = prob ? std::max(gamma, cont) : gamma + cont;
            }
            cur[ci] = v;
        };
        if (threads != 1 && t > 8192) {
            parallel_for(static_cast<std::size_t>(t) + 1, eval_state, threads);
        } else {
            for (std::size_t ci = 0; ci <= static_cast<std::size_t>(t); ++ci) eval_state(ci);
        }
        if (spec.keep_table) {
            for (long c = 0; c <= t; ++c) out.table.emplace_back(t, c, cur[static_cast<std::size_t>(c)]);
        }
        std::swap(cur, next);
    }
    out.value = next[0];
    out.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return out;
}

namespace dp_detail {

/// z-acceptance bias conditioned on group and current fairness value; the
/// shield idles (raw bias) while the fairness value is undefined.
inline double two_group_bias(const CharacteristicModel& model, Group g, bool defined, double m) {
    const auto& tg = std::get<TwoGroupSetting>(model.setting);
    const double pg = g == Group::A ? tg.p_a : tg.p_b;
    if (!defined) return pg;
    const double z = model.zeta(m);
    const bool push_up = m <= model.pivot();
    const bool favors_one = (g == Group::A) == push_up;
    return favors_one ? pg + (1.0 - pg) * z : pg * (1.0 - z);
}

/// Flat index for two-group layer t: states (n_a, s_a, s_b) with
/// s_a <= n_a and s_b <= t - n_a.
struct TwoGroupLayer {
    long t;
    std::vector<std::size_t> offset;  // per n_a
    std::vector<double> values;

    explicit TwoGroupLayer(long time) : t(time), offset(static_cast<std::size_t>(time) + 2, 0) {
        std::size_t total = 0;
        for (long na = 0; na <= t; ++na) {
            offset[static_cast<std::size_t>(na)] = total;
            total += static_cast<std::size_t>(na + 1) * static_cast<std::size_t>(t - na + 1);
        }
        offset[static_cast<std::size_t>(t) + 1] = total;
        values.assign(total, 0.0);
    }

    std::size_t index(long na, long sa, long sb) const {
        const long nb = t - na;
        return offset[static_cast<std::size_t>(na)] +
               static_cast<std::size_t>(sa) * static_cast<std::size_t>(nb + 1) + static_cast<std::size_t>(sb);
    }

    std::size_t size() const { return values.size(); }
};

} // namespace dp_detail

struct TwoGroupDPOptions {
    long exact_limit = 150;        // largest horizon for the exact state-space sweep
    long mc_runs = 100000;         // replications for the fallback estimate
    std::uint64_t mc_seed = 0x5EEDBA5Eull;
    std::uint64_t max_states = 400'000'000ull;
};

/// Violation measure for the two-group chain. Exact backward induction over
/// states (t, N_A, S_A, S_B) while the horizon fits the budget; otherwise a
/// seeded Monte Carlo estimate with its standard error.
inline DPResult dp_value_two_group(const CharacteristicModel& model, const FairnessTarget& target, long horizon,
                                   Measure measure, const TwoGroupDPOptions& opts = {}) {
    if (!model.two_group()) throw std::invalid_argument("dp_value_two_group: two-group models only");
    if (target.domain != FairnessDomain::Signed) throw std::invalid_argument("dp_value_two_group: signed-domain target expected");
    const auto start = std::chrono::steady_clock::now();
    DPResult out;
    if (horizon <= 0) return out;

    const long window_from = std::max<long>(target.burn_in, 1);
    const Interval s = target.running;
    const auto& tg = std::get<TwoGroupSetting>(model.setting);
    const bool prob = measure == Measure::Probability;

    if (horizon <= opts.exact_limit) {
        using dp_detail::TwoGroupLayer;
        TwoGroupLayer next(horizon);
        std::uint64_t visited = next.size();
        for (long t = horizon; t >= 0; --t) {
            TwoGroupLayer cur(t);
            visited += cur.size();
            if (visited > opts.max_states) {
                throw ResourceLimitError("dp_value_two_group: state budget of " + std::to_string(opts.max_states) +
                                         " exceeded");
            }
            for (long na = 0; na <= t; ++na) {
                const long nb = t - na;
                for (long sa = 0; sa <= na; ++sa) {
                    for (long sb = 0; sb <= nb; ++sb) {
                        const bool defined = na >= 1 && nb >= 1;
                        const double m = defined ? static_cast<double>(sa) / static_cast<double>(na) -
                                                       static_cast<double>(sb) / static_cast<double>(nb)
                                                 : 0.0;
                        const bool scored = t >= window_from && defined;
                        const double gamma = (scored && !s.contains(m)) ? 1.0 : 0.0;
                        double v;
                        if (t == horizon) {
                            v = gamma;
                        } else if (prob && gamma == 1.0) {
                            v = 1.0;
                        } else {
                            const double qa = dp_detail::two_group_bias(model, Group::A, defined, m);
                            const double qb = dp_detail::two_group_bias(model, Group::B, defined, m);
                            const double va = qa * next.values[next.index(na + 1, sa + 1, sb)] +
                                              (1.0 - qa) * next.values[next.index(na + 1, sa, sb)];
                            const double vb = qb * next.values[next.index(na, sa, sb + 1)] +
                                              (1.0 - qb) * next.values[next.index(na, sa, sb)];
                            const double cont = tg.r_a * va + (1.0 - tg.r_a) * vb;
                            v = prob ? std::max(gamma, cont) : gamma + cont;
                        }
                        cur.values[cur.index(na, sa, sb)] = v;
                    }
                }
            }
            next = std::move(cur);
        }
        out.value = next.values[0];
        out.states = visited;
        out.exact = true;
    } else {
        // Monte Carlo fallback over the z-bias formulation; the intervention
        // draw is already marginalized into the conditional acceptance bias.
        double sum = 0.0, sumsq = 0.0;
        for (long rep = 0; rep < opts.mc_runs; ++rep) {
            Rng rng(derive_key(opts.mc_seed, {static_cast<std::uint64_t>(rep)}));
            TwoGroupState st;
            double stat = 0.0;
            for (long t = 1; t <= horizon; ++t) {
                const Group g = rng.bernoulli(tg.r_a) ? Group::A : Group::B;
                const auto m = st.value();
                const double q = dp_detail::two_group_bias(model, g, m.has_value(), m.value_or(0.0));
                const int z = rng.bernoulli(q) ? 1 : 0;
                st = updated(st, g, z);
                if (t >= window_from) {
                    const auto m2 = st.value();
                    if (m2 && !s.contains(*m2)) {
                        if (prob) {
                            stat = 1.0;
                            break;
                        }
                        stat += 1.0;
                    }
                }
            }
            sum += stat;
            sumsq += stat * stat;
        }
        const double n = static_cast<double>(opts.mc_runs);
        out.value = sum / n;
        const double var = std::max(0.0, sumsq / n - out.value * out.value);
        out.std_error = std::sqrt(var / n);
        out.exact = false;
        out.mc_runs = opts.mc_runs;
    }
    out.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return out;
}

/// Exact violation measure by summing over every decision path; the test
/// oracle for both DP routines. Kept deliberately independent of the DP code
/// paths, and accumulated in extended precision so the oracle noise stays
/// well below the 1e-12 agreement the DP is held to.
inline double enumerate_bruteforce(const CharacteristicModel& model, const FairnessTarget& target, long horizon,
                                   Measure measure) {
    const long window_from = std::max<long>(target.burn_in, 1);
    const Interval s = target.running;
    const bool prob = measure == Measure::Probability;

    if (!model.two_group()) {
        if (horizon > 20) throw ResourceLimitError("enumerate_bruteforce: single-group horizon capped at 20");
        const double p = std::get<SingleGroupSetting>(model.setting).p;
        long double total = 0.0L;
        // Depth-first over decision paths, carrying the path probability.
        auto walk = [&](auto&& self, long t, long ones, long double prob_path, double count, bool violated) -> void {
            if (t == horizon) {
                total += prob_path * (prob ? (violated ? 1.0L : 0.0L) : static_cast<long double>(count));
                return;
            }
            const double mu = t == 0 ? 0.0 : static_cast<double>(ones) / static_cast<double>(t);
            const double q = t == 0 ? p : model.f(mu);
            for (int z = 0; z <= 1; ++z) {
                const double pr = z == 1 ? q : 1.0 - q;
                if (pr == 0.0) continue;
                const long t2 = t + 1;
                const long ones2 = ones + z;
                const double mu2 = static_cast<double>(ones2) / static_cast<double>(t2);
                const bool viol = t2 >= window_from && !s.contains(mu2);
                self(self, t2, ones2, prob_path * pr, count + (viol ? 1.0 : 0.0), violated || viol);
            }
        };
        walk(walk, 0, 0, 1.0L, 0.0, false);
        return static_cast<double>(total);
    }

    if (horizon > 12) throw ResourceLimitError("enumerate_bruteforce: two-group horizon capped at 12");
    const auto& tg = std::get<TwoGroupSetting>(model.setting);
    long double total = 0.0L;
    auto walk = [&](auto&& self, long t, TwoGroupState st, long double prob_path, double count, bool violated) -> void {
        if (t == horizon) {
            total += prob_path * (prob ? (violated ? 1.0L : 0.0L) : static_cast<long double>(count));
            return;
        }
        for (int gi = 0; gi <= 1; ++gi) {
            const Group g = gi == 0 ? Group::A : Group::B;
            const double pg = gi == 0 ? tg.r_a : 1.0 - tg.r_a;
            if (pg == 0.0) continue;
            const auto m = st.value();
            const double q = dp_detail::two_group_bias(model, g, m.has_value(), m.value_or(0.0));
            for (int z = 0; z <= 1; ++z) {
                const double pr = pg * (z == 1 ? q : 1.0 - q);
                if (pr == 0.0) continue;
                TwoGroupState st2 = updated(st, g, z);
                const auto m2 = st2.value();
                const bool viol = (t + 1) >= window_from && m2.has_value() && !s.contains(*m2);
                self(self, t + 1, st2, prob_path * pr, count + (viol ? 1.0 : 0.0), violated || viol);
            }
        }
    };
    walk(walk, 0, TwoGroupState{}, 1.0L, 0.0, false);
    return static_cast<double>(total);
}

} // namespace fairshield
