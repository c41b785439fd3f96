#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "fairshield/energy.hpp"
#include "fairshield/env.hpp"
#include "fairshield/fairness.hpp"
#include "fairshield/rng.hpp"

namespace fairshield {

/// Full account of one shielded step: raw decision x, intervention indicator
/// y, emitted decision z = x XOR y, the fairness value m after emitting z
/// (NaN while the two-group value is undefined), and the running intervention
/// cost nu.
struct StepRecord {
    long t = 0;
    std::optional<Group> group;
    int x = 0;
    int y = 0;
    int z = 0;
    double m = 0.0;
    double nu = 0.0;
};

/// Single-group energy shield with a fixed energy function. Also covers the
/// drifting-bias setting: the engine never reads the decision bias, so only
/// the simulator changes there.
struct KnownShield {
    EnergyFunction zeta;
};

/// Two-group energy shield; the energy function lives on [-1,1].
struct TwoGroupShield {
    EnergyFunction zeta;
};

/// Unknown fixed bias: the engine keeps a smoothed estimate of p from the raw
/// decisions and re-derives a calibrated energy function every step.
struct AdaptiveShield {
    double mu_star;
    double sigma = 128.0;
};

/// Deterministic baseline from the classic shielding rule: flip exactly when
/// keeping the raw decision would push the running mean outside the target
/// while flipping keeps it inside.
struct NaiveShield {
    Interval running;
    long burn_in = 0;
};

/// Never intervenes.
struct IdleShield {};

using ShieldConfig = std::variant<KnownShield, TwoGroupShield, AdaptiveShield, NaiveShield, IdleShield>;

inline bool shield_two_group(const ShieldConfig& cfg) { return std::holds_alternative<TwoGroupShield>(cfg); }

/// Sequential per-stream engine. One uniform draw is consumed per step in
/// every mode, which keeps paired runs aligned across engines; distinct
/// engines never share state.
class ShieldEngine {
public:
    explicit ShieldEngine(ShieldConfig cfg) : cfg_(std::move(cfg)) {
        if (const auto* tg = std::get_if<TwoGroupShield>(&cfg_)) {
            if (tg->zeta.domain() != FairnessDomain::Signed) {
                throw std::invalid_argument("ShieldEngine: two-group shield needs a signed-domain energy function");
            }
        }
        if (const auto* k = std::get_if<KnownShield>(&cfg_)) {
            if (k->zeta.domain() != FairnessDomain::Unit) {
                throw std::invalid_argument("ShieldEngine: single-group shield needs a unit-domain energy function");
            }
        }
    }

    bool two_group() const { return shield_two_group(cfg_); }
    long time() const { return two_group() ? pair_state_.t() : mean_state_.t; }
    long interventions() const { return interventions_; }

    /// Fairness value after the decisions emitted so far; empty while the
    /// two-group value is undefined or before the first decision.
    std::optional<double> fairness() const {
        if (two_group()) return pair_state_.value();
        if (mean_state_.t == 0) return std::nullopt;
        return mean_state_.mean();
    }

    /// Smoothed estimate (1 + sum x_i) / (2 + t) of the raw decision bias;
    /// only meaningful in adaptive mode.
    double p_hat() const {
        return (1.0 + static_cast<double>(raw_ones_)) / (2.0 + static_cast<double>(raw_seen_));
    }

    /// Advances the engine by one decision. `u` is the per-step uniform draw;
    /// it is consumed in every mode.
    StepRecord step(const RawInput& in, double u) {
        return std::visit([&](const auto& s) { return step_impl(s, in, u); }, cfg_);
    }

private:
    template <typename S>
    StepRecord step_impl(const S& shield, const RawInput& in, double u) {
        if constexpr (std::is_same_v<S, TwoGroupShield>) {
            if (!in.group) throw std::invalid_argument("ShieldEngine: two-group mode needs a group tag");
            return finish_two_group(decide_two_group(shield.zeta, *in.group, in.bit, u), *in.group, in.bit);
        } else {
            if (in.group) throw std::invalid_argument("ShieldEngine: single-group mode got a group tag");
            int y = 0;
            if constexpr (std::is_same_v<S, KnownShield>) {
                y = decide_energy(shield.zeta, in.bit, u);
            } else if constexpr (std::is_same_v<S, AdaptiveShield>) {
                raw_seen_ += 1;
                raw_ones_ += (in.bit != 0);
                const EnergyFunction zeta = calibrated_exponential(p_hat(), shield.mu_star, shield.sigma);
                y = decide_energy(zeta, in.bit, u);
            } else if constexpr (std::is_same_v<S, NaiveShield>) {
                y = decide_naive(shield, in.bit);
            } else {
                y = 0;  // idle
            }
            return finish_single(in.bit, y);
        }
    }

    /// Energy rule: below (or at) the pivot the shield favors 1s and flips 0s
    /// with probability zeta(mu); above the pivot it favors 0s and flips 1s.
    /// The very first decision is released unshielded, matching the process
    /// convention that its bias is the raw p.
    int decide_energy(const EnergyFunction& zeta, int x, double u) const {
        if (mean_state_.t == 0) return 0;
        const double mu = mean_state_.mean();
        const bool favored = mu <= zeta.pivot() ? x == 1 : x == 0;
        if (favored) return 0;
        return u < zeta(mu) ? 1 : 0;
    }

    /// Two-group rule: below the pivot the shield pushes the disparity up
    /// (favors accepting A and rejecting B); above it pushes down. The
    /// unfavorable raw decision is flipped with probability zeta(M). Idles
    /// until both groups have been observed.
    int decide_two_group(const EnergyFunction& zeta, Group g, int x, double u) const {
        const auto m = pair_state_.value();
        if (!m) return 0;
        const bool push_up = *m <= zeta.pivot();
        const int favored_bit = (g == Group::A) == push_up ? 1 : 0;
        if (x == favored_bit) return 0;
        return u < zeta(*m) ? 1 : 0;
    }

    int decide_naive(const NaiveShield& shield, int x) const {
        const long t1 = mean_state_.t + 1;
        if (t1 < shield.burn_in) return 0;
        const double keep = static_cast<double>(mean_state_.ones + x) / static_cast<double>(t1);
        const double flip = static_cast<double>(mean_state_.ones + (1 - x)) / static_cast<double>(t1);
        const bool keep_in = shield.running.contains(keep);
        const bool flip_in = shield.running.contains(flip);
        if (keep_in) return 0;
        if (flip_in) return 1;
        return shield.running.distance(flip) < shield.running.distance(keep) ? 1 : 0;
    }

    StepRecord finish_single(int x, int y) {
        const int z = x ^ y;
        mean_state_ = updated(mean_state_, z);
        interventions_ += y;
        StepRecord rec;
        rec.t = mean_state_.t;
        rec.x = x;
        rec.y = y;
        rec.z = z;
        rec.m = mean_state_.mean();
        rec.nu = static_cast<double>(interventions_) / static_cast<double>(rec.t);
        return rec;
    }

    StepRecord finish_two_group(int y, Group g, int x) {
        const int z = x ^ y;
        pair_state_ = updated(pair_state_, g, z);
        interventions_ += y;
        StepRecord rec;
        rec.t = pair_state_.t();
        rec.group = g;
        rec.x = x;
        rec.y = y;
        rec.z = z;
        const auto m = pair_state_.value();
        rec.m = m ? *m : std::numeric_limits<double>::quiet_NaN();
        rec.nu = static_cast<double>(interventions_) / static_cast<double>(rec.t);
        return rec;
    }

    ShieldConfig cfg_;
    RunningMeanState mean_state_;
    TwoGroupState pair_state_;
    long interventions_ = 0;
    long raw_seen_ = 0;
    long raw_ones_ = 0;
};

/// Runs a fresh engine over a recorded raw stream. Deterministic in
/// (config, xs, seed); exactly one uniform is drawn per input.
inline std::vector<StepRecord> run_stream(const ShieldConfig& cfg, std::span<const RawInput> xs,
                                          std::uint64_t seed) {
    ShieldEngine engine(cfg);
    Rng rng(seed);
    std::vector<StepRecord> out;
    out.reserve(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const RawInput& in = xs[i];
        const bool want_group = engine.two_group();
        if (want_group != in.group.has_value()) {
            throw std::invalid_argument("run_stream: malformed input row at index " + std::to_string(i));
        }
        out.push_back(engine.step(in, rng.uniform()));
    }
    return out;
}

} // namespace fairshield
