#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "fairshield/fairness.hpp"
#include "fairshield/rng.hpp"

namespace fairshield {

/// One raw decision entering the shield: a bit, with a group tag in the
/// two-group setting.
struct RawInput {
    std::optional<Group> group;
    int bit = 0;
};

struct SingleGroupEnv {
    double p;
};

struct TwoGroupEnv {
    double r_a;
    double p_a;
    double p_b;
};

/// Fixed bias the shield is not told about. Generation is identical to
/// SingleGroupEnv; the distinction is contractual: engines driven by this
/// model must estimate the bias online.
struct UnknownPEnv {
    double p;
};

/// Drifting bias p_t = base + amplitude * sin(2 pi t / period), clamped to
/// [0,1].
struct SinusoidalPEnv {
    double base = 0.65;
    double amplitude = 0.1;
    double period = 2000.0;

    double p_at(long t) const {
        const double p = base + amplitude * std::sin(2.0 * M_PI * static_cast<double>(t) / period);
        return std::clamp(p, 0.0, 1.0);
    }
};

using EnvModel = std::variant<SingleGroupEnv, TwoGroupEnv, UnknownPEnv, SinusoidalPEnv>;

inline bool env_two_group(const EnvModel& env) { return std::holds_alternative<TwoGroupEnv>(env); }

/// Draws the t-th raw decision (t is 1-based). Consumes a fixed number of
/// uniforms per call for a given model type, so paired comparisons stay
/// aligned.
inline RawInput sample_env(const EnvModel& env, long t, Rng& rng) {
    return std::visit(
        [&](const auto& e) -> RawInput {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, SingleGroupEnv>) {
                return {std::nullopt, rng.bernoulli(e.p) ? 1 : 0};
            } else if constexpr (std::is_same_v<T, UnknownPEnv>) {
                return {std::nullopt, rng.bernoulli(e.p) ? 1 : 0};
            } else if constexpr (std::is_same_v<T, SinusoidalPEnv>) {
                return {std::nullopt, rng.bernoulli(e.p_at(t)) ? 1 : 0};
            } else {
                const Group g = rng.bernoulli(e.r_a) ? Group::A : Group::B;
                const double p = g == Group::A ? e.p_a : e.p_b;
                return {g, rng.bernoulli(p) ? 1 : 0};
            }
        },
        env);
}

inline std::vector<RawInput> sample_stream(const EnvModel& env, long horizon, std::uint64_t key) {
    Rng rng(key);
    std::vector<RawInput> xs;
    xs.reserve(static_cast<std::size_t>(horizon));
    for (long t = 1; t <= horizon; ++t) xs.push_back(sample_env(env, t, rng));
    return xs;
}

} // namespace fairshield
