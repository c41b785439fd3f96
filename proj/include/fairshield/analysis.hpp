#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <variant>

#include "fairshield/energy.hpp"
#include "fairshield/fairness.hpp"

namespace fairshield {

struct SingleGroupSetting {
    double p;
};

struct TwoGroupSetting {
    double r_a;
    double p_a;
    double p_b;

    double r_b() const { return 1.0 - r_a; }
    double d() const { return p_a - p_b; }
    double r_min() const { return std::min(r_a, 1.0 - r_a); }
};

using Setting = std::variant<SingleGroupSetting, TwoGroupSetting>;

inline FairnessDomain setting_domain(const Setting& s) {
    return std::holds_alternative<SingleGroupSetting>(s) ? FairnessDomain::Unit : FairnessDomain::Signed;
}

/// The shield/decision-maker pair seen as a one-dimensional drift model: the
/// characteristic function f gives the next-step acceptance bias (single
/// group) or disparity drift target (two groups) as a function of the current
/// fairness value.
struct CharacteristicModel {
    Setting setting;
    EnergyFunction zeta;

    CharacteristicModel(Setting s, EnergyFunction z) : setting(std::move(s)), zeta(std::move(z)) {
        if (setting_domain(setting) != zeta.domain()) {
            throw std::invalid_argument("CharacteristicModel: energy-function domain does not match the setting");
        }
        if (const auto* sg = std::get_if<SingleGroupSetting>(&setting)) {
            if (!(sg->p >= 0.0 && sg->p <= 1.0)) throw std::invalid_argument("CharacteristicModel: p must be in [0,1]");
        } else {
            const auto& tg = std::get<TwoGroupSetting>(setting);
            if (!(tg.r_a > 0.0 && tg.r_a < 1.0)) throw std::invalid_argument("CharacteristicModel: r_A must be in (0,1)");
            if (!(tg.p_a >= 0.0 && tg.p_a <= 1.0 && tg.p_b >= 0.0 && tg.p_b <= 1.0)) {
                throw std::invalid_argument("CharacteristicModel: group decision probabilities must be in [0,1]");
            }
        }
    }

    bool two_group() const { return std::holds_alternative<TwoGroupSetting>(setting); }
    double pivot() const { return zeta.pivot(); }

    /// p in the single-group setting, d = p_A - p_B in the two-group one; the
    /// value the process would drift to without a shield.
    double base() const {
        if (const auto* sg = std::get_if<SingleGroupSetting>(&setting)) return sg->p;
        return std::get<TwoGroupSetting>(setting).d();
    }

    double f(double mu) const {
        const double kappa = zeta.pivot();
        const double z = zeta(mu);
        if (const auto* sg = std::get_if<SingleGroupSetting>(&setting)) {
            return mu <= kappa ? sg->p + (1.0 - sg->p) * z : sg->p * (1.0 - z);
        }
        const auto& tg = std::get<TwoGroupSetting>(setting);
        const double d = tg.d();
        return mu <= kappa ? d + (1.0 - d) * z : d - (1.0 + d) * z;
    }

    /// Instantaneous expected intervention probability at fairness value mu.
    double h(double mu) const {
        const double kappa = zeta.pivot();
        const double z = zeta(mu);
        if (const auto* sg = std::get_if<SingleGroupSetting>(&setting)) {
            return mu <= kappa ? (1.0 - sg->p) * z : sg->p * z;
        }
        const auto& tg = std::get<TwoGroupSetting>(setting);
        if (mu <= kappa) return (tg.r_a * (1.0 - tg.p_a) + tg.r_b() * tg.p_b) * z;
        return (tg.r_a * tg.p_a + tg.r_b() * (1.0 - tg.p_b)) * z;
    }
};

inline double characteristic_f(const CharacteristicModel& model, double mu) { return model.f(mu); }
inline double expected_cost_h(const CharacteristicModel& model, double mu) { return model.h(mu); }

/// The unique fixpoint mu* of f, located by bisection on g(mu) = f(mu) - mu
/// over the bracket between the base bias and the pivot (g is non-increasing,
/// so the bracket is sound). Residual |f(mu*) - mu*| <= 1e-12 for continuous
/// energy functions.
inline double find_fixpoint(const CharacteristicModel& model) {
    const Interval full = domain_interval(setting_domain(model.setting));
    const double base = model.base();
    const double kappa = model.pivot();
    double lo = std::max(full.lo, std::min(base, kappa) - 1e-9);
    double hi = std::min(full.hi, std::max(base, kappa) + 1e-9);
    if (hi - lo < 1e-15) return 0.5 * (lo + hi);

    auto g = [&](double mu) { return model.f(mu) - mu; };
    double glo = g(lo), ghi = g(hi);
    if (glo < 0.0 && ghi < 0.0) return lo;   // crossing pinned at the bracket edge
    if (glo > 0.0 && ghi > 0.0) return hi;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if (gm == 0.0) return mid;
        if (gm > 0.0) lo = mid; else hi = mid;
        if (hi - lo < 1e-16) break;
    }
    return 0.5 * (lo + hi);
}

/// h evaluated at the fixpoint; equals |p - mu*| exactly when the energy
/// function satisfies the convergence calibration at mu*.
inline double limit_cost(const CharacteristicModel& model) { return model.h(find_fixpoint(model)); }

/// Inputs for the concentration bounds on P[M_t outside S]. K is 1/32 for a
/// single group and r_min/32 for two groups; the two-group variant adds the
/// group-count failure probability eta on top of the exponential terms.
struct TailBoundParams {
    double k = 1.0 / 32.0;
    long burn_in = 0;
    double dist_lo = 0.0;  // |L - mu*|
    double dist_hi = 0.0;  // |U - mu*|
    double rate_lo = 0.0;  // exp(-K dist_lo^2)
    double rate_hi = 0.0;
    std::optional<double> eta;  // present iff two-group

    static TailBoundParams single_group(const Interval& s, double mu_star) {
        if (!(s.lo < mu_star && mu_star < s.hi)) {
            throw std::domain_error("TailBoundParams: mu* must lie strictly inside the running target");
        }
        TailBoundParams p;
        p.k = 1.0 / 32.0;
        p.dist_lo = mu_star - s.lo;
        p.dist_hi = s.hi - mu_star;
        p.burn_in = ceil_guarded(4.0 / std::min(p.dist_lo, p.dist_hi));
        p.rate_lo = std::exp(-p.k * p.dist_lo * p.dist_lo);
        p.rate_hi = std::exp(-p.k * p.dist_hi * p.dist_hi);
        return p;
    }

    static TailBoundParams two_group(const Interval& s, double mu_star, double r_min, double eta);
};

/// Burn-in for the two-group bounds: ceil((8 / r_min) * ln(4 / eta)). From
/// this time on, both group counts stay above half their expectation with
/// probability at least 1 - eta.
inline long two_group_tau(double eta, double r_min) {
    if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("two_group_tau: eta must be in (0,1)");
    if (!(r_min > 0.0 && r_min < 1.0)) throw std::invalid_argument("two_group_tau: r_min must be in (0,1)");
    return ceil_guarded((8.0 / r_min) * std::log(4.0 / eta));
}

inline TailBoundParams TailBoundParams::two_group(const Interval& s, double mu_star, double r_min, double eta) {
    if (!(s.lo < mu_star && mu_star < s.hi)) {
        throw std::domain_error("TailBoundParams: mu* must lie strictly inside the running target");
    }
    TailBoundParams p;
    p.k = r_min / 32.0;
    p.dist_lo = mu_star - s.lo;
    p.dist_hi = s.hi - mu_star;
    p.burn_in = two_group_tau(eta, r_min);
    p.rate_lo = std::exp(-p.k * p.dist_lo * p.dist_lo);
    p.rate_hi = std::exp(-p.k * p.dist_hi * p.dist_hi);
    p.eta = eta;
    return p;
}

/// Unclamped bound on P[M_t outside S]; values above 1 are vacuous.
inline double tail_bound_raw(long t, const TailBoundParams& params) {
    if (t < params.burn_in) throw std::domain_error("tail_bound: below burn-in");
    const double td = static_cast<double>(t);
    double b = std::exp(-params.k * td * params.dist_lo * params.dist_lo) +
               std::exp(-params.k * td * params.dist_hi * params.dist_hi);
    if (params.eta) b += *params.eta;
    return b;
}

/// P[M_t outside S] bound, clamped to [0,1].
inline double tail_bound(long t, const TailBoundParams& params) {
    return std::min(1.0, tail_bound_raw(t, params));
}

/// Geometric-tail bound on the expected number of violations over [T, inf);
/// by Boole's inequality also a bound on the violation probability. The
/// two-group eta term is NOT included here: it enters once per analysis, not
/// once per time step (see synthesis::condition_value).
inline double tail_sum(long t_from, const TailBoundParams& params) {
    if (t_from < params.burn_in) throw std::domain_error("tail_sum: below burn-in");
    const double td = static_cast<double>(t_from);
    return std::pow(params.rate_lo, td) / (1.0 - params.rate_lo) +
           std::pow(params.rate_hi, td) / (1.0 - params.rate_hi);
}

/// Finite-window version: sum of the per-step bounds over [T, T'].
inline double tail_sum_window(long t_from, long t_to, const TailBoundParams& params) {
    if (t_from < params.burn_in) throw std::domain_error("tail_sum_window: below burn-in");
    if (t_to < t_from) return 0.0;
    auto geom = [&](double r) {
        // r^T + ... + r^T' = r^T (1 - r^(T'-T+1)) / (1 - r)
        const double n = static_cast<double>(t_to - t_from + 1);
        return std::pow(r, static_cast<double>(t_from)) * (1.0 - std::pow(r, n)) / (1.0 - r);
    };
    return geom(params.rate_lo) + geom(params.rate_hi);
}

/// Containment interval for the drifting-bias setting: the largest L < kappa
/// with zeta(L) = L and smallest R > kappa with zeta(R) = 1 - R, each located
/// by bisection. A side with no solution is reported as unbounded (nullopt).
struct DriftContainment {
    std::optional<double> lower;
    std::optional<double> upper;
};

inline DriftContainment drift_containment(const EnergyFunction& zeta) {
    if (zeta.domain() != FairnessDomain::Unit) {
        throw std::invalid_argument("drift_containment: defined for the unit domain");
    }
    const double kappa = zeta.pivot();
    if (!(kappa > 0.0 && kappa < 1.0)) throw std::invalid_argument("drift_containment: pivot must be interior");

    DriftContainment out;
    // Left: zeta(x) - x is non-increasing on [0, kappa], positive at 0 iff
    // zeta(0) > 0 and negative at kappa.
    if (zeta(0.0) > 0.0) {
        double lo = 0.0, hi = kappa;
        for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (zeta(mid) - mid > 0.0) lo = mid; else hi = mid;
        }
        out.lower = 0.5 * (lo + hi);
    }
    // Right: zeta(x) - (1 - x) is non-decreasing on [kappa, 1].
    if (zeta(1.0) > 0.0) {
        double lo = kappa, hi = 1.0;
        for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (zeta(mid) - (1.0 - mid) < 0.0) lo = mid; else hi = mid;
        }
        out.upper = 0.5 * (lo + hi);
    }
    return out;
}

} // namespace fairshield
