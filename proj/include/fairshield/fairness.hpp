#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace fairshield {

/// Fairness values live on [0,1] for a single decision stream and on [-1,+1]
/// for the two-group disparity.
enum class FairnessDomain { Unit, Signed };

enum class Group : std::uint8_t { A = 0, B = 1 };

inline char group_char(Group g) { return g == Group::A ? 'A' : 'B'; }

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    Interval() = default;
    Interval(double l, double h) : lo(l), hi(h) {
        if (!(l <= h)) throw std::invalid_argument("Interval: lo must be <= hi");
    }

    bool contains(double x) const { return lo <= x && x <= hi; }
    bool strictly_contains(double x) const { return lo < x && x < hi; }
    bool covers(const Interval& other) const { return lo <= other.lo && other.hi <= hi; }
    double mid() const { return 0.5 * (lo + hi); }
    double width() const { return hi - lo; }
    /// Distance from x to the interval; 0 when inside.
    double distance(double x) const {
        if (x < lo) return lo - x;
        if (x > hi) return x - hi;
        return 0.0;
    }
};

inline Interval domain_interval(FairnessDomain d) {
    return d == FairnessDomain::Unit ? Interval(0.0, 1.0) : Interval(-1.0, 1.0);
}

/// Ceiling with a relative guard of a few ulps, so quantities like
/// 4 / (0.5 - 0.4) land on the intended integer.
inline long ceil_guarded(double v) {
    return static_cast<long>(std::ceil(v - std::abs(v) * 1e-12));
}

/// A fairness target (tau, S, L): burn-in time, running interval and limit
/// set. The limit set may be a singleton (lo == hi) or an interval, and must
/// sit inside the running interval.
struct FairnessTarget {
    FairnessDomain domain = FairnessDomain::Unit;
    long burn_in = 0;
    Interval running;
    Interval limit;

    FairnessTarget(FairnessDomain dom, long tau, Interval s, Interval l)
        : domain(dom), burn_in(tau), running(s), limit(l) {
        if (tau < 0) throw std::invalid_argument("FairnessTarget: burn-in must be >= 0");
        const Interval full = domain_interval(dom);
        if (!full.covers(s)) throw std::invalid_argument("FairnessTarget: running interval outside fairness domain");
        if (!s.covers(l)) throw std::invalid_argument("FairnessTarget: limit set must be contained in the running interval");
    }

    static FairnessTarget unit(long tau, Interval s, Interval l) {
        return FairnessTarget(FairnessDomain::Unit, tau, s, l);
    }
    static FairnessTarget two_group(long tau, Interval s, Interval l) {
        return FairnessTarget(FairnessDomain::Signed, tau, s, l);
    }
};

/// Running average of a bit stream. Counts are kept as integers and the mean
/// is derived on demand, so a 10^6-step run accumulates no floating drift.
struct RunningMeanState {
    long t = 0;
    long ones = 0;

    double mean() const { return t == 0 ? 0.0 : static_cast<double>(ones) / static_cast<double>(t); }
};

inline RunningMeanState updated(RunningMeanState s, int z) {
    s.t += 1;
    s.ones += (z != 0);
    return s;
}

/// Per-group counts and acceptance sums for the two-group setting. The
/// fairness value S_A/N_A - S_B/N_B is undefined until both groups have been
/// observed at least once.
struct TwoGroupState {
    long n_a = 0;
    long s_a = 0;
    long n_b = 0;
    long s_b = 0;

    long t() const { return n_a + n_b; }
    bool defined() const { return n_a >= 1 && n_b >= 1; }
    double mean_a() const { return n_a == 0 ? 0.0 : static_cast<double>(s_a) / static_cast<double>(n_a); }
    double mean_b() const { return n_b == 0 ? 0.0 : static_cast<double>(s_b) / static_cast<double>(n_b); }
    std::optional<double> value() const {
        if (!defined()) return std::nullopt;
        return mean_a() - mean_b();
    }
};

inline TwoGroupState updated(TwoGroupState s, Group g, int z) {
    if (g == Group::A) {
        s.n_a += 1;
        s.s_a += (z != 0);
    } else {
        s.n_b += 1;
        s.s_b += (z != 0);
    }
    return s;
}

/// Point fairness: the value lies in the running target.
inline bool point_fair(double value, const FairnessTarget& target) {
    if (!domain_interval(target.domain).contains(value)) {
        throw std::domain_error("point_fair: value outside fairness domain");
    }
    return target.running.contains(value);
}

/// Burn-in from which the one-group tail bounds apply:
/// ceil(4 / min(|L - mu*|, |U - mu*|)). Requires mu* strictly inside S.
inline long burn_in_tau_s(const FairnessTarget& target, double mu_star) {
    const Interval& s = target.running;
    if (!(s.lo < mu_star && mu_star < s.hi)) {
        throw std::domain_error("burn_in_tau_s: tail bounds inapplicable, mu* must lie strictly inside the running target");
    }
    const double dist = std::min(mu_star - s.lo, s.hi - mu_star);
    return ceil_guarded(4.0 / dist);
}

} // namespace fairshield
