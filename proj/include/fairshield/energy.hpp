#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "fairshield/fairness.hpp"

namespace fairshield {

/// Energy needed at a target point for the single-group shielded process to
/// converge there:
///   zeta(mu*) = (mu* - p)/(1 - p) if p < mu*,  (p - mu*)/p otherwise.
inline double required_energy_at_target(double p, double mu_star) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("required_energy_at_target: p must be in (0,1)");
    if (!(mu_star >= 0.0 && mu_star <= 1.0)) throw std::invalid_argument("required_energy_at_target: mu* must be in [0,1]");
    if (p < mu_star) return (mu_star - p) / (1.0 - p);
    return (p - mu_star) / p;
}

/// Two-group analogue in terms of the baseline disparity d = p_A - p_B:
///   zeta(mu*) = (mu* - d)/(1 - d) if d < mu*,  (d - mu*)/(1 + d) otherwise.
inline double required_energy_two_group(double d, double mu_star) {
    if (!(d > -1.0 && d < 1.0)) throw std::invalid_argument("required_energy_two_group: d must be in (-1,1)");
    if (!(mu_star >= -1.0 && mu_star <= 1.0)) throw std::invalid_argument("required_energy_two_group: mu* must be in [-1,1]");
    if (d < mu_star) return (mu_star - d) / (1.0 - d);
    return (d - mu_star) / (1.0 + d);
}

namespace energy_detail {

inline double required_energy(FairnessDomain dom, double bias, double at) {
    return dom == FairnessDomain::Unit ? required_energy_at_target(bias, at)
                                       : required_energy_two_group(bias, at);
}

} // namespace energy_detail

/// Polynomial bowl alpha * |x - kappa|^beta.
struct PolynomialEnergy {
    double kappa;
    double alpha;
    double beta;
};

/// Exponential bowl rho * (1 - exp(-sigma (x - kappa)^2)).
struct ExponentialEnergy {
    double kappa;
    double rho;
    double sigma;
};

/// Member of the steepness-ordered family built from a decision bias (p or d)
/// and a fairness target. Piecewise exponential / polynomial; the fixed
/// exponent of the polynomial piece is m = 2. The characteristic function of
/// the induced shield has its fixpoint at `a` by construction.
struct MonotonicEnergy {
    enum class Case { BiasBelowLimit, BiasAboveLimit, BiasInLimit };

    double r;        // steepness index in (0,1); larger is steeper
    double bias;     // decision bias p (unit domain) or disparity d (signed)
    Interval running;
    Interval limit;

    // derived
    Case shape;
    double kappa;
    double a;        // fixpoint of the induced characteristic function
    double c;        // zeta(a), the calibration value
    double alpha;    // (1-r)/r for the outer cases, r/(1-r) for the central one
    static constexpr int m = 2;
};

/// Always-zero energy: the shield never intervenes. Kept as a family member
/// so baselines flow through the same engine; it violates the endpoint
/// positivity condition of a proper energy function by design.
struct IdleEnergy {
    double pivot;
};

/// 0 strictly inside the running target and 1 elsewhere. Deterministic
/// enforcement once the fairness value leaves the target; discontinuous at
/// the target boundary.
struct NaiveEnergy {
    Interval running;
};

enum class SteepnessRelation { FirstSteeper, SecondSteeper, Equal, Incomparable };

struct SteepnessOrder {
    SteepnessRelation relation;
    std::optional<double> witness;  // point where the dominance flips, when incomparable
};

struct EnergyDefect {
    enum class Kind { PivotNotZero, NotUnimodal, EndpointNotPositive, Discontinuity, NonDifferentiable };
    Kind kind;
    std::string detail;
};

/// An evaluable energy curve zeta: domain -> [0,1] with a pivot point.
/// Immutable after construction; evaluation is pure.
class EnergyFunction {
public:
    using Family = std::variant<PolynomialEnergy, ExponentialEnergy, MonotonicEnergy, IdleEnergy, NaiveEnergy>;

    static EnergyFunction polynomial(double kappa, double alpha, double beta,
                                     FairnessDomain dom = FairnessDomain::Unit) {
        const Interval full = domain_interval(dom);
        if (!(beta > 1.0)) throw std::invalid_argument("polynomial energy: beta must be > 1");
        if (!(full.lo < kappa && kappa < full.hi)) throw std::invalid_argument("polynomial energy: kappa must be interior to the domain");
        const double alpha_max = 1.0 / std::pow(std::max(kappa - full.lo, full.hi - kappa), beta);
        if (!(alpha > 0.0 && alpha <= alpha_max)) {
            throw std::invalid_argument("polynomial energy: alpha must be in (0, 1/max(kappa-lo, hi-kappa)^beta]");
        }
        return EnergyFunction(dom, PolynomialEnergy{kappa, alpha, beta});
    }

    static EnergyFunction exponential(double kappa, double rho, double sigma,
                                      FairnessDomain dom = FairnessDomain::Unit) {
        const Interval full = domain_interval(dom);
        if (!(sigma > 0.0)) throw std::invalid_argument("exponential energy: sigma must be > 0");
        if (!(full.lo < kappa && kappa < full.hi)) throw std::invalid_argument("exponential energy: kappa must be interior to the domain");
        const double half = std::min(kappa - full.lo, full.hi - kappa);
        const double rho_max = 1.0 / (1.0 - std::exp(-sigma * half * half));
        if (!(rho > 0.0 && rho <= rho_max)) {
            throw std::invalid_argument("exponential energy: rho must be in (0, 1/(1-exp(-sigma*min(kappa-lo,hi-kappa)^2))]");
        }
        return EnergyFunction(dom, ExponentialEnergy{kappa, rho, sigma});
    }

    static EnergyFunction monotonic(double r, double bias, Interval running, Interval limit,
                                    FairnessDomain dom = FairnessDomain::Unit) {
        if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("monotonic energy: index r must be in (0,1)");
        const Interval full = domain_interval(dom);
        if (!full.covers(running) || !running.covers(limit)) {
            throw std::invalid_argument("monotonic energy: need limit within running within the domain");
        }
        if (!full.strictly_contains(bias)) throw std::invalid_argument("monotonic energy: bias must be interior to the domain");

        MonotonicEnergy f{r, bias, running, limit, MonotonicEnergy::Case{}, 0, 0, 0, 0};
        if (bias < limit.lo) {
            f.shape = MonotonicEnergy::Case::BiasBelowLimit;
            f.kappa = 0.5 * (limit.hi + running.hi);
            f.a = (1.0 - r) * limit.lo + r * limit.hi;
            f.c = energy_detail::required_energy(dom, bias, f.a);
            f.alpha = (1.0 - r) / r;
        } else if (bias > limit.hi) {
            f.shape = MonotonicEnergy::Case::BiasAboveLimit;
            f.kappa = 0.5 * (running.lo + limit.lo);
            f.a = r * limit.lo + (1.0 - r) * limit.hi;
            f.c = energy_detail::required_energy(dom, bias, f.a);
            f.alpha = (1.0 - r) / r;
        } else {
            f.shape = MonotonicEnergy::Case::BiasInLimit;
            f.kappa = bias;
            f.a = bias;
            f.c = 0.0;
            f.alpha = r / (1.0 - r);
        }
        return EnergyFunction(dom, f);
    }

    static EnergyFunction idle(FairnessDomain dom = FairnessDomain::Unit,
                               std::optional<double> pivot = std::nullopt) {
        const Interval full = domain_interval(dom);
        const double k = pivot.value_or(full.mid());
        if (!full.contains(k)) throw std::invalid_argument("idle energy: pivot outside domain");
        return EnergyFunction(dom, IdleEnergy{k});
    }

    static EnergyFunction naive(Interval running, FairnessDomain dom = FairnessDomain::Unit) {
        if (!domain_interval(dom).covers(running)) throw std::invalid_argument("naive energy: running target outside domain");
        return EnergyFunction(dom, NaiveEnergy{running});
    }

    FairnessDomain domain() const { return domain_; }
    Interval domain_interval_() const { return domain_interval(domain_); }
    const Family& family() const { return family_; }

    double pivot() const {
        return std::visit(
            [](const auto& f) -> double {
                using T = std::decay_t<decltype(f)>;
                if constexpr (std::is_same_v<T, PolynomialEnergy> || std::is_same_v<T, ExponentialEnergy>) {
                    return f.kappa;
                } else if constexpr (std::is_same_v<T, MonotonicEnergy>) {
                    return f.kappa;
                } else if constexpr (std::is_same_v<T, IdleEnergy>) {
                    return f.pivot;
                } else {
                    return f.running.mid();
                }
            },
            family_);
    }

    /// Evaluates the curve; the result is clipped to [0,1].
    double operator()(double x) const {
        const Interval full = domain_interval_();
        // Tolerate float dust just outside the domain, reject anything real.
        if (x < full.lo - 1e-12 || x > full.hi + 1e-12) {
            throw std::domain_error("energy eval: point outside the fairness domain");
        }
        x = std::clamp(x, full.lo, full.hi);
        const double v = std::visit([&](const auto& f) { return eval_impl(f, x); }, family_);
        return std::clamp(v, 0.0, 1.0);
    }

    /// Interior points where a piecewise definition changes branch. The
    /// polynomial and exponential families are smooth everywhere and report
    /// none.
    std::vector<double> breakpoints() const {
        const Interval full = domain_interval_();
        std::vector<double> pts = std::visit(
            [](const auto& f) -> std::vector<double> {
                using T = std::decay_t<decltype(f)>;
                if constexpr (std::is_same_v<T, PolynomialEnergy> || std::is_same_v<T, ExponentialEnergy>) {
                    return {};
                } else if constexpr (std::is_same_v<T, MonotonicEnergy>) {
                    if (f.shape == MonotonicEnergy::Case::BiasInLimit) {
                        const double w = 1.0 / std::sqrt(f.alpha);
                        return {f.kappa - w, f.kappa, f.kappa + w};
                    }
                    return {std::min(f.a, f.kappa), std::max(f.a, f.kappa)};
                } else if constexpr (std::is_same_v<T, IdleEnergy>) {
                    return {};
                } else {
                    return {f.running.lo, f.running.hi};
                }
            },
            family_);
        std::erase_if(pts, [&](double x) { return x <= full.lo || x >= full.hi; });
        return pts;
    }

private:
    EnergyFunction(FairnessDomain dom, Family fam) : domain_(dom), family_(std::move(fam)) {}

    static double eval_impl(const PolynomialEnergy& f, double x) {
        return f.alpha * std::pow(std::abs(x - f.kappa), f.beta);
    }
    static double eval_impl(const ExponentialEnergy& f, double x) {
        const double d = x - f.kappa;
        return f.rho * (1.0 - std::exp(-f.sigma * d * d));
    }
    static double eval_impl(const IdleEnergy&, double) { return 0.0; }
    static double eval_impl(const NaiveEnergy& f, double x) {
        return f.running.strictly_contains(x) ? 0.0 : 1.0;
    }
    static double eval_impl(const MonotonicEnergy& f, double x) {
        switch (f.shape) {
            case MonotonicEnergy::Case::BiasBelowLimit: {
                if (x < f.a) return f.c + (1.0 - f.c) * (1.0 - std::exp((x - f.a) / f.alpha));
                if (x <= f.kappa) return f.c * std::pow(1.0 - (x - f.a) / (f.kappa - f.a), f.alpha);
                const double u = (x - f.kappa) / f.alpha;
                return 1.0 - std::exp(-std::pow(u, MonotonicEnergy::m));
            }
            case MonotonicEnergy::Case::BiasAboveLimit: {
                if (x < f.kappa) {
                    const double u = (x - f.kappa) / f.alpha;
                    return 1.0 - std::exp(-std::pow(u, MonotonicEnergy::m));
                }
                if (x <= f.a) return f.c * std::pow(1.0 - (f.a - x) / (f.a - f.kappa), f.alpha);
                return f.c + (1.0 - f.c) * (1.0 - std::exp((f.a - x) / f.alpha));
            }
            case MonotonicEnergy::Case::BiasInLimit: {
                const double w = 1.0 / std::sqrt(f.alpha);
                if (x >= f.kappa - w && x <= f.kappa + w) {
                    const double d = x - f.kappa;
                    return f.alpha * std::pow(std::abs(d), MonotonicEnergy::m);
                }
                return 1.0;
            }
        }
        return 0.0;  // unreachable
    }

    FairnessDomain domain_;
    Family family_;
};

/// Convenience wrapper matching the family construction directly.
inline double eval_monotonic(double r, double bias, Interval running, Interval limit, double x,
                             FairnessDomain dom = FairnessDomain::Unit) {
    return EnergyFunction::monotonic(r, bias, running, limit, dom)(x);
}

/// Exponential energy function calibrated so the induced process converges to
/// mu_star under bias q. The pivot sits at a fixed offset from mu_star on the
/// side away from q; rho interpolates the required energy exactly.
inline EnergyFunction calibrated_exponential(double q, double mu_star, double sigma = 128.0,
                                             FairnessDomain dom = FairnessDomain::Unit) {
    const Interval full = domain_interval(dom);
    if (!full.strictly_contains(mu_star)) throw std::invalid_argument("calibrated_exponential: mu* must be interior");
    const double req = energy_detail::required_energy(dom, q, mu_star);
    double kappa;
    if (q > mu_star) {
        kappa = mu_star - std::min(0.1, 0.5 * (mu_star - full.lo));
    } else if (q < mu_star) {
        kappa = mu_star + std::min(0.1, 0.5 * (full.hi - mu_star));
    } else {
        kappa = mu_star;
    }
    const double half = std::min(kappa - full.lo, full.hi - kappa);
    const double rho_max = 1.0 / (1.0 - std::exp(-sigma * half * half));
    double rho;
    if (req == 0.0) {
        rho = std::min(1.0, rho_max);
    } else {
        const double gap = mu_star - kappa;
        rho = req / (1.0 - std::exp(-sigma * gap * gap));
        rho = std::min(rho, rho_max);  // calibration saturates for extreme targets
    }
    return EnergyFunction::exponential(kappa, rho, sigma, dom);
}

namespace energy_detail {

inline std::vector<double> comparison_grid(const EnergyFunction& a, const EnergyFunction& b, int grid_size) {
    const Interval full = a.domain_interval_();
    std::vector<double> xs;
    xs.reserve(static_cast<std::size_t>(grid_size) + 8);
    for (int i = 0; i <= grid_size; ++i) {
        xs.push_back(full.lo + (full.hi - full.lo) * static_cast<double>(i) / grid_size);
    }
    for (const auto& f : {a, b}) {
        for (double bp : f.breakpoints()) xs.push_back(bp);
        if (full.strictly_contains(f.pivot())) xs.push_back(f.pivot());
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

} // namespace energy_detail

/// Pointwise dominance on a uniform grid (plus both functions' breakpoints).
/// Both functions must share the domain and the pivot.
inline SteepnessOrder compare_steepness(const EnergyFunction& z1, const EnergyFunction& z2,
                                        int grid_size = 10000) {
    if (z1.domain() != z2.domain()) throw std::invalid_argument("compare_steepness: mismatched domains");
    if (std::abs(z1.pivot() - z2.pivot()) > 1e-12) {
        throw std::invalid_argument("compare_steepness: incomparable pivots");
    }
    if (grid_size < 1) throw std::invalid_argument("compare_steepness: grid_size must be >= 1");

    constexpr double eps = 1e-12;
    bool first_ge = true, second_ge = true, strict1 = false, strict2 = false;
    double worst_first_deficit = 0.0, worst_second_deficit = 0.0;
    double witness_first = 0.0, witness_second = 0.0;
    for (double x : energy_detail::comparison_grid(z1, z2, grid_size)) {
        const double v1 = z1(x), v2 = z2(x);
        if (v1 < v2 - eps) {
            first_ge = false;
            strict2 = true;
            if (v2 - v1 > worst_first_deficit) { worst_first_deficit = v2 - v1; witness_first = x; }
        }
        if (v2 < v1 - eps) {
            second_ge = false;
            strict1 = true;
            if (v1 - v2 > worst_second_deficit) { worst_second_deficit = v1 - v2; witness_second = x; }
        }
    }
    if (first_ge && second_ge) return {SteepnessRelation::Equal, std::nullopt};
    if (first_ge) return {strict1 ? SteepnessRelation::FirstSteeper : SteepnessRelation::Equal, std::nullopt};
    if (second_ge) return {strict2 ? SteepnessRelation::SecondSteeper : SteepnessRelation::Equal, std::nullopt};
    // Report the point where the eventual loser was furthest ahead.
    const double witness = worst_first_deficit > worst_second_deficit ? witness_first : witness_second;
    return {SteepnessRelation::Incomparable, witness};
}

/// Diagnostic check of the energy-function conditions: zero at the pivot,
/// unimodal shape, positive at the domain endpoints, and smoothness across
/// breakpoints. An empty result means all conditions hold on the grid.
inline std::vector<EnergyDefect> validate(const EnergyFunction& zeta, int grid_size = 4096) {
    std::vector<EnergyDefect> defects;
    const Interval full = zeta.domain_interval_();
    const double kappa = zeta.pivot();

    if (std::abs(zeta(kappa)) > 1e-9) {
        defects.push_back({EnergyDefect::Kind::PivotNotZero,
                           "zeta(kappa) = " + std::to_string(zeta(kappa)) + " at kappa = " + std::to_string(kappa)});
    }

    // Unimodality: non-increasing left of the pivot, non-decreasing right.
    bool unimodal = true;
    double prev_x = full.lo, prev_v = zeta(full.lo);
    double bad_x = 0.0;
    for (int i = 1; i <= grid_size && unimodal; ++i) {
        const double x = full.lo + (full.hi - full.lo) * static_cast<double>(i) / grid_size;
        const double v = zeta(x);
        if (x <= kappa && v > prev_v + 1e-12) { unimodal = false; bad_x = x; }
        if (prev_x >= kappa && v < prev_v - 1e-12) { unimodal = false; bad_x = x; }
        prev_x = x;
        prev_v = v;
    }
    if (!unimodal) {
        defects.push_back({EnergyDefect::Kind::NotUnimodal, "shape violation near x = " + std::to_string(bad_x)});
    }

    if (zeta(full.lo) <= 0.0 || zeta(full.hi) <= 0.0) {
        defects.push_back({EnergyDefect::Kind::EndpointNotPositive,
                           "zeta must be positive at the domain endpoints"});
    }

    // Smoothness across declared breakpoints: a value jump is a continuity
    // defect, a slope jump a differentiability one.
    const double h = (full.hi - full.lo) * 1e-7;
    std::string jump_detail, kink_detail;
    for (double b : zeta.breakpoints()) {
        if (b - h <= full.lo || b + h >= full.hi) continue;
        const double left = zeta(b - h), right = zeta(b + h), at = zeta(b);
        if (std::abs(left - at) > 1e-3 || std::abs(right - at) > 1e-3) {
            jump_detail += (jump_detail.empty() ? "x = " : ", x = ") + std::to_string(b);
            continue;
        }
        const double dl = (at - zeta(b - h)) / h;
        const double dr = (zeta(b + h) - at) / h;
        if (std::abs(dl - dr) > 1e-2 * (1.0 + std::max(std::abs(dl), std::abs(dr)))) {
            kink_detail += (kink_detail.empty() ? "x = " : ", x = ") + std::to_string(b);
        }
    }
    if (!jump_detail.empty()) {
        defects.push_back({EnergyDefect::Kind::Discontinuity, "value jump at " + jump_detail});
    }
    if (!kink_detail.empty()) {
        defects.push_back({EnergyDefect::Kind::NonDifferentiable, "slope jump at " + kink_detail});
    }
    return defects;
}

} // namespace fairshield
