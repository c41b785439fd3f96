#include <gtest/gtest.h>

#include <cmath>

#include "fairshield/analysis.hpp"
#include "fairshield/energy.hpp"
#include "fairshield/energy_json.hpp"
#include "fairshield/rng.hpp"

using namespace fairshield;

TEST(EnergyEval, PolynomialAndExponential) {
    const auto pol = EnergyFunction::polynomial(0.5, 4.0, 2.0);
    EXPECT_DOUBLE_EQ(pol(0.5), 0.0);
    EXPECT_NEAR(pol(0.6), 0.04, 1e-15);

    const auto exp128 = EnergyFunction::exponential(0.5, 1.0, 128.0);
    EXPECT_NEAR(exp128(0.6), 1.0 - std::exp(-1.28), 1e-15);
    EXPECT_NEAR(exp128(0.6), 0.72196, 1e-5);

    const auto pol2 = EnergyFunction::polynomial(0.4, 2.7, 2.0);
    EXPECT_NEAR(pol2(0.6), 0.108, 1e-15);

    EXPECT_THROW(pol(1.5), std::domain_error);
    EXPECT_THROW(pol(-0.2), std::domain_error);
}

TEST(EnergyEval, ParameterRangesEnforced) {
    EXPECT_THROW(EnergyFunction::polynomial(0.5, 4.0, 1.0), std::invalid_argument);   // beta must be > 1
    EXPECT_THROW(EnergyFunction::polynomial(0.5, 4.1, 2.0), std::invalid_argument);   // alpha above 1/max(k,1-k)^b
    EXPECT_NO_THROW(EnergyFunction::polynomial(0.5, 4.0, 2.0));                       // boundary alpha allowed
    EXPECT_THROW(EnergyFunction::exponential(0.5, 1.0, 0.0), std::invalid_argument);  // sigma > 0
    EXPECT_THROW(EnergyFunction::exponential(0.5, 2.0, 128.0), std::invalid_argument);
    EXPECT_THROW(EnergyFunction::monotonic(0.0, 0.3, Interval(0.4, 0.6), Interval(0.49, 0.51)),
                 std::invalid_argument);  // r in (0,1)
    EXPECT_THROW(EnergyFunction::monotonic(1.0, 0.3, Interval(0.4, 0.6), Interval(0.49, 0.51)),
                 std::invalid_argument);
}

TEST(EnergyEval, IdleAndNaive) {
    const auto idle = EnergyFunction::idle();
    EXPECT_DOUBLE_EQ(idle(0.0), 0.0);
    EXPECT_DOUBLE_EQ(idle(0.77), 0.0);

    const auto naive = EnergyFunction::naive(Interval(0.4, 0.6));
    EXPECT_DOUBLE_EQ(naive(0.5), 0.0);
    EXPECT_DOUBLE_EQ(naive(0.4), 1.0);  // boundary is not interior
    EXPECT_DOUBLE_EQ(naive(0.39), 1.0);
    EXPECT_DOUBLE_EQ(naive(1.0), 1.0);
    EXPECT_DOUBLE_EQ(naive.pivot(), 0.5);
}

TEST(MonotonicFamily, BiasBelowLimitConstants) {
    // p = 0.3 under target S = [0.4, 0.6], L = [0.49, 0.51], r = 0.1
    const auto zeta = EnergyFunction::monotonic(0.1, 0.3, Interval(0.4, 0.6), Interval(0.49, 0.51));
    const auto& mon = std::get<MonotonicEnergy>(zeta.family());
    EXPECT_NEAR(mon.kappa, 0.555, 1e-15);
    EXPECT_NEAR(mon.a, 0.492, 1e-15);
    EXPECT_NEAR(mon.c, 0.192 / 0.7, 1e-12);
    EXPECT_NEAR(mon.alpha, 9.0, 1e-12);
    EXPECT_NEAR(zeta(0.492), 0.192 / 0.7, 1e-12);
    // calibration self-check: f(a) = p + (1-p) zeta(a) = a
    EXPECT_NEAR(0.3 + 0.7 * zeta(0.492), 0.492, 1e-12);
    EXPECT_DOUBLE_EQ(zeta(mon.kappa), 0.0);
}

TEST(MonotonicFamily, PivotIsZeroForAllIndices) {
    for (double r : {0.05, 0.3, 0.5, 0.7, 0.95}) {
        const auto zeta = EnergyFunction::monotonic(r, 0.3, Interval(0.4, 0.6), Interval(0.49, 0.51));
        EXPECT_DOUBLE_EQ(zeta(zeta.pivot()), 0.0) << "r=" << r;
    }
}

TEST(MonotonicFamily, CentralCasePlateau) {
    // bias inside the limit set: pivot at the bias, plateau of height 1
    // outside [kappa - alpha^-1/2, kappa + alpha^-1/2]
    const auto z9 = EnergyFunction::monotonic(0.9, 0.5, Interval(0.4, 0.6), Interval(0.49, 0.51));
    const double alpha = 0.9 / 0.1;
    const double w = 1.0 / std::sqrt(alpha);
    EXPECT_NEAR(z9(0.5 + w), 1.0, 1e-12);
    EXPECT_NEAR(z9(0.5 - w), 1.0, 1e-12);
    EXPECT_NEAR(z9(0.5 + w + 0.05), 1.0, 1e-15);
    EXPECT_DOUBLE_EQ(z9(0.5), 0.0);

    // for small r the plateau boundary falls outside the domain and the
    // polynomial branch covers everything
    const auto z5 = EnergyFunction::monotonic(0.5, 0.5, Interval(0.4, 0.6), Interval(0.49, 0.51));
    EXPECT_NEAR(z5(1.0), 0.25, 1e-15);
    EXPECT_NEAR(z5(0.0), 0.25, 1e-15);
}

TEST(MonotonicFamily, BiasAboveLimitIsSymmetric) {
    const auto zeta = EnergyFunction::monotonic(0.2, 0.65, Interval(0.3, 0.7), Interval(0.45, 0.55));
    const auto& mon = std::get<MonotonicEnergy>(zeta.family());
    EXPECT_NEAR(mon.kappa, 0.5 * (0.3 + 0.45), 1e-15);
    EXPECT_NEAR(mon.a, 0.2 * 0.45 + 0.8 * 0.55, 1e-15);
    EXPECT_NEAR(mon.c, (0.65 - mon.a) / 0.65, 1e-12);
    // f(a) = p (1 - zeta(a)) = a
    EXPECT_NEAR(0.65 * (1.0 - zeta(mon.a)), mon.a, 1e-12);
}

TEST(MonotonicFamily, PointwiseMonotoneInIndex) {
    struct Case {
        double bias;
        FairnessDomain dom;
    };
    const Interval s(0.4, 0.6), l(0.49, 0.51);
    for (const auto& c : {Case{0.3, FairnessDomain::Unit}, Case{0.65, FairnessDomain::Unit},
                          Case{0.5, FairnessDomain::Unit}}) {
        for (int ri = 1; ri < 50; ++ri) {
            const double r1 = static_cast<double>(ri) / 51.0;
            const double r2 = static_cast<double>(ri + 1) / 51.0;
            for (int xi = 0; xi <= 200; ++xi) {
                const double x = static_cast<double>(xi) / 200.0;
                const double v1 = eval_monotonic(r1, c.bias, s, l, x, c.dom);
                const double v2 = eval_monotonic(r2, c.bias, s, l, x, c.dom);
                ASSERT_LE(v1, v2 + 1e-12) << "bias=" << c.bias << " r=" << r1 << " x=" << x;
            }
        }
    }
}

TEST(MonotonicFamily, FixpointSitsAtCalibrationPoint) {
    for (double r : {0.1, 0.25, 0.5, 0.75, 0.9}) {
        const auto zeta = EnergyFunction::monotonic(r, 0.3, Interval(0.4, 0.6), Interval(0.49, 0.51));
        const auto& mon = std::get<MonotonicEnergy>(zeta.family());
        CharacteristicModel model(SingleGroupSetting{0.3}, zeta);
        EXPECT_NEAR(find_fixpoint(model), mon.a, 1e-9) << "r=" << r;
    }
    // two-group variant with the disparity in place of p
    const TwoGroupSetting tg{0.8, 0.7, 0.4};
    for (double r : {0.2, 0.6}) {
        const auto zeta = EnergyFunction::monotonic(r, tg.d(), Interval(-0.15, 0.6), Interval(0.4, 0.5),
                                                    FairnessDomain::Signed);
        const auto& mon = std::get<MonotonicEnergy>(zeta.family());
        CharacteristicModel model(tg, zeta);
        EXPECT_NEAR(find_fixpoint(model), mon.a, 1e-9) << "r=" << r;
    }
}

TEST(RequiredEnergy, SingleGroupBranches) {
    EXPECT_NEAR(required_energy_at_target(0.65, 0.5), 0.15 / 0.65, 1e-15);
    EXPECT_NEAR(required_energy_at_target(0.3, 0.5), 0.2 / 0.7, 1e-15);
    EXPECT_DOUBLE_EQ(required_energy_at_target(0.5, 0.5), 0.0);
    EXPECT_THROW(required_energy_at_target(0.0, 0.5), std::invalid_argument);
}

TEST(RequiredEnergy, TwoGroupBranches) {
    EXPECT_NEAR(required_energy_two_group(0.3, 0.5), 0.2 / 0.7, 1e-15);
    EXPECT_NEAR(required_energy_two_group(0.3, 0.0), 0.3 / 1.3, 1e-15);
    EXPECT_DOUBLE_EQ(required_energy_two_group(0.25, 0.25), 0.0);
    EXPECT_DOUBLE_EQ(required_energy_two_group(-0.4, -0.4), 0.0);
}

TEST(CalibratedExponential, InterpolatesTheRequiredEnergy) {
    Rng rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        const double p = 0.05 + 0.9 * rng.uniform();
        const double mu = 0.15 + 0.7 * rng.uniform();
        const auto zeta = calibrated_exponential(p, mu);
        EXPECT_NEAR(zeta(mu), required_energy_at_target(p, mu), 1e-12);
    }
}

TEST(Steepness, NaiveDominatesIdle) {
    const auto order = compare_steepness(EnergyFunction::naive(Interval(0.4, 0.6)), EnergyFunction::idle());
    EXPECT_EQ(order.relation, SteepnessRelation::FirstSteeper);
}

TEST(Steepness, PolynomialAlphaOrdering) {
    const auto order =
        compare_steepness(EnergyFunction::polynomial(0.5, 4.0, 2.0), EnergyFunction::polynomial(0.5, 2.0, 2.0));
    EXPECT_EQ(order.relation, SteepnessRelation::FirstSteeper);
    const auto rev =
        compare_steepness(EnergyFunction::polynomial(0.5, 2.0, 2.0), EnergyFunction::polynomial(0.5, 4.0, 2.0));
    EXPECT_EQ(rev.relation, SteepnessRelation::SecondSteeper);
}

TEST(Steepness, MonotonicFamilyOrdering) {
    const Interval s(0.4, 0.6), l(0.49, 0.51);
    const auto order = compare_steepness(EnergyFunction::monotonic(0.8, 0.3, s, l),
                                         EnergyFunction::monotonic(0.2, 0.3, s, l));
    EXPECT_EQ(order.relation, SteepnessRelation::FirstSteeper);
}

TEST(Steepness, MismatchedPivotsRejected) {
    EXPECT_THROW(compare_steepness(EnergyFunction::polynomial(0.5, 4.0, 2.0),
                                   EnergyFunction::polynomial(0.4, 2.7, 2.0)),
                 std::invalid_argument);
}

TEST(Steepness, CrossFamilyIncomparableWithWitness) {
    // the capped exponential wins near the pivot, the polynomial at the edge
    const auto order = compare_steepness(EnergyFunction::polynomial(0.5, 4.0, 2.0),
                                         EnergyFunction::exponential(0.5, 0.5, 128.0));
    EXPECT_EQ(order.relation, SteepnessRelation::Incomparable);
    ASSERT_TRUE(order.witness.has_value());
}

TEST(Steepness, EqualFunctions) {
    const auto order =
        compare_steepness(EnergyFunction::polynomial(0.5, 4.0, 2.0), EnergyFunction::polynomial(0.5, 4.0, 2.0));
    EXPECT_EQ(order.relation, SteepnessRelation::Equal);
}

TEST(Validate, WellFormedFamiliesPass) {
    EXPECT_TRUE(validate(EnergyFunction::polynomial(0.5, 4.0, 2.0)).empty());
    EXPECT_TRUE(validate(EnergyFunction::polynomial(0.4, 2.7, 2.0)).empty());
    EXPECT_TRUE(validate(EnergyFunction::exponential(0.5, 1.0, 128.0)).empty());
}

TEST(Validate, IdleFailsEndpointPositivity) {
    const auto defects = validate(EnergyFunction::idle());
    ASSERT_EQ(defects.size(), 1u);
    EXPECT_EQ(defects[0].kind, EnergyDefect::Kind::EndpointNotPositive);
}

TEST(Validate, NaiveIsDiscontinuousAtTargetBoundary) {
    const auto defects = validate(EnergyFunction::naive(Interval(0.4, 0.6)));
    ASSERT_EQ(defects.size(), 1u);
    EXPECT_EQ(defects[0].kind, EnergyDefect::Kind::Discontinuity);
}

TEST(Validate, MonotonicCentralCaseFlagsPlateauJoins) {
    const auto defects = validate(EnergyFunction::monotonic(0.9, 0.5, Interval(0.4, 0.6), Interval(0.49, 0.51)));
    bool kink = false;
    for (const auto& d : defects) kink |= d.kind == EnergyDefect::Kind::NonDifferentiable;
    EXPECT_TRUE(kink);
}

// Clipping and pivot-zero over random parameter draws from the declared
// ranges, all families.
TEST(EnergyEval, RandomDrawsStayInUnitRange) {
    Rng rng(23);
    for (int trial = 0; trial < 100000; ++trial) {
        const int family = static_cast<int>(rng.next_u64() % 3);
        const double kappa = 0.05 + 0.9 * rng.uniform();
        EnergyFunction zeta = EnergyFunction::idle();
        if (family == 0) {
            const double beta = 1.0 + 3.0 * rng.uniform() + 1e-9;
            const double amax = 1.0 / std::pow(std::max(kappa, 1.0 - kappa), beta);
            zeta = EnergyFunction::polynomial(kappa, amax * (0.05 + 0.95 * rng.uniform()), beta);
        } else if (family == 1) {
            const double sigma = 0.5 + 200.0 * rng.uniform();
            const double half = std::min(kappa, 1.0 - kappa);
            const double rmax = 1.0 / (1.0 - std::exp(-sigma * half * half));
            zeta = EnergyFunction::exponential(kappa, rmax * (0.05 + 0.95 * rng.uniform()), sigma);
        } else {
            const double r = 0.01 + 0.98 * rng.uniform();
            zeta = EnergyFunction::monotonic(r, 0.05 + 0.9 * rng.uniform(), Interval(0.3, 0.7),
                                             Interval(0.45, 0.55));
        }
        const double x = rng.uniform();
        const double v = zeta(x);
        ASSERT_GE(v, 0.0);
        ASSERT_LE(v, 1.0);
        ASSERT_NEAR(zeta(zeta.pivot()), 0.0, 1e-12);
    }
}

TEST(EnergyJson, RoundTripAllFamilies) {
    const EnergyFunction cases[] = {
        EnergyFunction::polynomial(0.4, 2.7, 2.0),
        EnergyFunction::exponential(0.5, 1.0, 128.0),
        EnergyFunction::monotonic(0.1, 0.3, Interval(0.4, 0.6), Interval(0.49, 0.51)),
        EnergyFunction::idle(),
        EnergyFunction::naive(Interval(0.4, 0.6)),
        EnergyFunction::exponential(0.6, 0.39575, 128.0, FairnessDomain::Signed),
    };
    for (const auto& zeta : cases) {
        const auto j = to_json(zeta);
        const auto back = energy_from_json(j);
        EXPECT_EQ(to_json(back), j);
        for (double x : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            EXPECT_DOUBLE_EQ(back(x), zeta(x));
        }
    }
}

TEST(EnergyJson, UnknownKeysRejected) {
    auto j = to_json(EnergyFunction::polynomial(0.4, 2.7, 2.0));
    j["params"]["extra"] = 1;
    EXPECT_THROW(energy_from_json(j), ConfigError);
    auto j2 = to_json(EnergyFunction::idle());
    j2["family"] = "mystery";
    EXPECT_THROW(energy_from_json(j2), ConfigError);
}
