#include <gtest/gtest.h>

#include <cmath>

#include "fairshield/synthesis.hpp"

using namespace fairshield;

namespace {

SynthesisInstance single_instance(Measure measure, double p, FairnessTarget target, double delta, double epsilon) {
    SynthesisInstance inst{measure, SingleGroupSetting{p}, std::move(target), delta, epsilon};
    return inst;
}

double bound_direct(long t, const TailBoundParams& params) {
    return std::pow(params.rate_lo, static_cast<double>(t)) / (1.0 - params.rate_lo) +
           std::pow(params.rate_hi, static_cast<double>(t)) / (1.0 - params.rate_hi);
}

} // namespace

TEST(ChooseTdp, MinimalHorizonAgainstDirectBound) {
    const auto inst = single_instance(Measure::Probability, 0.65,
                                      FairnessTarget::unit(40, Interval(0.4, 0.6), Interval(0.5, 0.5)), 0.1, 0.3);
    const long t_dp = choose_t_dp(inst);
    const auto params = TailBoundParams::single_group(inst.target.running, 0.5);
    EXPECT_LE(bound_direct(t_dp, params), 0.3);
    EXPECT_GT(bound_direct(t_dp - 1, params), 0.3);
    EXPECT_NEAR(static_cast<double>(t_dp), 31898.0, 2.0);  // 32000-scale horizon
}

TEST(ChooseTdp, BurnInFloorWhenToleranceIsLoose) {
    const auto inst = single_instance(Measure::Probability, 0.65,
                                      FairnessTarget::unit(20000, Interval(0.3, 0.7), Interval(0.5, 0.5)), 0.1, 0.5);
    EXPECT_EQ(choose_t_dp(inst), 20000);
}

TEST(ChooseTdp, DegenerateRateRejected) {
    // the limit set touches the running boundary: the decay rate is 1
    const auto inst = single_instance(Measure::Probability, 0.65,
                                      FairnessTarget::unit(40, Interval(0.4, 0.6), Interval(0.5, 0.6)), 0.1, 0.3);
    EXPECT_THROW(choose_t_dp(inst), std::domain_error);
}

TEST(ChooseTdp, CapReportsReachableMinimum) {
    auto inst = single_instance(Measure::Probability, 0.65,
                                FairnessTarget::unit(40, Interval(0.4, 0.6), Interval(0.5, 0.5)), 0.1, 1e-9);
    inst.t_dp_cap = 1000;  // Bound(1000) is far above 1e-9
    EXPECT_THROW(choose_t_dp(inst), ResourceLimitError);
}

TEST(Condition, VacuousForIdleShieldFarFromTarget) {
    const auto inst = single_instance(Measure::Probability, 0.9,
                                      FairnessTarget::unit(10, Interval(0.3, 0.7), Interval(0.5, 0.5)), 0.1, 0.3);
    // the idle shield's fixpoint is p = 0.9, outside S: the bound side is
    // vacuous and the DP alone pushes the condition to one
    const double d = condition_value(EnergyFunction::idle(), 200, inst);
    EXPECT_NEAR(d, 1.0, 1e-9);
}

TEST(Condition, StableUnderHorizonExtension) {
    const auto inst = single_instance(Measure::Probability, 0.65,
                                      FairnessTarget::unit(20, Interval(0.2, 0.8), Interval(0.5, 0.5)), 0.05, 0.02);
    const long t_dp = choose_t_dp(inst);
    const auto zeta = inst.family(0.6);
    const double d1 = condition_value(zeta, t_dp, inst);
    const double d2 = condition_value(zeta, t_dp + 500, inst);
    EXPECT_LE(std::abs(d1 - d2), inst.epsilon);
}

TEST(Synthesize, VacuousBudgetFindsLeastSteepProbe) {
    auto inst = single_instance(Measure::Probability, 0.65,
                                FairnessTarget::unit(30, Interval(0.2, 0.8), Interval(0.5, 0.5)), 1.5, 0.05);
    const auto outcome = synthesize(inst);
    ASSERT_TRUE(outcome.found);
    EXPECT_DOUBLE_EQ(outcome.index, inst.index_tol);
    EXPECT_LE(outcome.condition, inst.delta + inst.epsilon);
}

TEST(Synthesize, ImpossibleInstanceFails) {
    // the first scored step always violates: no member can reach delta
    auto inst = single_instance(Measure::Probability, 0.65,
                                FairnessTarget::unit(1, Interval(0.2, 0.8), Interval(0.5, 0.5)), 0.01, 0.01);
    const auto outcome = synthesize(inst);
    EXPECT_FALSE(outcome.found);
    EXPECT_GT(outcome.condition, inst.delta);
}

TEST(Synthesize, InteriorThresholdWithMinimalityWitness) {
    // early scored window: shallow members admit early violations, steep ones
    // do not, so the validity threshold is interior to the index range
    auto inst = single_instance(Measure::Probability, 0.65,
                                FairnessTarget::unit(3, Interval(0.1, 0.9), Interval(0.5, 0.5)), 0.1, 0.01);
    const auto outcome = synthesize(inst);
    ASSERT_TRUE(outcome.found);
    EXPECT_LE(outcome.condition, inst.delta + inst.epsilon);
    EXPECT_GT(outcome.index, inst.index_tol);
    EXPECT_LT(outcome.index, 1.0 - inst.index_tol);
    // epsilon-minimality witness: a slightly less steep member misses delta
    ASSERT_GT(outcome.index, 0.05);
    const double shallower = condition_value(inst.family(outcome.index - 0.05), outcome.t_dp, inst);
    EXPECT_GT(shallower, inst.delta - inst.epsilon);
}

TEST(Synthesize, DeterministicAndBounded) {
    auto inst = single_instance(Measure::Expectation, 0.65,
                                FairnessTarget::unit(3, Interval(0.1, 0.9), Interval(0.5, 0.5)), 0.5, 0.05);
    const auto a = synthesize(inst);
    const auto b = synthesize(inst);
    EXPECT_EQ(a.found, b.found);
    EXPECT_DOUBLE_EQ(a.index, b.index);
    EXPECT_DOUBLE_EQ(a.condition, b.condition);
    EXPECT_EQ(a.t_dp, b.t_dp);
    EXPECT_LE(a.iterations, static_cast<int>(std::ceil(std::log2(1.0 / inst.index_tol))) + 1);
    if (a.found) EXPECT_LE(a.condition, inst.delta + inst.epsilon);
}

TEST(Synthesize, TwoGroupInstanceWithMonteCarloPrefix) {
    SynthesisInstance inst{Measure::Probability,
                           TwoGroupSetting{0.5, 0.9, 0.1},
                           FairnessTarget::two_group(60, Interval(-0.9, 0.95), Interval(0.0, 0.0)),
                           0.5,
                           0.2};
    inst.eta = 0.1;
    inst.probe_points = 6;
    inst.dp_options.mc_runs = 2000;
    const long t_dp = choose_t_dp(inst);
    EXPECT_GE(t_dp, two_group_tau(0.1, 0.5));
    const auto outcome = synthesize(inst);
    ASSERT_TRUE(outcome.found);
    EXPECT_LE(outcome.condition, inst.delta + inst.epsilon);
    // eta is a mandatory part of a two-group instance
    SynthesisInstance no_eta = inst;
    no_eta.eta.reset();
    EXPECT_THROW(synthesize(no_eta), std::invalid_argument);
}
