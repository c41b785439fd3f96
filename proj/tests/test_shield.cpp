#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "fairshield/analysis.hpp"
#include "fairshield/csv.hpp"
#include "fairshield/shield.hpp"

using namespace fairshield;

namespace {

// Feeds a bit pattern through an engine with draws that never trigger a flip
// probability below `u`.
void feed(ShieldEngine& engine, std::initializer_list<int> bits, double u = 0.999999) {
    for (int b : bits) engine.step({std::nullopt, b}, u);
}

} // namespace

TEST(SingleStep, PivotBranchAcceptsOnes) {
    // state mean exactly at the pivot: the shield favors 1s
    ShieldEngine engine{KnownShield{EnergyFunction::polynomial(0.4, 2.7, 2.0)}};
    feed(engine, {1, 1, 0, 0, 0});  // mean 0.4 = kappa
    const auto rec = engine.step({std::nullopt, 1}, 0.0);
    EXPECT_EQ(rec.y, 0);
    EXPECT_EQ(rec.z, 1);
}

TEST(SingleStep, AbovePivotFlipsOnes) {
    ShieldEngine engine{KnownShield{EnergyFunction::polynomial(0.4, 2.7, 2.0)}};
    feed(engine, {1, 1, 1, 0, 0});  // mean 0.6, zeta(0.6) = 0.108
    auto e1 = engine;
    const auto flip = e1.step({std::nullopt, 1}, 0.05);
    EXPECT_EQ(flip.y, 1);
    EXPECT_EQ(flip.z, 0);
    auto e2 = engine;
    const auto keep = e2.step({std::nullopt, 1}, 0.2);  // 0.2 >= 0.108
    EXPECT_EQ(keep.y, 0);
    EXPECT_EQ(keep.z, 1);
    auto e3 = engine;
    const auto zero = e3.step({std::nullopt, 0}, 0.0);  // favored decision, never flipped
    EXPECT_EQ(zero.y, 0);
    EXPECT_EQ(zero.z, 0);
}

TEST(SingleStep, IdleNeverIntervenes) {
    ShieldEngine engine{IdleShield{}};
    for (int b : {1, 0, 1, 1, 0}) {
        const auto rec = engine.step({std::nullopt, b}, 0.0);
        EXPECT_EQ(rec.y, 0);
        EXPECT_EQ(rec.z, b);
    }
    EXPECT_EQ(engine.interventions(), 0);
}

TEST(SingleStep, FirstDecisionIsReleasedUnshielded) {
    // naive energy: zeta(0) = 1, so every later 0 below the target flips, but
    // the very first decision passes through raw.
    ShieldEngine engine{KnownShield{EnergyFunction::naive(Interval(0.4, 0.6))}};
    const auto first = engine.step({std::nullopt, 0}, 0.0);
    EXPECT_EQ(first.y, 0);
    EXPECT_EQ(first.z, 0);
    const auto second = engine.step({std::nullopt, 0}, 0.0);  // mean 0 now, zeta(0) = 1
    EXPECT_EQ(second.y, 1);
    EXPECT_EQ(second.z, 1);
}

TEST(TwoGroupStep, RuleTable) {
    const auto zeta = EnergyFunction::exponential(0.0, 0.2, 5.0, FairnessDomain::Signed);
    ShieldEngine base{TwoGroupShield{zeta}};
    // reach N_A=5, S_A=2 and N_B=1, S_B=0: M = 0.4 above the pivot 0
    base.step({Group::B, 0}, 0.99);
    for (int b : {1, 1, 0, 0, 0}) base.step({Group::A, b}, 0.99);
    ASSERT_TRUE(base.fairness().has_value());
    ASSERT_NEAR(*base.fairness(), 0.4, 1e-15);
    const double z04 = 0.2 * (1.0 - std::exp(-5.0 * 0.16));

    {
        auto e = base;  // M > kappa, group A accepting raises M: unfavorable
        const auto rec = e.step({Group::A, 1}, z04 - 0.01);
        EXPECT_EQ(rec.y, 1);
        EXPECT_EQ(rec.z, 0);
    }
    {
        auto e = base;  // same but the flip is not sampled
        const auto rec = e.step({Group::A, 1}, z04 + 0.01);
        EXPECT_EQ(rec.y, 0);
        EXPECT_EQ(rec.z, 1);
    }
    {
        auto e = base;  // M > kappa favors rejecting A
        const auto rec = e.step({Group::A, 0}, 0.0);
        EXPECT_EQ(rec.y, 0);
    }
    {
        auto e = base;  // M > kappa favors accepting B
        const auto rec = e.step({Group::B, 1}, 0.0);
        EXPECT_EQ(rec.y, 0);
        EXPECT_EQ(rec.z, 1);
    }
}

TEST(TwoGroupStep, IdlesUntilBothGroupsSeen) {
    const auto zeta = EnergyFunction::exponential(0.0, 0.9, 50.0, FairnessDomain::Signed);
    ShieldEngine engine{TwoGroupShield{zeta}};
    for (int i = 0; i < 5; ++i) {
        const auto rec = engine.step({Group::A, 0}, 0.0);  // would flip if the shield were active
        EXPECT_EQ(rec.y, 0);
        EXPECT_TRUE(std::isnan(rec.m));
    }
    const auto rec = engine.step({Group::B, 0}, 0.0);
    EXPECT_FALSE(std::isnan(rec.m));
}

TEST(NaiveStep, WorkedExample) {
    // 40 ones then 60 zeros reach t=100 with mean 0.4 without triggering the
    // shield; the next 0 would leave the target and is flipped.
    ShieldEngine engine{NaiveShield{Interval(0.4, 0.6), 100}};
    for (int i = 0; i < 40; ++i) engine.step({std::nullopt, 1}, 0.5);
    for (int i = 0; i < 60; ++i) engine.step({std::nullopt, 0}, 0.5);
    EXPECT_EQ(engine.interventions(), 0);
    ASSERT_NEAR(*engine.fairness(), 0.4, 1e-15);
    const auto rec = engine.step({std::nullopt, 0}, 0.5);
    EXPECT_EQ(rec.y, 1);
    EXPECT_EQ(rec.z, 1);
}

TEST(NaiveStep, KeepsDecisionsInsideTarget) {
    ShieldEngine engine{NaiveShield{Interval(0.4, 0.6), 100}};
    for (int i = 0; i < 50; ++i) engine.step({std::nullopt, 1}, 0.5);
    for (int i = 0; i < 50; ++i) engine.step({std::nullopt, 0}, 0.5);
    ASSERT_NEAR(*engine.fairness(), 0.5, 1e-15);
    const auto rec = engine.step({std::nullopt, 1}, 0.5);  // 51/101 stays inside
    EXPECT_EQ(rec.y, 0);
    EXPECT_EQ(rec.z, 1);
}

TEST(NaiveStep, SilentBeforeBurnIn) {
    ShieldEngine engine{NaiveShield{Interval(0.4, 0.6), 10}};
    const auto rec = engine.step({std::nullopt, 0}, 0.5);  // mean 0 is outside, but t+1 < tau
    EXPECT_EQ(rec.y, 0);
}

TEST(NaiveStep, BothOutsidePicksNearest) {
    // mean 40/100 against a far target: flipping gets closer than keeping
    ShieldEngine engine{NaiveShield{Interval(0.45, 0.46), 101}};
    for (int i = 0; i < 40; ++i) engine.step({std::nullopt, 1}, 0.5);
    for (int i = 0; i < 60; ++i) engine.step({std::nullopt, 0}, 0.5);
    const auto rec = engine.step({std::nullopt, 0}, 0.5);
    EXPECT_EQ(rec.y, 1);
    EXPECT_EQ(rec.z, 1);
}

TEST(Adaptive, EstimateUsesRawDecisionsWithSmoothing) {
    ShieldEngine engine{AdaptiveShield{0.5}};
    EXPECT_DOUBLE_EQ(engine.p_hat(), 0.5);  // prior before any data
    for (int i = 0; i < 10; ++i) engine.step({std::nullopt, 1}, 0.999999);
    EXPECT_DOUBLE_EQ(engine.p_hat(), 11.0 / 12.0);  // (1 + t) / (2 + t) on all ones
}

TEST(Adaptive, EstimateConcentratesOnTrueBias) {
    Rng env(314);
    ShieldEngine engine{AdaptiveShield{0.5}};
    Rng flips(315);
    for (int t = 0; t < 10000; ++t) {
        engine.step({std::nullopt, env.bernoulli(0.65) ? 1 : 0}, flips.uniform());
    }
    EXPECT_NEAR(engine.p_hat(), 0.65, 0.015);
}

TEST(RunStream, DeterministicAndXorConsistent) {
    const std::vector<RawInput> xs = {{std::nullopt, 1}, {std::nullopt, 0}, {std::nullopt, 1}};
    const auto idle = run_stream(IdleShield{}, xs, 9);
    ASSERT_EQ(idle.size(), 3u);
    EXPECT_EQ(idle[0].z, 1);
    EXPECT_EQ(idle[1].z, 0);
    EXPECT_EQ(idle[2].z, 1);
    EXPECT_DOUBLE_EQ(idle.back().nu, 0.0);

    Rng rng(99);
    std::vector<RawInput> noisy;
    for (int i = 0; i < 500; ++i) noisy.push_back({std::nullopt, rng.bernoulli(0.65) ? 1 : 0});
    const KnownShield shield{EnergyFunction::polynomial(0.4, 2.7, 2.0)};
    const auto a = run_stream(shield, noisy, 1234);
    const auto b = run_stream(shield, noisy, 1234);
    for (std::size_t i = 0; i < a.size(); ++i) {
        ASSERT_EQ(a[i].z, b[i].z);
        ASSERT_EQ(a[i].z, a[i].x ^ a[i].y);
        ASSERT_EQ(a[i].t, static_cast<long>(i) + 1);
    }
}

TEST(RunStream, NaiveReplayFlipsExactlyWhenTheMeanWouldEscape) {
    // 40 ones, then zeros: under a (100, [0.4, 0.6]) target the first flip
    // lands on the 101st decision, where keeping the raw 0 would give
    // 40/101 < 0.4.
    std::vector<RawInput> xs;
    for (int i = 0; i < 40; ++i) xs.push_back({std::nullopt, 1});
    for (int i = 0; i < 80; ++i) xs.push_back({std::nullopt, 0});
    const auto records = run_stream(NaiveShield{Interval(0.4, 0.6), 100}, xs, 1);
    for (const auto& rec : records) {
        if (rec.t <= 100) {
            ASSERT_EQ(rec.y, 0) << "t=" << rec.t;
        }
    }
    EXPECT_EQ(records[100].t, 101);
    EXPECT_EQ(records[100].y, 1);
    EXPECT_EQ(records[100].z, 1);
    // from then on the mean is held inside the target
    for (const auto& rec : records) {
        if (rec.t > 100) ASSERT_GE(rec.m, 0.4);
    }
}

TEST(RunStream, MalformedInputReportsIndex) {
    const std::vector<RawInput> xs = {{std::nullopt, 1}, {Group::A, 0}};
    try {
        run_stream(IdleShield{}, xs, 1);
        FAIL() << "expected invalid_argument";
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("index 1"), std::string::npos);
    }
}

// One-step acceptance frequency matches the characteristic function and the
// intervention frequency matches the expected-cost function at a frozen
// fairness value.
TEST(Frequencies, MatchCharacteristicAndCostFunctions) {
    const double p = 0.65;
    const auto zeta = EnergyFunction::polynomial(0.4, 2.7, 2.0);
    const CharacteristicModel model(SingleGroupSetting{p}, zeta);

    ShieldEngine frozen{KnownShield{zeta}};
    feed(frozen, {1, 1, 1, 0, 0});  // mean 0.6
    const double mu = *frozen.fairness();

    Rng rng(2024);
    const long n = 1000000;
    long ones = 0, flips = 0;
    for (long i = 0; i < n; ++i) {
        auto e = frozen;
        const int x = rng.bernoulli(p) ? 1 : 0;
        const auto rec = e.step({std::nullopt, x}, rng.uniform());
        ones += rec.z;
        flips += rec.y;
    }
    const double f_expected = model.f(mu);
    const double h_expected = model.h(mu);
    const double f_se = std::sqrt(f_expected * (1.0 - f_expected) / n);
    const double h_se = std::sqrt(h_expected * (1.0 - h_expected) / n);
    EXPECT_NEAR(static_cast<double>(ones) / n, f_expected, 4.0 * f_se);
    EXPECT_NEAR(static_cast<double>(flips) / n, h_expected, 4.0 * h_se);
}

TEST(LongRun, CalibratedShieldConvergesToTarget) {
    const double p = 0.65;
    const auto zeta = calibrated_exponential(p, 0.5);
    int close = 0;
    const int runs = 100;
    for (int rep = 0; rep < runs; ++rep) {
        Rng env(derive_key(5150, {static_cast<std::uint64_t>(rep), 0}));
        Rng flips(derive_key(5150, {static_cast<std::uint64_t>(rep), 1}));
        ShieldEngine engine{KnownShield{zeta}};
        StepRecord rec;
        for (long t = 0; t < 10000; ++t) {
            rec = engine.step({std::nullopt, env.bernoulli(p) ? 1 : 0}, flips.uniform());
        }
        if (std::abs(rec.m - 0.5) <= 0.02) ++close;
    }
    EXPECT_GE(close, 90);
}

TEST(TraceCsv, TwelveSignificantDigits) {
    std::vector<StepRecord> records;
    StepRecord r;
    r.t = 3;
    r.x = 1;
    r.y = 0;
    r.z = 1;
    r.m = 1.0 / 3.0;
    r.nu = 2.0 / 3.0;
    records.push_back(r);
    StepRecord r2 = r;
    r2.t = 4;
    r2.group = Group::B;
    r2.m = std::numeric_limits<double>::quiet_NaN();
    records.push_back(r2);

    std::ostringstream os;
    write_trace_csv(os, records);
    EXPECT_EQ(os.str(),
              "t,group,x,y,z,m,nu\n"
              "3,,1,0,1,0.333333333333,0.666666666667\n"
              "4,B,1,0,1,,0.666666666667\n");
}
