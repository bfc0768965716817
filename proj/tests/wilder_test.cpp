#include "powertrend/errors.hpp"
#include "powertrend/market_data.hpp"
#include "powertrend/wilder.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace powertrend;
using powertrend::testing::naive_atr_at;
using powertrend::testing::random_walk;
using powertrend::testing::rel_close;
using powertrend::testing::wire;

namespace {

BarSeries bars_of(std::vector<Bar> bars)
{
    for (std::size_t i = 0; i < bars.size(); ++i) {
        bars[i].stamp = static_cast<std::int64_t>(i);
    }
    return BarSeries("T", std::move(bars));
}

} // namespace

TEST(TrueRange, ThreeWayMax)
{
    // prev close 11, today H=12 L=10: range dominates
    const auto a = true_range(bars_of({{0, 11, 11, 11, 11}, {0, 11, 12, 10, 11}}));
    EXPECT_DOUBLE_EQ(a[1], 2.0);
    // gap up: prev close 10, today H=15 L=14
    const auto b = true_range(bars_of({{0, 10, 10, 10, 10}, {0, 14, 15, 14, 15}}));
    EXPECT_DOUBLE_EQ(b[1], 5.0);
    // gap down: prev close 20, today H=16 L=15
    const auto c = true_range(bars_of({{0, 20, 20, 20, 20}, {0, 16, 16, 15, 15}}));
    EXPECT_DOUBLE_EQ(c[1], 5.0);
    // wire bars collapse to |dC|
    const auto w = true_range(wire({100, 102}));
    EXPECT_DOUBLE_EQ(w[0], 0.0);
    EXPECT_DOUBLE_EQ(w[1], 2.0);
    EXPECT_THROW(true_range(wire({100})), WarmupError);
}

TEST(WilderSmooth, HandRecursion)
{
    const std::vector<double> tr = {2, 2, 2, 5};
    const auto s = wilder_smooth(tr, 3);
    EXPECT_TRUE(std::isnan(s[0]));
    EXPECT_TRUE(std::isnan(s[1]));
    EXPECT_DOUBLE_EQ(s[2], 2.0);
    EXPECT_DOUBLE_EQ(s[3], 3.0); // (2*2 + 5) / 3
    EXPECT_THROW(wilder_smooth(tr, 0), ConfigError);
}

TEST(Atr, ConstantTrueRangeIsAFixedPoint)
{
    std::vector<Bar> bars;
    for (int i = 0; i < 40; ++i) {
        bars.push_back({0, 100, 101.5, 100, 100.75}); // TR = 1.5 on every bar
    }
    const auto a = atr(bars_of(bars), {14});
    EXPECT_EQ(a.first_defined(), 14u);
    for (std::size_t t = 14; t < a.size(); ++t) {
        EXPECT_DOUBLE_EQ(a[t], 1.5);
    }
}

TEST(Atr, ZigzagIsTheStepEverywhereDefined)
{
    const auto s = generate(parse_synthetic("zigzag:100:2:2:60"));
    for (std::size_t n : {1u, 3u, 14u}) {
        const auto a = atr(s, {n});
        EXPECT_EQ(a.first_defined(), n);
        EXPECT_EQ(atr_warmup({n}), n);
        for (std::size_t t = n; t < a.size(); ++t) {
            EXPECT_EQ(a[t], 2.0);
        }
    }
}

TEST(Atr, MatchesBruteForceReplay)
{
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto s = random_walk(seed, 120);
        for (std::size_t n : {1u, 5u, 14u}) {
            const auto a = atr(s, {n});
            for (std::size_t t = 0; t < s.size(); ++t) {
                EXPECT_TRUE(rel_close(a[t], naive_atr_at(s, n, t), 1e-12)) << "seed " << seed << " t " << t;
            }
        }
    }
}

TEST(Atr, TooShort)
{
    EXPECT_THROW(atr(wire({1, 2, 3}), {3}), WarmupError);
    EXPECT_NO_THROW(atr(wire({1, 2, 3, 4}), {3}));
    EXPECT_THROW(atr(wire({1, 2, 3, 4}), {0}), ConfigError);
}

TEST(Directional, MovementRules)
{
    // prev H=10 L=8, today H=12 L=9: up=2, down=-1
    auto s = bars_of({{0, 9, 10, 8, 9}, {0, 10, 12, 9, 11}, {0, 11, 11.5, 9.5, 10}, {0, 10, 13, 7, 8}});
    const auto dm = directional(s, {1});
    EXPECT_DOUBLE_EQ(dm.plus_dm[1], 2.0);
    EXPECT_DOUBLE_EQ(dm.minus_dm[1], 0.0);
    // inside day: H 12 -> 11.5, L 9 -> 9.5
    EXPECT_DOUBLE_EQ(dm.plus_dm[2], 0.0);
    EXPECT_DOUBLE_EQ(dm.minus_dm[2], 0.0);
    // outside day with up (1.5) < down (2.5)
    EXPECT_DOUBLE_EQ(dm.plus_dm[3], 0.0);
    EXPECT_DOUBLE_EQ(dm.minus_dm[3], 2.5);
}

TEST(Directional, EqualUpAndDownGivesNoMovement)
{
    auto s = bars_of({{0, 10, 11, 9, 10}, {0, 10, 12, 8, 10}});
    const auto dm = directional(s, {1});
    EXPECT_EQ(dm.plus_dm[1], 0.0);
    EXPECT_EQ(dm.minus_dm[1], 0.0);
}

TEST(Directional, DxFromIndicators)
{
    // N=2: +DM 3 on bar 1, -DM 1 on bar 2, TR 5 + 5, so +DI=30 and -DI=10 at bar 2.
    auto s = bars_of({{0, 9, 10, 8, 9}, {0, 10, 13, 8, 10}, {0, 10, 12, 7, 9}, {0, 9, 12, 7, 9}});
    const auto dm = directional(s, {2});
    EXPECT_NEAR(dm.plus_di[2], 30.0, 1e-12);
    EXPECT_NEAR(dm.minus_di[2], 10.0, 1e-12);
    EXPECT_NEAR(dm.dx[2], 50.0, 1e-12);
}

TEST(Directional, WarmupIndices)
{
    const auto s = random_walk(3, 100);
    for (std::size_t n : {2u, 5u, 14u}) {
        const auto dm = directional(s, {n});
        EXPECT_EQ(dm.plus_dm.first_defined(), 1u);
        EXPECT_EQ(dm.plus_di.first_defined(), n);
        EXPECT_EQ(dm.dx.first_defined(), n);
        EXPECT_EQ(dm.adx.first_defined(), 2 * n - 1);
        EXPECT_EQ(dm.adxr.first_defined(), 3 * n - 2);
    }
    EXPECT_THROW(directional(random_walk(3, 27), {14}), WarmupError);
    const auto short_one = directional(random_walk(3, 28), {14});
    EXPECT_EQ(short_one.adx.first_defined(), 27u);
    EXPECT_EQ(short_one.adxr.first_defined(), short_one.adxr.size()); // never defined
}

TEST(Directional, BoundedOnRandomWalks)
{
    for (std::uint64_t seed = 100; seed < 150; ++seed) {
        const auto dm = directional(random_walk(seed, 200, 50.0, 0.03), {14});
        for (const auto* series : {&dm.dx, &dm.adx, &dm.adxr, &dm.plus_di, &dm.minus_di}) {
            for (std::size_t t = series->first_defined(); t < series->size(); ++t) {
                ASSERT_FALSE(std::isnan((*series)[t])) << "defined values stay defined";
                EXPECT_GE((*series)[t], 0.0);
                EXPECT_LE((*series)[t], 100.0);
            }
        }
    }
}

TEST(Directional, RisingWireSeries)
{
    std::vector<double> closes;
    double level = 50.0;
    for (int i = 0; i < 60; ++i) {
        closes.push_back(level);
        level += 0.25 * (1 + i % 3);
    }
    const auto dm = directional(wire(closes), {14});
    for (std::size_t t = 1; t < closes.size(); ++t) {
        EXPECT_EQ(dm.minus_dm[t], 0.0);
    }
    for (std::size_t t = dm.dx.first_defined(); t < closes.size(); ++t) {
        EXPECT_DOUBLE_EQ(dm.dx[t], 100.0);
    }
}

TEST(Directional, TranslationInvariance)
{
    // Dyadic prices and shift keep the arithmetic exact.
    std::vector<Bar> bars;
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<int> q(-8, 8);
    double c = 64.0;
    for (int i = 0; i < 80; ++i) {
        const double o = c;
        c = std::max(8.0, c + q(rng) * 0.25);
        const double h = std::max(o, c) + (q(rng) + 8) * 0.125;
        const double l = std::min(o, c) - (q(rng) + 8) * 0.0625;
        bars.push_back({i, o, h, l, c});
    }
    auto shifted = bars;
    for (auto& b : shifted) {
        b.open += 32.0;
        b.high += 32.0;
        b.low += 32.0;
        b.close += 32.0;
    }
    const BarSeries a("A", bars);
    const BarSeries b("B", shifted);
    const auto tra = true_range(a);
    const auto trb = true_range(b);
    const auto dma = directional(a, {14});
    const auto dmb = directional(b, {14});
    for (std::size_t t = 0; t < a.size(); ++t) {
        EXPECT_EQ(tra[t], trb[t]);
        if (t > 0) {
            EXPECT_EQ(dma.plus_dm[t], dmb.plus_dm[t]);
            EXPECT_EQ(dma.minus_dm[t], dmb.minus_dm[t]);
        }
    }
}
