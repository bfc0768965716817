#include "powertrend/errors.hpp"
#include "powertrend/market_data.hpp"
#include "powertrend/volsys.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace powertrend;
using namespace powertrend::testing;

TEST(VolSys, WireGraphTotals)
{
    for (int m = 1; m <= 4; ++m) {
        const auto series = generate(zigzag_spec(m));
        const std::size_t start = zigzag_atr_period;
        ASSERT_EQ(series[start].close, series[series.size() - 1].close) << "traded window starts and ends level";
        ASSERT_EQ(series[0].close, series[series.size() - 1].close);

        const auto r = run_volsys(series, zigzag_params());
        EXPECT_EQ(r.start_index, start);
        EXPECT_NEAR(r.total_pnl_points, zigzag_total_in_steps[m - 1] * zigzag_step, 1e-9 * zigzag_step) << "m=" << m;
    }
}

TEST(VolSys, FourStepSwingSegments)
{
    // Stopped out of the first Sell (-dF), Buy stopped 2 dF higher (+2 dF),
    // then the final Sell rides down to the finish (+3 dF).
    const auto r = run_volsys(generate(zigzag_spec(4)), zigzag_params());
    ASSERT_EQ(r.trades.size(), 2u);
    ASSERT_TRUE(r.open_trade);
    EXPECT_EQ(r.trades[0].direction, Direction::short_);
    EXPECT_EQ(r.trades[0].pnl_points, -1 * zigzag_step);
    EXPECT_EQ(r.trades[1].direction, Direction::long_);
    EXPECT_EQ(r.trades[1].pnl_points, 2 * zigzag_step);
    EXPECT_EQ(r.open_trade->direction, Direction::short_);
    EXPECT_EQ(r.open_trade->pnl_points, 3 * zigzag_step);
    EXPECT_EQ(r.realized_pnl_points, 1 * zigzag_step);
}

TEST(VolSys, SicHandReplayTwoStepZigzag)
{
    const auto r = run_volsys(generate(zigzag_spec(2)), zigzag_params());
    const auto sic = sic_series(r);
    const std::vector<double> expected = {102, 104, 102, 100, 102, 104, 102, 100, 102};
    for (std::size_t t = 0; t < zigzag_atr_period; ++t) {
        EXPECT_FALSE(sic.defined(t));
        EXPECT_EQ(r.position_series[t], Position::flat);
    }
    for (std::size_t k = 0; k < expected.size(); ++k) {
        EXPECT_EQ(sic[zigzag_atr_period + k], expected[k]) << k;
    }
    ASSERT_EQ(r.trades.size(), 5u);
    EXPECT_EQ(r.trades[0].pnl_points, -2.0);
    EXPECT_EQ(r.trades[1].pnl_points, -2.0);
}

TEST(VolSys, MonotoneRiseIsOneLongTrade)
{
    std::vector<double> closes;
    double level = 100.0;
    for (int i = 0; i < 40; ++i) {
        closes.push_back(level);
        level += 1.0 + 0.1 * (i % 4);
    }
    const auto series = wire(closes);
    for (double mult : {0.1, 1.0, 3.0, 8.0}) {
        VolSysParams p;
        p.multiplier = mult;
        const auto r = run_volsys(series, p);
        EXPECT_TRUE(r.trades.empty());
        ASSERT_TRUE(r.open_trade);
        EXPECT_EQ(r.open_trade->direction, Direction::long_);
        EXPECT_DOUBLE_EQ(r.total_pnl_points, closes.back() - closes[r.start_index]);
        for (std::size_t t = r.start_index; t < closes.size(); ++t) {
            EXPECT_EQ(r.sic_series[t], closes[t]);
        }
    }
}

TEST(VolSys, ConstantSeriesNeverFlips)
{
    const auto r = run_volsys(generate(parse_synthetic("constant:100:60")), VolSysParams{});
    EXPECT_TRUE(r.trades.empty());
    EXPECT_EQ(r.total_pnl_points, 0.0);
    for (std::size_t t = r.start_index; t < 60; ++t) {
        EXPECT_EQ(r.sic_series[t], 100.0);
    }
}

TEST(VolSys, AutomaticInitialDirection)
{
    VolSysParams p;
    p.atr_params.smoothing_period = 2;
    p.multiplier = 100.0; // never stopped
    EXPECT_EQ(run_volsys(wire({10, 11, 10, 11, 11}), p).open_trade->direction, Direction::short_);
    EXPECT_EQ(run_volsys(wire({10, 11, 12, 13, 11}), p).open_trade->direction, Direction::long_);
    EXPECT_EQ(run_volsys(wire({10, 11, 11, 13, 11}), p).open_trade->direction, Direction::long_); // tie
}

TEST(VolSys, StopAndSicInvariantsOnRandomWalks)
{
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        const auto series = random_walk(seed, 300);
        VolSysParams p;
        p.multiplier = 0.5 + 0.1 * static_cast<double>(seed % 30);
        const auto r = run_volsys(series, p);
        for (const auto& trade : r.trades) {
            ASSERT_GT(trade.exit_index, trade.entry_index);
            const std::size_t exit = trade.exit_index;
            const double close = series[exit].close;
            // the SAR in force at the exit bar is the one that was crossed
            double sic = trade.entry_price;
            for (std::size_t t = trade.entry_index + 1; t <= exit; ++t) {
                const double c = series[t].close;
                sic = trade.direction == Direction::long_ ? std::max(sic, c) : std::min(sic, c);
                const double arc = p.multiplier * atr(series, p.atr_params)[t];
                const double sar = sic - sign(trade.direction) * arc;
                const bool hit = trade.direction == Direction::long_ ? c <= sar : c >= sar;
                EXPECT_EQ(hit, t == exit) << "seed " << seed << " bar " << t;
            }
            EXPECT_DOUBLE_EQ(trade.pnl_points, sign(trade.direction) * (close - trade.entry_price));
        }
        // SIC monotone within each position
        for (std::size_t t = r.start_index + 1; t < series.size(); ++t) {
            if (r.position_series[t] != r.position_series[t - 1]) {
                continue;
            }
            if (r.position_series[t] == Position::long_) {
                EXPECT_GE(r.sic_series[t], r.sic_series[t - 1]);
            } else {
                EXPECT_LE(r.sic_series[t], r.sic_series[t - 1]);
            }
        }
    }
}

TEST(VolSys, ScaleEquivariance)
{
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto series = random_walk(seed, 250);
        const auto base = run_volsys(series, VolSysParams{});
        for (double k : {0.01, 4.0, 1000.0}) {
            const auto r = run_volsys(series.scaled(k), VolSysParams{});
            ASSERT_EQ(r.trades.size(), base.trades.size());
            for (std::size_t i = 0; i < r.trades.size(); ++i) {
                EXPECT_EQ(r.trades[i].exit_index, base.trades[i].exit_index);
                EXPECT_TRUE(rel_close(r.trades[i].pnl_points, k * base.trades[i].pnl_points, 1e-12));
            }
            EXPECT_TRUE(rel_close(r.total_pnl_points, k * base.total_pnl_points, 1e-12));
        }
    }
}

TEST(VolSys, GateBlocksEntries)
{
    const auto series = random_walk(5, 200);
    const VolSysParams p;
    std::vector<bool> none(series.size(), false);
    const auto blocked = run_volsys(series, p, none);
    EXPECT_EQ(blocked.positions_opened(), 0u);
    EXPECT_EQ(blocked.total_pnl_points, 0.0);
    EXPECT_FALSE(blocked.first_entry_price);

    std::vector<bool> late(series.size(), false);
    for (std::size_t t = 120; t < late.size(); ++t) {
        late[t] = true;
    }
    const auto gated = run_volsys(series, p, late);
    for (std::size_t t = 0; t < 120; ++t) {
        EXPECT_EQ(gated.position_series[t], Position::flat);
    }
    EXPECT_EQ(gated.position_series[120] == Position::flat, false);
    for (const auto& trade : gated.trades) {
        EXPECT_GE(trade.entry_index, 120u);
    }
}

TEST(VolSys, StopOnClosedGateGoesFlatThenReverses)
{
    // N=1 so ATR = |dC|; multiplier 0.5 means any reversal stops out.
    VolSysParams p;
    p.atr_params.smoothing_period = 1;
    p.multiplier = 0.5;
    p.initial_direction = InitialDirection::long_;
    const auto series = wire({10, 11, 12, 11, 10, 9, 10});
    std::vector<bool> gate = {true, true, false, false, false, true, true};
    const auto r = run_volsys(series, p, gate);
    ASSERT_EQ(r.trades.size(), 2u);
    EXPECT_EQ(r.trades[0].direction, Direction::long_); // opened at bar 1, stopped at bar 3
    EXPECT_EQ(r.trades[0].exit_index, 3u);
    EXPECT_EQ(r.position_series[3], Position::flat);
    EXPECT_EQ(r.position_series[4], Position::flat);
    EXPECT_EQ(r.trades[1].direction, Direction::short_); // re-entered short on bar 5
    EXPECT_EQ(r.trades[1].entry_index, 5u);
    EXPECT_EQ(r.trades[1].exit_index, 6u);
    ASSERT_TRUE(r.open_trade);
    EXPECT_EQ(r.open_trade->direction, Direction::long_);
}

TEST(VolSys, Errors)
{
    VolSysParams p;
    p.multiplier = 0.0;
    EXPECT_THROW(run_volsys(random_walk(1, 50), p), ConfigError);
    EXPECT_THROW(run_volsys(random_walk(1, 10), VolSysParams{}), WarmupError);
    std::vector<bool> gate(3, true);
    EXPECT_THROW(run_volsys(random_walk(1, 50), VolSysParams{}, gate), ConfigError);
    EXPECT_THROW(parse_initial_direction("sideways"), ConfigError);
}

TEST(VolSys, TradeLedgerCsv)
{
    const auto r = run_volsys(generate(zigzag_spec(4)), zigzag_params());
    std::ostringstream out;
    write_trades_csv(out, r);
    EXPECT_EQ(out.str(),
              "direction,entry_index,entry_price,exit_index,exit_price,pnl_points\n"
              "short,24,100,25,102,-2\n"
              "long,25,102,29,106,4\n");
}
