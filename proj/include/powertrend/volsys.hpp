#pragma once

#include "powertrend/series.hpp"
#include "powertrend/table.hpp"
#include "powertrend/wilder.hpp"

#include <cstddef>
#include <optional>
#include <ostream>
#include <string_view>
#include <vector>

namespace powertrend {

enum class Direction { long_, short_ };
enum class InitialDirection { long_, short_, automatic };
enum class Position { flat, long_, short_ };

std::string_view to_string(Direction d);
std::string_view to_string(Position p);
InitialDirection parse_initial_direction(std::string_view text);

constexpr double sign(Direction d) noexcept { return d == Direction::long_ ? 1.0 : -1.0; }
constexpr Direction reverse(Direction d) noexcept
{
    return d == Direction::long_ ? Direction::short_ : Direction::long_;
}

struct VolSysParams {
    double multiplier = 3.0; // ARC = multiplier * ATR
    WilderParams atr_params;
    InitialDirection initial_direction = InitialDirection::automatic;
};

/// State of the stop-and-reverse machine while a position is open.
struct VolSysState {
    Direction position = Direction::long_;
    double sic = 0.0; // significant close: extreme close since entry
    double arc = 0.0;
    double sar = 0.0;
};

struct Trade {
    Direction direction = Direction::long_;
    std::size_t entry_index = 0;
    std::size_t exit_index = 0;
    double entry_price = 0.0;
    double exit_price = 0.0;
    double pnl_points = 0.0;
};

struct BacktestResult {
    std::vector<Trade> trades;           // closed trades, in order
    std::optional<Trade> open_trade;     // marked to market at the final close
    double realized_pnl_points = 0.0;
    double total_pnl_points = 0.0;       // realized + open mark-to-market
    std::optional<double> first_entry_price;
    IndicatorSeries sic_series;
    IndicatorSeries sar_series;
    std::vector<Position> position_series;
    std::size_t start_index = 0;         // first bar with a defined ATR

    /// total P&L divided by the first entry price; 0 when nothing was traded.
    double total_pnl_normalized() const noexcept;
    /// Number of positions opened, counting a still-open one.
    std::size_t positions_opened() const noexcept;
};

/// Wilder's volatility system: trail the extreme close with a stop ARC away
/// and reverse whenever a close reaches it. With a gate, positions may only be
/// opened on bars where the gate is true; open positions are always managed.
BacktestResult run_volsys(const BarSeries& series, const VolSysParams& params,
                          const std::vector<bool>& gate = {});

/// Same as run_volsys, with a precomputed ATR aligned to the series.
BacktestResult run_volsys(const BarSeries& series, const IndicatorSeries& atr_series,
                          const VolSysParams& params, const std::vector<bool>& gate = {});

/// Per-bar SIC of the active position; undefined during warm-up and while flat.
IndicatorSeries sic_series(const BacktestResult& result);

/// direction,entry_index,entry_price,exit_index,exit_price,pnl_points (closed trades only)
Table trades_table(const BacktestResult& result);
void write_trades_csv(std::ostream& out, const BacktestResult& result);

} // namespace powertrend
