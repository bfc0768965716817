#include "powertrend/volsys.hpp"

#include "powertrend/errors.hpp"

#include <algorithm>

namespace powertrend {

std::string_view to_string(Direction d)
{
    return d == Direction::long_ ? "long" : "short";
}

std::string_view to_string(Position p)
{
    switch (p) {
    case Position::long_:
        return "long";
    case Position::short_:
        return "short";
    case Position::flat:
        break;
    }
    return "flat";
}

InitialDirection parse_initial_direction(std::string_view text)
{
    if (text == "long") {
        return InitialDirection::long_;
    }
    if (text == "short") {
        return InitialDirection::short_;
    }
    if (text == "auto") {
        return InitialDirection::automatic;
    }
    throw ConfigError("initial direction must be long, short or auto, got '" + std::string(text) + "'");
}

double BacktestResult::total_pnl_normalized() const noexcept
{
    if (!first_entry_price || *first_entry_price == 0.0) {
        return 0.0;
    }
    return total_pnl_points / *first_entry_price;
}

std::size_t BacktestResult::positions_opened() const noexcept
{
    return trades.size() + (open_trade ? 1 : 0);
}

BacktestResult run_volsys(const BarSeries& series, const VolSysParams& params, const std::vector<bool>& gate)
{
    return run_volsys(series, atr(series, params.atr_params), params, gate);
}

BacktestResult run_volsys(const BarSeries& series, const IndicatorSeries& atr_series,
                          const VolSysParams& params, const std::vector<bool>& gate)
{
    if (!(params.multiplier > 0.0)) {
        throw ConfigError("volatility system multiplier must be > 0");
    }
    if (atr_series.size() != series.size()) {
        throw ConfigError("ATR series is not aligned with the bar series");
    }
    if (!gate.empty() && gate.size() != series.size()) {
        throw ConfigError("gate is not aligned with the bar series");
    }
    const std::size_t size = series.size();
    const std::size_t start = atr_series.first_defined();
    if (start >= size) {
        throw WarmupError("volatility system: ATR never defined over " + std::to_string(size) + " bars");
    }

    BacktestResult result;
    result.start_index = start;
    result.sic_series = IndicatorSeries(size);
    result.sar_series = IndicatorSeries(size);
    result.position_series.assign(size, Position::flat);

    auto allowed = [&](std::size_t t) { return gate.empty() || gate[t]; };
    auto initial = [&](std::size_t t) {
        switch (params.initial_direction) {
        case InitialDirection::long_:
            return Direction::long_;
        case InitialDirection::short_:
            return Direction::short_;
        case InitialDirection::automatic:
            break;
        }
        if (t == 0) {
            return Direction::long_;
        }
        return series[t].close < series[t - 1].close ? Direction::short_ : Direction::long_;
    };

    std::optional<VolSysState> state;
    Trade current;
    std::optional<Direction> pending; // reverse of the last stopped trade, while flat

    auto open = [&](std::size_t t, Direction dir, double arc) {
        const double close = series[t].close;
        state = VolSysState{dir, close, arc, close - sign(dir) * arc};
        current = Trade{dir, t, t, close, close, 0.0};
        if (!result.first_entry_price) {
            result.first_entry_price = close;
        }
    };

    for (std::size_t t = start; t < size; ++t) {
        const double close = series[t].close;
        const double arc = params.multiplier * atr_series[t];

        if (state) {
            state->arc = arc;
            if (state->position == Direction::long_) {
                state->sic = std::max(state->sic, close);
                state->sar = state->sic - arc;
            } else {
                state->sic = std::min(state->sic, close);
                state->sar = state->sic + arc;
            }
            const bool hit = arc > 0.0
                && (state->position == Direction::long_ ? close <= state->sar : close >= state->sar);
            if (hit) {
                current.exit_index = t;
                current.exit_price = close;
                current.pnl_points = sign(current.direction) * (close - current.entry_price);
                result.trades.push_back(current);
                result.realized_pnl_points += current.pnl_points;
                const Direction next = reverse(state->position);
                state.reset();
                if (allowed(t)) {
                    open(t, next, arc);
                } else {
                    pending = next;
                }
            }
        } else if (allowed(t)) {
            open(t, pending.value_or(initial(t)), arc);
            pending.reset();
        }

        if (state) {
            result.sic_series[t] = state->sic;
            result.sar_series[t] = state->sar;
            result.position_series[t] = state->position == Direction::long_ ? Position::long_ : Position::short_;
        }
    }

    result.total_pnl_points = result.realized_pnl_points;
    if (state) {
        const double last = series[size - 1].close;
        current.exit_index = size - 1;
        current.exit_price = last;
        current.pnl_points = sign(current.direction) * (last - current.entry_price);
        result.open_trade = current;
        result.total_pnl_points += current.pnl_points;
    }
    return result;
}

IndicatorSeries sic_series(const BacktestResult& result)
{
    return result.sic_series;
}

Table trades_table(const BacktestResult& result)
{
    Table table;
    table.columns = {"direction", "entry_index", "entry_price", "exit_index", "exit_price", "pnl_points"};
    for (const auto& trade : result.trades) {
        table.rows.push_back({Table::text(std::string(to_string(trade.direction))),
                              Table::integer(static_cast<std::int64_t>(trade.entry_index)),
                              Table::number(trade.entry_price),
                              Table::integer(static_cast<std::int64_t>(trade.exit_index)),
                              Table::number(trade.exit_price), Table::number(trade.pnl_points)});
    }
    return table;
}

void write_trades_csv(std::ostream& out, const BacktestResult& result)
{
    write_csv(out, trades_table(result));
}

} // namespace powertrend
