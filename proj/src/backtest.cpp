#include "powertrend/backtest.hpp"

#include "powertrend/errors.hpp"
#include "powertrend/parallel.hpp"
#include "powertrend/wilder.hpp"

#include <algorithm>
#include <cmath>

namespace powertrend {

std::string_view to_string(GateMode mode)
{
    switch (mode) {
    case GateMode::off:
        return "off";
    case GateMode::arm_once:
        return "arm-once";
    case GateMode::while_above:
        return "while-above";
    }
    return "off";
}

GateMode parse_gate_mode(std::string_view text)
{
    if (text == "off") {
        return GateMode::off;
    }
    if (text == "arm-once") {
        return GateMode::arm_once;
    }
    if (text == "while-above") {
        return GateMode::while_above;
    }
    throw ConfigError("gate mode must be off, arm-once or while-above, got '" + std::string(text) + "'");
}

std::vector<double> SweepSpec::default_multiplier_grid()
{
    std::vector<double> grid;
    for (int k = 1; k <= 80; ++k) {
        grid.push_back(k / 10.0);
    }
    return grid;
}

void SweepSpec::validate() const
{
    if (multipliers.empty()) {
        throw ConfigError("multiplier grid is empty");
    }
    for (std::size_t i = 0; i < multipliers.size(); ++i) {
        if (!(multipliers[i] > 0.0) || !std::isfinite(multipliers[i])) {
            throw ConfigError("multipliers must be finite and > 0");
        }
        if (i > 0 && !(multipliers[i] > multipliers[i - 1])) {
            throw ConfigError("multiplier grid must be strictly increasing");
        }
    }
    for (const auto w : power_windows) {
        if (w < 2) {
            throw ConfigError("power windows must be >= 2");
        }
    }
}

std::vector<bool> gate_from_power(const PowerReport& report, double level, GateMode mode)
{
    std::vector<bool> gate(report.size(), mode == GateMode::off);
    if (mode == GateMode::off) {
        return gate;
    }
    bool armed = false;
    for (std::size_t t = 0; t < gate.size(); ++t) {
        const bool above = report.r_signal.defined(t) && report.r_signal[t] >= level;
        if (mode == GateMode::arm_once) {
            armed = armed || above;
            gate[t] = armed;
        } else {
            gate[t] = above;
        }
    }
    return gate;
}

GatedRun run_gated(const BarSeries& series, const PowerParams& power_params, const VolSysParams& volsys_params,
                   double gate_level, GateMode mode)
{
    const auto atr_series = atr(series, volsys_params.atr_params);
    auto ungated = run_volsys(series, atr_series, volsys_params);
    GatedRun run;
    run.report = power_report(series, power_params, atr_series, ungated);
    run.gate = gate_from_power(run.report, gate_level, mode);
    if (mode == GateMode::off) {
        run.result = std::move(ungated);
    } else {
        run.result = run_volsys(series, atr_series, volsys_params, run.gate);
    }
    return run;
}

std::vector<SweepPoint> sweep_multiplier(const BarSeries& series, const SweepSpec& spec,
                                         const PowerParams& power_params, const VolSysParams& base,
                                         std::size_t workers)
{
    spec.validate();
    std::vector<SweepPoint> points(spec.multipliers.size());
    parallel_for(points.size(), workers, [&](std::size_t i) {
        SweepPoint& point = points[i];
        point.multiplier = spec.multipliers[i];
        VolSysParams params = base;
        params.multiplier = point.multiplier;
        try {
            const auto result = spec.gate_mode == GateMode::off
                ? run_volsys(series, params)
                : run_gated(series, power_params, params, spec.gate_level, spec.gate_mode).result;
            point.total_pnl = result.total_pnl_points;
            point.total_pnl_norm = result.total_pnl_normalized();
            point.trades = result.positions_opened();
        } catch (const Error& e) {
            point.error = e.what();
        }
    });
    return points;
}

std::vector<RangePoint> sweep_ma_range(const BarSeries& series, const std::vector<std::size_t>& ranges,
                                       const VolSysParams& volsys_params)
{
    const auto atr_series = atr(series, volsys_params.atr_params);
    const auto result = run_volsys(series, atr_series, volsys_params);
    const auto closes = series.closes();
    const std::size_t start = result.sic_series.first_defined();
    const std::size_t last = series.size() - 1;

    std::vector<RangePoint> out;
    out.reserve(ranges.size());
    for (const auto range : ranges) {
        RangePoint point;
        point.range = range;
        if (range >= 2) {
            const PowerParams params{range, range};
            point.warmup_index = start + 2 * (range - 1);
            if (const auto p = power_at(closes, params, atr_series, result.sic_series, start, last)) {
                point.r_signal = p->r_signal;
                point.r_noise = p->r_noise;
                point.flags = p->flags;
            }
        }
        out.push_back(point);
    }
    return out;
}

namespace {

std::optional<double> snapshot(const IndicatorSeries& s, Snapshot mode)
{
    if (mode == Snapshot::final_bar) {
        return s.last_value();
    }
    double sum = 0.0;
    std::size_t n = 0;
    for (const double v : s.values()) {
        if (!std::isnan(v)) {
            sum += v;
            ++n;
        }
    }
    if (n == 0) {
        return std::nullopt;
    }
    return sum / static_cast<double>(n);
}

} // namespace

UniverseResult run_universe(const std::vector<BarSeries>& universe, const PowerParams& power_params,
                            const VolSysParams& volsys_params, const UniverseOptions& options)
{
    if (universe.empty()) {
        throw ConfigError("universe is empty");
    }
    struct Slot {
        std::optional<UniverseRow> row;
        std::optional<Exclusion> exclusion;
    };
    std::vector<Slot> slots(universe.size());
    parallel_for(universe.size(), options.workers, [&](std::size_t i) {
        const auto& series = universe[i];
        try {
            const auto run = run_gated(series, power_params, volsys_params, options.gate_level, options.gate_mode);
            const auto dm = directional(series, volsys_params.atr_params);
            UniverseRow row;
            row.symbol = series.symbol();
            row.final_pnl = run.result.total_pnl_points;
            row.final_pnl_norm = run.result.total_pnl_normalized();
            row.r_signal = snapshot(run.report.r_signal, options.snapshot);
            row.r_noise = snapshot(run.report.r_noise, options.snapshot);
            row.dx = snapshot(dm.dx, options.snapshot);
            row.adx = snapshot(dm.adx, options.snapshot);
            row.adxr = snapshot(dm.adxr, options.snapshot);
            slots[i].row = std::move(row);
        } catch (const Error& e) {
            slots[i].exclusion = Exclusion{series.symbol(), e.what()};
        }
    });

    UniverseResult result;
    for (auto& slot : slots) {
        if (slot.row) {
            result.rows.push_back(std::move(*slot.row));
        } else {
            result.exclusions.push_back(std::move(*slot.exclusion));
        }
    }
    std::stable_sort(result.rows.begin(), result.rows.end(),
                     [](const auto& a, const auto& b) { return a.symbol < b.symbol; });
    std::stable_sort(result.exclusions.begin(), result.exclusions.end(),
                     [](const auto& a, const auto& b) { return a.symbol < b.symbol; });
    return result;
}

UniverseResult run_universe(const std::vector<BarSeries>& universe, const SweepSpec& spec,
                            const PowerParams& power_params, const VolSysParams& volsys_params, std::size_t workers)
{
    UniverseOptions options;
    options.gate_level = spec.gate_level;
    options.gate_mode = spec.gate_mode;
    options.workers = workers;
    return run_universe(universe, power_params, volsys_params, options);
}

Table universe_table(const UniverseResult& result)
{
    Table table;
    table.columns = {"symbol", "final_pnl", "final_pnl_norm", "r_signal", "r_noise", "dx", "adx", "adxr",
                     "excluded", "reason"};
    auto row_it = result.rows.begin();
    auto ex_it = result.exclusions.begin();
    while (row_it != result.rows.end() || ex_it != result.exclusions.end()) {
        const bool take_row = ex_it == result.exclusions.end()
            || (row_it != result.rows.end() && row_it->symbol <= ex_it->symbol);
        if (take_row) {
            const auto& r = *row_it++;
            table.rows.push_back({Table::text(r.symbol), Table::number(r.final_pnl), Table::number(r.final_pnl_norm),
                                  Table::number(r.r_signal), Table::number(r.r_noise), Table::number(r.dx),
                                  Table::number(r.adx), Table::number(r.adxr), Table::integer(0), Table::Cell{}});
        } else {
            const auto& e = *ex_it++;
            table.rows.push_back({Table::text(e.symbol), {}, {}, {}, {}, {}, {}, {}, Table::integer(1),
                                  Table::text(e.reason)});
        }
    }
    return table;
}

Table exclusions_table(const UniverseResult& result)
{
    Table table;
    table.columns = {"symbol", "reason"};
    for (const auto& e : result.exclusions) {
        table.rows.push_back({Table::text(e.symbol), Table::text(e.reason)});
    }
    return table;
}

Table sweep_table(std::optional<std::size_t> window, const std::vector<SweepPoint>& points)
{
    Table table;
    table.columns = {"window", "multiplier", "total_pnl", "total_pnl_norm", "trades", "error"};
    for (const auto& p : points) {
        table.rows.push_back({window ? Table::integer(static_cast<std::int64_t>(*window)) : Table::Cell{},
                              Table::number(p.multiplier), Table::number(p.total_pnl),
                              Table::number(p.total_pnl_norm), Table::integer(static_cast<std::int64_t>(p.trades)),
                              p.error.empty() ? Table::Cell{} : Table::text(p.error)});
    }
    return table;
}

Table range_table(const std::vector<RangePoint>& points)
{
    Table table;
    table.columns = {"range", "r_signal", "r_noise", "flags", "warmup_index", "defined"};
    for (const auto& p : points) {
        table.rows.push_back({Table::integer(static_cast<std::int64_t>(p.range)), Table::number(p.r_signal),
                              Table::number(p.r_noise), Table::text(format_power_flags(p.flags)),
                              Table::integer(static_cast<std::int64_t>(p.warmup_index)),
                              Table::integer(p.r_signal ? 1 : 0)});
    }
    return table;
}

void write_universe_csv(std::ostream& out, const UniverseResult& result)
{
    write_csv(out, universe_table(result));
}

void write_sweep_csv(std::ostream& out, std::optional<std::size_t> window, const std::vector<SweepPoint>& points)
{
    write_csv(out, sweep_table(window, points));
}

void write_range_csv(std::ostream& out, const std::vector<RangePoint>& points)
{
    write_csv(out, range_table(points));
}

} // namespace powertrend
