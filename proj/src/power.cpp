#include "powertrend/power.hpp"

#include "powertrend/errors.hpp"

#include <cmath>

namespace powertrend {

namespace {

void check_params(const PowerParams& params)
{
    if (params.window < 2) {
        throw ConfigError("power window must be >= 2, got " + std::to_string(params.window));
    }
}

std::size_t warmup_bars(const PowerParams& params)
{
    return (params.effective_ma_window() - 1) + (params.window - 1);
}

struct WindowPowers {
    double signal = 0.0;
    double noise = 0.0;
};

// Trailing window [t - window + 1, t] over `closes`, normalised by its oldest close.
WindowPowers powers_at(std::span<const double> closes, std::span<const double> ma, std::size_t window,
                       std::size_t t)
{
    const std::size_t j = t + 1 - window;
    const double base = closes[j];
    if (!(base > 0.0)) {
        throw DataError("power window base price must be > 0");
    }
    double signal = 0.0;
    double noise = 0.0;
    for (std::size_t i = j; i <= t; ++i) {
        const double s = ma[i] / base;
        const double e = (closes[i] - ma[i]) / base;
        signal += s * s;
        noise += e * e;
    }
    const double n = static_cast<double>(window);
    return {signal / n, noise / n};
}

IndicatorSeries checked_ma(std::span<const double> closes, const PowerParams& params)
{
    check_params(params);
    const std::size_t need = warmup_bars(params) + 1;
    if (closes.size() < need) {
        throw WarmupError("power(" + std::to_string(params.window) + ", MA " + std::to_string(params.effective_ma_window())
                          + ") needs " + std::to_string(need) + " bars, got " + std::to_string(closes.size()));
    }
    return moving_average(closes, params.effective_ma_window());
}

} // namespace

std::string format_power_flags(std::uint8_t flags)
{
    std::string out;
    if (flags & power_flag_degenerate) {
        out = "degenerate";
    }
    if (flags & power_flag_signal_clamped) {
        out += out.empty() ? "clamped" : "|clamped";
    }
    return out;
}

IndicatorSeries moving_average(std::span<const double> values, std::size_t window)
{
    if (window < 1) {
        throw ConfigError("moving average window must be >= 1");
    }
    if (values.size() < window) {
        throw WarmupError("moving average(" + std::to_string(window) + ") needs " + std::to_string(window)
                          + " values, got " + std::to_string(values.size()));
    }
    IndicatorSeries out(values.size());
    const double n = static_cast<double>(window);
    for (std::size_t t = window - 1; t < values.size(); ++t) {
        double sum = 0.0;
        for (std::size_t i = t + 1 - window; i <= t; ++i) {
            sum += values[i];
        }
        out[t] = sum / n;
    }
    return out;
}

double window_power(std::span<const double> values, double base)
{
    if (!(base > 0.0)) {
        throw DataError("window power base must be > 0");
    }
    if (values.empty()) {
        throw ConfigError("window power over an empty window");
    }
    double sum = 0.0;
    for (const double v : values) {
        const double r = v / base;
        sum += r * r;
    }
    return sum / static_cast<double>(values.size());
}

IndicatorSeries power_of_signal(std::span<const double> closes, const PowerParams& params)
{
    const auto ma = checked_ma(closes, params);
    IndicatorSeries out(closes.size());
    for (std::size_t t = warmup_bars(params); t < closes.size(); ++t) {
        const std::size_t j = t + 1 - params.window;
        out[t] = window_power(ma.values().subspan(j, params.window), closes[j]);
    }
    return out;
}

IndicatorSeries power_of_noise(std::span<const double> closes, const PowerParams& params)
{
    const auto ma = checked_ma(closes, params);
    IndicatorSeries out(closes.size());
    for (std::size_t t = warmup_bars(params); t < closes.size(); ++t) {
        out[t] = powers_at(closes, ma.values(), params.window, t).noise;
    }
    return out;
}

IndicatorSeries power_threshold(const IndicatorSeries& atr_series, const IndicatorSeries& sic)
{
    if (atr_series.size() != sic.size()) {
        throw ConfigError("ATR and SIC series are not aligned");
    }
    IndicatorSeries out(atr_series.size());
    for (std::size_t t = 0; t < out.size(); ++t) {
        if (!atr_series.defined(t) || !sic.defined(t)) {
            continue;
        }
        if (sic[t] == 0.0) {
            throw DataError("power threshold: SIC is zero at bar " + std::to_string(t));
        }
        const double r = std::abs(atr_series[t] / sic[t]);
        out[t] = r * r;
    }
    return out;
}

PowerPoint power_ratios(double power_signal, double power_noise, double power_threshold)
{
    if (power_threshold < 0.0 || std::isnan(power_threshold)) {
        throw DataError("power threshold must be >= 0");
    }
    PowerPoint p{power_signal, power_noise, power_threshold, 0.0, 0.0, power_flag_none};
    double excess = power_signal - 1.0;
    if (excess < 0.0) {
        excess = 0.0;
        p.flags |= power_flag_signal_clamped;
    }
    if (power_threshold == 0.0) {
        p.flags |= power_flag_degenerate;
        return p;
    }
    p.r_signal = std::sqrt(excess / power_threshold);
    p.r_noise = std::sqrt(power_noise / power_threshold);
    return p;
}

PowerReport power_report(const BarSeries& series, const PowerParams& params, const IndicatorSeries& atr_series,
                         const BacktestResult& volsys)
{
    check_params(params);
    const std::size_t size = series.size();
    if (atr_series.size() != size || volsys.sic_series.size() != size) {
        throw ConfigError("power report inputs are not aligned with the series");
    }
    const std::size_t start = volsys.sic_series.first_defined();
    const std::size_t first = start + warmup_bars(params);
    if (start >= size || first >= size) {
        throw WarmupError("power report(" + std::to_string(params.window) + ") needs at least "
                          + std::to_string(first + 1) + " bars (volatility system starts at bar "
                          + std::to_string(start) + ", MA window " + std::to_string(params.effective_ma_window())
                          + ", power window " + std::to_string(params.window) + "), got " + std::to_string(size));
    }

    const auto closes = series.closes();
    const std::span<const double> active(closes.data() + start, size - start);
    const auto ma_active = moving_average(active, params.effective_ma_window());

    PowerReport report;
    report.params = params;
    report.first_defined = first;
    report.ma = IndicatorSeries(size);
    report.power_signal = IndicatorSeries(size);
    report.power_noise = IndicatorSeries(size);
    report.power_threshold = power_threshold(atr_series, volsys.sic_series);
    report.r_signal = IndicatorSeries(size);
    report.r_noise = IndicatorSeries(size);
    report.flags.assign(size, power_flag_none);

    for (std::size_t k = 0; k < active.size(); ++k) {
        report.ma[start + k] = ma_active[k];
    }
    for (std::size_t t = first; t < size; ++t) {
        const auto powers = powers_at(active, ma_active.values(), params.window, t - start);
        report.power_signal[t] = powers.signal;
        report.power_noise[t] = powers.noise;
        if (!report.power_threshold.defined(t)) {
            continue;
        }
        const auto point = power_ratios(powers.signal, powers.noise, report.power_threshold[t]);
        report.r_signal[t] = point.r_signal;
        report.r_noise[t] = point.r_noise;
        report.flags[t] = point.flags;
    }
    return report;
}

PowerReport power_report(const BarSeries& series, const PowerParams& params, const VolSysParams& volsys_params)
{
    const auto atr_series = atr(series, volsys_params.atr_params);
    const auto result = run_volsys(series, atr_series, volsys_params);
    return power_report(series, params, atr_series, result);
}

std::optional<PowerPoint> power_at(std::span<const double> closes, const PowerParams& params,
                                   const IndicatorSeries& atr_series, const IndicatorSeries& sic,
                                   std::size_t start, std::size_t bar)
{
    check_params(params);
    if (bar >= closes.size() || bar < start + warmup_bars(params) || !atr_series.defined(bar) || !sic.defined(bar)) {
        return std::nullopt;
    }
    const std::size_t ma_window = params.effective_ma_window();
    const std::size_t j = bar + 1 - params.window;
    // MA over [j, bar] only; every input close lies at or after `start`.
    const std::size_t from = j + 1 - ma_window;
    const auto ma_local = moving_average(closes.subspan(from, bar + 1 - from), ma_window);
    const auto powers = powers_at(closes.subspan(from, bar + 1 - from), ma_local.values(), params.window, bar - from);
    const double ratio = atr_series[bar] / sic[bar];
    return power_ratios(powers.signal, powers.noise, ratio * ratio);
}

Table power_table(const BarSeries& series, const PowerReport& report)
{
    Table table;
    table.columns = {"index", "date", "close", "ma", "power_signal", "power_noise", "power_threshold",
                     "r_signal", "r_noise", "flags"};
    for (std::size_t t = 0; t < report.size(); ++t) {
        table.rows.push_back({Table::integer(static_cast<std::int64_t>(t)), Table::text(series.stamp_label(t)),
                              Table::number(series[t].close), Table::number(report.ma[t]),
                              Table::number(report.power_signal[t]), Table::number(report.power_noise[t]),
                              Table::number(report.power_threshold[t]), Table::number(report.r_signal[t]),
                              Table::number(report.r_noise[t]), Table::text(format_power_flags(report.flags[t]))});
    }
    return table;
}

void write_power_csv(std::ostream& out, const BarSeries& series, const PowerReport& report)
{
    write_csv(out, power_table(series, report));
}

} // namespace powertrend
