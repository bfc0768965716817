#include "powertrend/wilder.hpp"

#include "powertrend/errors.hpp"

#include <algorithm>
#include <cmath>

namespace powertrend {

namespace {

void check_period(const WilderParams& params)
{
    if (params.smoothing_period < 1) {
        throw ConfigError("smoothing period must be >= 1");
    }
}

// Places wilder_smooth(values[1..]) back on the bar axis.
IndicatorSeries smooth_from_bar_one(std::span<const double> per_bar, std::size_t period)
{
    IndicatorSeries out(per_bar.size());
    if (per_bar.size() < 2) {
        return out;
    }
    const auto smoothed = wilder_smooth(per_bar.subspan(1), period);
    for (std::size_t k = 0; k < smoothed.size(); ++k) {
        out[k + 1] = smoothed[k];
    }
    return out;
}

} // namespace

std::vector<double> wilder_smooth(std::span<const double> values, std::size_t period)
{
    if (period < 1) {
        throw ConfigError("smoothing period must be >= 1");
    }
    std::vector<double> out(values.size(), IndicatorSeries::undefined);
    if (values.size() < period) {
        return out;
    }
    double seed = 0.0;
    for (std::size_t i = 0; i < period; ++i) {
        seed += values[i];
    }
    const double n = static_cast<double>(period);
    double s = seed / n;
    out[period - 1] = s;
    for (std::size_t i = period; i < values.size(); ++i) {
        s = (s * (n - 1.0) + values[i]) / n;
        out[i] = s;
    }
    return out;
}

IndicatorSeries true_range(const BarSeries& series)
{
    if (series.size() < 2) {
        throw WarmupError("true range needs at least 2 bars, got " + std::to_string(series.size()));
    }
    IndicatorSeries tr(series.size());
    tr[0] = series[0].high - series[0].low;
    for (std::size_t t = 1; t < series.size(); ++t) {
        const auto& bar = series[t];
        const double prev_close = series[t - 1].close;
        tr[t] = std::max({bar.high - bar.low, std::abs(bar.high - prev_close), std::abs(bar.low - prev_close)});
    }
    return tr;
}

IndicatorSeries atr(const BarSeries& series, const WilderParams& params)
{
    check_period(params);
    if (series.size() < params.smoothing_period + 1) {
        throw WarmupError("ATR(" + std::to_string(params.smoothing_period) + ") needs at least "
                          + std::to_string(params.smoothing_period + 1) + " bars, got "
                          + std::to_string(series.size()));
    }
    const auto tr = true_range(series);
    return smooth_from_bar_one(tr.values(), params.smoothing_period);
}

DirectionalMovement directional(const BarSeries& series, const WilderParams& params)
{
    check_period(params);
    const std::size_t n = params.smoothing_period;
    if (series.size() < 2 * n || series.size() < 2) {
        throw WarmupError("directional movement(" + std::to_string(n) + ") needs at least "
                          + std::to_string(std::max<std::size_t>(2 * n, 2)) + " bars, got "
                          + std::to_string(series.size()));
    }
    const std::size_t size = series.size();
    const auto tr = true_range(series);

    DirectionalMovement dm;
    dm.plus_dm = IndicatorSeries(size);
    dm.minus_dm = IndicatorSeries(size);
    for (std::size_t t = 1; t < size; ++t) {
        const double up = series[t].high - series[t - 1].high;
        const double down = series[t - 1].low - series[t].low;
        dm.plus_dm[t] = (up > down && up > 0.0) ? up : 0.0;
        dm.minus_dm[t] = (down > up && down > 0.0) ? down : 0.0;
    }

    const auto str = smooth_from_bar_one(tr.values(), n);
    const auto splus = smooth_from_bar_one(dm.plus_dm.values(), n);
    const auto sminus = smooth_from_bar_one(dm.minus_dm.values(), n);

    dm.plus_di = IndicatorSeries(size);
    dm.minus_di = IndicatorSeries(size);
    dm.dx = IndicatorSeries(size);
    std::vector<double> dx_tail;
    for (std::size_t t = n; t < size; ++t) {
        const double range = str[t];
        const double pdi = range > 0.0 ? 100.0 * splus[t] / range : 0.0;
        const double mdi = range > 0.0 ? 100.0 * sminus[t] / range : 0.0;
        dm.plus_di[t] = pdi;
        dm.minus_di[t] = mdi;
        const double total = pdi + mdi;
        dm.dx[t] = total > 0.0 ? 100.0 * std::abs(pdi - mdi) / total : 0.0;
        dx_tail.push_back(dm.dx[t]);
    }

    dm.adx = IndicatorSeries(size);
    const auto adx_tail = wilder_smooth(dx_tail, n);
    for (std::size_t k = 0; k < adx_tail.size(); ++k) {
        dm.adx[n + k] = adx_tail[k];
    }

    dm.adxr = IndicatorSeries(size);
    const std::size_t lag = n - 1;
    for (std::size_t t = 2 * n - 1 + lag; t < size; ++t) {
        dm.adxr[t] = (dm.adx[t] + dm.adx[t - lag]) / 2.0;
    }
    return dm;
}

} // namespace powertrend
