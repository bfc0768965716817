#pragma once

#include "powertrend/series.hpp"

#include <cstddef>
#include <span>

namespace powertrend {

struct WilderParams {
    std::size_t smoothing_period = 14;
};

/// Wilder's running average over a raw sequence: undefined for the first
/// period-1 entries, the arithmetic mean of the first `period` values at index
/// period-1, then s_t = (s_{t-1} * (period - 1) + x_t) / period.
std::vector<double> wilder_smooth(std::span<const double> values, std::size_t period);

/// TR_0 = H_0 - L_0; TR_t = max(H_t - L_t, |H_t - C_{t-1}|, |L_t - C_{t-1}|).
IndicatorSeries true_range(const BarSeries& series);

/// Wilder-smoothed true range. The seed averages TR over bars 1..N (the bars
/// that have a previous close), so the first defined index is N.
IndicatorSeries atr(const BarSeries& series, const WilderParams& params = {});

/// Index of the first defined ATR value for a given period.
constexpr std::size_t atr_warmup(const WilderParams& params) noexcept
{
    return params.smoothing_period;
}

struct DirectionalMovement {
    IndicatorSeries plus_dm;
    IndicatorSeries minus_dm;
    IndicatorSeries plus_di;
    IndicatorSeries minus_di;
    IndicatorSeries dx;
    IndicatorSeries adx;
    IndicatorSeries adxr;
};

/// Directional movement family. +DM/-DM are defined from bar 1, ±DI and DX
/// from bar N, ADX from 2N-1, ADXR from 3N-2 (ADX averaged with its value
/// N-1 bars earlier). Requires at least 2N bars.
DirectionalMovement directional(const BarSeries& series, const WilderParams& params = {});

} // namespace powertrend
