#pragma once

#include "powertrend/series.hpp"
#include "powertrend/table.hpp"
#include "powertrend/volsys.hpp"

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace powertrend {

struct PowerParams {
    std::size_t window = 30;    // power range N
    std::size_t ma_window = 0;  // 0 means "same as window"

    std::size_t effective_ma_window() const noexcept { return ma_window == 0 ? window : ma_window; }
};

/// Per-bar report flags.
enum PowerFlag : std::uint8_t {
    power_flag_none = 0,
    /// ATR is zero so no stop-loss scale exists; both ratios are reported as 0.
    power_flag_degenerate = 1,
    /// Signal power was below 1 and the excess was clamped to 0.
    power_flag_signal_clamped = 2,
};

std::string format_power_flags(std::uint8_t flags);

/// Simple moving average of the trailing `window` values, defined from index window-1.
IndicatorSeries moving_average(std::span<const double> values, std::size_t window);

/// Mean of (value / base)^2 over `values`.
double window_power(std::span<const double> values, double base);

/// Ratio quantities for a single bar.
struct PowerPoint {
    double power_signal = 0.0;
    double power_noise = 0.0;
    double power_threshold = 0.0;
    double r_signal = 0.0;
    double r_noise = 0.0;
    std::uint8_t flags = power_flag_none;
};

/// (ATR / SIC)^2 per bar; undefined where either input is.
IndicatorSeries power_threshold(const IndicatorSeries& atr_series, const IndicatorSeries& sic);

/// r_signal = sqrt(max(signal - 1, 0) / threshold), r_noise = sqrt(noise / threshold).
/// A zero threshold yields zero ratios with the degenerate flag set.
PowerPoint power_ratios(double power_signal, double power_noise, double power_threshold);

struct PowerReport {
    PowerParams params;
    std::size_t first_defined = 0; // first bar where every column is defined
    IndicatorSeries ma;
    IndicatorSeries power_signal;
    IndicatorSeries power_noise;
    IndicatorSeries power_threshold;
    IndicatorSeries r_signal;
    IndicatorSeries r_noise;
    std::vector<std::uint8_t> flags;

    std::size_t size() const noexcept { return flags.size(); }
};

/// Signal power: mean of (MA_i / P_j)^2 over the trailing window [j, t]
/// where j = t - window + 1 and P_j is the oldest close in the window.
/// The moving average is taken over `closes` as given.
IndicatorSeries power_of_signal(std::span<const double> closes, const PowerParams& params);

/// Noise power: mean of ((P_i - MA_i) / P_j)^2 over the same trailing window.
IndicatorSeries power_of_noise(std::span<const double> closes, const PowerParams& params);

/// Composes the full report. The moving average and power windows run over
/// the bars from the volatility system's start (where SIC exists), so the
/// first defined bar is start + (ma_window - 1) + (window - 1).
PowerReport power_report(const BarSeries& series, const PowerParams& params,
                         const IndicatorSeries& atr_series, const BacktestResult& volsys);

/// Convenience overload: computes ATR and runs an ungated volatility system.
PowerReport power_report(const BarSeries& series, const PowerParams& params,
                         const VolSysParams& volsys_params = {});

/// The report's values at a single bar, without building full series.
/// Returns nullopt when the bar is still in warm-up.
std::optional<PowerPoint> power_at(std::span<const double> closes, const PowerParams& params,
                                   const IndicatorSeries& atr_series, const IndicatorSeries& sic,
                                   std::size_t start, std::size_t bar);

/// index,date,close,ma,power_signal,power_noise,power_threshold,r_signal,r_noise,flags
Table power_table(const BarSeries& series, const PowerReport& report);
void write_power_csv(std::ostream& out, const BarSeries& series, const PowerReport& report);

} // namespace powertrend
