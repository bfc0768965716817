#pragma once

#include "powertrend/power.hpp"
#include "powertrend/series.hpp"
#include "powertrend/volsys.hpp"

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace powertrend {

enum class GateMode { off, arm_once, while_above };

std::string_view to_string(GateMode mode);
GateMode parse_gate_mode(std::string_view text);

struct SweepSpec {
    std::vector<double> multipliers = default_multiplier_grid();
    std::vector<std::size_t> power_windows = {30, 50, 100};
    double gate_level = 4.0;
    GateMode gate_mode = GateMode::arm_once;

    /// 0.1, 0.2, ..., 8.0
    static std::vector<double> default_multiplier_grid();
    /// Throws ConfigError unless the grid is non-empty, strictly increasing and positive.
    void validate() const;
};

/// Per-bar permission to open positions, derived from r_signal:
///   off          always true
///   arm_once     false until the first bar with r_signal >= level, true after
///   while_above  true exactly where r_signal >= level
std::vector<bool> gate_from_power(const PowerReport& report, double level, GateMode mode);

struct SweepPoint {
    double multiplier = 0.0;
    std::optional<double> total_pnl;
    std::optional<double> total_pnl_norm;
    std::size_t trades = 0;
    std::string error; // non-empty when this grid point failed
};

/// One volatility-system run per grid multiplier, gated per spec.gate_mode
/// using r_signal of `power_params`. Grid points fail independently.
std::vector<SweepPoint> sweep_multiplier(const BarSeries& series, const SweepSpec& spec,
                                         const PowerParams& power_params,
                                         const VolSysParams& base = {}, std::size_t workers = 1);

/// Ungated run, power report, gate, then the gated run (skipped when mode is off).
struct GatedRun {
    PowerReport report;
    std::vector<bool> gate;
    BacktestResult result;
};
GatedRun run_gated(const BarSeries& series, const PowerParams& power_params,
                   const VolSysParams& volsys_params, double gate_level, GateMode mode);

struct RangePoint {
    std::size_t range = 0;
    std::optional<double> r_signal;
    std::optional<double> r_noise;
    std::uint8_t flags = power_flag_none;
    std::size_t warmup_index = 0; // first bar at which this range is defined
};

/// r_signal and r_noise at the final bar for each MA/power range.
std::vector<RangePoint> sweep_ma_range(const BarSeries& series, const std::vector<std::size_t>& ranges,
                                       const VolSysParams& volsys_params = {});

enum class Snapshot { final_bar, time_mean };

struct UniverseRow {
    std::string symbol;
    double final_pnl = 0.0;
    double final_pnl_norm = 0.0;
    std::optional<double> r_signal;
    std::optional<double> r_noise;
    std::optional<double> dx;
    std::optional<double> adx;
    std::optional<double> adxr;
};

struct Exclusion {
    std::string symbol;
    std::string reason;
};

struct UniverseResult {
    std::vector<UniverseRow> rows;        // sorted by symbol
    std::vector<Exclusion> exclusions;    // sorted by symbol
};

struct UniverseOptions {
    double gate_level = 4.0;
    GateMode gate_mode = GateMode::arm_once;
    Snapshot snapshot = Snapshot::final_bar;
    std::size_t workers = 1;
};

/// Runs every symbol independently. Symbols that fail (too short, bad data)
/// land in `exclusions`; the rest of the universe is unaffected. Output does
/// not depend on the worker count.
UniverseResult run_universe(const std::vector<BarSeries>& universe, const PowerParams& power_params,
                            const VolSysParams& volsys_params, const UniverseOptions& options = {});

/// Convenience entry taking the gate settings from a SweepSpec.
UniverseResult run_universe(const std::vector<BarSeries>& universe, const SweepSpec& spec,
                            const PowerParams& power_params, const VolSysParams& volsys_params,
                            std::size_t workers = 1);

/// symbol,final_pnl,final_pnl_norm,r_signal,r_noise,dx,adx,adxr,excluded,reason
/// Rows and exclusions merged in symbol order.
Table universe_table(const UniverseResult& result);
/// symbol,reason
Table exclusions_table(const UniverseResult& result);
/// window,multiplier,total_pnl,total_pnl_norm,trades,error (window empty when ungated)
Table sweep_table(std::optional<std::size_t> window, const std::vector<SweepPoint>& points);
/// range,r_signal,r_noise,flags,warmup_index,defined
Table range_table(const std::vector<RangePoint>& points);

void write_universe_csv(std::ostream& out, const UniverseResult& result);
void write_sweep_csv(std::ostream& out, std::optional<std::size_t> window, const std::vector<SweepPoint>& points);
void write_range_csv(std::ostream& out, const std::vector<RangePoint>& points);

} // namespace powertrend
