#pragma once

#include "powertrend/series.hpp"

#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <vector>

namespace powertrend {

/// Column names looked up (case-insensitively) in the CSV header.
struct CsvFormat {
    std::string date = "date";
    std::string open = "open";
    std::string high = "high";
    std::string low = "low";
    std::string close = "close";
};

/// Loads an OHLC CSV file. Rows are sorted by date; any row that fails to
/// parse or violates the bar invariants aborts the load with its row number
/// (1-based, counting data rows after the header).
BarSeries load_csv(const std::filesystem::path& path, const CsvFormat& format = {});
BarSeries load_csv(std::istream& in, std::string symbol, const CsvFormat& format = {});

enum class SyntheticKind { constant, linear, sine, sine_plus_linear, multi_sine_plus_linear, zigzag };

struct SineComponent {
    double amplitude = 0.0;
    double period = 1.0; // in bars
    double phase = 0.0;  // radians; pi/2 turns the sine into a cosine
};

/// Parameters of a synthetic price path. Which fields are read depends on `kind`:
///   constant                level
///   linear                  level (start), slope
///   sine                    level, components[0]
///   sine_plus_linear        level, slope, components[0]
///   multi_sine_plus_linear  level, slope, components
///   zigzag                  level (start), step, amplitude_steps, phase_steps
/// An optional Gaussian overlay (noise_sigma > 0) is drawn from `seed`; zigzags
/// do not accept one.
struct SyntheticSpec {
    SyntheticKind kind = SyntheticKind::constant;
    std::size_t bars = 0;
    double level = 100.0;
    double slope = 0.0;
    std::vector<SineComponent> components;
    double step = 1.0;
    int amplitude_steps = 1;
    int phase_steps = 0;
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;
    std::string symbol = "SYNTH";
};

/// Deterministic price path as wire bars (open = high = low = close).
BarSeries generate(const SyntheticSpec& spec);

/// Parses the inline form `kind:param:param...`:
///   constant:LEVEL:BARS
///   linear:START:SLOPE:BARS
///   sine:LEVEL:AMP:PERIOD:BARS
///   sine-plus-linear:START:SLOPE:AMP:PERIOD:BARS
///   multi-sine-plus-linear:START:SLOPE:BARS:AMP/PERIOD[/PHASE]:...
///   zigzag:START:STEP:AMPLITUDE_STEPS:BARS[:PHASE_STEPS]
/// Any kind except zigzag may append `:noise=SIGMA/SEED`.
SyntheticSpec parse_synthetic(std::string_view text);

std::string to_string(SyntheticKind kind);

} // namespace powertrend
