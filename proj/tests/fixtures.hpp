#pragma once

// Versioned fixture definitions shared by unit and acceptance tests.

#include "powertrend/market_data.hpp"
#include "powertrend/volsys.hpp"

#include <array>

namespace powertrend::testing {

// Wire-graph price moves with equal start and end, amplitude m steps of dF,
// traded over a fixed period of 8 steps starting with a Sell. The ATR period
// (24) is a multiple of every zigzag period, so the whole series and the
// traded window both start and end on the same price; with O=H=L=C and one
// step per bar, ATR == dF exactly and ARC == dF at multiplier 1.
inline constexpr double zigzag_step = 2.0;
inline constexpr std::size_t zigzag_atr_period = 24;
inline constexpr std::size_t zigzag_traded_steps = 8;
inline constexpr std::array<int, 4> zigzag_phase = {0, 1, 2, 0};
inline constexpr std::array<double, 4> zigzag_total_in_steps = {-8.0, -2.0, 0.0, 4.0};

inline SyntheticSpec zigzag_spec(int amplitude_steps)
{
    SyntheticSpec spec;
    spec.kind = SyntheticKind::zigzag;
    spec.level = 100.0;
    spec.step = zigzag_step;
    spec.amplitude_steps = amplitude_steps;
    spec.phase_steps = zigzag_phase[static_cast<std::size_t>(amplitude_steps - 1)];
    spec.bars = zigzag_atr_period + zigzag_traded_steps + 1;
    spec.symbol = "ZIGZAG_M" + std::to_string(amplitude_steps);
    return spec;
}

inline VolSysParams zigzag_params()
{
    VolSysParams p;
    p.multiplier = 1.0;
    p.atr_params.smoothing_period = zigzag_atr_period;
    p.initial_direction = InitialDirection::short_;
    return p;
}

// Trend plus a 100-bar cycle plus seeded Gaussian noise.
inline SyntheticSpec noisy_trend_spec(std::uint64_t seed = 7, std::size_t bars = 2000)
{
    SyntheticSpec spec;
    spec.kind = SyntheticKind::sine_plus_linear;
    spec.level = 100.0;
    spec.slope = 0.05;
    spec.components = {{10.0, 100.0, 0.0}};
    spec.bars = bars;
    spec.noise_sigma = 1.0;
    spec.seed = seed;
    spec.symbol = "NOISY" + std::to_string(seed);
    return spec;
}

} // namespace powertrend::testing
