#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace powertrend {

struct RegressionResult {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::size_t n = 0;
    std::size_t dropped = 0; // pairs removed because either side was missing
};

/// Ordinary least squares y = intercept + slope * x. Throws DegenerateError
/// when x or y has zero variance and DataError on mismatched or short input.
RegressionResult ols(std::span<const double> x, std::span<const double> y);

/// Drops pairs where either side is missing or non-finite, then fits.
RegressionResult ols_pairwise(std::span<const std::optional<double>> x,
                              std::span<const std::optional<double>> y);

} // namespace powertrend
