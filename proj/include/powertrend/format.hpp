#pragma once

#include <optional>
#include <string>

namespace powertrend {

/// Shortest round-trip decimal form of a finite double; "" for NaN.
std::string format_number(double value);
std::string format_number(const std::optional<double>& value);

} // namespace powertrend
