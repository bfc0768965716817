#include "powertrend/format.hpp"

#include <charconv>
#include <cmath>

namespace powertrend {

std::string format_number(double value)
{
    if (std::isnan(value)) {
        return {};
    }
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

std::string format_number(const std::optional<double>& value)
{
    return value ? format_number(*value) : std::string{};
}

} // namespace powertrend
