#include "powertrend/series.hpp"

#include "powertrend/errors.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>

namespace powertrend {

std::string bar_violation(const Bar& bar)
{
    if (!std::isfinite(bar.open) || !std::isfinite(bar.high) || !std::isfinite(bar.low)
        || !std::isfinite(bar.close)) {
        return "non-finite price";
    }
    if (bar.open <= 0.0 || bar.high <= 0.0 || bar.low <= 0.0 || bar.close <= 0.0) {
        return "non-positive price";
    }
    if (bar.high < bar.low) {
        return "high < low";
    }
    if (bar.open < bar.low || bar.open > bar.high) {
        return "open outside [low, high]";
    }
    if (bar.close < bar.low || bar.close > bar.high) {
        return "close outside [low, high]";
    }
    return {};
}

BarSeries::BarSeries(std::string symbol, std::vector<Bar> bars, TimeAxis axis)
    : symbol_(std::move(symbol)), bars_(std::move(bars)), axis_(axis)
{
    for (std::size_t i = 0; i < bars_.size(); ++i) {
        if (auto why = bar_violation(bars_[i]); !why.empty()) {
            throw DataError(symbol_ + ": bar " + std::to_string(i) + ": " + why);
        }
        if (i > 0 && bars_[i].stamp <= bars_[i - 1].stamp) {
            throw DataError(symbol_ + ": bar " + std::to_string(i) + ": timestamps not strictly increasing");
        }
    }
}

std::vector<double> BarSeries::closes() const
{
    std::vector<double> out;
    out.reserve(bars_.size());
    for (const auto& bar : bars_) {
        out.push_back(bar.close);
    }
    return out;
}

BarSeries BarSeries::scaled(double factor) const
{
    std::vector<Bar> bars = bars_;
    for (auto& bar : bars) {
        bar.open *= factor;
        bar.high *= factor;
        bar.low *= factor;
        bar.close *= factor;
    }
    return BarSeries(symbol_, std::move(bars), axis_);
}

std::string BarSeries::stamp_label(std::size_t i) const
{
    if (axis_ == TimeAxis::calendar) {
        return format_iso_date(bars_[i].stamp);
    }
    return std::to_string(bars_[i].stamp);
}

std::size_t IndicatorSeries::first_defined() const noexcept
{
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isnan(values_[i])) {
            return i;
        }
    }
    return values_.size();
}

std::optional<double> IndicatorSeries::last_value() const noexcept
{
    for (std::size_t i = values_.size(); i-- > 0;) {
        if (!std::isnan(values_[i])) {
            return values_[i];
        }
    }
    return std::nullopt;
}

std::optional<std::int64_t> parse_iso_date(std::string_view text)
{
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
        return std::nullopt;
    }
    auto field = [&](std::size_t pos, std::size_t len) -> std::optional<int> {
        int value = 0;
        const char* first = text.data() + pos;
        const char* last = first + len;
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc{} || ptr != last) {
            return std::nullopt;
        }
        return value;
    };
    auto y = field(0, 4);
    auto m = field(5, 2);
    auto d = field(8, 2);
    if (!y || !m || !d) {
        return std::nullopt;
    }
    using namespace std::chrono;
    const year_month_day ymd{year{*y}, month{static_cast<unsigned>(*m)}, day{static_cast<unsigned>(*d)}};
    if (!ymd.ok()) {
        return std::nullopt;
    }
    return sys_days{ymd}.time_since_epoch().count();
}

std::string format_iso_date(std::int64_t days)
{
    using namespace std::chrono;
    const year_month_day ymd{sys_days{std::chrono::days{days}}};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

} // namespace powertrend
