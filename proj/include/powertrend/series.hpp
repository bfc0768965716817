#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace powertrend {

/// One OHLC observation. `stamp` is days since 1970-01-01 for calendar data,
/// or the bar index for synthetic data.
struct Bar {
    std::int64_t stamp = 0;
    double open = 0.0;
    double high = 0.0;
    double low = 0.0;
    double close = 0.0;

    bool operator==(const Bar&) const = default;
};

enum class TimeAxis { index, calendar };

/// Returns an empty string when the bar is valid, otherwise the violated rule.
std::string bar_violation(const Bar& bar);

/// Ordered bars of one symbol. Construction validates every bar and the
/// strictly increasing stamps; the object is immutable afterwards.
class BarSeries {
public:
    BarSeries() = default;
    BarSeries(std::string symbol, std::vector<Bar> bars, TimeAxis axis = TimeAxis::index);

    const std::string& symbol() const noexcept { return symbol_; }
    TimeAxis axis() const noexcept { return axis_; }
    std::span<const Bar> bars() const noexcept { return bars_; }
    std::size_t size() const noexcept { return bars_.size(); }
    bool empty() const noexcept { return bars_.empty(); }
    const Bar& operator[](std::size_t i) const { return bars_[i]; }

    std::vector<double> closes() const;

    /// Same bars with every price multiplied by `factor`.
    BarSeries scaled(double factor) const;

    /// ISO date for calendar series, the index otherwise.
    std::string stamp_label(std::size_t i) const;

    bool operator==(const BarSeries&) const = default;

private:
    std::string symbol_;
    std::vector<Bar> bars_;
    TimeAxis axis_ = TimeAxis::index;
};

/// Values aligned 1:1 with a BarSeries. Undefined entries (warm-up, or bars
/// where the quantity does not exist) are stored as NaN.
class IndicatorSeries {
public:
    static constexpr double undefined = std::numeric_limits<double>::quiet_NaN();

    IndicatorSeries() = default;
    explicit IndicatorSeries(std::size_t size) : values_(size, undefined) {}
    explicit IndicatorSeries(std::vector<double> values) : values_(std::move(values)) {}

    std::size_t size() const noexcept { return values_.size(); }
    bool defined(std::size_t i) const { return i < values_.size() && !std::isnan(values_[i]); }
    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }
    std::optional<double> at(std::size_t i) const
    {
        if (!defined(i)) {
            return std::nullopt;
        }
        return values_[i];
    }

    /// Index of the first defined value, or size() if none.
    std::size_t first_defined() const noexcept;
    std::optional<double> last_value() const noexcept;

    std::span<const double> values() const noexcept { return values_; }

private:
    std::vector<double> values_;
};

/// Civil date helpers (proleptic Gregorian, days since 1970-01-01).
std::optional<std::int64_t> parse_iso_date(std::string_view text);
std::string format_iso_date(std::int64_t days);

} // namespace powertrend
