#include "powertrend/market_data.hpp"

#include "powertrend/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

namespace powertrend {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
        s = s.substr(1, s.size() - 2);
    }
    return s;
}

std::vector<std::string_view> split(std::string_view line, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(trim(line.substr(start)));
            return out;
        }
        out.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
}

std::string lower(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::optional<double> parse_double(std::string_view s)
{
    double value = 0.0;
    const char* first = s.data();
    const char* last = first + s.size();
    if (first != last && *first == '+') {
        ++first;
    }
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || first == last) {
        return std::nullopt;
    }
    return value;
}

[[noreturn]] void row_error(const std::string& symbol, std::size_t row, const std::string& what)
{
    throw DataError(symbol + ": row " + std::to_string(row) + ": " + what);
}

} // namespace

BarSeries load_csv(const std::filesystem::path& path, const CsvFormat& format)
{
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open " + path.string());
    }
    return load_csv(in, path.stem().string(), format);
}

BarSeries load_csv(std::istream& in, std::string symbol, const CsvFormat& format)
{
    std::string line;
    if (!std::getline(in, line)) {
        throw DataError(symbol + ": empty file (header row required)");
    }
    const auto header = split(line, ',');
    auto column = [&](const std::string& name) {
        const auto wanted = lower(name);
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (lower(header[i]) == wanted) {
                return i;
            }
        }
        throw DataError(symbol + ": missing column '" + name + "'");
    };
    const std::size_t c_date = column(format.date);
    const std::size_t c_open = column(format.open);
    const std::size_t c_high = column(format.high);
    const std::size_t c_low = column(format.low);
    const std::size_t c_close = column(format.close);
    const std::size_t needed = std::max({c_date, c_open, c_high, c_low, c_close}) + 1;

    std::vector<std::pair<std::size_t, Bar>> rows;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) {
            continue;
        }
        ++row;
        const auto fields = split(line, ',');
        if (fields.size() < needed) {
            row_error(symbol, row, "expected at least " + std::to_string(needed) + " fields");
        }
        Bar bar;
        const auto date = parse_iso_date(fields[c_date]);
        if (!date) {
            row_error(symbol, row, "unparsable date '" + std::string(fields[c_date]) + "'");
        }
        bar.stamp = *date;
        auto price = [&](std::size_t c, const char* name) {
            const auto v = parse_double(fields[c]);
            if (!v) {
                row_error(symbol, row, std::string("unparsable ") + name + " '" + std::string(fields[c]) + "'");
            }
            return *v;
        };
        bar.open = price(c_open, "open");
        bar.high = price(c_high, "high");
        bar.low = price(c_low, "low");
        bar.close = price(c_close, "close");
        if (auto why = bar_violation(bar); !why.empty()) {
            row_error(symbol, row, why);
        }
        rows.emplace_back(row, bar);
    }

    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& a, const auto& b) { return a.second.stamp < b.second.stamp; });
    std::vector<Bar> bars;
    bars.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i > 0 && rows[i].second.stamp == rows[i - 1].second.stamp) {
            row_error(symbol, rows[i].first, "duplicate date " + format_iso_date(rows[i].second.stamp));
        }
        bars.push_back(rows[i].second);
    }
    return BarSeries(std::move(symbol), std::move(bars), TimeAxis::calendar);
}

std::string to_string(SyntheticKind kind)
{
    switch (kind) {
    case SyntheticKind::constant:
        return "constant";
    case SyntheticKind::linear:
        return "linear";
    case SyntheticKind::sine:
        return "sine";
    case SyntheticKind::sine_plus_linear:
        return "sine-plus-linear";
    case SyntheticKind::multi_sine_plus_linear:
        return "multi-sine-plus-linear";
    case SyntheticKind::zigzag:
        return "zigzag";
    }
    return "unknown";
}

BarSeries generate(const SyntheticSpec& spec)
{
    auto finite = [](double v) { return std::isfinite(v); };
    if (spec.bars == 0) {
        throw ConfigError("synthetic series needs at least one bar");
    }
    if (!finite(spec.level) || !finite(spec.slope) || !finite(spec.step) || !finite(spec.noise_sigma)
        || spec.noise_sigma < 0.0) {
        throw ConfigError("synthetic parameters must be finite (noise sigma >= 0)");
    }
    for (const auto& c : spec.components) {
        if (!finite(c.amplitude) || !finite(c.phase) || !finite(c.period) || c.period <= 0.0) {
            throw ConfigError("sine components need finite amplitude/phase and a positive period");
        }
    }
    const bool needs_component = spec.kind == SyntheticKind::sine || spec.kind == SyntheticKind::sine_plus_linear
        || spec.kind == SyntheticKind::multi_sine_plus_linear;
    if (needs_component && spec.components.empty()) {
        throw ConfigError(to_string(spec.kind) + " needs at least one sine component");
    }
    if (spec.kind == SyntheticKind::zigzag) {
        if (spec.amplitude_steps < 1 || spec.step <= 0.0) {
            throw ConfigError("zigzag needs amplitude_steps >= 1 and step > 0");
        }
        if (spec.noise_sigma > 0.0) {
            throw ConfigError("zigzag series do not take a noise overlay");
        }
    }

    auto sines = [&](std::size_t i, std::size_t count) {
        double sum = 0.0;
        for (std::size_t k = 0; k < count && k < spec.components.size(); ++k) {
            const auto& c = spec.components[k];
            sum += c.amplitude * std::sin(2.0 * std::numbers::pi * static_cast<double>(i) / c.period + c.phase);
        }
        return sum;
    };

    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::vector<Bar> bars(spec.bars);
    for (std::size_t i = 0; i < spec.bars; ++i) {
        const double t = static_cast<double>(i);
        double p = spec.level;
        switch (spec.kind) {
        case SyntheticKind::constant:
            break;
        case SyntheticKind::linear:
            p += spec.slope * t;
            break;
        case SyntheticKind::sine:
            p += sines(i, 1);
            break;
        case SyntheticKind::sine_plus_linear:
            p += spec.slope * t + sines(i, 1);
            break;
        case SyntheticKind::multi_sine_plus_linear:
            p += spec.slope * t + sines(i, spec.components.size());
            break;
        case SyntheticKind::zigzag: {
            const long period = 2L * spec.amplitude_steps;
            long k = (static_cast<long>(spec.phase_steps) + static_cast<long>(i)) % period;
            if (k < 0) {
                k += period;
            }
            const long height = k <= spec.amplitude_steps ? k : period - k;
            p += spec.step * static_cast<double>(height);
            break;
        }
        }
        if (spec.noise_sigma > 0.0) {
            p += spec.noise_sigma * gauss(rng);
        }
        if (!(p > 0.0) || !std::isfinite(p)) {
            throw DataError(to_string(spec.kind) + " spec drives price <= 0 at bar " + std::to_string(i));
        }
        bars[i] = Bar{static_cast<std::int64_t>(i), p, p, p, p};
    }
    return BarSeries(spec.symbol, std::move(bars), TimeAxis::index);
}

SyntheticSpec parse_synthetic(std::string_view text)
{
    auto parts = split(text, ':');
    if (parts.empty() || parts[0].empty()) {
        throw ConfigError("empty synthetic spec");
    }

    SyntheticSpec spec;
    // Optional trailing noise=SIGMA/SEED.
    if (parts.back().starts_with("noise=")) {
        const auto noise = split(parts.back().substr(6), '/');
        const auto sigma = noise.empty() ? std::nullopt : parse_double(noise[0]);
        if (noise.size() != 2 || !sigma) {
            throw ConfigError("noise overlay must be noise=SIGMA/SEED");
        }
        std::uint64_t seed = 0;
        auto [ptr, ec] = std::from_chars(noise[1].data(), noise[1].data() + noise[1].size(), seed);
        if (ec != std::errc{} || ptr != noise[1].data() + noise[1].size()) {
            throw ConfigError("bad noise seed '" + std::string(noise[1]) + "'");
        }
        spec.noise_sigma = *sigma;
        spec.seed = seed;
        parts.pop_back();
    }

    const std::string kind(parts[0]);
    auto num = [&](std::size_t i) {
        if (i >= parts.size()) {
            throw ConfigError("synthetic spec '" + std::string(text) + "' has too few parameters");
        }
        const auto v = parse_double(parts[i]);
        if (!v) {
            throw ConfigError("bad number '" + std::string(parts[i]) + "' in synthetic spec");
        }
        return *v;
    };
    auto count = [&](std::size_t i) {
        const double v = num(i);
        if (v < 1.0 || v != std::floor(v)) {
            throw ConfigError("bar count must be a positive integer");
        }
        return static_cast<std::size_t>(v);
    };
    auto expect = [&](std::size_t lo, std::size_t hi) {
        if (parts.size() < lo || parts.size() > hi) {
            throw ConfigError("synthetic spec '" + std::string(text) + "': wrong number of parameters for " + kind);
        }
    };

    if (kind == "constant") {
        expect(3, 3);
        spec.kind = SyntheticKind::constant;
        spec.level = num(1);
        spec.bars = count(2);
    } else if (kind == "linear") {
        expect(4, 4);
        spec.kind = SyntheticKind::linear;
        spec.level = num(1);
        spec.slope = num(2);
        spec.bars = count(3);
    } else if (kind == "sine") {
        expect(5, 5);
        spec.kind = SyntheticKind::sine;
        spec.level = num(1);
        spec.components = {{num(2), num(3), 0.0}};
        spec.bars = count(4);
    } else if (kind == "sine-plus-linear") {
        expect(6, 6);
        spec.kind = SyntheticKind::sine_plus_linear;
        spec.level = num(1);
        spec.slope = num(2);
        spec.components = {{num(3), num(4), 0.0}};
        spec.bars = count(5);
    } else if (kind == "multi-sine-plus-linear") {
        if (parts.size() < 5) {
            throw ConfigError("multi-sine-plus-linear needs START:SLOPE:BARS and at least one AMP/PERIOD");
        }
        spec.kind = SyntheticKind::multi_sine_plus_linear;
        spec.level = num(1);
        spec.slope = num(2);
        spec.bars = count(3);
        for (std::size_t i = 4; i < parts.size(); ++i) {
            const auto fields = split(parts[i], '/');
            std::vector<double> v;
            for (auto f : fields) {
                const auto d = parse_double(f);
                if (!d) {
                    throw ConfigError("bad sine component '" + std::string(parts[i]) + "'");
                }
                v.push_back(*d);
            }
            if (v.size() < 2 || v.size() > 3) {
                throw ConfigError("sine component must be AMP/PERIOD[/PHASE]");
            }
            spec.components.push_back({v[0], v[1], v.size() == 3 ? v[2] : 0.0});
        }
    } else if (kind == "zigzag") {
        expect(5, 6);
        spec.kind = SyntheticKind::zigzag;
        spec.level = num(1);
        spec.step = num(2);
        const double amp = num(3);
        if (amp < 1.0 || amp != std::floor(amp)) {
            throw ConfigError("zigzag amplitude is a positive whole number of steps");
        }
        spec.amplitude_steps = static_cast<int>(amp);
        spec.bars = count(4);
        if (parts.size() == 6) {
            const double phase = num(5);
            if (phase != std::floor(phase)) {
                throw ConfigError("zigzag phase is a whole number of steps");
            }
            spec.phase_steps = static_cast<int>(phase);
        }
    } else {
        throw ConfigError("unknown synthetic kind '" + kind + "'");
    }
    spec.symbol = kind;
    return spec;
}

} // namespace powertrend
