#pragma once

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace powertrend {

/// A rectangular result set rendered either as CSV or as a JSON array of
/// objects. Empty cells (undefined values) become "" in CSV and null in JSON.
struct Table {
    using Cell = std::variant<std::monostate, double, std::int64_t, std::string>;

    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    static Cell number(double v);
    static Cell number(const std::optional<double>& v);
    static Cell integer(std::int64_t v) { return v; }
    static Cell text(std::string v) { return v; }
};

void write_csv(std::ostream& out, const Table& table);
nlohmann::ordered_json to_json(const Table& table);

} // namespace powertrend
