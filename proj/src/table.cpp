#include "powertrend/table.hpp"

#include "powertrend/format.hpp"

#include <cmath>

namespace powertrend {

namespace {

std::string csv_escape(const std::string& text)
{
    if (text.find_first_of(",\"\n") == std::string::npos) {
        return text;
    }
    std::string out = "\"";
    for (const char c : text) {
        if (c == '"') {
            out += "\"\"";
        } else if (c == '\n') {
            out += ' ';
        } else {
            out += c;
        }
    }
    return out + "\"";
}

struct CsvCell {
    std::string operator()(std::monostate) const { return {}; }
    std::string operator()(double v) const { return format_number(v); }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(const std::string& v) const { return csv_escape(v); }
};

struct JsonCell {
    nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
    nlohmann::ordered_json operator()(double v) const { return v; }
    nlohmann::ordered_json operator()(std::int64_t v) const { return v; }
    nlohmann::ordered_json operator()(const std::string& v) const { return v; }
};

} // namespace

Table::Cell Table::number(double v)
{
    if (std::isnan(v)) {
        return std::monostate{};
    }
    return v;
}

Table::Cell Table::number(const std::optional<double>& v)
{
    return v ? number(*v) : Cell{};
}

void write_csv(std::ostream& out, const Table& table)
{
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        out << (c ? "," : "") << csv_escape(table.columns[c]);
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << (c ? "," : "") << std::visit(CsvCell{}, row[c]);
        }
        out << '\n';
    }
}

nlohmann::ordered_json to_json(const Table& table)
{
    auto out = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t c = 0; c < row.size() && c < table.columns.size(); ++c) {
            obj[table.columns[c]] = std::visit(JsonCell{}, row[c]);
        }
        out.push_back(std::move(obj));
    }
    return out;
}

} // namespace powertrend
