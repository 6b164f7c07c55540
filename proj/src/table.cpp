#include "kerrchain/table.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "kerrchain/version.hpp"

namespace kerrchain {

std::size_t Table::column_index(std::string_view name) const
{
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == name) return i;
    }
    throw std::invalid_argument("table has no column '" + std::string(name) + "'");
}

void Table::add_row(std::vector<Cell> row)
{
    if (row.size() != columns.size()) throw std::invalid_argument("row width does not match the column count");
    rows.push_back(std::move(row));
}

double Table::number(std::size_t row, std::string_view column) const
{
    return std::get<double>(rows.at(row).at(column_index(column)));
}

const std::string& Table::text(std::size_t row, std::string_view column) const
{
    return std::get<std::string>(rows.at(row).at(column_index(column)));
}

std::vector<double> Table::numbers(std::string_view column) const
{
    const std::size_t c = column_index(column);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(std::get<double>(r.at(c)));
    return out;
}

std::string_view to_string(Format format) { return format == Format::csv ? "csv" : "json"; }

Format format_from_string(std::string_view text)
{
    if (text == "csv") return Format::csv;
    if (text == "json") return Format::json;
    throw std::invalid_argument("unknown output format '" + std::string(text) + "'");
}

std::string format_number(double value)
{
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.12g", value);
    return buffer;
}

namespace {

std::string cell_text(const Cell& cell)
{
    if (const double* d = std::get_if<double>(&cell)) return format_number(*d);
    return std::get<std::string>(cell);
}

std::vector<std::string> split(const std::string& line, char sep)
{
    std::vector<std::string> parts;
    std::string current;
    std::istringstream in(line);
    while (std::getline(in, current, sep)) parts.push_back(current);
    if (!line.empty() && line.back() == sep) parts.emplace_back();
    return parts;
}

Cell parse_cell(const std::string& text)
{
    if (!text.empty()) {
        char* end = nullptr;
        const double value = std::strtod(text.c_str(), &end);
        if (end == text.c_str() + text.size()) return value;
    }
    return text;
}

} // namespace

void write_csv(std::ostream& out, const Table& table, const TableContext& context)
{
    out << "# kerrchain " << kVersion << '\n';
    if (!context.command.empty()) out << "# command: " << context.command << '\n';
    if (!context.config_json.empty()) out << "# config: " << context.config_json << '\n';
    if (!context.generated.empty()) out << "# generated: " << context.generated << '\n';
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        out << (i ? "," : "") << table.columns[i];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << cell_text(row[i]);
        out << '\n';
    }
}

void write_json(std::ostream& out, const Table& table, const TableContext& context)
{
    nlohmann::ordered_json doc;
    doc["generator"] = std::string("kerrchain ") + kVersion;
    if (!context.command.empty()) doc["command"] = context.command;
    if (!context.config_json.empty()) doc["config"] = nlohmann::ordered_json::parse(context.config_json);
    if (!context.generated.empty()) doc["generated"] = context.generated;
    doc["column_order"] = table.columns;
    auto& columns = doc["columns"];
    columns = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        auto column = nlohmann::ordered_json::array();
        for (const auto& row : table.rows) {
            if (const double* d = std::get_if<double>(&row[c])) {
                // same 12-digit rounding as the CSV path
                const double rounded = std::strtod(format_number(*d).c_str(), nullptr);
                if (std::isfinite(rounded)) column.push_back(rounded);
                else column.push_back(nullptr);
            } else {
                column.push_back(std::get<std::string>(row[c]));
            }
        }
        columns[table.columns[c]] = std::move(column);
    }
    out << doc.dump(2) << '\n';
}

ParsedCsv read_csv(std::istream& in)
{
    ParsedCsv parsed;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.front() == '#') {
            std::string comment = line.substr(1);
            if (!comment.empty() && comment.front() == ' ') comment.erase(0, 1);
            parsed.comments.push_back(std::move(comment));
            continue;
        }
        const auto fields = split(line, ',');
        if (!header_seen) {
            parsed.table.columns = fields;
            header_seen = true;
            continue;
        }
        std::vector<Cell> row;
        row.reserve(fields.size());
        for (const auto& f : fields) row.push_back(parse_cell(f));
        parsed.table.add_row(std::move(row));
    }
    if (!header_seen) throw std::invalid_argument("CSV input has no header row");
    return parsed;
}

void emit_table(const Table& table, Format format, const std::string& path, const TableContext& context)
{
    auto write = [&](std::ostream& out) {
        if (format == Format::csv) write_csv(out, table, context);
        else write_json(out, table, context);
    };
    if (path.empty() || path == "-") {
        write(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream file(path);
    if (!file) throw OutputError("cannot open '" + path + "' for writing");
    write(file);
    file.flush();
    if (!file) throw OutputError("failed while writing '" + path + "'");
}

std::string current_timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buffer[32];
    std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buffer;
}

} // namespace kerrchain
