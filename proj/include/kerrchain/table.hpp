// table.hpp: column-named result tables and their CSV / JSON serialization

#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace kerrchain {

using Cell = std::variant<double, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    std::size_t column_index(std::string_view name) const;
    // Throws std::invalid_argument when the row width does not match.
    void add_row(std::vector<Cell> row);
    double number(std::size_t row, std::string_view column) const;
    const std::string& text(std::size_t row, std::string_view column) const;
    std::vector<double> numbers(std::string_view column) const;
};

enum class Format { csv, json };

std::string_view to_string(Format format);
Format format_from_string(std::string_view text);

// 12 significant digits, shortest of fixed/scientific ("%.12g").
std::string format_number(double value);

// Preamble written as '#' comment lines ahead of the CSV header, and as
// top-level keys in JSON output.
struct TableContext {
    std::string command;
    std::string config_json; // single-line JSON object
    std::string generated;   // timestamp; omitted when empty
};

void write_csv(std::ostream& out, const Table& table, const TableContext& context);
void write_json(std::ostream& out, const Table& table, const TableContext& context);

struct ParsedCsv {
    Table table;
    std::vector<std::string> comments; // without the leading "# "
};

// Cells that parse completely as numbers become doubles, others strings.
ParsedCsv read_csv(std::istream& in);

class OutputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Writes to `path`, or to stdout when path is empty or "-". Throws OutputError
// when the file cannot be written.
void emit_table(const Table& table, Format format, const std::string& path, const TableContext& context);

std::string current_timestamp();

} // namespace kerrchain
