#ifndef WELLCAST_CSV_HPP
#define WELLCAST_CSV_HPP

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace wellcast::csv {

/// Split one CSV line on commas. No quoting support; none of the file
/// formats use quoted fields. Fields are whitespace-trimmed.
std::vector<std::string> split_line(std::string_view line);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<size_t> line_numbers; // 1-based source line of each row

    /// Index of a header column, or -1 if absent.
    int column(std::string_view name) const;
};

/// Read a whole CSV file (first line is the header). Throws DataError on
/// missing files or rows with a different field count than the header.
Table read_file(const std::filesystem::path& path);

/// Shortest round-trip decimal representation of a double (std::to_chars).
/// Empty cells and NaN are written as "".
std::string format_double(double v);

/// Parse a decimal cell; empty cells yield `missing_value`.
double parse_double(std::string_view cell, const std::filesystem::path& path, size_t line,
                    double missing_value);

} // namespace wellcast::csv

#endif
