// Minimal CSV plumbing: a streaming numeric column reader and a lossless
// row writer (17 significant digits).
#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lrf {

/// Malformed input; the message carries the 1-based line number.
class CsvError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Reads one numeric column line by line. A first non-blank line whose selected field
/// is not a number is taken as a header; any later non-numeric (or
/// non-finite) field raises CsvError. Blank lines are skipped.
class CsvColumnReader {
public:
    /// column empty selects the last field of every row.
    explicit CsvColumnReader(std::istream& in, std::optional<int> column = std::nullopt);

    std::optional<double> next();
    const std::optional<std::string>& header() const { return header_; }

private:
    std::istream& in_;
    std::optional<int> column_;
    long line_ = 0;
    bool seen_row_ = false;
    std::optional<std::string> header_;
};

/// Reads a whole column into memory.
std::vector<double> read_column(std::istream& in, std::optional<int> column = std::nullopt);

std::vector<std::string> split_fields(const std::string& line);

/// Parses a whole trimmed field as a double.
std::optional<double> parse_number(std::string_view field);

std::string format_number(double v);

void write_header(std::ostream& out, std::span<const std::string> names);
void write_row(std::ostream& out, std::span<const double> values);

}  // namespace lrf
