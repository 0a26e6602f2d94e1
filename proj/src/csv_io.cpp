#include "lrf/csv_io.hpp"

#include <charconv>
#include <cmath>

namespace lrf {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        fields.emplace_back(line, start, comma == std::string::npos ? std::string::npos : comma - start);
        if (comma == std::string::npos) return fields;
        start = comma + 1;
    }
}

std::optional<double> parse_number(std::string_view field) {
    field = trim(field);
    if (field.empty()) return std::nullopt;
    if (field.front() == '+') field.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size()) return std::nullopt;
    return v;
}

CsvColumnReader::CsvColumnReader(std::istream& in, std::optional<int> column) : in_(in), column_(column) {
    if (column && *column < 0) throw std::invalid_argument("column index must be >= 0");
}

std::optional<double> CsvColumnReader::next() {
    std::string line;
    while (std::getline(in_, line)) {
        ++line_;
        if (trim(line).empty()) continue;
        const auto fields = split_fields(line);
        const std::size_t idx = column_ ? static_cast<std::size_t>(*column_) : fields.size() - 1;
        const auto where = "line " + std::to_string(line_) + ": ";
        if (idx >= fields.size()) throw CsvError(where + "missing column " + std::to_string(idx));
        const auto v = parse_number(fields[idx]);
        if (!v) {
            if (!seen_row_) {
                seen_row_ = true;
                header_ = std::string(trim(fields[idx]));
                continue;
            }
            throw CsvError(where + "non-numeric value '" + std::string(trim(fields[idx])) + "'");
        }
        seen_row_ = true;
        if (!std::isfinite(*v)) throw CsvError(where + "non-finite value");
        return v;
    }
    return std::nullopt;
}

std::vector<double> read_column(std::istream& in, std::optional<int> column) {
    CsvColumnReader reader(in, column);
    std::vector<double> out;
    while (const auto v = reader.next()) out.push_back(*v);
    return out;
}

std::string format_number(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

void write_header(std::ostream& out, std::span<const std::string> names) {
    for (std::size_t i = 0; i < names.size(); ++i) out << (i ? "," : "") << names[i];
    out << '\n';
}

void write_row(std::ostream& out, std::span<const double> values) {
    char buf[64];
    for (std::size_t i = 0; i < values.size(); ++i) {
        char* p = buf;
        if (i) *p++ = ',';
        p = std::to_chars(p, buf + sizeof buf, values[i], std::chars_format::general, 17).ptr;
        out.write(buf, p - buf);
    }
    out.put('\n');
}

}  // namespace lrf
