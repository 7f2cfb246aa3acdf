#pragma once

#include <string>
#include <vector>

namespace regidx::csv {

// Minimal RFC-4180-ish CSV: comma separator, double-quote quoting, UTF-8
// passed through untouched. Handles \n and \r\n line endings.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

Table read_file(const std::string& path);
Table parse(const std::string& text);

// Quotes a field only when it contains a comma, quote, or newline.
std::string quote(const std::string& field);
std::string join_row(const std::vector<std::string>& fields);

// Shortest decimal string that round-trips to the same double.
std::string format_double(double v);
// Fixed-precision rendering (e.g. the 2-decimal index tables).
std::string format_fixed(double v, int decimals);

} // namespace regidx::csv
