#include "regidx/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "regidx/error.hpp"

namespace regidx::csv {

namespace {

std::vector<std::string> parse_line(const std::string& text, std::size_t& pos) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    while (pos < text.size()) {
        const char c = text[pos];
        if (quoted) {
            if (c == '"') {
                if (pos + 1 < text.size() && text[pos + 1] == '"') {
                    field.push_back('"');
                    ++pos;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
            ++pos;
            continue;
        }
        if (c == '"') {
            quoted = true;
            ++pos;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
            ++pos;
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && pos + 1 < text.size() && text[pos + 1] == '\n') ++pos;
            ++pos;
            break;
        } else {
            field.push_back(c);
            ++pos;
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

} // namespace

Table parse(const std::string& text) {
    Table table;
    std::size_t pos = 0;
    bool first = true;
    while (pos < text.size()) {
        auto fields = parse_line(text, pos);
        if (fields.size() == 1 && fields[0].empty()) continue; // blank line
        if (first) {
            table.header = std::move(fields);
            first = false;
        } else {
            table.rows.push_back(std::move(fields));
        }
    }
    return table;
}

Table read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise("FileNotReadable", "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

std::string quote(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string join_row(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.push_back(',');
        out += quote(fields[i]);
    }
    out.push_back('\n');
    return out;
}

std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, end);
}

std::string format_fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    std::string s(buf);
    if (s == "-0" || s.rfind("-0.", 0) == 0) {
        // normalize negative zero renderings like "-0.00"
        bool all_zero = true;
        for (char c : s) {
            if (c != '-' && c != '0' && c != '.') { all_zero = false; break; }
        }
        if (all_zero) s.erase(0, 1);
    }
    return s;
}

} // namespace regidx::csv
