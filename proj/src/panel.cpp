#include "regidx/panel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "regidx/csv.hpp"
#include "regidx/error.hpp"

namespace regidx {

namespace {

constexpr double kMagnitudeLimit = 1e15;

double parse_number(const std::string& text, const std::string& context) {
    double value = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || !std::isfinite(value))
        raise("MalformedRow", context + ": unparseable number '" + text + "'");
    return value;
}

int parse_year(const std::string& text, const std::string& context) {
    if (text.size() != 4) raise("MalformedRow", context + ": year must be a 4-digit integer, got '" + text + "'");
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        raise("MalformedRow", context + ": year must be a 4-digit integer, got '" + text + "'");
    return value;
}

std::string trimmed(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

} // namespace

IndicatorPanel::IndicatorPanel(std::vector<Region> regions, std::vector<int> years,
                               std::vector<IndicatorSpec> spec)
    : regions_(std::move(regions)), years_(std::move(years)), spec_(std::move(spec)) {
    for (std::size_t i = 1; i < years_.size(); ++i)
        if (years_[i] <= years_[i - 1]) raise("MalformedRow", "years must be strictly increasing");
    const std::size_t n = regions_.size() * years_.size() * spec_.size();
    values_.assign(n, 0.0);
    present_.assign(n, 0);
}

std::size_t IndicatorPanel::offset(std::size_t region, std::size_t year, std::size_t indicator) const {
    return (region * years_.size() + year) * spec_.size() + indicator;
}

std::optional<double> IndicatorPanel::cell(std::size_t region, std::size_t year,
                                           std::size_t indicator) const {
    const std::size_t o = offset(region, year, indicator);
    if (!present_[o]) return std::nullopt;
    return values_[o];
}

bool IndicatorPanel::has_cell(std::size_t region, std::size_t year, std::size_t indicator) const {
    return present_[offset(region, year, indicator)] != 0;
}

void IndicatorPanel::set_cell(std::size_t region, std::size_t year, std::size_t indicator,
                              double value) {
    if (!std::isfinite(value)) raise("MalformedRow", "non-finite value stored into panel");
    const std::size_t o = offset(region, year, indicator);
    values_[o] = value;
    present_[o] = 1;
}

std::size_t IndicatorPanel::missing_count() const {
    std::size_t n = 0;
    for (unsigned char p : present_)
        if (!p) ++n;
    return n;
}

std::vector<IndicatorSpec> load_indicator_spec(const std::string& path) {
    const auto table = csv::read_file(path);
    const std::vector<std::string> expect = {"indicator_id", "name", "dimension", "polarity", "unit"};
    if (table.header != expect)
        raise("MalformedRow", path + ": spec header must be indicator_id,name,dimension,polarity,unit");
    std::vector<IndicatorSpec> spec;
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        const std::string context = path + " row " + std::to_string(i + 2);
        if (row.size() != 5) raise("MalformedRow", context + ": expected 5 fields, got " + std::to_string(row.size()));
        IndicatorSpec s;
        s.id = trimmed(row[0]);
        s.name = row[1];
        const std::string dim = trimmed(row[2]);
        const std::string pol = trimmed(row[3]);
        s.unit = row[4];
        if (s.id.empty()) raise("MalformedRow", context + ": empty indicator_id");
        if (!seen.insert(s.id).second) raise("MalformedRow", context + ": duplicate indicator_id '" + s.id + "'");
        if (dim == "economic") s.dimension = Dimension::Economic;
        else if (dim == "social") s.dimension = Dimension::Social;
        else raise("MalformedRow", context + ": dimension must be economic or social, got '" + dim + "'");
        if (pol == "positive" || pol.empty()) s.polarity = Polarity::Positive;
        else if (pol == "negative") s.polarity = Polarity::Negative;
        else raise("MalformedRow", context + ": polarity must be positive or negative, got '" + pol + "'");
        spec.push_back(std::move(s));
    }
    if (spec.empty()) raise("MalformedRow", path + ": spec file has no indicators");
    return spec;
}

IndicatorPanel load_panel(const std::string& data_path, const std::string& spec_path) {
    auto spec = load_indicator_spec(spec_path);
    std::unordered_map<std::string, std::size_t> indicator_index;
    for (std::size_t i = 0; i < spec.size(); ++i) indicator_index[spec[i].id] = i;

    const auto table = csv::read_file(data_path);
    const std::vector<std::string> expect = {"region_code", "region_name", "year", "indicator_id", "value"};
    if (table.header != expect)
        raise("MalformedRow", data_path + ": data header must be region_code,region_name,year,indicator_id,value");

    struct RawCell {
        std::size_t region;
        int year;
        std::size_t indicator;
        bool present;
        double value;
    };
    std::vector<Region> regions;
    std::unordered_map<std::string, std::size_t> region_index;
    std::set<int> year_set;
    std::vector<RawCell> cells;
    cells.reserve(table.rows.size());

    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        const std::string context = data_path + " row " + std::to_string(i + 2);
        if (row.size() != 5) raise("MalformedRow", context + ": expected 5 fields, got " + std::to_string(row.size()));
        const std::string code = trimmed(row[0]);
        if (code.empty()) raise("MalformedRow", context + ": empty region_code");
        const int year = parse_year(trimmed(row[2]), context);
        const std::string id = trimmed(row[3]);
        auto ind = indicator_index.find(id);
        if (ind == indicator_index.end())
            raise("UnknownIndicator", context + ": indicator_id '" + id + "' is not in the spec file");

        auto [it, inserted] = region_index.try_emplace(code, regions.size());
        if (inserted) {
            regions.push_back({code, row[1]});
        } else if (regions[it->second].name != row[1]) {
            raise("MalformedRow", context + ": region_code '" + code + "' renamed from '" +
                                      regions[it->second].name + "' to '" + row[1] + "'");
        }

        RawCell cell{it->second, year, ind->second, false, 0.0};
        const std::string value = trimmed(row[4]);
        if (!value.empty()) {
            cell.present = true;
            cell.value = parse_number(value, context);
        }
        year_set.insert(year);
        cells.push_back(cell);
    }

    std::vector<int> years(year_set.begin(), year_set.end());
    IndicatorPanel panel(std::move(regions), years, std::move(spec));

    std::unordered_map<int, std::size_t> year_index;
    for (std::size_t i = 0; i < years.size(); ++i) year_index[years[i]] = i;

    std::vector<unsigned char> seen(panel.regions().size() * years.size() * panel.spec().size(), 0);
    for (const auto& cell : cells) {
        const std::size_t y = year_index.at(cell.year);
        const std::size_t o = (cell.region * years.size() + y) * panel.spec().size() + cell.indicator;
        if (seen[o])
            raise("DuplicateCell", "duplicate cell (" + panel.regions()[cell.region].code + ", " +
                                       std::to_string(cell.year) + ", " +
                                       panel.spec()[cell.indicator].id + ")");
        seen[o] = 1;
        if (cell.present) panel.set_cell(cell.region, y, cell.indicator, cell.value);
    }
    return panel;
}

void write_panel(const IndicatorPanel& panel, const std::string& data_path) {
    std::ostringstream out;
    out << "region_code,region_name,year,indicator_id,value\n";
    for (std::size_t r = 0; r < panel.regions().size(); ++r) {
        for (std::size_t y = 0; y < panel.years().size(); ++y) {
            for (std::size_t i = 0; i < panel.spec().size(); ++i) {
                const auto v = panel.cell(r, y, i);
                out << csv::join_row({panel.regions()[r].code, panel.regions()[r].name,
                                      std::to_string(panel.years()[y]), panel.spec()[i].id,
                                      v ? csv::format_double(*v) : std::string()});
            }
        }
    }
    std::ofstream file(data_path, std::ios::binary);
    if (!file) raise("FileNotWritable", "cannot write " + data_path);
    file << out.str();
}

void write_indicator_spec(const std::vector<IndicatorSpec>& spec, const std::string& path) {
    std::ostringstream out;
    out << "indicator_id,name,dimension,polarity,unit\n";
    for (const auto& s : spec) {
        out << csv::join_row({s.id, s.name,
                              s.dimension == Dimension::Economic ? "economic" : "social",
                              s.polarity == Polarity::Positive ? "positive" : "negative", s.unit});
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) raise("FileNotWritable", "cannot write " + path);
    file << out.str();
}

ValidationReport validate_panel(const IndicatorPanel& panel) {
    ValidationReport report;
    const auto& years = panel.years();
    std::vector<std::size_t> per_year(years.size(), 0);

    for (std::size_t i = 0; i < panel.spec().size(); ++i) {
        double lo = 0.0, hi = 0.0;
        std::size_t count = 0;
        for (std::size_t r = 0; r < panel.regions().size(); ++r) {
            for (std::size_t y = 0; y < years.size(); ++y) {
                const auto v = panel.cell(r, y, i);
                if (!v) {
                    report.missing.push_back({panel.regions()[r].code, years[y], panel.spec()[i].id});
                    continue;
                }
                ++per_year[y];
                if (std::abs(*v) > kMagnitudeLimit)
                    report.out_of_range.push_back({panel.regions()[r].code, years[y], panel.spec()[i].id});
                if (count == 0) lo = hi = *v;
                lo = std::min(lo, *v);
                hi = std::max(hi, *v);
                ++count;
            }
        }
        if (count < 2 || lo == hi) report.degenerate_columns.push_back(panel.spec()[i].id);
    }

    // missing cells were accumulated indicator-major; report them row-major
    std::sort(report.missing.begin(), report.missing.end(), [](const MissingCell& a, const MissingCell& b) {
        if (a.region_code != b.region_code) return a.region_code < b.region_code;
        if (a.year != b.year) return a.year < b.year;
        return a.indicator_id < b.indicator_id;
    });
    for (std::size_t y = 0; y < years.size(); ++y) report.row_counts.emplace_back(years[y], per_year[y]);
    return report;
}

std::vector<double> DataMatrix::column(std::size_t c) const {
    std::vector<double> out(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) out[r] = at(r, c);
    return out;
}

DataMatrix slice_matrix(const IndicatorPanel& panel, DimensionFilter filter,
                        const std::vector<int>& year_filter, MissingPolicy policy) {
    std::vector<std::size_t> cols;
    for (std::size_t i = 0; i < panel.spec().size(); ++i) {
        const auto dim = panel.spec()[i].dimension;
        if (filter == DimensionFilter::All ||
            (filter == DimensionFilter::Economic && dim == Dimension::Economic) ||
            (filter == DimensionFilter::Social && dim == Dimension::Social))
            cols.push_back(i);
    }
    if (cols.size() < 2)
        raise("TooFewColumns", "filter selects " + std::to_string(cols.size()) + " indicators; need at least 2");

    std::vector<std::size_t> years;
    if (year_filter.empty()) {
        for (std::size_t y = 0; y < panel.years().size(); ++y) years.push_back(y);
    } else {
        for (int wanted : year_filter) {
            auto it = std::find(panel.years().begin(), panel.years().end(), wanted);
            if (it == panel.years().end())
                raise("BadConfig", "year " + std::to_string(wanted) + " is not in the panel");
            years.push_back(static_cast<std::size_t>(it - panel.years().begin()));
        }
        std::sort(years.begin(), years.end());
    }

    DataMatrix m;
    for (std::size_t c : cols) m.columns.push_back(panel.spec()[c].id);

    for (std::size_t r = 0; r < panel.regions().size(); ++r) {
        for (std::size_t y : years) {
            bool complete = true;
            for (std::size_t c : cols) {
                if (!panel.has_cell(r, y, c)) {
                    if (policy == MissingPolicy::Fail)
                        raise("MissingData", "missing cell (" + panel.regions()[r].code + ", " +
                                                 std::to_string(panel.years()[y]) + ", " +
                                                 panel.spec()[c].id + ")");
                    complete = false;
                    break;
                }
            }
            const RowKey key{panel.regions()[r].code, panel.years()[y]};
            if (!complete) {
                m.dropped.push_back(key);
                continue;
            }
            m.rows.push_back(key);
            for (std::size_t c : cols) m.cells.push_back(*panel.cell(r, y, c));
        }
    }

    if (m.rows.size() < 3)
        raise("TooFewRows", "matrix has " + std::to_string(m.rows.size()) + " rows after policy; need at least 3");
    return m;
}

} // namespace regidx
