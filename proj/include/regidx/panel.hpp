#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace regidx {

enum class Dimension { Economic, Social };
enum class Polarity { Positive, Negative };

struct IndicatorSpec {
    std::string id;
    std::string name;
    Dimension dimension = Dimension::Economic;
    Polarity polarity = Polarity::Positive;
    std::string unit;
};

struct Region {
    std::string code;
    std::string name;
};

// Region x year x indicator cube. Missing cells are explicit; a present cell
// is always finite.
class IndicatorPanel {
public:
    IndicatorPanel() = default;
    IndicatorPanel(std::vector<Region> regions, std::vector<int> years,
                   std::vector<IndicatorSpec> spec);

    const std::vector<Region>& regions() const { return regions_; }
    const std::vector<int>& years() const { return years_; }
    const std::vector<IndicatorSpec>& spec() const { return spec_; }

    std::optional<double> cell(std::size_t region, std::size_t year,
                               std::size_t indicator) const;
    void set_cell(std::size_t region, std::size_t year, std::size_t indicator,
                  double value);
    bool has_cell(std::size_t region, std::size_t year, std::size_t indicator) const;

    std::size_t missing_count() const;

private:
    std::size_t offset(std::size_t region, std::size_t year, std::size_t indicator) const;

    std::vector<Region> regions_;
    std::vector<int> years_;
    std::vector<IndicatorSpec> spec_;
    std::vector<double> values_;
    std::vector<unsigned char> present_;
};

struct MissingCell {
    std::string region_code;
    int year = 0;
    std::string indicator_id;
};

struct ValidationReport {
    std::vector<MissingCell> missing;
    // Indicators constant (or with < 2 present cells) over the pooled panel.
    std::vector<std::string> degenerate_columns;
    // Present cells whose magnitude is implausible for any of the supported
    // units (|x| > 1e15); almost always a parsing or unit error upstream.
    std::vector<MissingCell> out_of_range;
    // year -> number of (region, indicator) cells present for that year
    std::vector<std::pair<int, std::size_t>> row_counts;

    bool clean() const {
        return missing.empty() && degenerate_columns.empty() && out_of_range.empty();
    }
};

struct RowKey {
    std::string region_code;
    int year = 0;

    bool operator==(const RowKey&) const = default;
};

// Rectangular, fully finite observation matrix: rows are (region, year) keys,
// columns follow the indicator spec order.
struct DataMatrix {
    std::vector<RowKey> rows;
    std::vector<std::string> columns;
    std::vector<double> cells; // row-major, rows.size() x columns.size()
    std::vector<RowKey> dropped; // rows removed by the Drop policy

    double at(std::size_t r, std::size_t c) const { return cells[r * columns.size() + c]; }
    double& at(std::size_t r, std::size_t c) { return cells[r * columns.size() + c]; }
    std::size_t row_count() const { return rows.size(); }
    std::size_t col_count() const { return columns.size(); }

    std::vector<double> column(std::size_t c) const;
};

enum class DimensionFilter { Economic, Social, All };
enum class MissingPolicy { Drop, Fail };

// Spec file: header indicator_id,name,dimension,polarity,unit
std::vector<IndicatorSpec> load_indicator_spec(const std::string& path);

// Data file: header region_code,region_name,year,indicator_id,value with an
// empty value field meaning missing. Duplicate (region, year, indicator)
// rows are an error.
IndicatorPanel load_panel(const std::string& data_path, const std::string& spec_path);

// Long-format writers; reloading a written pair reproduces the cube exactly,
// missing markers included.
void write_panel(const IndicatorPanel& panel, const std::string& data_path);
void write_indicator_spec(const std::vector<IndicatorSpec>& spec, const std::string& path);

ValidationReport validate_panel(const IndicatorPanel& panel);

DataMatrix slice_matrix(const IndicatorPanel& panel, DimensionFilter filter,
                        const std::vector<int>& year_filter, // empty = all years
                        MissingPolicy policy);

} // namespace regidx
