#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

#include "regidx/panel.hpp"

namespace regidx {

enum class NormMethod { MinMax, ZScore };

struct ColumnCalibration {
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
    double sd = 0.0; // population sd over the calibration rows
    Polarity polarity = Polarity::Positive;
};

struct NormalizedMatrix {
    std::vector<RowKey> rows;
    std::vector<std::string> columns;
    std::vector<double> cells; // row-major
    NormMethod method = NormMethod::MinMax;
    std::vector<ColumnCalibration> calibration;

    double at(std::size_t r, std::size_t c) const { return cells[r * columns.size() + c]; }
    std::size_t row_count() const { return rows.size(); }
    std::size_t col_count() const { return columns.size(); }
};

struct ColumnStats {
    std::string id;
    double mean = 0.0;
    double median = 0.0;
    double sd = 0.0; // sample (n-1)
    double min = 0.0;
    double max = 0.0;
    std::size_t count = 0;
};

struct DescriptiveStats {
    std::vector<ColumnStats> columns;
};

struct CorrelationMatrix {
    std::vector<std::string> ids;
    std::vector<double> r; // row-major, ids.size() x ids.size()

    double at(std::size_t i, std::size_t j) const { return r[i * ids.size() + j]; }
    std::size_t size() const { return ids.size(); }
};

using PolarityMap = std::unordered_map<std::string, Polarity>;

// MinMax maps Positive columns via (x-min)/(max-min) and Negative ones via
// (max-x)/(max-min); ZScore standardizes with the population sd and
// sign-flips Negative columns. Calibration is over all rows of the supplied
// matrix. Indicators absent from the map default to Positive.
NormalizedMatrix normalize(const DataMatrix& matrix, const PolarityMap& polarity,
                           NormMethod method);

PolarityMap polarity_map(const std::vector<IndicatorSpec>& spec);

// Sample sd, midpoint median for even n.
DescriptiveStats describe(const DataMatrix& matrix);

// Pearson r over all rows; symmetric with an exact unit diagonal.
CorrelationMatrix correlation_matrix(const DataMatrix& matrix);
CorrelationMatrix correlation_of(const std::vector<double>& cells,
                                 std::size_t rows,
                                 const std::vector<std::string>& ids);

} // namespace regidx
