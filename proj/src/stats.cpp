#include "regidx/stats.hpp"

#include <algorithm>
#include <cmath>

#include "regidx/error.hpp"

namespace regidx {

PolarityMap polarity_map(const std::vector<IndicatorSpec>& spec) {
    PolarityMap map;
    for (const auto& s : spec) map[s.id] = s.polarity;
    return map;
}

NormalizedMatrix normalize(const DataMatrix& matrix, const PolarityMap& polarity,
                           NormMethod method) {
    const std::size_t n = matrix.row_count();
    const std::size_t p = matrix.col_count();
    NormalizedMatrix out;
    out.rows = matrix.rows;
    out.columns = matrix.columns;
    out.method = method;
    out.cells.resize(n * p);
    out.calibration.resize(p);

    for (std::size_t c = 0; c < p; ++c) {
        ColumnCalibration& cal = out.calibration[c];
        auto it = polarity.find(matrix.columns[c]);
        cal.polarity = it == polarity.end() ? Polarity::Positive : it->second;

        double lo = matrix.at(0, c), hi = lo, sum = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            const double x = matrix.at(r, c);
            lo = std::min(lo, x);
            hi = std::max(hi, x);
            sum += x;
        }
        cal.min = lo;
        cal.max = hi;
        cal.mean = sum / static_cast<double>(n);
        double ss = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            const double d = matrix.at(r, c) - cal.mean;
            ss += d * d;
        }
        cal.sd = std::sqrt(ss / static_cast<double>(n));

        if (method == NormMethod::MinMax && cal.max == cal.min)
            raise("DegenerateColumn", "column '" + matrix.columns[c] + "' is constant (min = max = " +
                                          std::to_string(cal.min) + ")");
        if (method == NormMethod::ZScore && cal.sd == 0.0)
            raise("DegenerateColumn", "column '" + matrix.columns[c] + "' has zero variance");

        const bool flip = cal.polarity == Polarity::Negative;
        for (std::size_t r = 0; r < n; ++r) {
            const double x = matrix.at(r, c);
            double v;
            if (method == NormMethod::MinMax) {
                v = flip ? (cal.max - x) / (cal.max - cal.min)
                         : (x - cal.min) / (cal.max - cal.min);
            } else {
                v = (x - cal.mean) / cal.sd;
                if (flip) v = -v;
            }
            out.cells[r * p + c] = v;
        }
    }
    return out;
}

DescriptiveStats describe(const DataMatrix& matrix) {
    const std::size_t n = matrix.row_count();
    if (n < 2) raise("TooFewRows", "describe needs at least 2 rows, got " + std::to_string(n));
    DescriptiveStats stats;
    std::vector<double> sorted(n);
    for (std::size_t c = 0; c < matrix.col_count(); ++c) {
        ColumnStats cs;
        cs.id = matrix.columns[c];
        cs.count = n;
        double sum = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            sorted[r] = matrix.at(r, c);
            sum += sorted[r];
        }
        cs.mean = sum / static_cast<double>(n);
        double ss = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            const double d = matrix.at(r, c) - cs.mean;
            ss += d * d;
        }
        cs.sd = std::sqrt(ss / static_cast<double>(n - 1));
        std::sort(sorted.begin(), sorted.end());
        cs.min = sorted.front();
        cs.max = sorted.back();
        cs.median = (n % 2 == 1) ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
        stats.columns.push_back(std::move(cs));
    }
    return stats;
}

CorrelationMatrix correlation_of(const std::vector<double>& cells, std::size_t rows,
                                 const std::vector<std::string>& ids) {
    const std::size_t p = ids.size();
    CorrelationMatrix corr;
    corr.ids = ids;
    corr.r.assign(p * p, 0.0);

    std::vector<double> mean(p, 0.0);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < p; ++c) mean[c] += cells[r * p + c];
    for (std::size_t c = 0; c < p; ++c) mean[c] /= static_cast<double>(rows);

    std::vector<double> ss(p, 0.0);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < p; ++c) {
            const double d = cells[r * p + c] - mean[c];
            ss[c] += d * d;
        }
    for (std::size_t c = 0; c < p; ++c)
        if (ss[c] == 0.0)
            raise("DegenerateColumn", "column '" + ids[c] + "' is constant; correlation undefined");

    for (std::size_t i = 0; i < p; ++i) {
        corr.r[i * p + i] = 1.0;
        for (std::size_t j = i + 1; j < p; ++j) {
            double sxy = 0.0;
            for (std::size_t r = 0; r < rows; ++r)
                sxy += (cells[r * p + i] - mean[i]) * (cells[r * p + j] - mean[j]);
            double rij = sxy / std::sqrt(ss[i] * ss[j]);
            rij = std::clamp(rij, -1.0, 1.0);
            corr.r[i * p + j] = rij;
            corr.r[j * p + i] = rij;
        }
    }
    return corr;
}

CorrelationMatrix correlation_matrix(const DataMatrix& matrix) {
    return correlation_of(matrix.cells, matrix.row_count(), matrix.columns);
}

} // namespace regidx
