#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "regidx/panel.hpp"
#include "regidx/stats.hpp"

namespace regidx {

// Correlation-matrix PCA. Loadings are the orthonormal eigenvectors stored
// column-wise (loading(i, j) = weight of variable i in component j), sorted
// by descending eigenvalue and oriented so each column sums to a
// non-negative value.
struct PcaModel {
    std::size_t p = 0;
    std::vector<double> eigenvalues;        // descending, clamped at 0
    std::vector<double> loadings;           // row-major p x p
    std::vector<double> explained_ratio;    // eigenvalue / p
    std::size_t retained = 1;
    std::vector<double> fit_mean;           // per-column mean of the fit data
    std::vector<double> fit_sd;             // per-column population sd

    double loading(std::size_t var, std::size_t comp) const {
        return loadings[var * p + comp];
    }
};

struct RetentionRule {
    enum class Kind { Kaiser, VarianceThreshold };
    Kind kind = Kind::Kaiser;
    double tau = 0.8; // VarianceThreshold only

    static RetentionRule kaiser() { return {Kind::Kaiser, 0.0}; }
    static RetentionRule variance(double tau) { return {Kind::VarianceThreshold, tau}; }
};

PcaModel pca_fit(const NormalizedMatrix& normalized);
PcaModel pca_fit_raw(const std::vector<double>& cells, std::size_t rows,
                     const std::vector<std::string>& ids);

// Kaiser: count of eigenvalues strictly above 1, floored at 1.
// VarianceThreshold: smallest m whose cumulative explained ratio reaches tau.
std::size_t retain_components(const PcaModel& model, const RetentionRule& rule);

// Standardizes each row with the fit-time mean/sd, projects onto the first
// `retained` components, and returns the explained-variance-weighted sum of
// the scores.
std::vector<double> composite_index(const PcaModel& model,
                                    const std::vector<double>& cells,
                                    std::size_t rows);

// Per-scope component scores for one row (used by tests and exports).
std::vector<double> component_scores(const PcaModel& model, const double* row);

struct IndexRules {
    NormMethod norm = NormMethod::MinMax;
    RetentionRule retention = RetentionRule::kaiser();
    MissingPolicy missing = MissingPolicy::Drop;
    std::vector<int> years; // empty = all panel years
};

inline constexpr std::size_t kScopeCount = 3;
enum class Scope : std::size_t { Economic = 0, Social = 1, Socioeconomic = 2 };
const char* scope_name(Scope s);
DimensionFilter scope_filter(Scope s);

struct IndexSeries {
    std::vector<RowKey> rows;        // (region, year), region-major
    std::vector<std::string> region_names; // aligned with rows
    // values[scope.index] aligned with rows
    std::vector<double> values[kScopeCount];
    PcaModel models[kScopeCount];

    std::size_t row_count() const { return rows.size(); }
};

// slice -> normalize -> pca_fit (pooled over all selected years) -> project,
// once per scope. Rows are the (region, year) keys retained by every scope.
IndexSeries build_index_series(const IndicatorPanel& panel, const IndexRules& rules);

} // namespace regidx
