#include "regidx/pca.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>

#include "regidx/error.hpp"

namespace regidx {

namespace {

// Cyclic Jacobi eigendecomposition of a symmetric matrix. Rotations are
// applied until the off-diagonal Frobenius norm falls below 1e-14 * scale.
// Returns false if that never happens within the sweep budget.
bool jacobi_eigen(std::vector<double> a, std::size_t p,
                  std::vector<double>& eigenvalues, std::vector<double>& vectors) {
    vectors.assign(p * p, 0.0);
    for (std::size_t i = 0; i < p; ++i) vectors[i * p + i] = 1.0;
    if (p == 1) {
        eigenvalues = {a[0]};
        return true;
    }

    double scale = 0.0;
    for (std::size_t i = 0; i < p; ++i) scale = std::max(scale, std::abs(a[i * p + i]));
    scale = std::max(scale, 1.0);
    const double tol = 1e-14 * scale;

    const std::size_t max_sweeps = 100;
    for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = i + 1; j < p; ++j) off += a[i * p + j] * a[i * p + j];
        if (std::sqrt(off) < tol) {
            eigenvalues.resize(p);
            for (std::size_t i = 0; i < p; ++i) eigenvalues[i] = a[i * p + i];
            return true;
        }
        for (std::size_t i = 0; i < p; ++i) {
            for (std::size_t j = i + 1; j < p; ++j) {
                const double apq = a[i * p + j];
                if (apq == 0.0) continue;
                const double app = a[i * p + i];
                const double aqq = a[j * p + j];
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (std::size_t k = 0; k < p; ++k) {
                    const double aki = a[k * p + i];
                    const double akj = a[k * p + j];
                    a[k * p + i] = c * aki - s * akj;
                    a[k * p + j] = s * aki + c * akj;
                }
                for (std::size_t k = 0; k < p; ++k) {
                    const double aik = a[i * p + k];
                    const double ajk = a[j * p + k];
                    a[i * p + k] = c * aik - s * ajk;
                    a[j * p + k] = s * aik + c * ajk;
                }
                for (std::size_t k = 0; k < p; ++k) {
                    const double vki = vectors[k * p + i];
                    const double vkj = vectors[k * p + j];
                    vectors[k * p + i] = c * vki - s * vkj;
                    vectors[k * p + j] = s * vki + c * vkj;
                }
            }
        }
    }
    return false;
}

} // namespace

const char* scope_name(Scope s) {
    switch (s) {
        case Scope::Economic: return "economic";
        case Scope::Social: return "social";
        case Scope::Socioeconomic: return "socioeconomic";
    }
    return "?";
}

DimensionFilter scope_filter(Scope s) {
    switch (s) {
        case Scope::Economic: return DimensionFilter::Economic;
        case Scope::Social: return DimensionFilter::Social;
        case Scope::Socioeconomic: return DimensionFilter::All;
    }
    return DimensionFilter::All;
}

PcaModel pca_fit_raw(const std::vector<double>& cells, std::size_t rows,
                     const std::vector<std::string>& ids) {
    const std::size_t p = ids.size();
    if (rows < 3) raise("TooFewRows", "pca_fit needs at least 3 rows, got " + std::to_string(rows));

    const CorrelationMatrix corr = correlation_of(cells, rows, ids);

    std::vector<double> eigenvalues, vectors;
    if (!jacobi_eigen(corr.r, p, eigenvalues, vectors))
        raise("NumericalFailure", "eigendecomposition did not converge");

    // sort eigenpairs by descending eigenvalue (stable on exact ties)
    std::vector<std::size_t> order(p);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return eigenvalues[a] > eigenvalues[b];
    });

    PcaModel model;
    model.p = p;
    model.eigenvalues.resize(p);
    model.loadings.assign(p * p, 0.0);
    model.explained_ratio.resize(p);

    for (std::size_t j = 0; j < p; ++j) {
        const std::size_t src = order[j];
        double lambda = eigenvalues[src];
        if (lambda < -1e-9)
            raise("NumericalFailure", "correlation matrix has eigenvalue " + std::to_string(lambda));
        lambda = std::max(lambda, 0.0);
        model.eigenvalues[j] = lambda;
        model.explained_ratio[j] = lambda / static_cast<double>(p);

        double column_sum = 0.0;
        for (std::size_t i = 0; i < p; ++i) column_sum += vectors[i * p + src];
        const double sign = column_sum < 0.0 ? -1.0 : 1.0;
        for (std::size_t i = 0; i < p; ++i)
            model.loadings[i * p + j] = sign * vectors[i * p + src];
    }

    model.fit_mean.assign(p, 0.0);
    model.fit_sd.assign(p, 0.0);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < p; ++c) model.fit_mean[c] += cells[r * p + c];
    for (std::size_t c = 0; c < p; ++c) model.fit_mean[c] /= static_cast<double>(rows);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < p; ++c) {
            const double d = cells[r * p + c] - model.fit_mean[c];
            model.fit_sd[c] += d * d;
        }
    for (std::size_t c = 0; c < p; ++c)
        model.fit_sd[c] = std::sqrt(model.fit_sd[c] / static_cast<double>(rows));

    model.retained = retain_components(model, RetentionRule::kaiser());
    return model;
}

PcaModel pca_fit(const NormalizedMatrix& normalized) {
    return pca_fit_raw(normalized.cells, normalized.row_count(), normalized.columns);
}

std::size_t retain_components(const PcaModel& model, const RetentionRule& rule) {
    if (rule.kind == RetentionRule::Kind::Kaiser) {
        std::size_t m = 0;
        for (double lambda : model.eigenvalues)
            if (lambda > 1.0) ++m;
        return std::max<std::size_t>(m, 1);
    }
    if (!(rule.tau > 0.0) || rule.tau > 1.0)
        raise("BadConfig", "variance threshold must be in (0, 1], got " + std::to_string(rule.tau));
    double cumulative = 0.0;
    for (std::size_t m = 0; m < model.p; ++m) {
        cumulative += model.explained_ratio[m];
        if (cumulative >= rule.tau - 1e-12) return m + 1;
    }
    return model.p;
}

std::vector<double> component_scores(const PcaModel& model, const double* row) {
    std::vector<double> z(model.p);
    for (std::size_t c = 0; c < model.p; ++c)
        z[c] = (row[c] - model.fit_mean[c]) / model.fit_sd[c];
    std::vector<double> scores(model.p, 0.0);
    for (std::size_t j = 0; j < model.p; ++j) {
        double t = 0.0;
        for (std::size_t i = 0; i < model.p; ++i) t += z[i] * model.loading(i, j);
        scores[j] = t;
    }
    return scores;
}

std::vector<double> composite_index(const PcaModel& model, const std::vector<double>& cells,
                                    std::size_t rows) {
    if (rows * model.p != cells.size())
        raise("DimensionMismatch", "expected rows with " + std::to_string(model.p) + " columns");
    const std::size_t m = std::min(model.retained, model.p);
    double lambda_sum = 0.0;
    for (std::size_t j = 0; j < m; ++j) lambda_sum += model.eigenvalues[j];
    if (lambda_sum <= 0.0) raise("NumericalFailure", "retained eigenvalues sum to zero");

    std::vector<double> index(rows, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
        const double* row = cells.data() + r * model.p;
        double acc = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            double t = 0.0;
            for (std::size_t i = 0; i < model.p; ++i)
                t += (row[i] - model.fit_mean[i]) / model.fit_sd[i] * model.loading(i, j);
            acc += (model.eigenvalues[j] / lambda_sum) * t;
        }
        index[r] = acc;
    }
    return index;
}

IndexSeries build_index_series(const IndicatorPanel& panel, const IndexRules& rules) {
    const PolarityMap polarity = polarity_map(panel.spec());

    DataMatrix scoped[kScopeCount];
    for (std::size_t s = 0; s < kScopeCount; ++s)
        scoped[s] = slice_matrix(panel, scope_filter(static_cast<Scope>(s)), rules.years, rules.missing);

    // Keep the (region, year) keys every scope retained so each output row
    // carries all three indices.
    std::map<std::pair<std::string, int>, int> key_hits;
    for (const auto& m : scoped)
        for (const auto& key : m.rows) ++key_hits[{key.region_code, key.year}];

    IndexSeries series;
    std::vector<std::vector<std::size_t>> keep(kScopeCount);
    for (std::size_t s = 0; s < kScopeCount; ++s) {
        for (std::size_t r = 0; r < scoped[s].rows.size(); ++r) {
            const auto& key = scoped[s].rows[r];
            if (key_hits[{key.region_code, key.year}] == static_cast<int>(kScopeCount))
                keep[s].push_back(r);
        }
    }
    for (std::size_t s = 1; s < kScopeCount; ++s)
        if (keep[s].size() != keep[0].size())
            raise("NumericalFailure", "scope row sets diverge"); // unreachable: keys are region-major in every scope

    std::unordered_map<std::string, std::string> region_name;
    for (const auto& r : panel.regions()) region_name[r.code] = r.name;

    for (std::size_t idx : keep[0]) {
        series.rows.push_back(scoped[0].rows[idx]);
        series.region_names.push_back(region_name[scoped[0].rows[idx].region_code]);
    }

    for (std::size_t s = 0; s < kScopeCount; ++s) {
        const NormalizedMatrix norm = normalize(scoped[s], polarity, rules.norm);
        PcaModel model = pca_fit(norm);
        model.retained = retain_components(model, rules.retention);
        const std::vector<double> all = composite_index(model, norm.cells, norm.row_count());
        auto& values = series.values[s];
        values.reserve(keep[s].size());
        for (std::size_t idx : keep[s]) values.push_back(all[idx]);
        series.models[s] = std::move(model);
    }
    return series;
}

} // namespace regidx
