#include "regidx/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "regidx/error.hpp"
#include "regidx/pca.hpp"
#include "regidx/rng.hpp"

namespace regidx {

namespace {

double sq_dist(const double* a, const double* b, std::size_t dim) {
    double s = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
        const double diff = a[d] - b[d];
        s += diff * diff;
    }
    return s;
}

void check_finite(const PointSet& points) {
    for (double x : points.xs)
        if (!std::isfinite(x)) raise("NonFiniteInput", "point set contains a non-finite coordinate");
}

std::size_t distinct_count(const PointSet& points) {
    std::set<std::vector<double>> seen;
    const std::size_t n = points.size();
    for (std::size_t i = 0; i < n; ++i)
        seen.emplace(points.point(i), points.point(i) + points.dim);
    return seen.size();
}

// Nearest centroid, ties to the lowest id.
int nearest(const double* x, const std::vector<double>& centroids, std::size_t k, std::size_t dim) {
    int best = 0;
    double best_d = sq_dist(x, centroids.data(), dim);
    for (std::size_t c = 1; c < k; ++c) {
        const double d = sq_dist(x, centroids.data() + c * dim, dim);
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(c);
        }
    }
    return best;
}

double total_wcss(const PointSet& points, const std::vector<double>& centroids,
                  const std::vector<int>& assignments) {
    double s = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i)
        s += sq_dist(points.point(i), centroids.data() + assignments[i] * points.dim, points.dim);
    return s;
}

} // namespace

PointSet PointSet::from_values(const std::vector<double>& values) {
    return PointSet(1, values);
}

std::vector<double> init_centroids(const PointSet& points, std::size_t k,
                                   std::uint64_t seed, InitMethod method) {
    check_finite(points);
    const std::size_t n = points.size();
    const std::size_t dim = points.dim;
    if (k == 0) raise("TooManyClusters", "k must be at least 1");
    if (k > distinct_count(points))
        raise("TooManyClusters", "k = " + std::to_string(k) + " exceeds the " +
                                     std::to_string(distinct_count(points)) + " distinct points");

    Rng rng(seed);
    std::vector<double> centroids(k * dim);

    if (method == InitMethod::KMeansPlusPlus) {
        std::vector<double> d2(n);
        const std::size_t first = rng.next_index(n);
        std::copy_n(points.point(first), dim, centroids.begin());
        for (std::size_t i = 0; i < n; ++i)
            d2[i] = sq_dist(points.point(i), centroids.data(), dim);

        for (std::size_t c = 1; c < k; ++c) {
            double total = std::accumulate(d2.begin(), d2.end(), 0.0);
            std::size_t chosen = n;
            if (total > 0.0) {
                const double u = rng.next_double() * total;
                double acc = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    acc += d2[i];
                    if (u < acc) {
                        chosen = i;
                        break;
                    }
                }
            }
            if (chosen == n) {
                // weights exhausted by rounding (or all zero): first point
                // distinct from every chosen centroid
                for (std::size_t i = 0; i < n && chosen == n; ++i)
                    if (d2[i] > 0.0) chosen = i;
            }
            std::copy_n(points.point(chosen), dim, centroids.begin() + c * dim);
            for (std::size_t i = 0; i < n; ++i)
                d2[i] = std::min(d2[i], sq_dist(points.point(i), centroids.data() + c * dim, dim));
        }
        return centroids;
    }

    // RandomPartition: random labels, centroids are partition means; redraw
    // until every cluster is non-empty.
    std::vector<int> labels(n);
    for (std::size_t attempt = 0; attempt < 1000; ++attempt) {
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            labels[i] = static_cast<int>(rng.next_index(k));
            ++counts[labels[i]];
        }
        if (std::find(counts.begin(), counts.end(), std::size_t{0}) != counts.end()) continue;
        std::fill(centroids.begin(), centroids.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t d = 0; d < dim; ++d)
                centroids[labels[i] * dim + d] += points.point(i)[d];
        for (std::size_t c = 0; c < k; ++c)
            for (std::size_t d = 0; d < dim; ++d)
                centroids[c * dim + d] /= static_cast<double>(counts[c]);
        return centroids;
    }
    // pathological draw streak: fall back to k distinct points
    std::set<std::vector<double>> seen;
    std::size_t c = 0;
    for (std::size_t i = 0; i < n && c < k; ++i) {
        std::vector<double> pt(points.point(i), points.point(i) + dim);
        if (seen.insert(pt).second) {
            std::copy(pt.begin(), pt.end(), centroids.begin() + c * dim);
            ++c;
        }
    }
    return centroids;
}

ClusterResult kmeans_lloyd(const PointSet& points, std::vector<double> centroids,
                           std::size_t max_iter) {
    max_iter = std::max<std::size_t>(max_iter, 1);
    const std::size_t n = points.size();
    const std::size_t dim = points.dim;
    const std::size_t k = centroids.size() / dim;

    ClusterResult result;
    result.k = k;
    result.dim = dim;
    result.assignments.assign(n, -1);

    std::vector<int> previous(n, -1);
    std::vector<std::size_t> counts(k);

    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        for (std::size_t i = 0; i < n; ++i)
            result.assignments[i] = nearest(points.point(i), centroids, k, dim);

        if (result.assignments == previous) break;
        previous = result.assignments;
        ++result.iterations;

        // repair empty clusters with the point farthest from its centroid
        std::fill(counts.begin(), counts.end(), 0);
        for (int a : result.assignments) ++counts[a];
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] > 0) continue;
            double worst = -1.0;
            std::size_t worst_i = n;
            for (std::size_t i = 0; i < n; ++i) {
                if (counts[result.assignments[i]] <= 1) continue;
                const double d = sq_dist(points.point(i),
                                         centroids.data() + result.assignments[i] * dim, dim);
                if (d > worst) {
                    worst = d;
                    worst_i = i;
                }
            }
            if (worst_i == n) raise("TooManyClusters", "cannot repair empty cluster");
            --counts[result.assignments[worst_i]];
            result.assignments[worst_i] = static_cast<int>(c);
            counts[c] = 1;
            previous = result.assignments; // repaired assignment is the new reference
        }

        std::fill(centroids.begin(), centroids.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t d = 0; d < dim; ++d)
                centroids[result.assignments[i] * dim + d] += points.point(i)[d];
        for (std::size_t c = 0; c < k; ++c)
            for (std::size_t d = 0; d < dim; ++d)
                centroids[c * dim + d] /= static_cast<double>(counts[c]);

        result.wcss_trace.push_back(total_wcss(points, centroids, result.assignments));
    }

    result.centroids = std::move(centroids);
    result.wcss = total_wcss(points, result.centroids, result.assignments);
    return result;
}

ClusterResult kmeans_run(const PointSet& points, std::size_t k, std::uint64_t seed,
                         std::size_t restarts, std::size_t max_iter) {
    check_finite(points);
    if (k == 0) raise("TooManyClusters", "k must be at least 1");
    if (restarts == 0) raise("BadConfig", "restarts must be at least 1");
    if (k > distinct_count(points))
        raise("TooManyClusters", "k = " + std::to_string(k) + " exceeds the " +
                                     std::to_string(distinct_count(points)) + " distinct points");

    ClusterResult best;
    for (std::size_t r = 0; r < restarts; ++r) {
        auto centroids = init_centroids(points, k, Rng::mix(seed, r), InitMethod::KMeansPlusPlus);
        ClusterResult candidate = kmeans_lloyd(points, std::move(centroids), max_iter);
        if (r == 0 || candidate.wcss < best.wcss) best = std::move(candidate);
    }
    best.seed = seed;
    best.restarts_used = restarts;
    return best;
}

ClusterResult kmeans_1d_optimal(const std::vector<double>& values, std::size_t k) {
    const PointSet points = PointSet::from_values(values);
    check_finite(points);
    const std::size_t n = values.size();
    if (k == 0) raise("TooManyClusters", "k must be at least 1");
    std::set<double> distinct(values.begin(), values.end());
    if (k > distinct.size())
        raise("TooManyClusters", "k = " + std::to_string(k) + " exceeds the " +
                                     std::to_string(distinct.size()) + " distinct values");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    // center for numerical stability; WCSS is translation invariant
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = values[order[i]] - mean;

    std::vector<double> ps(n + 1, 0.0), ps2(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        ps[i + 1] = ps[i] + x[i];
        ps2[i + 1] = ps2[i] + x[i] * x[i];
    }
    const auto segment_cost = [&](std::size_t a, std::size_t b) { // sorted range [a, b)
        const double s = ps[b] - ps[a];
        const double s2 = ps2[b] - ps2[a];
        const double len = static_cast<double>(b - a);
        return std::max(0.0, s2 - s * s / len);
    };

    // D[j][i]: optimal cost of the first i sorted values in j clusters
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> cost(k + 1, std::vector<double>(n + 1, inf));
    std::vector<std::vector<std::size_t>> split(k + 1, std::vector<std::size_t>(n + 1, 0));
    cost[0][0] = 0.0;
    for (std::size_t j = 1; j <= k; ++j) {
        for (std::size_t i = j; i + (k - j) <= n; ++i) {
            for (std::size_t m = j - 1; m < i; ++m) {
                if (cost[j - 1][m] == inf) continue;
                const double c = cost[j - 1][m] + segment_cost(m, i);
                if (c < cost[j][i]) {
                    cost[j][i] = c;
                    split[j][i] = m;
                }
            }
        }
    }

    std::vector<std::size_t> bounds(k + 1, 0);
    bounds[k] = n;
    for (std::size_t j = k; j > 0; --j) bounds[j - 1] = split[j][bounds[j]];

    ClusterResult result;
    result.k = k;
    result.dim = 1;
    result.assignments.assign(n, 0);
    result.centroids.assign(k, 0.0);
    for (std::size_t j = 0; j < k; ++j) {
        const std::size_t a = bounds[j], b = bounds[j + 1];
        for (std::size_t i = a; i < b; ++i) result.assignments[order[i]] = static_cast<int>(j);
        result.centroids[j] = (ps[b] - ps[a]) / static_cast<double>(b - a) + mean;
    }
    result.wcss = cost[k][n];
    return result;
}

ElbowResult elbow_detect(const std::vector<double>& wcss) {
    const std::size_t len = wcss.size();
    if (len < 3) raise("CurveTooShort", "elbow detection needs at least 3 k values, got " + std::to_string(len));
    for (std::size_t i = 1; i < len; ++i)
        if (wcss[i] > wcss[i - 1] + 1e-9)
            raise("NonMonotoneCurve", "wcss increases from k = " + std::to_string(i) + " to k = " +
                                          std::to_string(i + 1));

    ElbowResult result;
    // second difference at k = i+1 (valid for interior k: 2..len-1)
    for (std::size_t i = 1; i + 1 < len; ++i)
        result.strengths.push_back((wcss[i - 1] - wcss[i]) - (wcss[i] - wcss[i + 1]));

    std::size_t best = 0;
    for (std::size_t i = 1; i < result.strengths.size(); ++i)
        if (result.strengths[i] > result.strengths[best]) best = i;

    if (result.strengths[best] <= 0.0) {
        // flat or convex-free curve: no bend to report
        result.ambiguous = true;
        return result;
    }
    result.k = best + 2;
    result.candidates.push_back(*result.k);

    std::size_t runner = result.strengths.size();
    for (std::size_t i = 0; i < result.strengths.size(); ++i) {
        if (i == best) continue;
        if (runner == result.strengths.size() || result.strengths[i] > result.strengths[runner])
            runner = i;
    }
    if (runner != result.strengths.size() &&
        result.strengths[runner] >= 0.5 * result.strengths[best]) {
        result.ambiguous = true;
        result.candidates.push_back(runner + 2);
    }
    return result;
}

ValidityIndices validity_indices(const PointSet& points, const std::vector<int>& assignments) {
    check_finite(points);
    const std::size_t n = points.size();
    const std::size_t dim = points.dim;
    if (assignments.size() != n) raise("DimensionMismatch", "one assignment per point required");

    int k_max = -1;
    for (int a : assignments) {
        if (a < 0) raise("InvalidK", "negative cluster id");
        k_max = std::max(k_max, a);
    }
    const std::size_t k = static_cast<std::size_t>(k_max + 1);
    if (k < 2) raise("InvalidK", "validity indices need k >= 2");

    std::vector<std::size_t> counts(k, 0);
    for (int a : assignments) ++counts[a];
    for (std::size_t c = 0; c < k; ++c)
        if (counts[c] == 0) raise("DegenerateClustering", "cluster " + std::to_string(c) + " is empty");
    if (n < k + 1)
        raise("DegenerateClustering", "calinski-harabasz needs n >= k + 1");

    std::vector<double> centroids(k * dim, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t d = 0; d < dim; ++d)
            centroids[assignments[i] * dim + d] += points.point(i)[d];
    for (std::size_t c = 0; c < k; ++c)
        for (std::size_t d = 0; d < dim; ++d)
            centroids[c * dim + d] /= static_cast<double>(counts[c]);

    std::vector<double> grand(dim, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t d = 0; d < dim; ++d) grand[d] += points.point(i)[d];
    for (std::size_t d = 0; d < dim; ++d) grand[d] /= static_cast<double>(n);

    ValidityIndices out;

    // silhouette (mean over points; singleton-cluster members score 0)
    double silhouette_sum = 0.0;
    std::vector<double> mean_dist(k);
    for (std::size_t i = 0; i < n; ++i) {
        std::fill(mean_dist.begin(), mean_dist.end(), 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            mean_dist[assignments[j]] += std::sqrt(sq_dist(points.point(i), points.point(j), dim));
        }
        const int own = assignments[i];
        if (counts[own] == 1) continue; // s(i) = 0
        const double a = mean_dist[own] / static_cast<double>(counts[own] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < k; ++c) {
            if (static_cast<int>(c) == own) continue;
            b = std::min(b, mean_dist[c] / static_cast<double>(counts[c]));
        }
        const double denom = std::max(a, b);
        silhouette_sum += denom > 0.0 ? (b - a) / denom : 0.0;
    }
    out.silhouette = silhouette_sum / static_cast<double>(n);

    // Calinski-Harabasz
    double between = 0.0;
    for (std::size_t c = 0; c < k; ++c)
        between += static_cast<double>(counts[c]) *
                   sq_dist(centroids.data() + c * dim, grand.data(), dim);
    double within = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        within += sq_dist(points.point(i), centroids.data() + assignments[i] * dim, dim);
    if (within == 0.0) {
        out.calinski_harabasz = between == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    } else {
        out.calinski_harabasz = (between / static_cast<double>(k - 1)) /
                                (within / static_cast<double>(n - k));
    }

    // Davies-Bouldin with mean-distance scatters
    std::vector<double> scatter(k, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        scatter[assignments[i]] +=
            std::sqrt(sq_dist(points.point(i), centroids.data() + assignments[i] * dim, dim));
    for (std::size_t c = 0; c < k; ++c) scatter[c] /= static_cast<double>(counts[c]);

    double db = 0.0;
    for (std::size_t a = 0; a < k; ++a) {
        double worst = 0.0;
        for (std::size_t b = 0; b < k; ++b) {
            if (a == b) continue;
            const double d = std::sqrt(sq_dist(centroids.data() + a * dim, centroids.data() + b * dim, dim));
            const double mix = scatter[a] + scatter[b];
            if (d == 0.0) {
                if (mix > 0.0)
                    raise("DegenerateClustering", "coincident centroids with non-zero scatter");
                continue; // 0/0: identical point clusters contribute nothing
            }
            worst = std::max(worst, mix / d);
        }
        db += worst;
    }
    out.davies_bouldin = db / static_cast<double>(k);
    return out;
}

namespace {

struct ActiveCluster {
    std::size_t id = 0;     // node id (leaves 0..n-1, merges n..2n-2)
    std::size_t size = 0;
};

} // namespace

Dendrogram agglomerate(const PointSet& points, Linkage linkage, std::vector<std::string> labels) {
    check_finite(points);
    const std::size_t n = points.size();
    if (n < 2) raise("TooFewRows", "agglomeration needs at least 2 points");

    Dendrogram tree;
    tree.leaf_count = n;
    tree.linkage = linkage;
    if (labels.empty()) {
        for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
    }
    tree.labels = std::move(labels);

    // Distances are kept squared for Ward (Lance-Williams operates on d^2)
    // and plain Euclidean for average/complete.
    const bool squared = linkage == Linkage::Ward;
    std::vector<ActiveCluster> active(n);
    std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) active[i] = {i, 1};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d2 = sq_dist(points.point(i), points.point(j), points.dim);
            dist[i][j] = dist[j][i] = squared ? d2 : std::sqrt(d2);
        }

    for (std::size_t step = 0; step < n - 1; ++step) {
        std::size_t bi = 0, bj = 1;
        double best = std::numeric_limits<double>::infinity();
        auto id_pair = [&](std::size_t i, std::size_t j) {
            return std::minmax(active[i].id, active[j].id);
        };
        for (std::size_t i = 0; i < active.size(); ++i) {
            for (std::size_t j = i + 1; j < active.size(); ++j) {
                const double d = dist[i][j];
                if (d < best || (d == best && id_pair(i, j) < id_pair(bi, bj))) {
                    best = d;
                    bi = i;
                    bj = j;
                }
            }
        }

        const ActiveCluster a = active[bi];
        const ActiveCluster b = active[bj];
        Merge merge;
        merge.left = std::min(a.id, b.id);
        merge.right = std::max(a.id, b.id);
        merge.height = squared ? std::sqrt(std::max(0.0, best)) : best;
        merge.size = a.size + b.size;
        tree.merges.push_back(merge);

        // Lance-Williams update into slot bi, drop slot bj
        const double na = static_cast<double>(a.size);
        const double nb = static_cast<double>(b.size);
        for (std::size_t t = 0; t < active.size(); ++t) {
            if (t == bi || t == bj) continue;
            const double dat = dist[bi][t];
            const double dbt = dist[bj][t];
            double merged = 0.0;
            switch (linkage) {
                case Linkage::Ward: {
                    const double nt = static_cast<double>(active[t].size);
                    merged = ((na + nt) * dat + (nb + nt) * dbt - nt * best) / (na + nb + nt);
                    break;
                }
                case Linkage::Average:
                    merged = (na * dat + nb * dbt) / (na + nb);
                    break;
                case Linkage::Complete:
                    merged = std::max(dat, dbt);
                    break;
            }
            dist[bi][t] = dist[t][bi] = merged;
        }
        active[bi] = {n + step, a.size + b.size};

        const std::size_t last = active.size() - 1;
        if (bj != last) {
            active[bj] = active[last];
            for (std::size_t t = 0; t < active.size(); ++t) {
                dist[bj][t] = dist[last][t];
                dist[t][bj] = dist[t][last];
            }
            dist[bj][bj] = 0.0;
        }
        active.pop_back();
        for (auto& row : dist) row.pop_back();
        dist.pop_back();
    }
    return tree;
}

std::vector<std::size_t> Dendrogram::leaf_order() const {
    if (leaf_count == 0) return {};
    std::vector<std::size_t> order;
    order.reserve(leaf_count);
    std::vector<std::size_t> stack = {leaf_count + merges.size() - 1};
    if (merges.empty()) return {0};
    while (!stack.empty()) {
        const std::size_t node = stack.back();
        stack.pop_back();
        if (node < leaf_count) {
            order.push_back(node);
            continue;
        }
        const Merge& m = merges[node - leaf_count];
        stack.push_back(m.right);
        stack.push_back(m.left);
    }
    return order;
}

RatedClusters label_clusters(const ClusterResult& result, const PointSet& points) {
    const std::size_t k = result.k;
    RatedClusters rated;
    rated.result = result;

    // 1-D: order centroids by value; multi-D: by projection onto the data's
    // first principal axis (oriented toward non-negative loading sums).
    std::vector<double> magnitude(k, 0.0);
    if (result.dim == 1) {
        for (std::size_t c = 0; c < k; ++c) magnitude[c] = result.centroids[c];
    } else {
        std::vector<std::string> ids(result.dim);
        for (std::size_t d = 0; d < result.dim; ++d) ids[d] = "x" + std::to_string(d);
        const PcaModel model = pca_fit_raw(points.xs, points.size(), ids);
        for (std::size_t c = 0; c < k; ++c) {
            const auto scores = component_scores(model, result.centroid(c));
            magnitude[c] = scores[0];
        }
    }

    std::vector<std::size_t> by_rank(k);
    std::iota(by_rank.begin(), by_rank.end(), 0);
    std::stable_sort(by_rank.begin(), by_rank.end(), [&](std::size_t a, std::size_t b) {
        if (magnitude[a] != magnitude[b]) return magnitude[a] < magnitude[b];
        return a < b; // tie: lower cluster id takes the lower rating
    });

    static const char* kFourRatings[] = {"Low", "Medium", "High", "Very High"};
    rated.labels.resize(k);
    rated.order.resize(k);
    for (std::size_t rank = 0; rank < k; ++rank) {
        const std::size_t cluster = by_rank[rank];
        rated.order[cluster] = rank;
        rated.labels[cluster] = k == 4 ? kFourRatings[rank] : "C" + std::to_string(rank + 1);
    }
    return rated;
}

KSelectionReport select_k(const PointSet& points, std::size_t k_max,
                          std::uint64_t seed, std::size_t restarts) {
    check_finite(points);
    const std::size_t distinct = distinct_count(points);
    if (k_max < 3) raise("CurveTooShort", "k_max must be at least 3 for elbow detection");
    if (k_max > distinct)
        raise("TooManyClusters", "k_max = " + std::to_string(k_max) + " exceeds the " +
                                     std::to_string(distinct) + " distinct points");

    KSelectionReport report;
    report.k_max = k_max;

    ClusterResult previous;
    for (std::size_t k = 1; k <= k_max; ++k) {
        ClusterResult best = kmeans_run(points, k, Rng::mix(seed, 1000 + k), restarts);
        if (k > 1) {
            // warm start: previous best plus the point farthest from its
            // centroid; guarantees wcss(k) <= wcss(k-1)
            std::vector<double> warm(previous.centroids);
            double worst = -1.0;
            std::size_t worst_i = 0;
            for (std::size_t i = 0; i < points.size(); ++i) {
                const double d = sq_dist(points.point(i),
                                         previous.centroids.data() + previous.assignments[i] * points.dim,
                                         points.dim);
                if (d > worst) {
                    worst = d;
                    worst_i = i;
                }
            }
            warm.insert(warm.end(), points.point(worst_i), points.point(worst_i) + points.dim);
            ClusterResult warmed = kmeans_lloyd(points, std::move(warm), 300);
            if (warmed.wcss < best.wcss) {
                warmed.seed = seed;
                warmed.restarts_used = restarts;
                best = std::move(warmed);
            }
        }
        report.wcss.push_back(best.wcss);
        if (k >= 2) report.validity.push_back(validity_indices(points, best.assignments));
        previous = std::move(best);
    }
    report.elbow = elbow_detect(report.wcss);
    return report;
}

} // namespace regidx
