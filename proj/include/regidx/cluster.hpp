#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace regidx {

// Flat row-major point storage; dim >= 1.
struct PointSet {
    std::size_t dim = 1;
    std::vector<double> xs;

    PointSet() = default;
    PointSet(std::size_t dim_, std::vector<double> xs_) : dim(dim_), xs(std::move(xs_)) {}
    static PointSet from_values(const std::vector<double>& values);

    std::size_t size() const { return dim == 0 ? 0 : xs.size() / dim; }
    const double* point(std::size_t i) const { return xs.data() + i * dim; }
};

struct ClusterResult {
    std::size_t k = 0;
    std::vector<int> assignments;    // per row, in [0, k)
    std::vector<double> centroids;   // row-major k x dim
    std::size_t dim = 1;
    double wcss = 0.0;
    std::size_t iterations = 0;
    std::uint64_t seed = 0;
    std::size_t restarts_used = 0;
    std::vector<double> wcss_trace;  // per Lloyd iteration of the winning restart

    const double* centroid(std::size_t c) const { return centroids.data() + c * dim; }
};

enum class InitMethod { KMeansPlusPlus, RandomPartition };

std::vector<double> init_centroids(const PointSet& points, std::size_t k,
                                   std::uint64_t seed, InitMethod method);

// Lloyd iterations until the assignments are fixed (or max_iter). Among the
// restarts the minimum-WCSS result wins, ties resolved to the lowest restart
// index. Empty clusters are repaired by reseeding with the point farthest
// from its own centroid.
ClusterResult kmeans_run(const PointSet& points, std::size_t k, std::uint64_t seed,
                         std::size_t restarts = 100, std::size_t max_iter = 300);

// Single Lloyd run from explicit starting centroids (no restarts).
ClusterResult kmeans_lloyd(const PointSet& points, std::vector<double> centroids,
                           std::size_t max_iter = 300);

// Globally optimal univariate k-means via dynamic programming over
// contiguous partitions of the sorted values. Cluster ids are in ascending
// value order; assignments refer to the original input order.
ClusterResult kmeans_1d_optimal(const std::vector<double>& values, std::size_t k);

struct ElbowResult {
    std::optional<std::size_t> k;        // strongest elbow, if any bend exists
    bool ambiguous = false;              // runner-up strength >= 50% of winner
    std::vector<std::size_t> candidates; // winner first, then runner-up when ambiguous
    std::vector<double> strengths;       // second difference per k in [2, k_max-1]
};

// wcss[i] is the value for k = i+1; the curve must be non-increasing within
// 1e-9. The elbow is the k maximizing the WCSS second difference.
ElbowResult elbow_detect(const std::vector<double>& wcss);

struct ValidityIndices {
    double silhouette = 0.0;
    double calinski_harabasz = 0.0;
    double davies_bouldin = 0.0;
};

ValidityIndices validity_indices(const PointSet& points, const std::vector<int>& assignments);

enum class Linkage { Ward, Average, Complete };

struct Merge {
    std::size_t left = 0;   // node ids: leaves 0..n-1, merge t creates node n+t
    std::size_t right = 0;  // left < right
    double height = 0.0;
    std::size_t size = 0;   // leaves under the new node
};

struct Dendrogram {
    std::size_t leaf_count = 0;
    std::vector<std::string> labels; // per leaf
    std::vector<Merge> merges;       // exactly leaf_count - 1
    Linkage linkage = Linkage::Ward;

    // Leaf order for crossing-free drawing.
    std::vector<std::size_t> leaf_order() const;
};

// Lance-Williams agglomeration. Ward heights follow the
// sqrt(2 * SSE-increase) convention, so singleton merges sit at their
// Euclidean distance. Ties prefer the lexicographically smallest id pair.
Dendrogram agglomerate(const PointSet& points, Linkage linkage,
                       std::vector<std::string> labels = {});

struct RatedClusters {
    ClusterResult result;
    std::vector<std::string> labels; // per cluster id
    std::vector<std::size_t> order;  // rank of each cluster id, 0 = lowest rating
};

// Ratings in ascending centroid order; k = 4 uses Low / Medium / High /
// Very High, any other k uses C1..Ck. Multi-dimensional centroids are
// ordered by their projection onto the data's first principal axis.
RatedClusters label_clusters(const ClusterResult& result, const PointSet& points);

struct KSelectionReport {
    std::size_t k_max = 0;
    std::vector<double> wcss;                   // k = 1..k_max
    std::vector<ValidityIndices> validity;      // k = 2..k_max
    ElbowResult elbow;
};

// WCSS curve over k = 1..k_max. Each k's restart pool also contains the
// previous best solution extended by the farthest point, which keeps the
// curve non-increasing regardless of restart luck.
KSelectionReport select_k(const PointSet& points, std::size_t k_max,
                          std::uint64_t seed, std::size_t restarts);

} // namespace regidx
