#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "fixture_indices.hpp"
#include "oracles.hpp"
#include "regidx/cluster.hpp"
#include "regidx/error.hpp"
#include "synth.hpp"

using namespace regidx;

namespace {

std::set<std::vector<double>> centroid_set(const std::vector<double>& centroids, std::size_t dim) {
    std::set<std::vector<double>> out;
    for (std::size_t c = 0; c < centroids.size() / dim; ++c)
        out.emplace(centroids.begin() + static_cast<std::ptrdiff_t>(c * dim),
                    centroids.begin() + static_cast<std::ptrdiff_t>((c + 1) * dim));
    return out;
}

void check_result_invariants(const PointSet& points, const ClusterResult& r) {
    REQUIRE(r.assignments.size() == points.size());
    std::vector<std::size_t> counts(r.k, 0);
    for (int a : r.assignments) {
        REQUIRE(a >= 0);
        REQUIRE(static_cast<std::size_t>(a) < r.k);
        ++counts[a];
    }
    for (std::size_t c = 0; c < r.k; ++c) REQUIRE(counts[c] > 0);

    // centroids are the means of their members
    std::vector<double> mean(r.k * points.dim, 0.0);
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t d = 0; d < points.dim; ++d)
            mean[r.assignments[i] * points.dim + d] += points.point(i)[d];
    for (std::size_t c = 0; c < r.k; ++c)
        for (std::size_t d = 0; d < points.dim; ++d) {
            mean[c * points.dim + d] /= static_cast<double>(counts[c]);
            REQUIRE(std::abs(mean[c * points.dim + d] - r.centroids[c * points.dim + d]) < 1e-9);
        }

    // stored WCSS equals the recomputed sum
    double wcss = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t d = 0; d < points.dim; ++d) {
            const double diff = points.point(i)[d] - r.centroids[r.assignments[i] * points.dim + d];
            wcss += diff * diff;
        }
    REQUIRE(std::abs(wcss - r.wcss) < 1e-9);
}

} // namespace

TEST_CASE("init_centroids: determinism, exhaustion, limits") {
    const auto points = synth::blobs(42, 30, 3, 8.0);
    const auto a = init_centroids(points, 4, 7, InitMethod::KMeansPlusPlus);
    const auto b = init_centroids(points, 4, 7, InitMethod::KMeansPlusPlus);
    CHECK(a == b);
    const auto c = init_centroids(points, 4, 8, InitMethod::KMeansPlusPlus);
    CHECK(a != c); // different seed, different draw (overwhelmingly)

    const auto rp1 = init_centroids(points, 4, 7, InitMethod::RandomPartition);
    const auto rp2 = init_centroids(points, 4, 7, InitMethod::RandomPartition);
    CHECK(rp1 == rp2);

    // k = n distinct points: the centroid set is exactly the point set
    PointSet five(1, {3, 1, 4, 1.5, 9});
    const auto all = init_centroids(five, 5, 1, InitMethod::KMeansPlusPlus);
    CHECK(centroid_set(all, 1) == centroid_set(five.xs, 1));

    PointSet two_distinct(1, {1, 1, 2, 2});
    CHECK_THROWS_WITH_AS(init_centroids(two_distinct, 3, 1, InitMethod::KMeansPlusPlus),
                         doctest::Contains("TooManyClusters"), Error);
    CHECK_THROWS_AS(init_centroids(PointSet(1, {1.0, std::nan("")}), 1, 1,
                                   InitMethod::KMeansPlusPlus),
                    Error);
}

TEST_CASE("kmeans_run: fixed examples") {
    const ClusterResult one = kmeans_run(PointSet(1, {2, 4, 6}), 1, 1, 5);
    CHECK(one.centroids[0] == doctest::Approx(4.0));
    CHECK(one.wcss == doctest::Approx(8.0));

    const ClusterResult each = kmeans_run(PointSet(1, {3, 1, 4, 1.5}), 4, 1, 5);
    CHECK(each.wcss == doctest::Approx(0.0));
    std::set<int> ids(each.assignments.begin(), each.assignments.end());
    CHECK(ids.size() == 4);

    const ClusterResult pairs = kmeans_run(PointSet(1, {1, 2, 10, 11}), 2, 1, 20);
    CHECK(pairs.wcss == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pairs.assignments[0] == pairs.assignments[1]);
    CHECK(pairs.assignments[2] == pairs.assignments[3]);
    CHECK(pairs.assignments[0] != pairs.assignments[2]);
    CHECK(pairs.wcss == doctest::Approx(oracle::min_wcss_exhaustive({1, 2, 10, 11}, 1, 2)));
}

TEST_CASE("kmeans_run: monotone trace, termination, invariants on random trials") {
    synth::Gauss g(606);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t dim = 1 + g.index(4);
        const std::size_t n = 20 + g.index(60);
        const std::size_t k = 2 + g.index(5);
        std::vector<double> xs(n * dim);
        for (auto& x : xs) x = 10.0 * g.normal();
        const PointSet points(dim, std::move(xs));
        const ClusterResult r = kmeans_run(points, k, 1000 + static_cast<std::uint64_t>(trial), 3);
        check_result_invariants(points, r);
        CHECK(r.iterations < 300);
        for (std::size_t i = 1; i < r.wcss_trace.size(); ++i)
            REQUIRE(r.wcss_trace[i] <= r.wcss_trace[i - 1] + 1e-9);
    }
}

TEST_CASE("kmeans_run with restarts matches the exhaustive minimum on small sets") {
    synth::Gauss g(909);
    for (int trial = 0; trial < 15; ++trial) {
        const std::size_t n = 6 + g.index(4); // up to 9 points
        const std::size_t k = 2 + g.index(2); // 2 or 3
        std::vector<double> xs(n * 2);
        for (auto& x : xs) x = 5.0 * g.normal();
        const PointSet points(2, std::move(xs));
        const ClusterResult r = kmeans_run(points, k, trial, 60);
        const double best = oracle::min_wcss_exhaustive(points.xs, 2, k);
        REQUIRE(r.wcss == doctest::Approx(best).epsilon(1e-9));
    }
}

TEST_CASE("kmeans_1d_optimal: fixtures and the sorted-contiguity property") {
    const auto split = kmeans_1d_optimal({1, 2, 10, 11}, 2);
    CHECK(split.wcss == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(split.assignments == std::vector<int>{0, 0, 1, 1});
    CHECK(split.centroids[0] == doctest::Approx(1.5));
    CHECK(split.centroids[1] == doctest::Approx(10.5));

    CHECK(kmeans_1d_optimal({4, 2, 7, 5}, 4).wcss == doctest::Approx(0.0));
    CHECK_THROWS_AS(kmeans_1d_optimal({1, 1, 2}, 3), Error);

    synth::Gauss g(11);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<double> values(10 + g.index(70));
        for (auto& v : values) v = 4.0 * g.normal();
        const std::size_t k = 2 + g.index(5);
        const auto r = kmeans_1d_optimal(values, k);
        check_result_invariants(PointSet::from_values(values), r);

        // optimal 1-D clusters are contiguous in sorted order
        std::vector<std::size_t> order(values.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        for (std::size_t i = 1; i < order.size(); ++i)
            REQUIRE(r.assignments[order[i]] >= r.assignments[order[i - 1]]);

        // never beaten by restarted Lloyd, and matched by it within 1e-9
        const auto lloyd = kmeans_run(PointSet::from_values(values), k, 5, 100);
        REQUIRE(lloyd.wcss >= r.wcss - 1e-9);
        REQUIRE(lloyd.wcss <= r.wcss + 1e-9);
    }
}

TEST_CASE("kmeans_1d_optimal: published 2020 socioeconomic column, k = 4") {
    const auto values = fixture::column(fixture::kSocio2020);
    const auto r = kmeans_1d_optimal(values, 4);
    const int top = r.assignments[fixture::index_of("34")]; // highest cluster id = highest values
    CHECK(top == 3);
    CHECK(r.assignments[fixture::index_of("06")] == top);
    CHECK(r.assignments[fixture::index_of("35")] == top);
    // exactly these three form the very-high cluster in 2020
    std::size_t members = 0;
    for (int a : r.assignments)
        if (a == top) ++members;
    CHECK(members == 3);
}

TEST_CASE("elbow_detect: worked example, flat curve, error paths") {
    const auto sharp = elbow_detect({100, 40, 20, 15, 13, 12});
    REQUIRE(sharp.k.has_value());
    CHECK(*sharp.k == 2);
    CHECK_FALSE(sharp.ambiguous);
    REQUIRE(sharp.strengths.size() == 4);
    CHECK(sharp.strengths[0] == doctest::Approx(40.0));
    CHECK(sharp.strengths[1] == doctest::Approx(15.0));
    CHECK(sharp.strengths[2] == doctest::Approx(3.0));
    CHECK(sharp.strengths[3] == doctest::Approx(1.0));

    const auto flat = elbow_detect({100, 80, 60, 40});
    CHECK_FALSE(flat.k.has_value());
    CHECK(flat.ambiguous);

    const auto close_call = elbow_detect({100, 50, 20, 4, 2, 1}); // strengths 20, 14, 1, 1
    REQUIRE(close_call.k.has_value());
    CHECK(*close_call.k == 2);
    CHECK(close_call.ambiguous);
    REQUIRE(close_call.candidates.size() == 2);
    CHECK(close_call.candidates[1] == 3);

    CHECK_THROWS_WITH_AS(elbow_detect({3, 2}), doctest::Contains("CurveTooShort"), Error);
    CHECK_THROWS_WITH_AS(elbow_detect({3, 2, 2.5, 1}), doctest::Contains("NonMonotoneCurve"), Error);
}

TEST_CASE("elbow_detect: planted blobs put the elbow at the planted k") {
    std::size_t hits = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto points = synth::blobs(seed, 81, 4, 10.0);
        const auto report = select_k(points, 8, seed, 10);
        if (report.elbow.k && *report.elbow.k == 4) ++hits;
        for (std::size_t i = 1; i < report.wcss.size(); ++i)
            REQUIRE(report.wcss[i] <= report.wcss[i - 1] + 1e-9);
    }
    CHECK(hits >= 9);
}

TEST_CASE("validity_indices: hand-derived fixture and edge cases") {
    const PointSet points(1, {0.0, 0.1, 10.0, 10.1});
    const std::vector<int> assign = {0, 0, 1, 1};
    const auto v = validity_indices(points, assign);
    CHECK(std::abs(v.silhouette - 0.9900) < 0.0005);
    CHECK(std::abs(v.calinski_harabasz - 20000.0) < 1.0);
    CHECK(std::abs(v.davies_bouldin - 0.0100) < 0.0001);

    CHECK_THROWS_WITH_AS(validity_indices(points, {0, 0, 0, 0}), doctest::Contains("InvalidK"), Error);

    // coincident points per cluster: zero scatters, DB = 0, silhouette 1
    const PointSet twins(2, {1, 1, 1, 1, 5, 5, 5, 5});
    const auto tv = validity_indices(twins, {0, 0, 1, 1});
    CHECK(tv.davies_bouldin == 0.0);
    CHECK(tv.silhouette == doctest::Approx(1.0));
    CHECK(std::isinf(tv.calinski_harabasz));

    for (int trial = 0; trial < 20; ++trial) {
        const auto pts = synth::blobs(trial + 100, 40, 3, 6.0);
        const auto r = kmeans_run(pts, 3, trial, 10);
        const auto idx = validity_indices(pts, r.assignments);
        REQUIRE(idx.silhouette >= -1.0);
        REQUIRE(idx.silhouette <= 1.0);
        REQUIRE(idx.calinski_harabasz >= 0.0);
        REQUIRE(idx.davies_bouldin >= 0.0);
    }
}

TEST_CASE("validity indices peak at the planted k on well-separated blobs") {
    for (std::uint64_t seed = 50; seed < 53; ++seed) {
        const auto points = synth::blobs(seed, 60, 4, 10.0);
        double best_sil = -2.0, best_ch = -1.0;
        std::size_t sil_k = 0, ch_k = 0;
        for (std::size_t k = 2; k <= 8; ++k) {
            const auto r = kmeans_run(points, k, seed, 20);
            const auto v = validity_indices(points, r.assignments);
            if (v.silhouette > best_sil) {
                best_sil = v.silhouette;
                sil_k = k;
            }
            if (v.calinski_harabasz > best_ch) {
                best_ch = v.calinski_harabasz;
                ch_k = k;
            }
        }
        CHECK(sil_k == 4);
        CHECK(ch_k == 4);
    }
}

TEST_CASE("agglomerate: separation fixture and two-point tree") {
    for (Linkage linkage : {Linkage::Ward, Linkage::Average, Linkage::Complete}) {
        const auto tree = agglomerate(PointSet(1, {0, 1, 10, 11}), linkage);
        REQUIRE(tree.merges.size() == 3);
        CHECK(tree.merges[0].left == 0);
        CHECK(tree.merges[0].right == 1);
        CHECK(tree.merges[1].left == 2);
        CHECK(tree.merges[1].right == 3);
        CHECK(tree.merges[2].left == 4);
        CHECK(tree.merges[2].right == 5);
    }

    const auto pair = agglomerate(PointSet(1, {2, 5}), Linkage::Average);
    REQUIRE(pair.merges.size() == 1);
    CHECK(pair.merges[0].height == doctest::Approx(3.0));
    const auto pair_c = agglomerate(PointSet(1, {2, 5}), Linkage::Complete);
    CHECK(pair_c.merges[0].height == doctest::Approx(3.0));

    CHECK_THROWS_AS(agglomerate(PointSet(1, {1.0}), Linkage::Ward), Error);
    CHECK_THROWS_AS(agglomerate(PointSet(1, {1.0, std::nan("")}), Linkage::Ward), Error);
}

TEST_CASE("agglomerate matches the brute-force oracle merge for merge") {
    synth::Gauss g(271828);
    const std::pair<Linkage, oracle::BruteLinkage> pairs[] = {
        {Linkage::Ward, oracle::BruteLinkage::Ward},
        {Linkage::Average, oracle::BruteLinkage::Average},
        {Linkage::Complete, oracle::BruteLinkage::Complete},
    };
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t n = 5 + g.index(8);
        const std::size_t dim = 1 + g.index(3);
        std::vector<double> xs(n * dim);
        for (auto& x : xs) x = 3.0 * g.normal();
        const PointSet points(dim, xs);
        for (const auto& [mine, brute] : pairs) {
            const auto tree = agglomerate(points, mine);
            const auto expected = oracle::linkage_bruteforce(xs, dim, brute);
            REQUIRE(tree.merges.size() == expected.size());
            double previous = 0.0;
            for (std::size_t t = 0; t < expected.size(); ++t) {
                REQUIRE(tree.merges[t].left == expected[t].left);
                REQUIRE(tree.merges[t].right == expected[t].right);
                REQUIRE(tree.merges[t].height ==
                        doctest::Approx(expected[t].height).epsilon(1e-9));
                REQUIRE(tree.merges[t].height >= previous - 1e-9); // monotone heights
                previous = tree.merges[t].height;
            }
        }
    }
}

TEST_CASE("label_clusters: rating order, small k, ties, multi-D projection") {
    ClusterResult four;
    four.k = 4;
    four.dim = 1;
    four.centroids = {-1.9, 0.9, 3.9, -0.3}; // deliberately unsorted
    four.assignments = {0, 1, 2, 3};
    const PointSet pts4(1, {-1.9, 0.9, 3.9, -0.3});
    const auto rated = label_clusters(four, pts4);
    CHECK(rated.labels[0] == "Low");
    CHECK(rated.labels[3] == "Medium");
    CHECK(rated.labels[1] == "High");
    CHECK(rated.labels[2] == "Very High");

    ClusterResult two;
    two.k = 2;
    two.dim = 1;
    two.centroids = {5.0, -5.0};
    two.assignments = {0, 1};
    const auto rated2 = label_clusters(two, PointSet(1, {5.0, -5.0}));
    CHECK(rated2.labels[1] == "C1");
    CHECK(rated2.labels[0] == "C2");

    ClusterResult tied;
    tied.k = 2;
    tied.dim = 1;
    tied.centroids = {0.0, 0.0};
    tied.assignments = {0, 1};
    const auto rated_tie = label_clusters(tied, PointSet(1, {0.0, 0.0}));
    CHECK(rated_tie.labels[0] == "C1"); // lower cluster id takes the lower label
    CHECK(rated_tie.labels[1] == "C2");

    // multi-D: order follows the first principal axis of the data
    const auto blob_pts = synth::blobs(5, 40, 4, 9.0);
    const auto r = kmeans_run(blob_pts, 4, 9, 30);
    const auto rated3 = label_clusters(r, blob_pts);
    // ranks are a permutation of 0..3
    std::set<std::size_t> ranks(rated3.order.begin(), rated3.order.end());
    CHECK(ranks.size() == 4);
    CHECK(rated3.labels[r.assignments[0]].size() > 0);
}

TEST_CASE("translation invariance: assignments, labels and WCSS are unchanged") {
    synth::Gauss g(141);
    std::vector<double> xs(60);
    for (auto& x : xs) x = 3.0 * g.normal();
    const auto base = kmeans_run(PointSet::from_values(xs), 3, 4, 50);
    std::vector<double> shifted(xs);
    for (auto& x : shifted) x += 1000.0;
    const auto moved = kmeans_run(PointSet::from_values(shifted), 3, 4, 50);
    CHECK(base.assignments == moved.assignments);
    CHECK(base.wcss == doctest::Approx(moved.wcss).epsilon(1e-9));
    const auto lbase = label_clusters(base, PointSet::from_values(xs));
    const auto lmoved = label_clusters(moved, PointSet::from_values(shifted));
    CHECK(lbase.labels == lmoved.labels);
}

TEST_CASE("select_k: curve is non-increasing and the report is complete") {
    const auto points = synth::blobs(8, 50, 3, 7.0);
    const auto report = select_k(points, 8, 3, 10);
    REQUIRE(report.wcss.size() == 8);
    REQUIRE(report.validity.size() == 7);
    for (std::size_t i = 1; i < report.wcss.size(); ++i)
        REQUIRE(report.wcss[i] <= report.wcss[i - 1] + 1e-9);
    CHECK_THROWS_AS(select_k(points, 2, 3, 5), Error);
}
