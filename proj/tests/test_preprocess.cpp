#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "regidx/error.hpp"
#include "regidx/stats.hpp"
#include "synth.hpp"

using namespace regidx;

namespace {

DataMatrix matrix_of(const std::vector<std::vector<double>>& columns) {
    DataMatrix m;
    const std::size_t rows = columns.front().size();
    for (std::size_t c = 0; c < columns.size(); ++c) m.columns.push_back("c" + std::to_string(c));
    for (std::size_t r = 0; r < rows; ++r) {
        m.rows.push_back({"R" + std::to_string(r), 2000});
        for (const auto& col : columns) m.cells.push_back(col[r]);
    }
    return m;
}

} // namespace

TEST_CASE("normalize: min-max with polarity") {
    const auto m = matrix_of({{0, 5, 10}, {0, 5, 10}});
    PolarityMap pol{{"c0", Polarity::Positive}, {"c1", Polarity::Negative}};
    const auto norm = normalize(m, pol, NormMethod::MinMax);
    CHECK(norm.at(0, 0) == 0.0);
    CHECK(norm.at(1, 0) == 0.5);
    CHECK(norm.at(2, 0) == 1.0);
    CHECK(norm.at(0, 1) == 1.0);
    CHECK(norm.at(1, 1) == 0.5);
    CHECK(norm.at(2, 1) == 0.0);
    CHECK(norm.calibration[0].min == 0.0);
    CHECK(norm.calibration[0].max == 10.0);
}

TEST_CASE("normalize: published GDP bounds map 6849.1 to 0.3002") {
    const auto m = matrix_of({{1950.0, 6849.1, 18269.0}, {0, 1, 2}});
    const auto norm = normalize(m, {}, NormMethod::MinMax);
    CHECK(std::abs(norm.at(1, 0) - 0.3002) < 1e-4);
}

TEST_CASE("normalize: constant column is a DegenerateColumn error") {
    const auto m = matrix_of({{5, 5, 5}, {0, 1, 2}});
    CHECK_THROWS_WITH_AS(normalize(m, {}, NormMethod::MinMax), doctest::Contains("c0"), Error);
    CHECK_THROWS_AS(normalize(m, {}, NormMethod::ZScore), Error);
}

TEST_CASE("normalize: zscore columns have population mean 0 and variance 1") {
    synth::Gauss g(404);
    std::vector<std::vector<double>> cols(3);
    for (auto& col : cols)
        for (int i = 0; i < 50; ++i) col.push_back(10.0 * g.normal() + 3.0);
    const auto m = matrix_of(cols);
    PolarityMap pol{{"c2", Polarity::Negative}};
    const auto norm = normalize(m, pol, NormMethod::ZScore);
    for (std::size_t c = 0; c < 3; ++c) {
        double mean = 0.0, var = 0.0;
        for (std::size_t r = 0; r < 50; ++r) mean += norm.at(r, c);
        mean /= 50.0;
        for (std::size_t r = 0; r < 50; ++r) var += (norm.at(r, c) - mean) * (norm.at(r, c) - mean);
        var /= 50.0;
        CHECK(std::abs(mean) < 1e-9);
        CHECK(std::abs(var - 1.0) < 1e-9);
    }
    // negative polarity flips the sign of the standardized column
    CHECK(norm.at(0, 2) == doctest::Approx(-(cols[2][0] - norm.calibration[2].mean) /
                                           norm.calibration[2].sd));
}

TEST_CASE("normalize properties: range, idempotence, order preservation") {
    synth::Gauss g(99);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> col;
        for (int i = 0; i < 40; ++i) col.push_back(g.normal() * (trial + 1) + 100.0 * g.uniform());
        const auto m = matrix_of({col, col});
        PolarityMap pol{{"c1", Polarity::Negative}};
        const auto norm = normalize(m, pol, NormMethod::MinMax);

        std::size_t argmax_raw = 0, argmax_pos = 0, argmin_neg = 0;
        for (std::size_t r = 0; r < col.size(); ++r) {
            CHECK(norm.at(r, 0) >= 0.0);
            CHECK(norm.at(r, 0) <= 1.0);
            if (col[r] > col[argmax_raw]) argmax_raw = r;
            if (norm.at(r, 0) > norm.at(argmax_pos, 0)) argmax_pos = r;
            if (norm.at(r, 1) < norm.at(argmin_neg, 1)) argmin_neg = r;
        }
        CHECK(argmax_raw == argmax_pos);  // positive polarity preserves the argmax
        CHECK(argmax_raw == argmin_neg);  // negative polarity maps it to the argmin

        // renormalizing an already [0,1]-spanning column reproduces it exactly
        std::vector<double> unit_col;
        for (std::size_t r = 0; r < col.size(); ++r) unit_col.push_back(norm.at(r, 0));
        const auto again = normalize(matrix_of({unit_col, unit_col}), {}, NormMethod::MinMax);
        for (std::size_t r = 0; r < col.size(); ++r) REQUIRE(again.at(r, 0) == unit_col[r]);
    }
}

TEST_CASE("describe: fixed examples") {
    const auto stats = describe(matrix_of({{1, 2, 3, 4}, {7, 7, 7, 7}}));
    CHECK(stats.columns[0].mean == doctest::Approx(2.5));
    CHECK(stats.columns[0].median == doctest::Approx(2.5));
    CHECK(stats.columns[0].sd == doctest::Approx(1.2910).epsilon(1e-4));
    CHECK(stats.columns[0].min == 1.0);
    CHECK(stats.columns[0].max == 4.0);
    CHECK(stats.columns[1].sd == 0.0);
    CHECK(stats.columns[1].min == 7.0);
    CHECK(stats.columns[1].max == 7.0);

    CHECK_THROWS_WITH_AS(describe(matrix_of({{1}, {2}})), doctest::Contains("TooFewRows"), Error);
}

TEST_CASE("describe: 1000 uniform draws match a direct-summation oracle") {
    synth::Gauss g(2024);
    std::vector<double> col;
    for (int i = 0; i < 1000; ++i) col.push_back(g.uniform());
    const auto stats = describe(matrix_of({col, col}));
    CHECK(stats.columns[0].mean > 0.45);
    CHECK(stats.columns[0].mean < 0.55);
    CHECK(stats.columns[0].mean == doctest::Approx(oracle::direct_mean(col)).epsilon(1e-12));
    CHECK(stats.columns[0].sd == doctest::Approx(oracle::direct_sample_sd(col)).epsilon(1e-12));
    CHECK(stats.columns[0].median == doctest::Approx(oracle::direct_median(col)).epsilon(1e-12));
    CHECK(stats.columns[0].min <= stats.columns[0].median);
    CHECK(stats.columns[0].median <= stats.columns[0].max);
}

TEST_CASE("correlation_matrix: exact lines and the direct-formula oracle") {
    std::vector<double> x = {1, 2, 3, 4, 5};
    std::vector<double> y2 = {2, 4, 6, 8, 10};
    std::vector<double> yneg = {-1, -2, -3, -4, -5};
    const auto corr = correlation_matrix(matrix_of({x, y2, yneg}));
    CHECK(corr.at(0, 1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(corr.at(0, 2) == doctest::Approx(-1.0).epsilon(1e-12));
    for (std::size_t i = 0; i < 3; ++i) CHECK(corr.at(i, i) == 1.0);

    synth::Gauss g(5150);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<std::vector<double>> cols(3);
        for (auto& col : cols)
            for (int i = 0; i < 5; ++i) col.push_back(g.normal());
        const auto c = correlation_matrix(matrix_of(cols));
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) {
                REQUIRE(c.at(i, j) == c.at(j, i));
                REQUIRE(c.at(i, j) >= -1.0);
                REQUIRE(c.at(i, j) <= 1.0);
                if (i != j)
                    REQUIRE(std::abs(c.at(i, j) - oracle::direct_pearson(cols[i], cols[j])) < 1e-12);
            }
    }
}

TEST_CASE("correlation properties: polarity flip and affine invariance") {
    synth::Gauss g(77);
    std::vector<std::vector<double>> cols(4);
    for (auto& col : cols)
        for (int i = 0; i < 30; ++i) col.push_back(g.normal() + 0.3 * static_cast<double>(i % 7));
    const auto base = correlation_matrix(matrix_of(cols));

    // flipping one column negates its off-diagonal correlations
    auto flipped_cols = cols;
    for (auto& v : flipped_cols[1]) v = -v;
    const auto flipped = correlation_matrix(matrix_of(flipped_cols));
    for (std::size_t j = 0; j < 4; ++j) {
        if (j == 1) continue;
        CHECK(flipped.at(1, j) == doctest::Approx(-base.at(1, j)).epsilon(1e-12));
        CHECK(std::abs(flipped.at(1, j)) == doctest::Approx(std::abs(base.at(1, j))).epsilon(1e-12));
    }

    // positive-polarity min-max is a positive affine map, so r is unchanged
    const auto norm = normalize(matrix_of(cols), {}, NormMethod::MinMax);
    std::vector<std::vector<double>> unit(4);
    for (std::size_t c = 0; c < 4; ++c)
        for (std::size_t r = 0; r < cols[c].size(); ++r) unit[c].push_back(norm.at(r, c));
    const auto after = correlation_matrix(matrix_of(unit));
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            CHECK(after.at(i, j) == doctest::Approx(base.at(i, j)).epsilon(1e-10));
}
