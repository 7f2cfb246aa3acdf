#pragma once

// Seeded synthetic data for tests: Gaussian blob point sets and long-format
// indicator panels with a planted development gradient.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "regidx/cluster.hpp"
#include "regidx/panel.hpp"
#include "regidx/rng.hpp"

namespace synth {

class Gauss {
public:
    explicit Gauss(std::uint64_t seed) : rng_(seed) {}

    double uniform() { return rng_.next_double(); }

    double normal() {
        if (have_) {
            have_ = false;
            return spare_;
        }
        double u = 0.0;
        while (u <= 1e-300) u = rng_.next_double();
        const double v = rng_.next_double();
        const double r = std::sqrt(-2.0 * std::log(u));
        spare_ = r * std::sin(2.0 * 3.14159265358979323846 * v);
        have_ = true;
        return r * std::cos(2.0 * 3.14159265358979323846 * v);
    }

    std::size_t index(std::size_t n) { return rng_.next_index(n); }

private:
    regidx::Rng rng_;
    bool have_ = false;
    double spare_ = 0.0;
};

// 3-D Gaussian blobs with unit per-coordinate sd, so each blob's RMS radius
// is sqrt(3). `separation` multiplies that radius: the smallest distance
// between two blob centers is exactly separation * sqrt(3).
//
// For planted = 4 the centers copy the geography this toolkit is built for:
// two far singleton groups plus a third group that is itself a close pair
// of centers, which separates only at k = 4. Group masses are balanced
// (n/3 each) so the k = 1..3 WCSS drops stay comparable.
inline regidx::PointSet blobs(std::uint64_t seed, std::size_t n, std::size_t planted,
                              double separation) {
    const double s = separation * std::sqrt(3.0);
    std::vector<std::vector<double>> centers;
    std::vector<std::size_t> share;
    if (planted == 4) {
        centers = {{0, 0, 0}, {s, 0, 0}, {s / 2, 0.8 * s, s / 2}, {s / 2, 0.8 * s, -s / 2}};
        const std::size_t third = n / 3;
        const std::size_t rest = n - 2 * third;
        share = {third, third, (rest + 1) / 2, rest / 2};
    } else if (planted == 3) {
        centers = {{0, 0, 0}, {s, 0, 0}, {s / 2, s * 0.8660254037844386, 0}};
    } else if (planted == 2) {
        centers = {{0, 0, 0}, {s, 0, 0}};
    } else {
        centers = {{0, 0, 0}};
    }
    if (share.empty())
        for (std::size_t b = 0; b < planted; ++b)
            share.push_back(n / planted + (b < n % planted ? 1 : 0));

    std::vector<std::size_t> blob_of;
    for (std::size_t b = 0; b < planted; ++b)
        for (std::size_t j = 0; j < share[b]; ++j) blob_of.push_back(b);

    Gauss g(seed);
    std::vector<double> xs;
    xs.reserve(n * 3);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t d = 0; d < 3; ++d) xs.push_back(centers[blob_of[i]][d] + g.normal());
    return regidx::PointSet(3, std::move(xs));
}

inline std::vector<regidx::IndicatorSpec> table1_spec() {
    using regidx::Dimension;
    using regidx::Polarity;
    std::vector<regidx::IndicatorSpec> spec;
    auto add = [&](const char* id, const char* name, Dimension d, Polarity p, const char* unit) {
        spec.push_back({id, name, d, p, unit});
    };
    add("gdp_pc", "GDP per capita", Dimension::Economic, Polarity::Positive, "$");
    add("cars", "Number of cars", Dimension::Economic, Polarity::Positive, "per thousand");
    add("plant_prod", "Value of plant production", Dimension::Economic, Polarity::Positive, "thousand $");
    add("animal_prod", "Value of animal production", Dimension::Economic, Polarity::Positive, "thousand $");
    add("housing_sales", "Housing sales", Dimension::Economic, Polarity::Positive, "total");
    add("electricity", "Electricity consumption", Dimension::Economic, Polarity::Positive, "kWh per capita");
    add("net_exports", "Net exports", Dimension::Economic, Polarity::Positive, "thousand $");
    add("net_migration", "Net migration rate", Dimension::Economic, Polarity::Positive, "per mille");
    add("age_dependency", "Age dependency ratio", Dimension::Economic, Polarity::Negative, "%");
    add("pop_growth", "Population growth rate", Dimension::Economic, Polarity::Positive, "per mille");
    add("hospital_beds", "Number of hospital beds", Dimension::Social, Polarity::Positive, "per 100k");
    add("physicians", "Number of physicians", Dimension::Social, Polarity::Positive, "per thousand");
    add("infant_mortality", "Infant mortality rate", Dimension::Social, Polarity::Negative, "per mille");
    add("enrollment", "Primary school enrollment rate", Dimension::Social, Polarity::Positive, "%");
    add("sewerage", "Sewerage service", Dimension::Social, Polarity::Positive, "% municipal");
    add("college", "Number of college graduates", Dimension::Social, Polarity::Positive, "%");
    return spec;
}

// Panel with a planted per-region quality gradient: every Positive indicator
// rises with quality, every Negative one falls, plus seeded noise. Region 0
// can be forced to dominate outright.
inline regidx::IndicatorPanel gradient_panel(std::uint64_t seed, std::size_t n_regions,
                                             std::vector<int> years, double noise = 0.15,
                                             bool dominant_first = false) {
    auto spec = table1_spec();
    std::vector<regidx::Region> regions;
    for (std::size_t r = 0; r < n_regions; ++r) {
        const std::string num = std::to_string(r);
        regions.push_back({"R" + std::string(num.size() < 2 ? "0" : "") + num,
                           "Region " + num});
    }
    regidx::IndicatorPanel panel(regions, years, spec);

    Gauss g(seed);
    for (std::size_t r = 0; r < n_regions; ++r) {
        const double quality = dominant_first && r == 0
                                   ? 2.0
                                   : static_cast<double>(r) / static_cast<double>(n_regions);
        for (std::size_t y = 0; y < years.size(); ++y) {
            for (std::size_t i = 0; i < spec.size(); ++i) {
                const double direction = spec[i].polarity == regidx::Polarity::Positive ? 1.0 : -1.0;
                double v = direction * quality + noise * g.normal() +
                           0.05 * static_cast<double>(y);
                if (dominant_first && r == 0)
                    v = direction * 2.0; // noiseless extreme on every indicator
                panel.set_cell(r, y, i, v);
            }
        }
    }
    return panel;
}

class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        auto base = std::filesystem::temp_directory_path();
        for (int i = 0; i < 10000; ++i) {
            auto candidate = base / ("regidx-" + tag + "-" + std::to_string(i));
            std::error_code ec;
            if (std::filesystem::create_directories(candidate, ec)) {
                path_ = candidate;
                return;
            }
        }
        throw std::runtime_error("cannot create temp dir");
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline std::size_t count_substr(const std::string& text, const std::string& needle) {
    std::size_t count = 0, pos = 0;
    while ((pos = text.find(needle, pos)) != std::string::npos) {
        ++count;
        pos += needle.size();
    }
    return count;
}

} // namespace synth
