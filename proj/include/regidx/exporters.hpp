#pragma once

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "regidx/cluster.hpp"
#include "regidx/pca.hpp"
#include "regidx/stats.hpp"

namespace regidx {

struct RatingCell {
    int cluster_id = 0;
    std::string label;
};

// (scope, year, region_code) -> rating of that region's index value.
using RatingsMap = std::map<std::tuple<std::size_t, int, std::string>, RatingCell>;

struct RegionRating {
    std::string code;
    std::string name;
    double index = 0.0;
    int cluster_id = 0;
    std::string label;
};

struct BoundaryFeature {
    std::string code;
    std::string geometry_json; // the GeoJSON geometry object, verbatim
};

struct BoundaryFile {
    std::vector<BoundaryFeature> features;

    const BoundaryFeature* find(const std::string& code) const;
};

BoundaryFile load_boundaries(const std::string& path);

enum class PlotKind { Scatter, PairGrid };

struct PlotSpec {
    PlotKind kind = PlotKind::Scatter;
    std::string x_column;             // scatter: scope name for the x axis
    std::string y_column;             // scatter: scope name for the y axis
    std::vector<std::string> colors;  // rating ramp, light to dark
};

std::vector<std::string> default_color_ramp();
// i-th of k colors sampled from the ramp (k = 4 returns the ramp itself).
std::string ramp_color(const std::vector<std::string>& ramp, std::size_t i, std::size_t k);

// One row per region sorted by code, a <scope>_<year>_index /
// <scope>_<year>_label column pair per scope-year, values at 2 decimals.
// Pass ratings = nullptr to emit the value columns only.
void write_index_table(const IndexSeries& series, const RatingsMap* ratings,
                       const std::vector<Scope>& scopes, const std::string& path);

// clusters.csv: region_code,year,scope,index,cluster_id,label
struct ClusterTableRow {
    std::string region_code;
    int year = 0;
    std::size_t scope = 0;
    double index = 0.0;
    int cluster_id = 0;
    std::string label;
};
void write_clusters_csv(const std::vector<ClusterTableRow>& rows, const std::string& path);

void write_kselect_csv(const std::vector<std::pair<std::string, KSelectionReport>>& reports,
                       const std::string& path);

// RFC 7946 FeatureCollection; every feature carries
// {code, name, index, cluster_id, label, color}.
void write_geojson(const std::vector<RegionRating>& ratings, const BoundaryFile& boundaries,
                   const std::vector<std::string>& ramp, std::size_t label_count,
                   const std::string& path);

// SVG scatter (or pair grid) plus a sidecar CSV of the plotted coordinates
// (same path with a .csv extension).
void write_scatter(const IndexSeries& series, const RatingsMap& ratings,
                   const PlotSpec& spec, const std::string& path);

// SVG dendrogram plus a merge-list sidecar (.txt): child_a,child_b,height.
void write_dendrogram(const Dendrogram& tree, const std::string& path);

// SVG heatmap on a diverging red/white/blue ramp plus a CSV sidecar of the
// matrix at full precision.
void write_corr_heatmap(const CorrelationMatrix& corr, const std::string& path);

void write_describe_csv(const DescriptiveStats& stats, const std::string& path);

// All writers are atomic: temp file in the target directory, then rename.
void write_text_atomic(const std::string& path, const std::string& content);

} // namespace regidx
