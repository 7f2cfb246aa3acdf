#include "regidx/exporters.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "regidx/csv.hpp"
#include "regidx/error.hpp"

namespace regidx {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fixed2(double v) { return csv::format_fixed(v, 2); }

struct Rgb {
    int r = 0, g = 0, b = 0;
};

Rgb parse_hex(const std::string& hex) {
    if (hex.size() != 7 || hex[0] != '#') raise("BadConfig", "color must look like #rrggbb, got '" + hex + "'");
    auto piece = [&](int at) { return static_cast<int>(std::strtol(hex.substr(at, 2).c_str(), nullptr, 16)); };
    return {piece(1), piece(3), piece(5)};
}

std::string to_hex(const Rgb& c) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", c.r, c.g, c.b);
    return buf;
}

Rgb lerp(const Rgb& a, const Rgb& b, double t) {
    auto mixc = [&](int x, int y) { return static_cast<int>(std::lround(x + (y - x) * t)); };
    return {mixc(a.r, b.r), mixc(a.g, b.g), mixc(a.b, b.b)};
}

} // namespace

void write_text_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) raise("FileNotWritable", "cannot write " + tmp);
        out << content;
        if (!out) raise("FileNotWritable", "short write to " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) raise("FileNotWritable", "cannot rename " + tmp + " to " + path + ": " + ec.message());
}

std::vector<std::string> default_color_ramp() {
    // light -> dark, one per rating Low .. Very High
    return {"#fee5d9", "#fcae91", "#fb6a4a", "#cb181d"};
}

std::string ramp_color(const std::vector<std::string>& ramp, std::size_t i, std::size_t k) {
    if (ramp.empty()) raise("BadConfig", "empty color ramp");
    if (k == ramp.size()) return ramp[i];
    if (k == 1) return ramp.back();
    // resample the ramp's light->dark gradient at k stops
    const double t = static_cast<double>(i) / static_cast<double>(k - 1);
    const double pos = t * static_cast<double>(ramp.size() - 1);
    const std::size_t lo = std::min(static_cast<std::size_t>(pos), ramp.size() - 2);
    return to_hex(lerp(parse_hex(ramp[lo]), parse_hex(ramp[lo + 1]), pos - static_cast<double>(lo)));
}

const BoundaryFeature* BoundaryFile::find(const std::string& code) const {
    for (const auto& f : features)
        if (f.code == code) return &f;
    return nullptr;
}

BoundaryFile load_boundaries(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise("InvalidBoundaryFile", "cannot open " + path);
    ordered_json doc;
    try {
        doc = ordered_json::parse(in);
    } catch (const std::exception& e) {
        raise("InvalidBoundaryFile", path + ": " + e.what());
    }
    if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" || !doc.contains("features"))
        raise("InvalidBoundaryFile", path + ": expected a GeoJSON FeatureCollection");

    BoundaryFile file;
    std::set<std::string> codes;
    for (const auto& feature : doc["features"]) {
        if (feature.value("type", "") != "Feature" || !feature.contains("geometry"))
            raise("InvalidBoundaryFile", path + ": every feature needs type and geometry");
        const auto& geometry = feature["geometry"];
        const std::string gtype = geometry.is_object() ? geometry.value("type", "") : "";
        if (gtype != "Polygon" && gtype != "MultiPolygon")
            raise("InvalidBoundaryFile", path + ": geometry must be Polygon or MultiPolygon, got '" + gtype + "'");
        if (!geometry.contains("coordinates") || !geometry["coordinates"].is_array())
            raise("InvalidBoundaryFile", path + ": geometry lacks coordinates");
        if (!feature.contains("properties") || !feature["properties"].is_object() ||
            !feature["properties"].contains("code"))
            raise("InvalidBoundaryFile", path + ": every feature needs properties.code");
        std::string code = feature["properties"]["code"].is_string()
                               ? feature["properties"]["code"].get<std::string>()
                               : feature["properties"]["code"].dump();
        if (!codes.insert(code).second)
            raise("InvalidBoundaryFile", path + ": duplicate region code '" + code + "'");
        file.features.push_back({std::move(code), geometry.dump()});
    }
    return file;
}

void write_index_table(const IndexSeries& series, const RatingsMap* ratings,
                       const std::vector<Scope>& scopes, const std::string& path) {
    std::set<int> year_set;
    std::set<std::pair<std::string, std::string>> region_set; // (code, name)
    std::map<std::pair<std::string, int>, std::size_t> row_of;
    for (std::size_t r = 0; r < series.rows.size(); ++r) {
        year_set.insert(series.rows[r].year);
        region_set.insert({series.rows[r].region_code, series.region_names[r]});
        row_of[{series.rows[r].region_code, series.rows[r].year}] = r;
    }

    std::vector<std::string> header = {"region_code", "region_name"};
    for (Scope scope : scopes) {
        for (int year : year_set) {
            const std::string stem = std::string(scope_name(scope)) + "_" + std::to_string(year);
            header.push_back(stem + "_index");
            if (ratings) header.push_back(stem + "_label");
        }
    }

    std::string out = csv::join_row(header);
    for (const auto& [code, name] : region_set) {
        std::vector<std::string> row = {code, name};
        for (Scope scope : scopes) {
            const std::size_t s = static_cast<std::size_t>(scope);
            for (int year : year_set) {
                auto it = row_of.find({code, year});
                if (it == row_of.end()) {
                    row.push_back("");
                    if (ratings) row.push_back("");
                    continue;
                }
                row.push_back(fixed2(series.values[s][it->second]));
                if (ratings) {
                    auto rit = ratings->find({s, year, code});
                    if (rit == ratings->end())
                        raise("IncompleteRatings",
                              "no rating for (" + std::string(scope_name(scope)) + ", " +
                                  std::to_string(year) + ", " + code + ")");
                    row.push_back(rit->second.label);
                }
            }
        }
        out += csv::join_row(row);
    }
    write_text_atomic(path, out);
}

void write_clusters_csv(const std::vector<ClusterTableRow>& rows, const std::string& path) {
    std::string out = csv::join_row({"region_code", "year", "scope", "index", "cluster_id", "label"});
    for (const auto& r : rows) {
        out += csv::join_row({r.region_code, std::to_string(r.year),
                              scope_name(static_cast<Scope>(r.scope)), csv::format_double(r.index),
                              std::to_string(r.cluster_id), r.label});
    }
    write_text_atomic(path, out);
}

void write_kselect_csv(const std::vector<std::pair<std::string, KSelectionReport>>& reports,
                       const std::string& path) {
    std::string out = csv::join_row({"scope", "k", "wcss", "silhouette", "calinski_harabasz",
                                     "davies_bouldin", "is_elbow", "is_candidate", "ambiguous"});
    for (const auto& [scope, report] : reports) {
        for (std::size_t i = 0; i < report.wcss.size(); ++i) {
            const std::size_t k = i + 1;
            const bool is_elbow = report.elbow.k && *report.elbow.k == k;
            const bool is_candidate =
                std::find(report.elbow.candidates.begin(), report.elbow.candidates.end(), k) !=
                report.elbow.candidates.end();
            std::vector<std::string> row = {scope, std::to_string(k), csv::format_double(report.wcss[i])};
            if (k >= 2) {
                const auto& v = report.validity[i - 1];
                row.push_back(csv::format_double(v.silhouette));
                row.push_back(csv::format_double(v.calinski_harabasz));
                row.push_back(csv::format_double(v.davies_bouldin));
            } else {
                row.insert(row.end(), {"", "", ""});
            }
            row.push_back(is_elbow ? "1" : "0");
            row.push_back(is_candidate ? "1" : "0");
            row.push_back(report.elbow.ambiguous ? "1" : "0");
            out += csv::join_row(row);
        }
    }
    write_text_atomic(path, out);
}

void write_geojson(const std::vector<RegionRating>& ratings, const BoundaryFile& boundaries,
                   const std::vector<std::string>& ramp, std::size_t label_count,
                   const std::string& path) {
    std::vector<std::string> missing;
    for (const auto& r : ratings)
        if (!boundaries.find(r.code)) missing.push_back(r.code);
    if (!missing.empty()) {
        std::string list;
        for (std::size_t i = 0; i < missing.size(); ++i) {
            if (i) list += ", ";
            list += missing[i];
        }
        raise("MissingGeometry", "no boundary geometry for region(s): " + list);
    }

    ordered_json features = ordered_json::array();
    for (const auto& r : ratings) {
        ordered_json feature;
        feature["type"] = "Feature";
        ordered_json props;
        props["code"] = r.code;
        props["name"] = r.name;
        props["index"] = r.index;
        props["cluster_id"] = r.cluster_id;
        props["label"] = r.label;
        props["color"] = ramp_color(ramp, static_cast<std::size_t>(r.cluster_id), label_count);
        feature["properties"] = std::move(props);
        feature["geometry"] = ordered_json::parse(boundaries.find(r.code)->geometry_json);
        features.push_back(std::move(feature));
    }
    ordered_json doc;
    doc["type"] = "FeatureCollection";
    doc["features"] = std::move(features);
    write_text_atomic(path, doc.dump(2) + "\n");
}

namespace {

struct Extent {
    double lo = 0.0, hi = 1.0;

    void fit(const std::vector<double>& values) {
        if (values.empty()) return;
        lo = *std::min_element(values.begin(), values.end());
        hi = *std::max_element(values.begin(), values.end());
        if (hi == lo) {
            lo -= 1.0;
            hi += 1.0;
        }
        const double pad = 0.05 * (hi - lo);
        lo -= pad;
        hi += pad;
    }
    double unit(double v) const { return (v - lo) / (hi - lo); }
};

std::string svg_open(double width, double height) {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
        << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    return out.str();
}

void svg_text(std::ostringstream& out, double x, double y, const std::string& text,
              int size = 11, const char* anchor = "middle") {
    out << "<text x=\"" << fixed2(x) << "\" y=\"" << fixed2(y) << "\" font-family=\"sans-serif\" font-size=\""
        << size << "\" text-anchor=\"" << anchor << "\">" << text << "</text>\n";
}

void scatter_panel(std::ostringstream& out, double px, double py, double pw, double ph,
                   const std::vector<double>& xs, const std::vector<double>& ys,
                   const std::vector<std::string>& colors) {
    Extent ex, ey;
    ex.fit(xs);
    ey.fit(ys);
    out << "<rect x=\"" << fixed2(px) << "\" y=\"" << fixed2(py) << "\" width=\"" << fixed2(pw)
        << "\" height=\"" << fixed2(ph) << "\" fill=\"none\" stroke=\"#444444\"/>\n";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double cx = px + ex.unit(xs[i]) * pw;
        const double cy = py + (1.0 - ey.unit(ys[i])) * ph;
        out << "<circle class=\"marker\" cx=\"" << fixed2(cx) << "\" cy=\"" << fixed2(cy)
            << "\" r=\"3\" fill=\"" << colors[i] << "\" fill-opacity=\"0.85\"/>\n";
    }
}

void histogram_panel(std::ostringstream& out, double px, double py, double pw, double ph,
                     const std::vector<double>& values) {
    Extent ex;
    ex.fit(values);
    constexpr std::size_t kBins = 12;
    std::vector<std::size_t> bins(kBins, 0);
    for (double v : values) {
        auto b = static_cast<std::size_t>(ex.unit(v) * kBins);
        bins[std::min(b, kBins - 1)]++;
    }
    const std::size_t peak = std::max<std::size_t>(1, *std::max_element(bins.begin(), bins.end()));
    out << "<g class=\"hist\">\n<rect x=\"" << fixed2(px) << "\" y=\"" << fixed2(py) << "\" width=\""
        << fixed2(pw) << "\" height=\"" << fixed2(ph) << "\" fill=\"none\" stroke=\"#444444\"/>\n";
    const double bw = pw / kBins;
    for (std::size_t b = 0; b < kBins; ++b) {
        const double h = ph * static_cast<double>(bins[b]) / static_cast<double>(peak);
        out << "<rect class=\"bar\" x=\"" << fixed2(px + bw * static_cast<double>(b)) << "\" y=\""
            << fixed2(py + ph - h) << "\" width=\"" << fixed2(bw * 0.9) << "\" height=\"" << fixed2(h)
            << "\" fill=\"#7a7a7a\"/>\n";
    }
    out << "</g>\n";
}

} // namespace

void write_scatter(const IndexSeries& series, const RatingsMap& ratings,
                   const PlotSpec& spec, const std::string& path) {
    const auto scope_of = [](const std::string& column) -> std::size_t {
        for (std::size_t s = 0; s < kScopeCount; ++s)
            if (column == scope_name(static_cast<Scope>(s))) return s;
        raise("UnknownColumn", "unknown index column '" + column + "'");
    };

    // marker color follows the socioeconomic rating of the row
    const std::size_t color_scope = static_cast<std::size_t>(Scope::Socioeconomic);
    std::size_t label_count = 1;
    for (const auto& [key, cell] : ratings)
        if (std::get<0>(key) == color_scope)
            label_count = std::max(label_count, static_cast<std::size_t>(cell.cluster_id) + 1);

    std::vector<std::string> colors(series.row_count(), "#888888");
    std::vector<std::string> labels(series.row_count(), "");
    for (std::size_t i = 0; i < series.row_count(); ++i) {
        auto it = ratings.find({color_scope, series.rows[i].year, series.rows[i].region_code});
        if (it == ratings.end()) continue;
        colors[i] = ramp_color(spec.colors.empty() ? default_color_ramp() : spec.colors,
                               static_cast<std::size_t>(it->second.cluster_id), label_count);
        labels[i] = it->second.label;
    }

    std::ostringstream svg;
    std::string sidecar;

    if (spec.kind == PlotKind::Scatter) {
        const std::size_t sx = scope_of(spec.x_column);
        const std::size_t sy = scope_of(spec.y_column);
        const double width = 640, height = 480;
        const double px = 60, py = 40, pw = width - 100, ph = height - 100;
        svg << svg_open(width, height);
        svg_text(svg, width / 2, height - 15, spec.x_column + " index", 13);
        svg << "<g transform=\"translate(18," << fixed2(py + ph / 2) << ") rotate(-90)\">";
        svg_text(svg, 0, 0, spec.y_column + " index", 13);
        svg << "</g>\n";
        scatter_panel(svg, px, py, pw, ph, series.values[sx], series.values[sy], colors);
        svg << "</svg>\n";

        sidecar = csv::join_row({"region_code", "year", "x", "y", "label"});
        for (std::size_t i = 0; i < series.row_count(); ++i)
            sidecar += csv::join_row({series.rows[i].region_code, std::to_string(series.rows[i].year),
                                      csv::format_double(series.values[sx][i]),
                                      csv::format_double(series.values[sy][i]), labels[i]});
    } else {
        const double cell = 190, gap = 12, margin = 46;
        const double width = margin * 2 + cell * 3 + gap * 2;
        svg << svg_open(width, width);
        for (std::size_t row = 0; row < kScopeCount; ++row) {
            for (std::size_t col = 0; col < kScopeCount; ++col) {
                const double px = margin + static_cast<double>(col) * (cell + gap);
                const double py = margin + static_cast<double>(row) * (cell + gap);
                svg << "<g class=\"panel\" id=\"panel-" << row << "-" << col << "\">\n";
                if (row == col) {
                    histogram_panel(svg, px, py, cell, cell, series.values[row]);
                } else {
                    scatter_panel(svg, px, py, cell, cell, series.values[col], series.values[row], colors);
                }
                svg << "</g>\n";
                if (row == 2)
                    svg_text(svg, px + cell / 2, margin + 3 * cell + 2 * gap + 24,
                             scope_name(static_cast<Scope>(col)), 12);
                if (col == 0) {
                    svg << "<g transform=\"translate(" << fixed2(margin - 26) << ","
                        << fixed2(py + cell / 2) << ") rotate(-90)\">";
                    svg_text(svg, 0, 0, scope_name(static_cast<Scope>(row)), 12);
                    svg << "</g>\n";
                }
            }
        }
        svg << "</svg>\n";

        sidecar = csv::join_row({"region_code", "year", "economic", "social", "socioeconomic", "label"});
        for (std::size_t i = 0; i < series.row_count(); ++i)
            sidecar += csv::join_row({series.rows[i].region_code, std::to_string(series.rows[i].year),
                                      csv::format_double(series.values[0][i]),
                                      csv::format_double(series.values[1][i]),
                                      csv::format_double(series.values[2][i]), labels[i]});
    }

    write_text_atomic(path, svg.str());
    write_text_atomic(std::filesystem::path(path).replace_extension(".csv").string(), sidecar);
}

void write_dendrogram(const Dendrogram& tree, const std::string& path) {
    const std::size_t n = tree.leaf_count;
    const auto order = tree.leaf_order();
    std::vector<double> slot(n, 0.0);
    for (std::size_t i = 0; i < order.size(); ++i) slot[order[i]] = static_cast<double>(i);

    double max_height = 0.0;
    for (const auto& m : tree.merges) max_height = std::max(max_height, m.height);
    if (max_height == 0.0) max_height = 1.0;

    const double leaf_gap = 22.0;
    const double width = 90.0 + leaf_gap * static_cast<double>(n);
    const double plot_h = 360.0;
    const double top = 30.0, bottom = 120.0;
    const double height = top + plot_h + bottom;
    const auto xpos = [&](double s) { return 60.0 + leaf_gap * (s + 0.5); };
    const auto ypos = [&](double h) { return top + plot_h * (1.0 - h / max_height); };

    // node id -> (x slot, height)
    std::vector<double> node_x(n + tree.merges.size(), 0.0);
    std::vector<double> node_h(n + tree.merges.size(), 0.0);
    for (std::size_t i = 0; i < n; ++i) node_x[i] = slot[i];

    std::ostringstream svg;
    svg << svg_open(width, height);
    svg << "<line x1=\"50\" y1=\"" << fixed2(ypos(0)) << "\" x2=\"50\" y2=\"" << fixed2(ypos(max_height))
        << "\" stroke=\"#444444\"/>\n";
    for (int tick = 0; tick <= 4; ++tick) {
        const double h = max_height * tick / 4.0;
        svg << "<line x1=\"46\" y1=\"" << fixed2(ypos(h)) << "\" x2=\"50\" y2=\"" << fixed2(ypos(h))
            << "\" stroke=\"#444444\"/>\n";
        svg_text(svg, 40, ypos(h) + 4, fixed2(h), 10, "end");
    }

    for (std::size_t t = 0; t < tree.merges.size(); ++t) {
        const Merge& m = tree.merges[t];
        const double xl = node_x[m.left], xr = node_x[m.right];
        const double hl = node_h[m.left], hr = node_h[m.right];
        const double y = ypos(m.height);
        svg << "<path class=\"link\" d=\"M " << fixed2(xpos(xl)) << " " << fixed2(ypos(hl)) << " V "
            << fixed2(y) << " H " << fixed2(xpos(xr)) << " V " << fixed2(ypos(hr)) << "\" fill=\"none\" stroke=\"#1f77b4\"/>\n";
        node_x[n + t] = 0.5 * (xl + xr);
        node_h[n + t] = m.height;
    }

    for (std::size_t i = 0; i < n; ++i) {
        svg << "<g transform=\"translate(" << fixed2(xpos(slot[i])) << "," << fixed2(top + plot_h + 8)
            << ") rotate(60)\">";
        svg_text(svg, 0, 0, tree.labels[i], 10, "start");
        svg << "</g>\n";
    }
    svg << "</svg>\n";

    std::string sidecar;
    for (const auto& m : tree.merges)
        sidecar += std::to_string(m.left) + "," + std::to_string(m.right) + "," +
                   csv::format_double(m.height) + "\n";

    write_text_atomic(path, svg.str());
    write_text_atomic(std::filesystem::path(path).replace_extension(".txt").string(), sidecar);
}

void write_corr_heatmap(const CorrelationMatrix& corr, const std::string& path) {
    const std::size_t p = corr.size();
    const double cell = 26.0, margin_left = 130.0, margin_top = 20.0, margin_bottom = 130.0;
    const double width = margin_left + cell * static_cast<double>(p) + 30.0;
    const double height = margin_top + cell * static_cast<double>(p) + margin_bottom;

    const Rgb red{178, 24, 43}, white{255, 255, 255}, blue{33, 102, 172};

    std::ostringstream svg;
    svg << svg_open(width, height);
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j < p; ++j) {
            const double r = corr.at(i, j);
            const Rgb color = r >= 0.0 ? lerp(white, red, r) : lerp(white, blue, -r);
            const double x = margin_left + cell * static_cast<double>(j);
            const double y = margin_top + cell * static_cast<double>(i);
            svg << "<rect class=\"cell\" x=\"" << fixed2(x) << "\" y=\"" << fixed2(y) << "\" width=\""
                << fixed2(cell) << "\" height=\"" << fixed2(cell) << "\" fill=\"" << to_hex(color)
                << "\" stroke=\"#dddddd\"><title>" << corr.ids[i] << " / " << corr.ids[j] << ": "
                << fixed2(r) << "</title></rect>\n";
        }
    }
    for (std::size_t i = 0; i < p; ++i) {
        svg_text(svg, margin_left - 6, margin_top + cell * (static_cast<double>(i) + 0.7), corr.ids[i], 10, "end");
        svg << "<g transform=\"translate(" << fixed2(margin_left + cell * (static_cast<double>(i) + 0.7))
            << "," << fixed2(margin_top + cell * static_cast<double>(p) + 8) << ") rotate(60)\">";
        svg_text(svg, 0, 0, corr.ids[i], 10, "start");
        svg << "</g>\n";
    }
    svg << "</svg>\n";

    std::string sidecar = "id";
    for (const auto& id : corr.ids) sidecar += "," + csv::quote(id);
    sidecar += "\n";
    for (std::size_t i = 0; i < p; ++i) {
        sidecar += csv::quote(corr.ids[i]);
        for (std::size_t j = 0; j < p; ++j) sidecar += "," + csv::format_double(corr.at(i, j));
        sidecar += "\n";
    }

    write_text_atomic(path, svg.str());
    write_text_atomic(std::filesystem::path(path).replace_extension(".csv").string(), sidecar);
}

void write_describe_csv(const DescriptiveStats& stats, const std::string& path) {
    std::string out = csv::join_row({"indicator", "mean", "median", "sd", "min", "max", "count"});
    for (const auto& c : stats.columns)
        out += csv::join_row({c.id, csv::format_double(c.mean), csv::format_double(c.median),
                              csv::format_double(c.sd), csv::format_double(c.min),
                              csv::format_double(c.max), std::to_string(c.count)});
    write_text_atomic(path, out);
}

} // namespace regidx
