#include "regidx/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "regidx/cluster.hpp"
#include "regidx/config.hpp"
#include "regidx/error.hpp"
#include "regidx/exporters.hpp"
#include "regidx/panel.hpp"
#include "regidx/pca.hpp"
#include "regidx/rng.hpp"
#include "regidx/stats.hpp"
#include "regidx/version.hpp"

namespace regidx {

namespace {

namespace fs = std::filesystem;

struct FlagCapture {
    std::string data, spec, boundaries, years, scope, norm, retain, k, kmax, seed, restarts,
        linkage, out, config, colors;
};

void add_common_flags(CLI::App* cmd, FlagCapture& flags) {
    cmd->add_option("--data", flags.data, "panel CSV (region_code,region_name,year,indicator_id,value)");
    cmd->add_option("--spec", flags.spec, "indicator spec CSV (indicator_id,name,dimension,polarity,unit)");
    cmd->add_option("--boundaries", flags.boundaries, "GeoJSON FeatureCollection keyed by properties.code");
    cmd->add_option("--years", flags.years, "comma list of years (default: all panel years)");
    cmd->add_option("--scope", flags.scope, "economic | social | socioeconomic | all");
    cmd->add_option("--norm", flags.norm, "minmax | zscore");
    cmd->add_option("--retain", flags.retain, "kaiser | variance:<tau>");
    cmd->add_option("--k", flags.k, "cluster count in [2,12], or auto for the elbow choice");
    cmd->add_option("--kmax", flags.kmax, "largest k for the selection report");
    cmd->add_option("--seed", flags.seed, "random seed");
    cmd->add_option("--restarts", flags.restarts, "k-means restarts");
    cmd->add_option("--linkage", flags.linkage, "ward | average | complete");
    cmd->add_option("--out", flags.out, "output directory");
    cmd->add_option("--config", flags.config, "key = value config file; flags override it");
    cmd->add_option("--colors", flags.colors, "comma list of #rrggbb rating ramp stops, light to dark");
}

RunConfig resolve_config(const CLI::App* cmd, const FlagCapture& flags) {
    std::vector<std::pair<std::string, std::string>> overrides;
    const auto take = [&](const char* flag, const char* key, const std::string& value) {
        if (cmd->count(flag)) overrides.emplace_back(key, value);
    };
    take("--data", "data", flags.data);
    take("--spec", "spec", flags.spec);
    take("--boundaries", "boundaries", flags.boundaries);
    take("--years", "years", flags.years);
    take("--scope", "scope", flags.scope);
    take("--norm", "norm", flags.norm);
    take("--retain", "retain", flags.retain);
    take("--k", "k", flags.k);
    take("--kmax", "kmax", flags.kmax);
    take("--seed", "seed", flags.seed);
    take("--restarts", "restarts", flags.restarts);
    take("--linkage", "linkage", flags.linkage);
    take("--out", "out", flags.out);
    take("--colors", "colors", flags.colors);
    std::optional<std::string> config_path;
    if (cmd->count("--config")) config_path = flags.config;
    return load_config(config_path, overrides);
}

void require_inputs(const RunConfig& config) {
    if (config.data_path.empty()) raise("BadConfig", "data: a panel CSV is required (--data)");
    if (config.spec_path.empty()) raise("BadConfig", "spec: an indicator spec CSV is required (--spec)");
}

fs::path ensure_out_dir(const RunConfig& config) {
    fs::path dir(config.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) raise("FileNotWritable", "cannot create output directory " + dir.string());
    return dir;
}

class StageClock {
public:
    void run(const std::string& name, const std::function<void()>& body) {
        const auto start = std::chrono::steady_clock::now();
        body();
        const auto ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - start)
                            .count();
        std::printf("stage %-10s %8.1f ms\n", name.c_str(), ms);
        stages_.push_back(name);
    }
    const std::vector<std::string>& stages() const { return stages_; }

private:
    std::vector<std::string> stages_;
};

std::uint64_t scope_year_seed(std::uint64_t seed, std::size_t scope, int year) {
    return Rng::mix(seed, (static_cast<std::uint64_t>(scope + 1) << 32) ^
                              static_cast<std::uint64_t>(static_cast<std::uint32_t>(year)));
}

struct ClusterStageOutput {
    std::vector<ClusterTableRow> table_rows;
    RatingsMap ratings;
    std::map<std::size_t, std::size_t> k_used; // scope -> k
};

std::size_t choose_k(const RunConfig& config, std::size_t scope,
                     const std::vector<double>& pooled_values) {
    if (config.k) return *config.k;
    const KSelectionReport report = select_k(PointSet::from_values(pooled_values), config.k_max,
                                             config.seed, config.restarts);
    if (!report.elbow.k)
        raise("NoElbow", "scope " + std::string(scope_name(static_cast<Scope>(scope))) +
                             ": wcss curve shows no decisive elbow; pass --k explicitly");
    if (report.elbow.ambiguous) {
        std::string c;
        for (std::size_t i = 0; i < report.elbow.candidates.size(); ++i) {
            if (i) c += ", ";
            c += std::to_string(report.elbow.candidates[i]);
        }
        std::fprintf(stderr, "note: scope %s elbow is ambiguous (candidates %s); using k = %zu\n",
                     scope_name(static_cast<Scope>(scope)), c.c_str(), *report.elbow.k);
    }
    return *report.elbow.k;
}

ClusterStageOutput cluster_stage(const RunConfig& config, const IndexSeries& series) {
    ClusterStageOutput out;
    std::vector<int> years;
    for (const auto& key : series.rows)
        if (std::find(years.begin(), years.end(), key.year) == years.end()) years.push_back(key.year);
    std::sort(years.begin(), years.end());

    for (Scope scope : config.scopes) {
        const std::size_t s = static_cast<std::size_t>(scope);
        const std::size_t k = choose_k(config, s, series.values[s]);
        out.k_used[s] = k;

        for (int year : years) {
            std::vector<double> values;
            std::vector<std::size_t> row_index;
            for (std::size_t i = 0; i < series.row_count(); ++i) {
                if (series.rows[i].year != year) continue;
                values.push_back(series.values[s][i]);
                row_index.push_back(i);
            }
            if (values.empty()) continue;
            const ClusterResult result =
                kmeans_run(PointSet::from_values(values), k, scope_year_seed(config.seed, s, year),
                           config.restarts);
            const RatedClusters rated = label_clusters(result, PointSet::from_values(values));

            for (std::size_t i = 0; i < values.size(); ++i) {
                const auto& key = series.rows[row_index[i]];
                const int cluster = rated.result.assignments[i];
                out.table_rows.push_back({key.region_code, year, s, values[i],
                                          static_cast<int>(rated.order[cluster]),
                                          rated.labels[cluster]});
                out.ratings[{s, year, key.region_code}] =
                    RatingCell{static_cast<int>(rated.order[cluster]), rated.labels[cluster]};
            }
        }
    }
    std::sort(out.table_rows.begin(), out.table_rows.end(),
              [](const ClusterTableRow& a, const ClusterTableRow& b) {
                  if (a.scope != b.scope) return a.scope < b.scope;
                  if (a.year != b.year) return a.year < b.year;
                  return a.region_code < b.region_code;
              });
    return out;
}

std::vector<std::pair<std::string, KSelectionReport>> kselect_stage(const RunConfig& config,
                                                                    const IndexSeries& series) {
    std::vector<std::pair<std::string, KSelectionReport>> reports;
    for (Scope scope : config.scopes) {
        const std::size_t s = static_cast<std::size_t>(scope);
        reports.emplace_back(scope_name(scope),
                             select_k(PointSet::from_values(series.values[s]), config.k_max,
                                      config.seed, config.restarts));
    }
    return reports;
}

IndexSeries index_stage(const RunConfig& config, const IndicatorPanel& panel) {
    IndexRules rules;
    rules.norm = config.norm;
    rules.retention = config.retention;
    rules.missing = MissingPolicy::Drop;
    rules.years = config.years;
    return build_index_series(panel, rules);
}

int latest_year(const IndexSeries& series) {
    int year = series.rows.empty() ? 0 : series.rows.front().year;
    for (const auto& key : series.rows) year = std::max(year, key.year);
    return year;
}

std::vector<RegionRating> map_ratings(const IndexSeries& series, const ClusterStageOutput& clusters,
                                      std::size_t scope, int year) {
    std::vector<RegionRating> out;
    for (std::size_t i = 0; i < series.row_count(); ++i) {
        if (series.rows[i].year != year) continue;
        auto it = clusters.ratings.find({scope, year, series.rows[i].region_code});
        if (it == clusters.ratings.end()) continue;
        out.push_back({series.rows[i].region_code, series.region_names[i], series.values[scope][i],
                       it->second.cluster_id, it->second.label});
    }
    std::sort(out.begin(), out.end(),
              [](const RegionRating& a, const RegionRating& b) { return a.code < b.code; });
    return out;
}

Dendrogram dendrogram_stage(const RunConfig& config, const IndexSeries& series) {
    const int year = latest_year(series);
    std::vector<std::string> labels;
    std::vector<double> xs;
    for (std::size_t i = 0; i < series.row_count(); ++i) {
        if (series.rows[i].year != year) continue;
        labels.push_back(series.rows[i].region_code);
        for (std::size_t s = 0; s < kScopeCount; ++s) xs.push_back(series.values[s][i]);
    }
    return agglomerate(PointSet(kScopeCount, std::move(xs)), config.linkage, std::move(labels));
}

std::size_t map_scope(const RunConfig& config) {
    // the choropleth follows --scope when it names a single scope
    if (config.scopes.size() == 1) return static_cast<std::size_t>(config.scopes.front());
    return static_cast<std::size_t>(Scope::Socioeconomic);
}

int cmd_ingest(const RunConfig& config) {
    require_inputs(config);
    const IndicatorPanel panel = load_panel(config.data_path, config.spec_path);
    const ValidationReport report = validate_panel(panel);
    std::printf("panel: %zu regions x %zu years x %zu indicators\n", panel.regions().size(),
                panel.years().size(), panel.spec().size());
    std::printf("missing cells: %zu\n", report.missing.size());
    for (std::size_t i = 0; i < report.missing.size() && i < 10; ++i)
        std::printf("  missing (%s, %d, %s)\n", report.missing[i].region_code.c_str(),
                    report.missing[i].year, report.missing[i].indicator_id.c_str());
    if (report.missing.size() > 10) std::printf("  ... and %zu more\n", report.missing.size() - 10);
    std::printf("degenerate columns: %zu", report.degenerate_columns.size());
    for (const auto& id : report.degenerate_columns) std::printf(" %s", id.c_str());
    std::printf("\nout-of-range cells: %zu\n", report.out_of_range.size());
    for (const auto& [year, count] : report.row_counts)
        std::printf("year %d: %zu cells present\n", year, count);
    return 0;
}

int cmd_describe(const RunConfig& config) {
    require_inputs(config);
    const IndicatorPanel panel = load_panel(config.data_path, config.spec_path);
    const DataMatrix matrix = slice_matrix(panel, DimensionFilter::All, config.years, MissingPolicy::Drop);
    const fs::path out = ensure_out_dir(config) / "describe.csv";
    write_describe_csv(describe(matrix), out.string());
    std::printf("wrote %s\n", out.string().c_str());
    return 0;
}

int cmd_correlate(const RunConfig& config) {
    require_inputs(config);
    const IndicatorPanel panel = load_panel(config.data_path, config.spec_path);
    const DataMatrix matrix = slice_matrix(panel, DimensionFilter::All, config.years, MissingPolicy::Drop);
    const fs::path out = ensure_out_dir(config) / "corr.svg";
    write_corr_heatmap(correlation_matrix(matrix), out.string());
    std::printf("wrote %s and sidecar\n", out.string().c_str());
    return 0;
}

int cmd_index(const RunConfig& config) {
    require_inputs(config);
    const IndicatorPanel panel = load_panel(config.data_path, config.spec_path);
    const IndexSeries series = index_stage(config, panel);
    const fs::path out = ensure_out_dir(config) / "indices.csv";
    write_index_table(series, nullptr, config.scopes, out.string());
    std::printf("wrote %s (%zu rows)\n", out.string().c_str(), series.row_count());
    return 0;
}

int cmd_select_k(const RunConfig& config) {
    require_inputs(config);
    const IndicatorPanel panel = load_panel(config.data_path, config.spec_path);
    const IndexSeries series = index_stage(config, panel);
    const auto reports = kselect_stage(config, series);
    const fs::path out = ensure_out_dir(config) / "kselect.csv";
    write_kselect_csv(reports, out.string());
    for (const auto& [scope, report] : reports) {
        if (report.elbow.k)
            std::printf("scope %s: elbow k = %zu%s\n", scope.c_str(), *report.elbow.k,
                        report.elbow.ambiguous ? " (ambiguous)" : "");
        else
            std::printf("scope %s: no decisive elbow\n", scope.c_str());
    }
    std::printf("wrote %s\n", out.string().c_str());
    return 0;
}

int cmd_cluster(const RunConfig& config) {
    require_inputs(config);
    const IndicatorPanel panel = load_panel(config.data_path, config.spec_path);
    const IndexSeries series = index_stage(config, panel);
    const ClusterStageOutput clusters = cluster_stage(config, series);
    const fs::path out = ensure_out_dir(config) / "clusters.csv";
    write_clusters_csv(clusters.table_rows, out.string());
    std::printf("wrote %s (%zu rows)\n", out.string().c_str(), clusters.table_rows.size());
    return 0;
}

int cmd_dendrogram(const RunConfig& config) {
    require_inputs(config);
    const IndicatorPanel panel = load_panel(config.data_path, config.spec_path);
    const IndexSeries series = index_stage(config, panel);
    const fs::path out = ensure_out_dir(config) / "dendrogram.svg";
    write_dendrogram(dendrogram_stage(config, series), out.string());
    std::printf("wrote %s and sidecar\n", out.string().c_str());
    return 0;
}

int cmd_map(const RunConfig& config) {
    require_inputs(config);
    if (config.boundaries_path.empty())
        raise("BadConfig", "boundaries: a GeoJSON boundary file is required (--boundaries)");
    const IndicatorPanel panel = load_panel(config.data_path, config.spec_path);
    const IndexSeries series = index_stage(config, panel);
    const ClusterStageOutput clusters = cluster_stage(config, series);
    const BoundaryFile boundaries = load_boundaries(config.boundaries_path);
    const std::size_t scope = map_scope(config);
    const int year = latest_year(series);
    const auto ratings = map_ratings(series, clusters, scope, year);
    const fs::path out = ensure_out_dir(config) / "map.geojson";
    write_geojson(ratings, boundaries,
                  config.colors.empty() ? default_color_ramp() : config.colors,
                  clusters.k_used.at(scope), out.string());
    std::printf("wrote %s (%zu features, scope %s, year %d)\n", out.string().c_str(), ratings.size(),
                scope_name(static_cast<Scope>(scope)), year);
    return 0;
}

int cmd_pipeline(const RunConfig& config) {
    require_inputs(config);
    const fs::path dir = ensure_out_dir(config);
    StageClock clock;

    IndicatorPanel panel;
    clock.run("ingest", [&] {
        panel = load_panel(config.data_path, config.spec_path);
        const ValidationReport report = validate_panel(panel);
        std::printf("panel: %zu regions x %zu years x %zu indicators, %zu missing cells\n",
                    panel.regions().size(), panel.years().size(), panel.spec().size(),
                    report.missing.size());
    });

    IndexSeries series;
    clock.run("index", [&] { series = index_stage(config, panel); });

    std::vector<std::string> written;
    clock.run("select-k", [&] {
        const auto reports = kselect_stage(config, series);
        write_kselect_csv(reports, (dir / "kselect.csv").string());
        written.push_back("kselect.csv");
    });

    ClusterStageOutput clusters;
    clock.run("cluster", [&] {
        clusters = cluster_stage(config, series);
        write_clusters_csv(clusters.table_rows, (dir / "clusters.csv").string());
        written.push_back("clusters.csv");
    });

    clock.run("export", [&] {
        write_index_table(series, &clusters.ratings, config.scopes, (dir / "indices.csv").string());
        written.push_back("indices.csv");

        const DataMatrix matrix =
            slice_matrix(panel, DimensionFilter::All, config.years, MissingPolicy::Drop);
        write_corr_heatmap(correlation_matrix(matrix), (dir / "corr.svg").string());
        written.push_back("corr.svg");
        written.push_back("corr.csv");

        PlotSpec plot;
        plot.kind = PlotKind::Scatter;
        plot.x_column = "economic";
        plot.y_column = "social";
        plot.colors = config.colors.empty() ? default_color_ramp() : config.colors;
        write_scatter(series, clusters.ratings, plot, (dir / "scatter.svg").string());
        written.push_back("scatter.svg");
        written.push_back("scatter.csv");

        write_dendrogram(dendrogram_stage(config, series), (dir / "dendrogram.svg").string());
        written.push_back("dendrogram.svg");
        written.push_back("dendrogram.txt");

        if (!config.boundaries_path.empty()) {
            const BoundaryFile boundaries = load_boundaries(config.boundaries_path);
            const std::size_t scope = map_scope(config);
            const int year = latest_year(series);
            write_geojson(map_ratings(series, clusters, scope, year), boundaries,
                          config.colors.empty() ? default_color_ramp() : config.colors,
                          clusters.k_used.at(scope), (dir / "map.geojson").string());
            written.push_back("map.geojson");
        }
    });

    RunManifest manifest;
    manifest.tool_version = kVersion;
    manifest.config_echo = config.echo();
    manifest.stages = clock.stages();
    std::sort(written.begin(), written.end());
    for (const auto& name : written) {
        char hex[24];
        std::snprintf(hex, sizeof(hex), "%016llx",
                      static_cast<unsigned long long>(fnv1a64_file((dir / name).string())));
        manifest.outputs.push_back({name, std::string("fnv1a64:") + hex});
    }
    write_text_atomic((dir / "manifest.txt").string(), render_manifest(manifest));
    std::printf("wrote %s (%zu outputs)\n", (dir / "manifest.txt").string().c_str(),
                manifest.outputs.size());
    return 0;
}

} // namespace

int run_command(int argc, const char* const* argv) {
    CLI::App app{"regional indicator panels -> composite indices, rated clusters, maps"};
    app.set_version_flag("--version", std::string("regidx ") + kVersion);
    app.require_subcommand(0, 1);

    struct Sub {
        const char* name;
        const char* help;
        int (*fn)(const RunConfig&);
    };
    const Sub subs[] = {
        {"ingest", "load and validate the panel, print a report", cmd_ingest},
        {"describe", "descriptive statistics per indicator", cmd_describe},
        {"correlate", "correlation matrix heatmap + CSV", cmd_correlate},
        {"index", "composite indices per scope", cmd_index},
        {"select-k", "WCSS curve, elbow and validity indices", cmd_select_k},
        {"cluster", "k-means ratings per scope and year", cmd_cluster},
        {"dendrogram", "agglomerative dendrogram of the indices", cmd_dendrogram},
        {"map", "choropleth GeoJSON for the rated regions", cmd_map},
        {"pipeline", "run every stage and write a manifest", cmd_pipeline},
    };

    std::map<std::string, FlagCapture> captures;
    std::map<std::string, const Sub*> by_name;
    for (const auto& sub : subs) {
        CLI::App* cmd = app.add_subcommand(sub.name, sub.help);
        add_common_flags(cmd, captures[sub.name]);
        by_name[sub.name] = &sub;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e); // prints the usage message
        return 2;
    }

    const auto picked = app.get_subcommands();
    if (picked.empty()) {
        std::fprintf(stderr, "%s\n", app.help().c_str());
        return 2;
    }

    const std::string name = picked.front()->get_name();
    try {
        const RunConfig config = resolve_config(picked.front(), captures[name]);
        return by_name[name]->fn(config);
    } catch (const Error& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return e.name() == "BadConfig" ? 2 : 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "InternalError: %s\n", e.what());
        return 1;
    }
}

} // namespace regidx
