#include "scispace/pipeline.hpp"

#include "scispace/csv.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace scispace {

namespace fs = std::filesystem;

TableId table_from_string(const std::string& s) {
    if (s == "4a") return TableId::t4a;
    if (s == "4b") return TableId::t4b;
    if (s == "6") return TableId::t6;
    if (s == "7") return TableId::t7;
    fail(ErrorCode::InvalidConfig, "unknown table '" + s + "' (expected 4a, 4b, 6 or 7)");
}

const char* table_name(TableId t) {
    switch (t) {
    case TableId::t4a: return "4a";
    case TableId::t4b: return "4b";
    case TableId::t6: return "6";
    case TableId::t7: return "7";
    }
    return "?";
}

Analysis::Analysis(Panel filtered_panel, PeriodGrid grid)
    : panel_(std::move(filtered_panel)), grid_(std::move(grid)) {
    grid_.validate();
}

Analysis Analysis::load(const std::string& input_path, double min_docs, int reference_year,
                        const PeriodGrid& grid) {
    Panel raw = ingest_csv(input_path);
    Panel filtered = filter_countries(raw, min_docs, reference_year);
    return Analysis(std::move(filtered), grid);
}

const RcaSlice& Analysis::rca_slice(int year, Metric metric) {
    const auto key = std::make_pair(year, static_cast<int>(metric));
    auto it = rca_cache_.find(key);
    if (it == rca_cache_.end()) {
        it = rca_cache_.emplace(key, rca(totals(panel_, year, metric), panel_)).first;
    }
    return it->second;
}

const RcaFlags& Analysis::flags(int year, Metric metric) {
    const auto key = std::make_pair(year, static_cast<int>(metric));
    auto it = flag_cache_.find(key);
    if (it == flag_cache_.end()) {
        it = flag_cache_.emplace(key, rca_flag(rca_slice(year, metric))).first;
    }
    return it->second;
}

const ProximityMatrix& Analysis::phi(int year, Metric metric) {
    const auto key = std::make_pair(year, static_cast<int>(metric));
    auto it = phi_cache_.find(key);
    if (it == phi_cache_.end()) {
        it = phi_cache_.emplace(key, proximity_matrix(flags(year, metric))).first;
    }
    return it->second;
}

const DensityField& Analysis::density_field(Metric metric) {
    const int key = static_cast<int>(metric);
    auto it = density_cache_.find(key);
    if (it == density_cache_.end()) {
        std::map<int, ProximityMatrix> phis;
        std::map<int, RcaFlags> flag_map;
        for (int year : grid_.endpoint_years()) {
            phis.emplace(year, phi(year, metric));
            flag_map.emplace(year, flags(year, metric));
        }
        it = density_cache_.emplace(key, build_density_field(phis, flag_map)).first;
    }
    return it->second;
}

const GrowthPanel& Analysis::growth_rca(Metric metric) {
    const auto key = std::make_pair(static_cast<int>(metric),
                                    static_cast<int>(GrowthTarget::rca));
    auto it = growth_cache_.find(key);
    if (it == growth_cache_.end()) {
        std::map<int, RcaSlice> slices;
        for (int year : grid_.endpoint_years()) slices.emplace(year, rca_slice(year, metric));
        it = growth_cache_.emplace(key, growth_panel(slices, grid_)).first;
    }
    return it->second;
}

const GrowthPanel& Analysis::growth_raw(Metric metric) {
    const auto key = std::make_pair(static_cast<int>(metric),
                                    static_cast<int>(GrowthTarget::raw_count));
    auto it = growth_cache_.find(key);
    if (it == growth_cache_.end()) {
        it = growth_cache_.emplace(key, raw_growth_panel(panel_, metric, grid_)).first;
    }
    return it->second;
}

RegressionDataset Analysis::design(TableId table, int column) {
    if (column < 1 || column > 4) {
        fail(ErrorCode::InvalidConfig, "column must be between 1 and 4");
    }
    const Subsample sub = column % 2 == 1 ? Subsample::rca_lt_1 : Subsample::rca_ge_1;
    Metric metric = Metric::documents;
    DensityMode mode = DensityMode::level_at_start;
    bool interaction = false;
    GrowthTarget target = GrowthTarget::rca;

    switch (table) {
    case TableId::t4a:
    case TableId::t4b:
        metric = table == TableId::t4a ? Metric::documents : Metric::citations;
        interaction = column >= 3;
        break;
    case TableId::t6:
        metric = column <= 2 ? Metric::documents : Metric::citations;
        mode = DensityMode::delta_over_period;
        break;
    case TableId::t7:
        metric = column <= 2 ? Metric::documents : Metric::citations;
        target = GrowthTarget::raw_count;
        break;
    }

    const GrowthPanel& growth =
        target == GrowthTarget::rca ? growth_rca(metric) : growth_raw(metric);
    return build_design(growth, density_field(metric), mode, sub, interaction);
}

RegressionResult Analysis::fit_table(TableId table, int column, const FitOptions& options) {
    return fit_fe(design(table, column), options);
}

std::map<TransitionGroup, std::vector<double>> Analysis::transition_densities(int figure,
                                                                              Metric metric,
                                                                              int period_index) {
    if (figure != 1 && figure != 2) {
        fail(ErrorCode::InvalidConfig, "figure must be 1 or 2");
    }
    const auto n_periods = static_cast<int>(grid_.periods.size());
    if (period_index >= n_periods) {
        fail(ErrorCode::InvalidConfig, "period index out of range");
    }
    const DensityField& field = density_field(metric);

    std::map<TransitionGroup, std::vector<double>> out;
    if (figure == 1) {
        out[TransitionGroup::gained];
        out[TransitionGroup::stayed_without];
    } else {
        out[TransitionGroup::kept];
        out[TransitionGroup::lost];
    }

    for (int p = 0; p < n_periods; ++p) {
        if (period_index >= 0 && p != period_index) continue;
        const Period& period = grid_.periods[p];
        const RcaFlags& before = flags(period.start, metric);
        const RcaFlags& after = flags(period.end, metric);
        const auto& densities = field.by_year.at(period.start);
        for (int c = 0; c < panel_.catalogs()->n_countries(); ++c) {
            const DensityVector& dv = densities[c];
            for (int j = 0; j < panel_.catalogs()->n_disciplines(); ++j) {
                if (!dv.defined(j)) continue;
                const bool had = before.flags(c, j);
                if ((figure == 1) == had) continue;
                TransitionGroup group;
                if (had) {
                    group = after.flags(c, j) ? TransitionGroup::kept : TransitionGroup::lost;
                } else {
                    group = after.flags(c, j) ? TransitionGroup::gained
                                              : TransitionGroup::stayed_without;
                }
                out[group].push_back(dv.density(j));
            }
        }
    }
    return out;
}

std::string significance_stars(double estimate, double se, double df) {
    if (!(se > 0.0) || df < 1.0) return "";
    boost::math::students_t dist(df);
    const double t = std::fabs(estimate / se);
    const double p = 2.0 * boost::math::cdf(boost::math::complement(dist, t));
    if (p < 0.01) return "***";
    if (p < 0.05) return "**";
    if (p < 0.1) return "*";
    return "";
}

std::string sha256_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::IoError, "cannot open '" + path + "' for hashing");

    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
        if (ctx) EVP_MD_CTX_free(ctx);
        fail(ErrorCode::IoError, "cannot initialize sha256");
    }
    char buf[1 << 16];
    while (in) {
        in.read(buf, sizeof(buf));
        const std::streamsize got = in.gcount();
        if (got > 0 && EVP_DigestUpdate(ctx, buf, static_cast<size_t>(got)) != 1) {
            EVP_MD_CTX_free(ctx);
            fail(ErrorCode::IoError, "sha256 update failed");
        }
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx, digest, &len) != 1) {
        EVP_MD_CTX_free(ctx);
        fail(ErrorCode::IoError, "sha256 finalize failed");
    }
    EVP_MD_CTX_free(ctx);

    std::string hex;
    hex.reserve(2 * len);
    static const char* digits = "0123456789abcdef";
    for (unsigned int i = 0; i < len; ++i) {
        hex += digits[digest[i] >> 4];
        hex += digits[digest[i] & 0xF];
    }
    return hex;
}

namespace {

std::string fmt(double v) { return csv::format_double(v); }

std::string fmt_or_blank(double v) { return std::isnan(v) ? std::string() : fmt(v); }

void write_rca_csv(Analysis& analysis, Metric metric, const std::string& path) {
    csv::Writer out(path);
    out.row({"year", "country", "discipline", "rca", "flag"});
    const auto& cat = *analysis.panel().catalogs();
    for (int year : analysis.grid().endpoint_years()) {
        const RcaSlice& slice = analysis.rca_slice(year, metric);
        const RcaFlags& flags = analysis.flags(year, metric);
        for (int c = 0; c < cat.n_countries(); ++c) {
            for (int i = 0; i < cat.n_disciplines(); ++i) {
                out.row({std::to_string(year), cat.countries[c], cat.disciplines[i],
                         fmt_or_blank(slice.values(c, i)), flags.flags(c, i) ? "1" : "0"});
            }
        }
    }
    out.close();
}

void write_proximity_csv(Analysis& analysis, Metric metric, const std::string& path) {
    csv::Writer out(path);
    out.row({"year", "discipline_a", "discipline_b", "phi"});
    const auto& cat = *analysis.panel().catalogs();
    for (int year : analysis.grid().endpoint_years()) {
        const ProximityMatrix& prox = analysis.phi(year, metric);
        for (int i = 0; i < cat.n_disciplines(); ++i) {
            for (int j = i; j < cat.n_disciplines(); ++j) {
                out.row({std::to_string(year), cat.disciplines[i], cat.disciplines[j],
                         fmt(prox.phi(i, j))});
            }
        }
    }
    out.close();
}

void write_density_csv(Analysis& analysis, Metric metric, const std::string& path) {
    csv::Writer out(path);
    out.row({"year", "country", "discipline", "density"});
    const auto& cat = *analysis.panel().catalogs();
    const DensityField& field = analysis.density_field(metric);
    for (const auto& [year, per_country] : field.by_year) {
        for (int c = 0; c < cat.n_countries(); ++c) {
            for (int j = 0; j < cat.n_disciplines(); ++j) {
                out.row({std::to_string(year), cat.countries[c], cat.disciplines[j],
                         fmt_or_blank(per_country[c].density(j))});
            }
        }
    }
    out.close();
}

void write_growth_csv(Analysis& analysis, Metric metric, const std::string& path) {
    csv::Writer out(path);
    out.row({"country", "discipline", "period_start", "period_end", "start_rca", "growth"});
    const auto& cat = *analysis.panel().catalogs();
    const GrowthPanel& growth = analysis.growth_rca(metric);
    for (const GrowthRow& row : growth.rows) {
        const Period& p = growth.grid.periods[row.period];
        out.row({cat.countries[row.country], cat.disciplines[row.discipline],
                 std::to_string(p.start), std::to_string(p.end), fmt(row.start_value),
                 fmt(row.growth)});
    }
    out.close();
}

void write_table_csv(Analysis& analysis, TableId table, const RunConfig& config,
                     const std::string& path) {
    std::vector<int> columns;
    if (table == TableId::t4a || table == TableId::t4b) {
        columns = config.with_interaction ? std::vector<int>{1, 2, 3, 4}
                                          : std::vector<int>{1, 2};
    } else {
        columns = {1, 2, 3, 4};
    }

    csv::Writer out(path);
    out.row({"column", "term", "estimate", "se", "stars"});
    FitOptions options;
    options.cluster = config.cluster;
    for (int column : columns) {
        RegressionResult res = analysis.fit_table(table, column, options);
        const double df = static_cast<double>(res.n_clusters) - 1.0;
        const std::string col = std::to_string(column);
        for (size_t i = 0; i < res.names.size(); ++i) {
            const double est = res.coefficients(static_cast<Eigen::Index>(i));
            const double se = std::sqrt(res.vcov(static_cast<Eigen::Index>(i),
                                                 static_cast<Eigen::Index>(i)));
            out.row({col, res.names[i], fmt(est), fmt(se), significance_stars(est, se, df)});
        }
        if (res.with_interaction) {
            MarginalEffects me = marginal_effects(res, res.mean_rca, res.mean_density);
            out.row({col, "me_density", fmt(me.ame_density), fmt(me.se_density),
                     significance_stars(me.ame_density, me.se_density, df)});
            out.row({col, "me_rca", fmt(me.ame_rca), fmt(me.se_rca),
                     significance_stars(me.ame_rca, me.se_rca, df)});
        }
        out.row({col, "n_obs", std::to_string(res.n_obs), "", ""});
        out.row({col, "n_units", std::to_string(res.n_units), "", ""});
        out.row({col, "n_clusters", std::to_string(res.n_clusters), "", ""});
        out.row({col, "r2_within", fmt(res.r_squared_within), "", ""});
        out.row({col, "mean_rca", fmt(res.mean_rca), "", ""});
        out.row({col, "mean_density", fmt(res.mean_density), "", ""});
        out.row({col, "n_dropped_join", std::to_string(res.n_dropped_join), "", ""});
        out.row({col, "cluster_level", res.cluster_level, "", ""});
        out.row({col, "density_term", res.density_label, "", ""});
        out.row({col, "subsample", subsample_name(res.subsample), "", ""});
    }
    out.close();
}

void write_projections_csv(Analysis& analysis, const RunConfig& config, int base_year,
                           const std::map<std::string, std::string>* areas,
                           const std::string& path) {
    csv::Writer out(path);
    out.row({"metric", "country", "discipline", "projected_growth", "base_rca", "main_area"});
    FitOptions options;
    options.cluster = config.cluster;
    for (Metric metric : config.metrics) {
        const TableId table = metric == Metric::documents ? TableId::t4a : TableId::t4b;
        const int column = config.with_interaction ? 3 : 1;
        RegressionResult res = analysis.fit_table(table, column, options);
        const RcaSlice& rca = analysis.rca_slice(base_year, metric);
        const RcaFlags& flags = analysis.flags(base_year, metric);
        const ProximityMatrix& phi = analysis.phi(base_year, metric);
        for (const std::string& country : analysis.panel().catalogs()->countries) {
            DensityVector density = avg_proximity(phi, flags, country);
            ProjectionReport report = project_growth(res, density, rca, country,
                                                     ProjectionFormula::interaction, areas);
            for (const ProjectionRow& row : report.rows) {
                out.row({metric_name(metric), country, row.discipline,
                         fmt(row.projected_growth), fmt(row.base_rca), row.main_area});
            }
        }
    }
    out.close();
}

} // namespace

Manifest run_pipeline(const RunConfig& config) {
    if (config.input_path.empty()) fail(ErrorCode::InvalidConfig, "input path is empty");
    if (config.output_dir.empty()) fail(ErrorCode::InvalidConfig, "output directory is empty");
    if (config.metrics.empty()) fail(ErrorCode::InvalidConfig, "no metrics requested");
    config.grid.validate();

    std::string stage = "ingest";
    std::vector<std::string> written;
    auto cleanup = [&written]() {
        std::error_code ec;
        for (const std::string& p : written) fs::remove(p, ec);
    };

    try {
        Analysis analysis =
            Analysis::load(config.input_path, config.min_docs, config.reference_year,
                           config.grid);

        stage = "validate";
        for (int year : config.grid.endpoint_years()) {
            if (!analysis.panel().year_in_range(year)) {
                fail(ErrorCode::YearOutOfRange, "period endpoint " + std::to_string(year) +
                                                    " outside panel years " +
                                                    std::to_string(analysis.panel().year_min()) +
                                                    ".." +
                                                    std::to_string(analysis.panel().year_max()));
            }
        }
        const int base_year = config.projection_base_year < 0 ? config.reference_year
                                                              : config.projection_base_year;
        if (!analysis.panel().year_in_range(base_year)) {
            fail(ErrorCode::YearOutOfRange,
                 "projection base year " + std::to_string(base_year) + " outside panel years");
        }
        std::map<std::string, std::string> areas;
        if (!config.areas_path.empty()) areas = load_main_areas(config.areas_path);

        fs::create_directories(config.output_dir);
        auto target = [&](const std::string& name) {
            std::string path = (fs::path(config.output_dir) / name).string();
            written.push_back(path);
            return path;
        };

        stage = "filter";
        serialize_csv(analysis.panel(), target("panel_filtered.csv"));

        for (Metric metric : config.metrics) {
            const std::string suffix = std::string("_") + metric_name(metric) + ".csv";
            stage = std::string("rca ") + metric_name(metric);
            write_rca_csv(analysis, metric, target("rca" + suffix));
            stage = std::string("proximity ") + metric_name(metric);
            write_proximity_csv(analysis, metric, target("proximity" + suffix));
            stage = std::string("density ") + metric_name(metric);
            write_density_csv(analysis, metric, target("density" + suffix));
            stage = std::string("growth ") + metric_name(metric);
            write_growth_csv(analysis, metric, target("growth_rca" + suffix));
        }

        for (TableId table : {TableId::t4a, TableId::t4b, TableId::t6, TableId::t7}) {
            stage = std::string("regress table_") + table_name(table);
            write_table_csv(analysis, table, config,
                            target(std::string("table_") + table_name(table) + ".csv"));
        }

        stage = "project";
        write_projections_csv(analysis, config, base_year,
                              config.areas_path.empty() ? nullptr : &areas,
                              target("projections.csv"));

        stage = "manifest";
        Manifest manifest;
        for (const std::string& path : written) {
            ManifestEntry entry;
            entry.name = fs::path(path).filename().string();
            entry.sha256 = sha256_file(path);
            entry.bytes = static_cast<std::uint64_t>(fs::file_size(path));
            manifest.files.push_back(std::move(entry));
        }
        std::sort(manifest.files.begin(), manifest.files.end(),
                  [](const ManifestEntry& a, const ManifestEntry& b) { return a.name < b.name; });

        nlohmann::ordered_json doc;
        doc["files"] = nlohmann::ordered_json::array();
        for (const ManifestEntry& entry : manifest.files) {
            doc["files"].push_back({{"name", entry.name},
                                    {"sha256", entry.sha256},
                                    {"bytes", entry.bytes}});
        }
        const std::string manifest_path =
            (fs::path(config.output_dir) / "manifest.json").string();
        written.push_back(manifest_path);
        std::ofstream out(manifest_path, std::ios::binary);
        if (!out) fail(ErrorCode::IoError, "cannot write '" + manifest_path + "'");
        out << doc.dump(2) << '\n';
        out.close();
        if (!out) fail(ErrorCode::IoError, "failed writing '" + manifest_path + "'");
        return manifest;
    } catch (const Error& e) {
        cleanup();
        throw Error(e.code(), "stage " + stage + ": " + e.what());
    } catch (const std::exception& e) {
        cleanup();
        throw Error(ErrorCode::IoError, "stage " + stage + ": " + e.what());
    }
}

} // namespace scispace
