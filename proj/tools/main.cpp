#include "CLI11.hpp"

#include "scispace/csv.hpp"
#include "scispace/pipeline.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace scispace;

// CSV destination that treats "-" (or empty) as stdout.
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (path.empty() || path == "-") {
            out_ = &std::cout;
            return;
        }
        file_.open(path, std::ios::binary);
        if (!file_) fail(ErrorCode::IoError, "cannot write '" + path + "'");
        out_ = &file_;
    }

    void row(const std::vector<std::string>& fields) {
        for (size_t i = 0; i < fields.size(); ++i) {
            if (i) *out_ << ',';
            *out_ << csv::quote(fields[i]);
        }
        *out_ << '\n';
    }

private:
    std::ofstream file_;
    std::ostream* out_ = nullptr;
};

ClusterLevel parse_cluster(const std::string& s) {
    if (s == "country") return ClusterLevel::country;
    if (s == "country-discipline") return ClusterLevel::country_discipline;
    fail(ErrorCode::InvalidConfig,
         "cluster must be 'country' or 'country-discipline', got '" + s + "'");
}

std::vector<Metric> parse_metrics(const std::string& text) {
    std::vector<Metric> metrics;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) {
        if (!token.empty()) metrics.push_back(metric_from_string(token));
    }
    if (metrics.empty()) fail(ErrorCode::InvalidConfig, "no metrics in '" + text + "'");
    return metrics;
}

std::string fmt(double v) { return csv::format_double(v); }

std::string fmt_or_blank(double v) { return std::isnan(v) ? std::string() : fmt(v); }

void print_regression(const RegressionResult& res, TableId table, int column) {
    const double df = static_cast<double>(res.n_clusters) - 1.0;
    std::printf("table %s column %d: subsample %s, %s density term, %s\n", table_name(table),
                column, subsample_name(res.subsample), res.density_label.c_str(),
                res.with_interaction ? "with interaction" : "no interaction");
    std::printf("%-22s %14s %14s\n", "term", "estimate", "se");
    for (size_t i = 0; i < res.names.size(); ++i) {
        const double est = res.coefficients(static_cast<Eigen::Index>(i));
        const double se =
            std::sqrt(res.vcov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)));
        std::printf("%-22s %14.6g %14.6g %s\n", res.names[i].c_str(), est, se,
                    significance_stars(est, se, df).c_str());
    }
    if (res.with_interaction) {
        MarginalEffects me = marginal_effects(res, res.mean_rca, res.mean_density);
        std::printf("marginal effects at means (rca %.6g, density %.6g):\n", me.mean_rca,
                    me.mean_density);
        std::printf("%-22s %14.6g %14.6g %s\n", "me_density", me.ame_density, me.se_density,
                    significance_stars(me.ame_density, me.se_density, df).c_str());
        std::printf("%-22s %14.6g %14.6g %s\n", "me_rca", me.ame_rca, me.se_rca,
                    significance_stars(me.ame_rca, me.se_rca, df).c_str());
    }
    std::printf("n_obs %ld   n_units %ld   n_clusters %ld   within R2 %.6g\n", res.n_obs,
                res.n_units, res.n_clusters, res.r_squared_within);
    std::printf("clustered by %s; rows dropped on density join: %ld\n", res.cluster_level.c_str(),
                res.n_dropped_join);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reconstructs a scientific discipline space from a country x discipline x year "
                 "panel: revealed comparative advantage, proximity, density, growth, "
                 "fixed-effects regressions and growth projections."};
    app.require_subcommand(1);
    argv = app.ensure_utf8(argv);

    std::string input;
    std::string output = "-";
    std::string output_dir = "out";
    std::string periods_text;
    std::string metrics_text = "documents,citations";
    std::string cluster_text = "country-discipline";
    std::string areas_path;
    double min_docs = 100;
    int reference_year = 2019;
    int base_year = -1;
    bool interaction = true;
    std::uint64_t seed = 42;

    app.set_config("--config", "", "key=value file; every key mirrors a long option");
    app.add_option("--input", input, "long-form panel CSV (country,discipline,year,documents,citations)");
    app.add_option("--output", output, "destination for subcommand CSV output ('-' = stdout)")
        ->capture_default_str();
    app.add_option("--output-dir", output_dir, "directory for full pipeline artifacts")
        ->capture_default_str();
    app.add_option("--min-docs", min_docs,
                   "keep countries with at least this many documents in the reference year")
        ->capture_default_str();
    app.add_option("--reference-year", reference_year, "year the country filter applies to")
        ->capture_default_str();
    app.add_option("--periods", periods_text,
                   "period grid like 1996-2000,2000-2004 (default: built-in 1996..2019 grid)");
    app.add_option("--metrics", metrics_text, "comma-separated: documents,citations")
        ->capture_default_str();
    app.add_option("--cluster", cluster_text, "country or country-discipline")
        ->capture_default_str();
    app.add_flag("--interaction,!--no-interaction", interaction,
                 "fit the interaction columns and project with them");
    app.add_option("--areas", areas_path, "optional discipline,main_area CSV for projections");
    app.add_option("--base-year", base_year, "projection base year (default: reference year)");
    app.add_option("--seed", seed, "seed for simulation oracles; the analytics are seed-free")
        ->capture_default_str();

    auto* ingest_cmd =
        app.add_subcommand("ingest", "validate, filter and canonicalize the input panel");
    ingest_cmd->fallthrough();

    auto* rca_cmd = app.add_subcommand("rca", "revealed comparative advantage for one year");
    rca_cmd->fallthrough();
    int rca_year = 0;
    std::string rca_metric = "documents";
    rca_cmd->add_option("--year", rca_year, "panel year")->required();
    rca_cmd->add_option("--metric", rca_metric, "documents or citations")->capture_default_str();

    auto* prox_cmd = app.add_subcommand("proximity", "discipline proximity matrix for one year");
    prox_cmd->fallthrough();
    int prox_year = 0;
    std::string prox_metric = "documents";
    prox_cmd->add_option("--year", prox_year, "panel year")->required();
    prox_cmd->add_option("--metric", prox_metric, "documents or citations")->capture_default_str();

    auto* density_cmd =
        app.add_subcommand("density", "average proximity around each discipline for one country");
    density_cmd->fallthrough();
    int density_year = 0;
    std::string density_country;
    std::string density_metric = "documents";
    density_cmd->add_option("--year", density_year, "panel year")->required();
    density_cmd->add_option("--country", density_country, "country id")->required();
    density_cmd->add_option("--metric", density_metric, "documents or citations")
        ->capture_default_str();

    auto* growth_cmd = app.add_subcommand("growth", "annualized growth over the period grid");
    growth_cmd->fallthrough();
    std::string growth_target = "rca";
    std::string growth_metric = "documents";
    growth_cmd->add_option("--target", growth_target, "rca or raw")->capture_default_str();
    growth_cmd->add_option("--metric", growth_metric, "documents or citations")
        ->capture_default_str();

    auto* regress_cmd =
        app.add_subcommand("regress", "one fixed-effects regression column with clustered errors");
    regress_cmd->fallthrough();
    std::string regress_table;
    int regress_column = 0;
    regress_cmd->add_option("--table", regress_table, "4a, 4b, 6 or 7")->required();
    regress_cmd->add_option("--column", regress_column, "1..4")->required();

    auto* project_cmd =
        app.add_subcommand("project", "projected density-channel RCA growth per discipline");
    project_cmd->fallthrough();
    std::string project_country;
    std::string project_metric = "documents";
    int project_top = 0;
    bool project_ame = false;
    std::string figure3_path;
    project_cmd->add_option("--country", project_country, "country id")->required();
    project_cmd->add_option("--metric", project_metric, "documents or citations")
        ->capture_default_str();
    project_cmd->add_option("--top", project_top, "emit only the bottom/top k disciplines");
    project_cmd->add_flag("--ame", project_ame,
                          "use the at-means effect instead of the per-discipline slope");
    project_cmd->add_option("--emit-figure3", figure3_path,
                            "also write per-discipline density,projection pairs to this CSV");

    auto* report_cmd = app.add_subcommand("report", "descriptive statistics and distributions");
    report_cmd->require_subcommand(1);
    report_cmd->fallthrough();
    auto* summary_cmd =
        report_cmd->add_subcommand("summary", "count/mean/sd/min/max per regression variable");
    summary_cmd->fallthrough();
    std::string summary_table;
    summary_cmd->add_option("--table", summary_table, "2 (documents) or 3 (citations)")
        ->required();
    auto* kde_cmd = report_cmd->add_subcommand(
        "kde", "kernel density of period-start density by flag transition");
    kde_cmd->fallthrough();
    int kde_figure = 0;
    std::string kde_metric = "documents";
    int kde_period = -1;
    double kde_bandwidth = 0.0;
    kde_cmd->add_option("--figure", kde_figure,
                        "1: starts without advantage; 2: starts with advantage")
        ->required();
    kde_cmd->add_option("--metric", kde_metric, "documents or citations")->capture_default_str();
    kde_cmd->add_option("--period", kde_period, "restrict to one grid period (0-based index)");
    kde_cmd->add_option("--bandwidth", kde_bandwidth, "kernel bandwidth (default: Silverman)");

    auto* run_cmd = app.add_subcommand("run", "full pipeline into --output-dir with a manifest");
    run_cmd->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        auto grid = [&]() {
            return periods_text.empty() ? PeriodGrid::default_grid()
                                        : PeriodGrid::parse(periods_text);
        };
        auto analysis = [&]() {
            if (input.empty()) fail(ErrorCode::InvalidConfig, "--input is required");
            return Analysis::load(input, min_docs, reference_year, grid());
        };
        FitOptions fit_options;
        fit_options.cluster = parse_cluster(cluster_text);

        if (*ingest_cmd) {
            Analysis a = analysis();
            if (output.empty() || output == "-") {
                serialize_csv(a.panel(), std::cout);
            } else {
                serialize_csv(a.panel(), output);
            }
        } else if (*rca_cmd) {
            Analysis a = analysis();
            const RcaSlice& slice = a.rca_slice(rca_year, metric_from_string(rca_metric));
            const Catalogs& cat = *a.panel().catalogs();
            Sink sink(output);
            sink.row({"country", "discipline", "rca"});
            for (int c = 0; c < cat.n_countries(); ++c) {
                for (int i = 0; i < cat.n_disciplines(); ++i) {
                    sink.row({cat.countries[c], cat.disciplines[i],
                              fmt_or_blank(slice.values(c, i))});
                }
            }
        } else if (*prox_cmd) {
            Analysis a = analysis();
            const ProximityMatrix& prox = a.phi(prox_year, metric_from_string(prox_metric));
            const Catalogs& cat = *a.panel().catalogs();
            Sink sink(output);
            sink.row({"discipline_i", "discipline_j", "phi"});
            for (int i = 0; i < cat.n_disciplines(); ++i) {
                for (int j = i; j < cat.n_disciplines(); ++j) {
                    sink.row({cat.disciplines[i], cat.disciplines[j], fmt(prox.phi(i, j))});
                }
            }
        } else if (*density_cmd) {
            Analysis a = analysis();
            const Metric metric = metric_from_string(density_metric);
            DensityVector dv = avg_proximity(a.phi(density_year, metric),
                                             a.flags(density_year, metric), density_country);
            const Catalogs& cat = *a.panel().catalogs();
            Sink sink(output);
            sink.row({"discipline", "avg_proximity"});
            for (int j = 0; j < cat.n_disciplines(); ++j) {
                sink.row({cat.disciplines[j], fmt_or_blank(dv.density(j))});
            }
        } else if (*growth_cmd) {
            Analysis a = analysis();
            const Metric metric = metric_from_string(growth_metric);
            const GrowthPanel* panel = nullptr;
            if (growth_target == "rca") {
                panel = &a.growth_rca(metric);
            } else if (growth_target == "raw") {
                panel = &a.growth_raw(metric);
            } else {
                fail(ErrorCode::InvalidConfig,
                     "target must be 'rca' or 'raw', got '" + growth_target + "'");
            }
            const Catalogs& cat = *a.panel().catalogs();
            Sink sink(output);
            sink.row({"country", "discipline", "period_start", "period_end", "start_rca",
                      "growth"});
            for (const GrowthRow& row : panel->rows) {
                const Period& p = panel->grid.periods[row.period];
                sink.row({cat.countries[row.country], cat.disciplines[row.discipline],
                          std::to_string(p.start), std::to_string(p.end), fmt(row.start_value),
                          fmt(row.growth)});
            }
        } else if (*regress_cmd) {
            Analysis a = analysis();
            const TableId table = table_from_string(regress_table);
            RegressionResult res = a.fit_table(table, regress_column, fit_options);
            print_regression(res, table, regress_column);
        } else if (*project_cmd) {
            Analysis a = analysis();
            const Metric metric = metric_from_string(project_metric);
            const int by = base_year < 0 ? reference_year : base_year;
            const TableId table = metric == Metric::documents ? TableId::t4a : TableId::t4b;
            RegressionResult res = a.fit_table(table, interaction ? 3 : 1, fit_options);
            const RcaSlice& slice = a.rca_slice(by, metric);
            DensityVector dv =
                avg_proximity(a.phi(by, metric), a.flags(by, metric), project_country);
            std::map<std::string, std::string> areas;
            if (!areas_path.empty()) areas = load_main_areas(areas_path);
            ProjectionReport report = project_growth(
                res, dv, slice, project_country,
                project_ame ? ProjectionFormula::ame : ProjectionFormula::interaction,
                areas_path.empty() ? nullptr : &areas);

            std::vector<ProjectionRow> rows;
            if (project_top > 0) {
                RankedDisciplines ranked = rank_disciplines(report, project_top);
                if (ranked.truncated) {
                    std::cerr << "note: only " << report.rows.size()
                              << " disciplines available for --top " << project_top << "\n";
                }
                rows = ranked.bottom;
                rows.insert(rows.end(), ranked.top.begin(), ranked.top.end());
            } else {
                rows = report.rows;
            }
            Sink sink(output);
            sink.row({"discipline", "projection", "rca_base", "main_area"});
            for (const ProjectionRow& row : rows) {
                sink.row({row.discipline, fmt(row.projected_growth), fmt(row.base_rca),
                          row.main_area});
            }
            if (!figure3_path.empty()) {
                const Catalogs& cat = *a.panel().catalogs();
                Sink fig(figure3_path);
                fig.row({"discipline", "density", "projection"});
                for (const ProjectionRow& row : report.rows) {
                    const int j = cat.discipline(row.discipline);
                    fig.row({row.discipline, fmt(dv.density(j)), fmt(row.projected_growth)});
                }
            }
        } else if (*summary_cmd) {
            Analysis a = analysis();
            Metric metric;
            if (summary_table == "2") {
                metric = Metric::documents;
            } else if (summary_table == "3") {
                metric = Metric::citations;
            } else {
                fail(ErrorCode::InvalidConfig,
                     "summary table must be 2 or 3, got '" + summary_table + "'");
            }
            const TableId table = metric == Metric::documents ? TableId::t4a : TableId::t4b;
            Sink sink(output);
            sink.row({"subsample", "variable", "count", "mean", "sd", "min", "max",
                      "degenerate"});
            for (int column : {1, 2}) {
                SummaryTable summary = summary_stats(a.design(table, column), metric);
                for (const auto& [variable, stats] : summary.variables) {
                    sink.row({subsample_name(summary.subsample), variable,
                              std::to_string(stats.count), fmt(stats.mean), fmt(stats.sd),
                              fmt(stats.min), fmt(stats.max), stats.degenerate ? "1" : "0"});
                }
            }
        } else if (*kde_cmd) {
            Analysis a = analysis();
            auto groups = a.transition_densities(kde_figure, metric_from_string(kde_metric),
                                                 kde_period);
            std::optional<double> bw;
            if (kde_cmd->count("--bandwidth")) bw = kde_bandwidth;
            Sink sink(output);
            sink.row({"grid", "value", "group"});
            for (const auto& [group, values] : groups) {
                if (values.empty()) continue;
                DensityCurve curve = kde(values, bw);
                for (size_t g = 0; g < curve.grid.size(); ++g) {
                    sink.row({fmt(curve.grid[g]), fmt(curve.values[g]),
                              transition_group_name(group)});
                }
            }
        } else if (*run_cmd) {
            RunConfig config;
            config.input_path = input;
            config.output_dir = output_dir;
            config.min_docs = min_docs;
            config.reference_year = reference_year;
            config.grid = grid();
            config.metrics = parse_metrics(metrics_text);
            config.cluster = fit_options.cluster;
            config.with_interaction = interaction;
            config.areas_path = areas_path;
            config.projection_base_year = base_year;
            config.seed = seed;
            if (config.input_path.empty()) {
                fail(ErrorCode::InvalidConfig, "--input is required");
            }
            Manifest manifest = run_pipeline(config);
            std::cout << "wrote " << manifest.files.size() << " files + manifest.json to "
                      << output_dir << "\n";
            for (const ManifestEntry& entry : manifest.files) {
                std::cout << "  " << entry.sha256 << "  " << entry.bytes << "  " << entry.name
                          << "\n";
            }
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
