#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "scispace/projection.hpp"
#include "scispace/stats.hpp"

namespace scispace {

enum class TableId { t4a, t4b, t6, t7 };

TableId table_from_string(const std::string& s);
const char* table_name(TableId t);

struct RunConfig {
    std::string input_path;
    std::string output_dir;
    double min_docs = 100;
    int reference_year = 2019;
    PeriodGrid grid = PeriodGrid::default_grid();
    std::vector<Metric> metrics = {Metric::documents, Metric::citations};
    ClusterLevel cluster = ClusterLevel::country_discipline;
    bool with_interaction = true;   // fit the interaction columns and project with them
    std::string areas_path;         // optional discipline -> main area CSV
    int projection_base_year = -1;  // -1: reference_year
    std::uint64_t seed = 42;        // consumed by simulation oracles only
};

struct ManifestEntry {
    std::string name;  // relative to output_dir
    std::string sha256;
    std::uint64_t bytes;
};

struct Manifest {
    std::vector<ManifestEntry> files;  // sorted by name, manifest.json excluded
};

// Caches every intermediate derived from one filtered panel so the CLI
// subcommands and the pipeline share identical computation paths.
class Analysis {
public:
    Analysis(Panel filtered_panel, PeriodGrid grid);

    static Analysis load(const std::string& input_path, double min_docs, int reference_year,
                         const PeriodGrid& grid);

    const Panel& panel() const { return panel_; }
    const PeriodGrid& grid() const { return grid_; }

    const RcaSlice& rca_slice(int year, Metric metric);
    const RcaFlags& flags(int year, Metric metric);
    const ProximityMatrix& phi(int year, Metric metric);
    const DensityField& density_field(Metric metric);  // grid endpoint years
    const GrowthPanel& growth_rca(Metric metric);
    const GrowthPanel& growth_raw(Metric metric);

    RegressionDataset design(TableId table, int column);
    RegressionResult fit_table(TableId table, int column, const FitOptions& options = {});

    // Pooled period-start density values grouped by flag transition, the raw
    // material of the distribution figures. figure 1: starts without advantage;
    // figure 2: starts with it. period_index restricts to one grid period.
    std::map<TransitionGroup, std::vector<double>> transition_densities(int figure, Metric metric,
                                                                        int period_index = -1);

private:
    Panel panel_;
    PeriodGrid grid_;
    std::map<std::pair<int, int>, RcaSlice> rca_cache_;
    std::map<std::pair<int, int>, RcaFlags> flag_cache_;
    std::map<std::pair<int, int>, ProximityMatrix> phi_cache_;
    std::map<int, DensityField> density_cache_;
    std::map<std::pair<int, int>, GrowthPanel> growth_cache_;  // (metric, target)
};

// Runs ingest -> filter -> RCA/flags -> proximity -> density -> growth ->
// regression tables -> projections, writing every stage to output_dir and
// returning the manifest (also written as manifest.json). Identical config and
// input produce byte-identical outputs; partial outputs are removed on error.
Manifest run_pipeline(const RunConfig& config);

std::string sha256_file(const std::string& path);

// Two-sided Student-t stars with df = n_clusters - 1:
// *** p<0.01, ** p<0.05, * p<0.1, blank otherwise.
std::string significance_stars(double estimate, double se, double df);

} // namespace scispace
