#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "scispace/regression.hpp"

namespace scispace {

struct ProjectionRow {
    std::string discipline;
    double projected_growth;
    double base_rca;
    std::string main_area;  // blank when no mapping is supplied
};

struct ProjectionReport {
    std::string country;
    int base_year;
    Metric metric;
    Subsample subsample;
    std::string coefficient_source;
    std::vector<ProjectionRow> rows;  // sorted by projected_growth, then id
};

enum class ProjectionFormula {
    interaction,  // (a1 + a3 * rca_j) * density_j
    ame,          // ame_density * density_j
};

// Density-channel growth projection per discipline for one country at the
// base year. Only disciplines in the result's subsample enter; disciplines
// with undefined density or RCA are skipped.
ProjectionReport project_growth(const RegressionResult& res, const DensityVector& density,
                                const RcaSlice& rca, const std::string& country,
                                ProjectionFormula formula = ProjectionFormula::interaction,
                                const std::map<std::string, std::string>* main_areas = nullptr);

struct RankedDisciplines {
    std::vector<ProjectionRow> bottom;  // ascending
    std::vector<ProjectionRow> top;     // ascending, ends at the maximum
    bool truncated = false;             // fewer than 2k rows were available
};

RankedDisciplines rank_disciplines(const ProjectionReport& report, int k);

// Optional discipline -> main area mapping (CSV: discipline,main_area).
std::map<std::string, std::string> load_main_areas(const std::string& path);

} // namespace scispace
