#pragma once

#include <map>
#include <vector>

#include "scispace/rca.hpp"

namespace scispace {

struct Period {
    int start;
    int end;
    int n_years() const { return end - start; }
    bool operator==(const Period&) const = default;
};

// Non-overlapping (except at endpoints) list of periods; the default grid is
// 1996-2000, ..., 2016-2019 (the last spans three years, the rest four).
struct PeriodGrid {
    std::vector<Period> periods;

    static PeriodGrid default_grid();
    static PeriodGrid parse(const std::string& text);  // "1996-2000,2000-2004,..."
    void validate() const;
    std::vector<int> endpoint_years() const;  // sorted unique start/end years
};

enum class GrowthTarget { rca, raw_count };

struct GrowthRow {
    int country;
    int discipline;
    int period;         // index into grid
    double start_value; // start-of-period RCA, also for raw_count targets
    double growth;      // annualized, in [-1, inf)
};

struct GrowthPanel {
    Metric metric;
    GrowthTarget target;
    PeriodGrid grid;
    CatalogsPtr catalogs;
    std::vector<GrowthRow> rows;  // sorted by (country, discipline, period)
};

// (v_end / v_start)^(1/n_years) - 1. Exactly -1 when v_end == 0.
double geometric_growth(double v_start, double v_end, int n_years);

// One row per (country, discipline, period) where the start RCA is defined and
// positive and the end RCA is defined.
GrowthPanel growth_panel(const std::map<int, RcaSlice>& slices, const PeriodGrid& grid);

// Same shape over raw counts; start_value still carries the start-of-period
// RCA because the regressions use it as the convergence control.
GrowthPanel raw_growth_panel(const Panel& panel, Metric metric, const PeriodGrid& grid);

} // namespace scispace
