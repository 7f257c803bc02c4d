#include "scispace/growth.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace scispace {

PeriodGrid PeriodGrid::default_grid() {
    return PeriodGrid{{{1996, 2000},
                       {2000, 2004},
                       {2004, 2008},
                       {2008, 2012},
                       {2012, 2016},
                       {2016, 2019}}};
}

PeriodGrid PeriodGrid::parse(const std::string& text) {
    PeriodGrid grid;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) {
        auto dash = token.find('-');
        if (dash == std::string::npos) {
            fail(ErrorCode::InvalidConfig, "bad period '" + token + "' (expected START-END)");
        }
        try {
            grid.periods.push_back(
                {std::stoi(token.substr(0, dash)), std::stoi(token.substr(dash + 1))});
        } catch (const std::exception&) {
            fail(ErrorCode::InvalidConfig, "bad period '" + token + "' (expected START-END)");
        }
    }
    grid.validate();
    return grid;
}

void PeriodGrid::validate() const {
    if (periods.empty()) fail(ErrorCode::InvalidConfig, "period grid is empty");
    for (const Period& p : periods) {
        if (p.start >= p.end) {
            fail(ErrorCode::InvalidConfig, "period " + std::to_string(p.start) + "-" +
                                               std::to_string(p.end) + " has no years in it");
        }
    }
    std::vector<Period> sorted = periods;
    std::sort(sorted.begin(), sorted.end(),
              [](const Period& a, const Period& b) { return a.start < b.start; });
    for (size_t i = 1; i < sorted.size(); ++i) {
        if (sorted[i].start < sorted[i - 1].end) {
            fail(ErrorCode::InvalidConfig, "periods overlap beyond shared endpoints");
        }
    }
}

std::vector<int> PeriodGrid::endpoint_years() const {
    std::set<int> years;
    for (const Period& p : periods) {
        years.insert(p.start);
        years.insert(p.end);
    }
    return {years.begin(), years.end()};
}

double geometric_growth(double v_start, double v_end, int n_years) {
    if (!(v_start > 0.0)) {
        fail(ErrorCode::NonpositiveStart,
             "start value must be positive, got " + std::to_string(v_start));
    }
    if (n_years < 1) {
        fail(ErrorCode::InvalidConfig, "period must span at least one year");
    }
    // pow(0, 1/n) == 0, so a zero end value lands exactly on -1.
    return std::pow(v_end / v_start, 1.0 / n_years) - 1.0;
}

namespace {

GrowthPanel assemble(Metric metric, GrowthTarget target, const PeriodGrid& grid,
                     CatalogsPtr catalogs, std::vector<GrowthRow> rows) {
    std::sort(rows.begin(), rows.end(), [](const GrowthRow& a, const GrowthRow& b) {
        return std::tie(a.country, a.discipline, a.period) <
               std::tie(b.country, b.discipline, b.period);
    });
    return GrowthPanel{metric, target, grid, std::move(catalogs), std::move(rows)};
}

} // namespace

GrowthPanel growth_panel(const std::map<int, RcaSlice>& slices, const PeriodGrid& grid) {
    grid.validate();
    for (const Period& p : grid.periods) {
        if (!slices.count(p.start) || !slices.count(p.end)) {
            fail(ErrorCode::MissingYearSlice, "no RCA slice for period " +
                                                  std::to_string(p.start) + "-" +
                                                  std::to_string(p.end));
        }
    }
    const RcaSlice& first = slices.at(grid.periods.front().start);
    std::vector<GrowthRow> rows;
    for (size_t p = 0; p < grid.periods.size(); ++p) {
        const Period& period = grid.periods[p];
        const RcaSlice& start = slices.at(period.start);
        const RcaSlice& end = slices.at(period.end);
        if (!same_catalogs(start.catalogs, first.catalogs) ||
            !same_catalogs(end.catalogs, first.catalogs) || start.metric != first.metric) {
            fail(ErrorCode::InconsistentInputs, "RCA slices mix catalogs or metrics");
        }
        const int C = static_cast<int>(start.values.rows());
        const int D = static_cast<int>(start.values.cols());
        for (int c = 0; c < C; ++c) {
            for (int i = 0; i < D; ++i) {
                const double v0 = start.values(c, i);
                if (std::isnan(v0) || v0 <= 0.0) continue;
                const double v1 = end.values(c, i);
                if (std::isnan(v1)) continue;  // country produced nothing at the end year
                rows.push_back({c, i, static_cast<int>(p), v0,
                                geometric_growth(v0, v1, period.n_years())});
            }
        }
    }
    return assemble(first.metric, GrowthTarget::rca, grid, first.catalogs, std::move(rows));
}

GrowthPanel raw_growth_panel(const Panel& panel, Metric metric, const PeriodGrid& grid) {
    grid.validate();
    for (const Period& p : grid.periods) {
        if (!panel.year_in_range(p.start) || !panel.year_in_range(p.end)) {
            fail(ErrorCode::MissingYearSlice, "panel does not cover period " +
                                                  std::to_string(p.start) + "-" +
                                                  std::to_string(p.end));
        }
    }
    std::vector<GrowthRow> rows;
    for (size_t p = 0; p < grid.periods.size(); ++p) {
        const Period& period = grid.periods[p];
        const Eigen::MatrixXd start = panel.year_slice(period.start, metric);
        const Eigen::MatrixXd end = panel.year_slice(period.end, metric);
        const RcaSlice start_rca = rca(totals(panel, period.start, metric), panel);
        const int C = static_cast<int>(start.rows());
        const int D = static_cast<int>(start.cols());
        for (int c = 0; c < C; ++c) {
            for (int i = 0; i < D; ++i) {
                const double x0 = start(c, i);
                if (x0 <= 0.0) continue;
                const double r0 = start_rca.values(c, i);
                if (std::isnan(r0)) continue;  // cannot happen with x0 > 0, kept as a guard
                rows.push_back({c, i, static_cast<int>(p), r0,
                                geometric_growth(x0, end(c, i), period.n_years())});
            }
        }
    }
    return assemble(metric, GrowthTarget::raw_count, grid, panel.catalogs(), std::move(rows));
}

} // namespace scispace
