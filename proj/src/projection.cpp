#include "scispace/projection.hpp"

#include "scispace/csv.hpp"

#include <algorithm>
#include <cmath>

namespace scispace {

ProjectionReport project_growth(const RegressionResult& res, const DensityVector& density,
                                const RcaSlice& rca, const std::string& country,
                                ProjectionFormula formula,
                                const std::map<std::string, std::string>* main_areas) {
    if (density.country != country) {
        fail(ErrorCode::MissingDensity,
             "density vector describes '" + density.country + "', not '" + country + "'");
    }
    if (!same_catalogs(density.catalogs, rca.catalogs)) {
        fail(ErrorCode::InconsistentInputs, "density and rca use different catalogs");
    }
    if (density.metric != rca.metric) {
        fail(ErrorCode::MetricMismatch, "density and rca use different metrics");
    }
    if (density.year != rca.year) {
        fail(ErrorCode::InconsistentInputs, "density and rca describe different years");
    }
    const int c = rca.catalogs->country(country);
    if (c < 0) fail(ErrorCode::UnknownCountry, "unknown country '" + country + "'");

    const double a1 = res.coef("density");
    const int xi = res.index_of("interaction");
    const double a3 = xi >= 0 ? res.coefficients(xi) : 0.0;

    ProjectionReport report;
    report.country = country;
    report.base_year = rca.year;
    report.metric = rca.metric;
    report.subsample = res.subsample;
    report.coefficient_source = std::string(subsample_name(res.subsample)) +
                                (res.with_interaction ? " with interaction" : " no interaction") +
                                (formula == ProjectionFormula::ame ? ", ame form"
                                                                   : ", interaction form");

    for (int j = 0; j < rca.catalogs->n_disciplines(); ++j) {
        if (!rca.defined(c, j) || !density.defined(j)) continue;
        const double base = rca.values(c, j);
        const bool lt = base < 1.0;
        if ((res.subsample == Subsample::rca_lt_1) != lt) continue;

        double slope;
        if (formula == ProjectionFormula::ame) {
            slope = a1 + a3 * res.mean_rca;
        } else {
            slope = a1 + a3 * base;
        }

        ProjectionRow row;
        row.discipline = rca.catalogs->disciplines[j];
        row.projected_growth = slope * density.density(j);
        row.base_rca = base;
        if (main_areas) {
            auto it = main_areas->find(row.discipline);
            if (it != main_areas->end()) row.main_area = it->second;
        }
        report.rows.push_back(std::move(row));
    }

    std::sort(report.rows.begin(), report.rows.end(),
              [](const ProjectionRow& a, const ProjectionRow& b) {
                  if (a.projected_growth != b.projected_growth) {
                      return a.projected_growth < b.projected_growth;
                  }
                  return a.discipline < b.discipline;
              });
    return report;
}

RankedDisciplines rank_disciplines(const ProjectionReport& report, int k) {
    if (k <= 0) fail(ErrorCode::InvalidConfig, "k must be positive");

    std::vector<ProjectionRow> rows = report.rows;
    std::sort(rows.begin(), rows.end(), [](const ProjectionRow& a, const ProjectionRow& b) {
        if (a.projected_growth != b.projected_growth) {
            return a.projected_growth < b.projected_growth;
        }
        return a.discipline < b.discipline;
    });

    RankedDisciplines ranked;
    const auto n = static_cast<long>(rows.size());
    const long take = std::min<long>(k, n);
    ranked.truncated = n < 2L * k;
    ranked.bottom.assign(rows.begin(), rows.begin() + take);
    ranked.top.assign(rows.end() - take, rows.end());
    return ranked;
}

std::map<std::string, std::string> load_main_areas(const std::string& path) {
    csv::Table table = csv::read_file(path);
    int discipline_col = -1;
    int area_col = -1;
    for (size_t i = 0; i < table.header.size(); ++i) {
        if (table.header[i] == "discipline") discipline_col = static_cast<int>(i);
        if (table.header[i] == "main_area") area_col = static_cast<int>(i);
    }
    if (discipline_col < 0 || area_col < 0) {
        fail(ErrorCode::MissingColumn, "main-area file needs discipline and main_area columns");
    }

    std::map<std::string, std::string> areas;
    for (size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        if (static_cast<int>(row.size()) <= std::max(discipline_col, area_col)) {
            fail(ErrorCode::MalformedRow,
                 "short row at line " + std::to_string(table.line_numbers[r]));
        }
        auto [it, inserted] = areas.emplace(row[discipline_col], row[area_col]);
        if (!inserted && it->second != row[area_col]) {
            fail(ErrorCode::MalformedRow,
                 "conflicting area for '" + row[discipline_col] + "' at line " +
                     std::to_string(table.line_numbers[r]));
        }
    }
    return areas;
}

} // namespace scispace
