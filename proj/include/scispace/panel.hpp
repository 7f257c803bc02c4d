#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

#include "scispace/types.hpp"

namespace scispace {

// One (country, discipline, year) cell. Absent triples mean zero counts.
struct Observation {
    int country;
    int discipline;
    int year;
    double documents;
    double citations;

    double count(Metric m) const { return m == Metric::documents ? documents : citations; }
};

// Immutable long-form bibliometric panel. Observations are kept sorted by
// (year, country, discipline) so per-year slicing is a range scan.
class Panel {
public:
    Panel() = default;
    Panel(CatalogsPtr catalogs, std::vector<Observation> observations,
          int year_min, int year_max);

    const CatalogsPtr& catalogs() const { return catalogs_; }
    const std::vector<Observation>& observations() const { return observations_; }
    int year_min() const { return year_min_; }
    int year_max() const { return year_max_; }
    bool year_in_range(int year) const { return year >= year_min_ && year <= year_max_; }

    // Dense count matrix (countries x disciplines) for one year; zeros for
    // absent cells.
    Eigen::MatrixXd year_slice(int year, Metric metric) const;

    bool operator==(const Panel& other) const;

private:
    CatalogsPtr catalogs_;
    std::vector<Observation> observations_;
    int year_min_ = 0;
    int year_max_ = -1;
};

struct ColumnMap {
    std::string country = "country";
    std::string discipline = "discipline";
    std::string year = "year";
    std::string documents = "documents";
    std::string citations = "citations";
};

// Per-year, per-metric marginal sums feeding the RCA denominators.
struct Totals {
    int year;
    Metric metric;
    CatalogsPtr catalogs;
    Eigen::VectorXd country_totals;     // x^c  (indexed like catalogs->countries)
    Eigen::VectorXd discipline_totals;  // x*_i (indexed like catalogs->disciplines)
    double world_total;                 // X*
};

// Reads and validates a long-form CSV (header required). Duplicate triples,
// negative counts and malformed rows are rejected with the file line number.
Panel ingest_csv(const std::string& path, const ColumnMap& columns = {});

// Canonical serialization (sorted rows, quoted ids); ingest(serialize(p)) == p.
void serialize_csv(const Panel& panel, const std::string& path);
void serialize_csv(const Panel& panel, std::ostream& out);

// Keeps exactly the countries whose summed documents in reference_year reach
// min_docs; survivors keep all their observations in all years.
Panel filter_countries(const Panel& panel, double min_docs, int reference_year);

Totals totals(const Panel& panel, int year, Metric metric);

} // namespace scispace
