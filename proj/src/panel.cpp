#include "scispace/panel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <tuple>

#include "scispace/csv.hpp"

namespace scispace {

namespace {

struct RawRecord {
    std::string country;
    std::string discipline;
    int year;
    double documents;
    double citations;
    size_t line_no;
};

int find_column(const std::vector<std::string>& header, const std::string& name) {
    for (size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return static_cast<int>(i);
    }
    return -1;
}

int parse_year(const std::string& s, size_t line_no) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        fail(ErrorCode::MalformedRow, "line " + std::to_string(line_no) +
                                          ": year '" + s + "' is not an integer");
    }
    return value;
}

double parse_count(const std::string& s, const std::string& column, size_t line_no,
                   bool empty_is_zero) {
    if (s.empty()) {
        if (empty_is_zero) return 0.0;
        fail(ErrorCode::MalformedRow,
             "line " + std::to_string(line_no) + ": empty " + column + " value");
    }
    char* end = nullptr;
    double value = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || !std::isfinite(value)) {
        fail(ErrorCode::MalformedRow, "line " + std::to_string(line_no) + ": " + column +
                                          " '" + s + "' is not a number");
    }
    if (value < 0) {
        fail(ErrorCode::NegativeCount,
             "line " + std::to_string(line_no) + ": " + column + " is negative (" + s + ")");
    }
    return value;
}

} // namespace

Panel::Panel(CatalogsPtr catalogs, std::vector<Observation> observations,
             int year_min, int year_max)
    : catalogs_(std::move(catalogs)),
      observations_(std::move(observations)),
      year_min_(year_min),
      year_max_(year_max) {
    std::sort(observations_.begin(), observations_.end(),
              [](const Observation& a, const Observation& b) {
                  return std::tie(a.year, a.country, a.discipline) <
                         std::tie(b.year, b.country, b.discipline);
              });
}

Eigen::MatrixXd Panel::year_slice(int year, Metric metric) const {
    Eigen::MatrixXd slice =
        Eigen::MatrixXd::Zero(catalogs_->n_countries(), catalogs_->n_disciplines());
    auto begin = std::lower_bound(observations_.begin(), observations_.end(), year,
                                  [](const Observation& o, int y) { return o.year < y; });
    for (auto it = begin; it != observations_.end() && it->year == year; ++it) {
        slice(it->country, it->discipline) = it->count(metric);
    }
    return slice;
}

bool Panel::operator==(const Panel& other) const {
    if (!same_catalogs(catalogs_, other.catalogs_)) return false;
    if (year_min_ != other.year_min_ || year_max_ != other.year_max_) return false;
    if (observations_.size() != other.observations_.size()) return false;
    for (size_t i = 0; i < observations_.size(); ++i) {
        const Observation& a = observations_[i];
        const Observation& b = other.observations_[i];
        if (a.country != b.country || a.discipline != b.discipline || a.year != b.year ||
            a.documents != b.documents || a.citations != b.citations) {
            return false;
        }
    }
    return true;
}

Panel ingest_csv(const std::string& path, const ColumnMap& columns) {
    csv::Table table = csv::read_file(path);

    const std::vector<std::pair<std::string, const std::string*>> required = {
        {"country", &columns.country},
        {"discipline", &columns.discipline},
        {"year", &columns.year},
        {"documents", &columns.documents},
        {"citations", &columns.citations},
    };
    int idx[5];
    for (size_t k = 0; k < required.size(); ++k) {
        idx[k] = find_column(table.header, *required[k].second);
        if (idx[k] < 0) {
            fail(ErrorCode::MissingColumn, "'" + path + "' has no '" + *required[k].second +
                                               "' column (" + required[k].first + ")");
        }
    }
    const size_t width = table.header.size();

    std::vector<RawRecord> records;
    records.reserve(table.rows.size());
    std::vector<std::string> countries, disciplines;
    for (size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const size_t line_no = table.line_numbers[r];
        if (row.size() != width) {
            fail(ErrorCode::MalformedRow, "line " + std::to_string(line_no) + ": expected " +
                                              std::to_string(width) + " fields, got " +
                                              std::to_string(row.size()));
        }
        RawRecord rec;
        rec.country = row[idx[0]];
        rec.discipline = row[idx[1]];
        if (rec.country.empty() || rec.discipline.empty()) {
            fail(ErrorCode::MalformedRow,
                 "line " + std::to_string(line_no) + ": empty country or discipline id");
        }
        rec.year = parse_year(row[idx[2]], line_no);
        rec.documents = parse_count(row[idx[3]], "documents", line_no, false);
        rec.citations = parse_count(row[idx[4]], "citations", line_no, true);
        rec.line_no = line_no;
        records.push_back(std::move(rec));
        countries.push_back(records.back().country);
        disciplines.push_back(records.back().discipline);
    }

    auto catalogs = Catalogs::make(std::move(countries), std::move(disciplines));

    int year_min = std::numeric_limits<int>::max();
    int year_max = std::numeric_limits<int>::min();
    std::vector<Observation> observations;
    observations.reserve(records.size());
    std::vector<size_t> line_nos(records.size());
    for (size_t i = 0; i < records.size(); ++i) {
        const RawRecord& rec = records[i];
        observations.push_back({catalogs->country(rec.country),
                                catalogs->discipline(rec.discipline), rec.year, rec.documents,
                                rec.citations});
        line_nos[i] = rec.line_no;
        year_min = std::min(year_min, rec.year);
        year_max = std::max(year_max, rec.year);
    }
    if (observations.empty()) {
        year_min = 0;
        year_max = -1;
    }

    // Duplicate detection keeps the original file line numbers.
    std::vector<size_t> order(observations.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        const Observation& oa = observations[a];
        const Observation& ob = observations[b];
        return std::tie(oa.country, oa.discipline, oa.year) <
               std::tie(ob.country, ob.discipline, ob.year);
    });
    for (size_t i = 1; i < order.size(); ++i) {
        const Observation& prev = observations[order[i - 1]];
        const Observation& cur = observations[order[i]];
        if (prev.country == cur.country && prev.discipline == cur.discipline &&
            prev.year == cur.year) {
            fail(ErrorCode::DuplicateTriple,
                 "(" + catalogs->countries[cur.country] + ", " +
                     catalogs->disciplines[cur.discipline] + ", " + std::to_string(cur.year) +
                     ") appears at lines " + std::to_string(line_nos[order[i - 1]]) + " and " +
                     std::to_string(line_nos[order[i]]));
        }
    }

    return Panel(std::move(catalogs), std::move(observations), year_min, year_max);
}

void serialize_csv(const Panel& panel, std::ostream& out) {
    auto emit = [&out](const std::vector<std::string>& fields) {
        for (size_t i = 0; i < fields.size(); ++i) {
            if (i) out << ',';
            out << csv::quote(fields[i]);
        }
        out << '\n';
    };
    emit({"country", "discipline", "year", "documents", "citations"});
    std::vector<Observation> rows = panel.observations();
    std::sort(rows.begin(), rows.end(), [](const Observation& a, const Observation& b) {
        return std::tie(a.country, a.discipline, a.year) <
               std::tie(b.country, b.discipline, b.year);
    });
    const Catalogs& cat = *panel.catalogs();
    for (const Observation& o : rows) {
        emit({cat.countries[o.country], cat.disciplines[o.discipline], std::to_string(o.year),
              csv::format_double(o.documents), csv::format_double(o.citations)});
    }
}

void serialize_csv(const Panel& panel, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::IoError, "cannot write '" + path + "'");
    serialize_csv(panel, out);
    out.close();
    if (!out) fail(ErrorCode::IoError, "failed writing '" + path + "'");
}

Panel filter_countries(const Panel& panel, double min_docs, int reference_year) {
    if (!panel.year_in_range(reference_year)) {
        fail(ErrorCode::YearOutOfRange, "reference year " + std::to_string(reference_year) +
                                            " outside panel range [" +
                                            std::to_string(panel.year_min()) + ", " +
                                            std::to_string(panel.year_max()) + "]");
    }
    const Catalogs& cat = *panel.catalogs();
    Eigen::VectorXd docs = Eigen::VectorXd::Zero(cat.n_countries());
    for (const Observation& o : panel.observations()) {
        if (o.year == reference_year) docs(o.country) += o.documents;
    }

    std::vector<std::string> keep;
    std::vector<char> keep_mask(cat.n_countries(), 0);
    for (int c = 0; c < cat.n_countries(); ++c) {
        if (docs(c) >= min_docs) {
            keep.push_back(cat.countries[c]);
            keep_mask[c] = 1;
        }
    }
    auto catalogs = Catalogs::make(std::move(keep), cat.disciplines);

    std::vector<Observation> observations;
    observations.reserve(panel.observations().size());
    for (const Observation& o : panel.observations()) {
        if (!keep_mask[o.country]) continue;
        Observation kept = o;
        kept.country = catalogs->country(cat.countries[o.country]);
        observations.push_back(kept);
    }
    return Panel(std::move(catalogs), std::move(observations), panel.year_min(),
                 panel.year_max());
}

Totals totals(const Panel& panel, int year, Metric metric) {
    if (!panel.year_in_range(year)) {
        fail(ErrorCode::YearOutOfRange,
             "year " + std::to_string(year) + " outside panel range [" +
                 std::to_string(panel.year_min()) + ", " + std::to_string(panel.year_max()) + "]");
    }
    const Catalogs& cat = *panel.catalogs();
    Totals t;
    t.year = year;
    t.metric = metric;
    t.catalogs = panel.catalogs();
    t.country_totals = Eigen::VectorXd::Zero(cat.n_countries());
    t.discipline_totals = Eigen::VectorXd::Zero(cat.n_disciplines());
    t.world_total = 0.0;
    Eigen::MatrixXd slice = panel.year_slice(year, metric);
    t.country_totals = slice.rowwise().sum();
    t.discipline_totals = slice.colwise().sum();
    t.world_total = t.discipline_totals.sum();
    return t;
}

} // namespace scispace
