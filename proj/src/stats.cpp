#include "scispace/stats.hpp"

#include <algorithm>
#include <cmath>

namespace scispace {

namespace {

VariableStats describe(const std::vector<double>& values) {
    VariableStats s;
    s.count = static_cast<long>(values.size());
    if (s.count == 0) return s;
    s.min = *std::min_element(values.begin(), values.end());
    s.max = *std::max_element(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(s.count);
    if (s.count == 1) {
        s.degenerate = true;
        return s;
    }
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(s.count - 1));
    return s;
}

// Linear-interpolation quantile at position (n-1)p on the sorted sample.
double quantile(std::vector<double> sorted, double p) {
    const double pos = (static_cast<double>(sorted.size()) - 1.0) * p;
    const auto lo = static_cast<size_t>(std::floor(pos));
    const auto hi = static_cast<size_t>(std::ceil(pos));
    const double frac = pos - std::floor(pos);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

} // namespace

SummaryTable summary_stats(const RegressionDataset& ds, Metric metric) {
    if (ds.n_rows() == 0) fail(ErrorCode::EmptyDataset, "no rows to summarize");
    SummaryTable table;
    table.subsample = ds.subsample;
    table.metric = metric;
    table.variables["GrowthRCA"] = describe(ds.y);
    table.variables[ds.density_label] = describe(ds.x_density);
    table.variables["RCA_value"] = describe(ds.x_rca);
    return table;
}

const char* transition_group_name(TransitionGroup g) {
    switch (g) {
    case TransitionGroup::gained: return "gained";
    case TransitionGroup::stayed_without: return "stayed_without";
    case TransitionGroup::kept: return "kept";
    case TransitionGroup::lost: return "lost";
    }
    return "unknown";
}

std::map<std::string, TransitionGroup> transition_split(const RcaFlags& flags_t,
                                                        const RcaFlags& flags_t1,
                                                        const std::string& country) {
    if (flags_t.metric != flags_t1.metric) {
        fail(ErrorCode::MetricMismatch, "flag slices use different metrics");
    }
    if (!same_catalogs(flags_t.catalogs, flags_t1.catalogs)) {
        fail(ErrorCode::InconsistentInputs, "flag slices use different catalogs");
    }
    if (flags_t.year >= flags_t1.year) {
        fail(ErrorCode::YearOrder, "transition endpoints out of order");
    }
    const int c = flags_t.catalogs->country(country);
    if (c < 0) fail(ErrorCode::UnknownCountry, "unknown country '" + country + "'");

    std::map<std::string, TransitionGroup> out;
    for (int i = 0; i < flags_t.catalogs->n_disciplines(); ++i) {
        const bool before = flags_t.flags(c, i);
        const bool after = flags_t1.flags(c, i);
        TransitionGroup g;
        if (before) {
            g = after ? TransitionGroup::kept : TransitionGroup::lost;
        } else {
            g = after ? TransitionGroup::gained : TransitionGroup::stayed_without;
        }
        out.emplace(flags_t.catalogs->disciplines[i], g);
    }
    return out;
}

DensityCurve kde(const std::vector<double>& values, std::optional<double> bandwidth) {
    if (values.empty()) fail(ErrorCode::DegenerateSample, "empty sample");
    for (double v : values) {
        if (!std::isfinite(v)) fail(ErrorCode::DegenerateSample, "non-finite value in sample");
    }

    const auto n = static_cast<double>(values.size());
    double h;
    if (bandwidth) {
        if (!(*bandwidth > 0.0)) {
            fail(ErrorCode::InvalidConfig, "bandwidth must be positive");
        }
        h = *bandwidth;
    } else {
        std::vector<double> sorted = values;
        std::sort(sorted.begin(), sorted.end());
        if (sorted.front() == sorted.back()) {
            fail(ErrorCode::DegenerateSample,
                 "automatic bandwidth needs at least two distinct values");
        }
        double mean = 0.0;
        for (double v : sorted) mean += v;
        mean /= n;
        double ss = 0.0;
        for (double v : sorted) ss += (v - mean) * (v - mean);
        const double sd = std::sqrt(ss / (n - 1.0));
        const double iqr = quantile(sorted, 0.75) - quantile(sorted, 0.25);
        const double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
        h = 0.9 * spread * std::pow(n, -0.2);
    }

    const double lo = *std::min_element(values.begin(), values.end()) - 3.0 * h;
    const double hi = *std::max_element(values.begin(), values.end()) + 3.0 * h;

    DensityCurve curve;
    curve.bandwidth = h;
    curve.grid.resize(512);
    curve.values.resize(512);
    const double step = (hi - lo) / 511.0;
    const double norm = 1.0 / (n * h * std::sqrt(2.0 * M_PI));
    for (int g = 0; g < 512; ++g) {
        const double x = lo + step * g;
        double acc = 0.0;
        for (double v : values) {
            const double z = (x - v) / h;
            acc += std::exp(-0.5 * z * z);
        }
        curve.grid[g] = x;
        curve.values[g] = norm * acc;
    }
    return curve;
}

} // namespace scispace
