#include "scispace/rca.hpp"

#include <cmath>
#include <limits>

namespace scispace {

RcaSlice rca(const Totals& totals, const Panel& panel) {
    if (!same_catalogs(totals.catalogs, panel.catalogs())) {
        fail(ErrorCode::InconsistentInputs, "totals and panel use different catalogs");
    }
    if (!panel.year_in_range(totals.year)) {
        fail(ErrorCode::InconsistentInputs,
             "totals year " + std::to_string(totals.year) + " outside panel range");
    }
    const Catalogs& cat = *panel.catalogs();
    const int C = cat.n_countries();
    const int D = cat.n_disciplines();
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();

    RcaSlice slice;
    slice.year = totals.year;
    slice.metric = totals.metric;
    slice.catalogs = panel.catalogs();
    slice.values = Eigen::MatrixXd::Constant(C, D, nan);

    const Eigen::MatrixXd counts = panel.year_slice(totals.year, totals.metric);
    const double world = totals.world_total;
    if (world <= 0.0) return slice;  // nothing published: everything missing

    for (int c = 0; c < C; ++c) {
        const double country_total = totals.country_totals(c);
        if (country_total <= 0.0) continue;
        for (int i = 0; i < D; ++i) {
            const double world_i = totals.discipline_totals(i);
            if (world_i <= 0.0) continue;
            slice.values(c, i) = (counts(c, i) / country_total) / (world_i / world);
        }
    }
    return slice;
}

RcaFlags rca_flag(const RcaSlice& slice) {
    RcaFlags flags;
    flags.year = slice.year;
    flags.metric = slice.metric;
    flags.catalogs = slice.catalogs;
    // NaN >= 1 is false, so missing values come out unflagged.
    flags.flags = slice.values.array() >= 1.0;
    return flags;
}

} // namespace scispace
