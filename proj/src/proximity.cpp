#include "scispace/proximity.hpp"

#include <cmath>
#include <limits>

namespace scispace {

ProximityMatrix proximity_matrix(const RcaFlags& flags) {
    const int C = static_cast<int>(flags.flags.rows());
    const int D = static_cast<int>(flags.flags.cols());
    if (C == 0) fail(ErrorCode::EmptyFlags, "flag matrix covers no countries");

    // 0/1 counts are exact in doubles, so F'F gives exact joint counts.
    Eigen::MatrixXd f = flags.flags.cast<double>();
    Eigen::MatrixXd joint = f.transpose() * f;

    ProximityMatrix result;
    result.year = flags.year;
    result.metric = flags.metric;
    result.catalogs = flags.catalogs;
    result.counts = Eigen::VectorXi(D);
    for (int i = 0; i < D; ++i) result.counts(i) = static_cast<int>(joint(i, i));

    result.phi = Eigen::MatrixXd::Zero(D, D);
    for (int i = 0; i < D; ++i) {
        for (int j = i; j < D; ++j) {
            const double denom = std::max(joint(i, i), joint(j, j));
            const double phi = denom > 0.0 ? joint(i, j) / denom : 0.0;
            result.phi(i, j) = phi;
            result.phi(j, i) = phi;  // assigned from one computation: exact symmetry
        }
    }
    return result;
}

DensityVector avg_proximity(const ProximityMatrix& phi, const RcaFlags& flags,
                            const std::string& country) {
    if (!same_catalogs(phi.catalogs, flags.catalogs) || phi.year != flags.year ||
        phi.metric != flags.metric) {
        fail(ErrorCode::InconsistentInputs, "proximity matrix and flags disagree on year/metric");
    }
    const int c = phi.catalogs->country(country);
    if (c < 0) fail(ErrorCode::UnknownCountry, "'" + country + "' is not in the panel");

    const int D = static_cast<int>(phi.phi.cols());
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();

    DensityVector out;
    out.year = phi.year;
    out.metric = phi.metric;
    out.country = country;
    out.catalogs = phi.catalogs;
    out.density = Eigen::VectorXd::Constant(D, nan);

    for (int j = 0; j < D; ++j) {
        double num = 0.0, den = 0.0;
        for (int i = 0; i < D; ++i) {
            if (i == j) continue;
            const double p = phi.phi(i, j);
            den += p;
            if (flags.flags(c, i)) num += p;
        }
        if (den > 0.0) out.density(j) = num / den;
    }
    return out;
}

Eigen::VectorXd delta_density(const DensityVector& d_start, const DensityVector& d_end) {
    if (d_start.country != d_end.country || !same_catalogs(d_start.catalogs, d_end.catalogs)) {
        fail(ErrorCode::CountryMismatch, "density vectors describe different countries");
    }
    if (d_start.metric != d_end.metric) {
        fail(ErrorCode::MetricMismatch, "density vectors use different metrics");
    }
    if (!(d_start.year < d_end.year)) {
        fail(ErrorCode::YearOrder, "start year " + std::to_string(d_start.year) +
                                       " must precede end year " + std::to_string(d_end.year));
    }
    // NaN propagates: missing on either side stays missing.
    return d_end.density - d_start.density;
}

} // namespace scispace
