#pragma once

#include <Eigen/Dense>
#include <string>

#include "scispace/rca.hpp"

namespace scispace {

// Yearly revealed-proximity matrix over disciplines.
// phi(i,j) = |{c : flag(c,i) and flag(c,j)}| / max(|{c : flag(c,i)}|, |{c : flag(c,j)}|)
// with 0/0 defined as 0. Equals the minimum of the two empirical conditional
// probabilities of co-advantage, which keeps it symmetric and in [0,1].
struct ProximityMatrix {
    int year;
    Metric metric;
    CatalogsPtr catalogs;
    Eigen::MatrixXd phi;     // disciplines x disciplines
    Eigen::VectorXi counts;  // flagged-country count per discipline (diagnostic)
};

// Share of the proximity mass around each discipline that one country already
// produces with advantage. NaN where the denominator sum is zero.
struct DensityVector {
    int year;
    Metric metric;
    std::string country;
    CatalogsPtr catalogs;
    Eigen::VectorXd density;  // per discipline, NaN = missing

    bool defined(int j) const { return !std::isnan(density(j)); }
};

ProximityMatrix proximity_matrix(const RcaFlags& flags);

// density[j] = sum_{i != j} phi(i,j) * flag(c,i) / sum_{i != j} phi(i,j).
// The self term is excluded on both sides.
DensityVector avg_proximity(const ProximityMatrix& phi, const RcaFlags& flags,
                            const std::string& country);

// Per-discipline end - start where both are defined, NaN otherwise.
Eigen::VectorXd delta_density(const DensityVector& d_start, const DensityVector& d_end);

} // namespace scispace
