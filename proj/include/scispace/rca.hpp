#pragma once

#include <Eigen/Dense>

#include "scispace/panel.hpp"

namespace scispace {

// Balassa index per (country, discipline) for one year and metric.
// values(c,i) = (x^c_i / x^c) / (x*_i / X*); NaN marks "missing", which
// happens exactly when one of the denominators is zero.
struct RcaSlice {
    int year;
    Metric metric;
    CatalogsPtr catalogs;
    Eigen::MatrixXd values;  // countries x disciplines, NaN = missing

    bool defined(int c, int i) const { return !std::isnan(values(c, i)); }
};

// The >= 1 binarization of a slice; missing maps to false.
struct RcaFlags {
    int year;
    Metric metric;
    CatalogsPtr catalogs;
    Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> flags;  // countries x disciplines
};

RcaSlice rca(const Totals& totals, const Panel& panel);

RcaFlags rca_flag(const RcaSlice& slice);

} // namespace scispace
