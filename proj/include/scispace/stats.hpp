#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "scispace/regression.hpp"

namespace scispace {

struct VariableStats {
    long count = 0;
    double mean = 0.0;
    double sd = 0.0;  // n-1 denominator; 0 with degenerate=true when count == 1
    double min = 0.0;
    double max = 0.0;
    bool degenerate = false;
};

// Count/mean/sd/min/max block for one regression dataset.
struct SummaryTable {
    Subsample subsample;
    Metric metric;
    std::map<std::string, VariableStats> variables;  // GrowthRCA, AvgProximity, RCA_value
};

SummaryTable summary_stats(const RegressionDataset& ds, Metric metric);

enum class TransitionGroup { gained, stayed_without, kept, lost };

const char* transition_group_name(TransitionGroup g);

// Classifies each discipline of one country by its flag transition between
// two period endpoints.
std::map<std::string, TransitionGroup> transition_split(const RcaFlags& flags_t,
                                                        const RcaFlags& flags_t1,
                                                        const std::string& country);

struct DensityCurve {
    std::vector<double> grid;    // 512 points spanning [min - 3h, max + 3h]
    std::vector<double> values;  // nonnegative, integrates to ~1
    double bandwidth = 0.0;
    std::optional<TransitionGroup> group;
};

// Gaussian KDE. Automatic bandwidth is Silverman's rule,
// 0.9 * min(sd, IQR/1.34) * n^(-1/5); it needs >= 2 distinct values.
DensityCurve kde(const std::vector<double>& values, std::optional<double> bandwidth = {});

} // namespace scispace
