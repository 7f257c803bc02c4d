#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "scispace/growth.hpp"
#include "scispace/proximity.hpp"

namespace scispace {

enum class Subsample { rca_lt_1, rca_ge_1 };

inline const char* subsample_name(Subsample s) {
    return s == Subsample::rca_lt_1 ? "rca_lt_1" : "rca_ge_1";
}

enum class ClusterLevel { country_discipline, country };

inline const char* cluster_level_name(ClusterLevel c) {
    return c == ClusterLevel::country_discipline ? "country-discipline" : "country";
}

// How the density regressor is attached to a growth row: the level at the
// period start, or the change over the period.
enum class DensityMode { level_at_start, delta_over_period };

// Per-metric density values for every (year, country) the designs may join on.
struct DensityField {
    Metric metric;
    CatalogsPtr catalogs;
    std::map<int, std::vector<DensityVector>> by_year;  // country catalog order
};

DensityField build_density_field(const std::map<int, ProximityMatrix>& phis,
                                 const std::map<int, RcaFlags>& flags);

// Stacked observations for one regression column.
struct RegressionDataset {
    std::vector<double> y;
    std::vector<double> x_density;
    std::vector<double> x_rca;
    std::vector<double> x_interaction;  // empty unless with_interaction
    std::vector<int> unit_ids;          // dense country-discipline codes
    std::vector<int> period_ids;        // dense period codes (grid order kept)
    std::vector<int> country_ids;       // catalog indices, for country clustering
    std::vector<int> grid_periods;      // original grid index per period code
    std::vector<std::string> period_names;  // dummy labels, one per period code
    Subsample subsample;
    bool with_interaction = false;
    std::string density_label = "AvgProximity";
    int n_units = 0;
    int n_periods = 0;
    long n_dropped_join = 0;  // rows lost to missing density / delta

    long n_rows() const { return static_cast<long>(y.size()); }
};

RegressionDataset build_design(const GrowthPanel& growth, const DensityField& density,
                               DensityMode mode, Subsample subsample, bool with_interaction);

// Unit-demeaned design: slope columns plus period dummies (base excluded), all
// with per-unit mean zero. Grand means are kept for constant recovery.
struct WithinTransformed {
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
    std::vector<std::string> column_names;
    Eigen::RowVectorXd x_grand_means;
    double y_grand_mean = 0.0;
    int base_period = 0;  // dense period code used as the dummy base
};

WithinTransformed within_transform(const RegressionDataset& ds, int base_period = -1);

struct OlsFit {
    Eigen::VectorXd beta;
    Eigen::VectorXd residuals;
};

// Least squares via column-pivoted QR; rank deficiency names the columns that
// are linear combinations of earlier ones.
OlsFit ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
           const std::vector<std::string>& column_names = {});

// CR1 sandwich: (X'X)^-1 (sum_g X_g' u_g u_g' X_g) (X'X)^-1 scaled by
// G/(G-1) * (N-1)/(N-K) with K = ncol(X) + n_absorbed.
Eigen::MatrixXd cluster_robust_vcov(const Eigen::MatrixXd& X, const Eigen::VectorXd& residuals,
                                    const std::vector<int>& cluster_ids, int n_absorbed = 0);

struct RegressionResult {
    std::vector<std::string> names;  // const, density, rca, [interaction], period dummies
    Eigen::VectorXd coefficients;
    Eigen::MatrixXd vcov;  // CR1, aligned with names
    long n_obs = 0;
    long n_units = 0;
    long n_clusters = 0;
    double r_squared_within = 0.0;
    std::string cluster_level;
    Subsample subsample = Subsample::rca_lt_1;
    bool with_interaction = false;
    std::string density_label = "AvgProximity";
    double mean_rca = 0.0;      // subsample means, the marginal-effect anchors
    double mean_density = 0.0;
    long n_dropped_join = 0;

    int index_of(const std::string& name) const;  // -1 if absent
    double coef(const std::string& name) const;
    double se(const std::string& name) const;
};

struct FitOptions {
    ClusterLevel cluster = ClusterLevel::country_discipline;
    int base_period = -1;  // -1: first period present in the dataset
};

// Within estimator with period dummies and Stata-style constant; slope
// estimates and clustered standard errors match explicit dummy-variable OLS.
RegressionResult fit_fe(const RegressionDataset& ds, const FitOptions& options = {});

struct MarginalEffects {
    double ame_density;
    double ame_rca;
    double se_density;
    double se_rca;
    double mean_rca;
    double mean_density;
};

// At-means effects; with an interaction term a3:
//   ame_density = a1 + a3 * mean_rca,  se^2 = V11 + m^2 V33 + 2 m V13
// and symmetrically for rca. Without interaction the slopes pass through.
MarginalEffects marginal_effects(const RegressionResult& res, double mean_rca,
                                 double mean_density);

// Growth-rate impact of a one-standard-deviation move in density, as a
// fraction (0.0565 reads as 5.65 percentage points).
double sd_impact(double ame, double sd_density);

} // namespace scispace
