#include "scispace/regression.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

namespace scispace {

DensityField build_density_field(const std::map<int, ProximityMatrix>& phis,
                                 const std::map<int, RcaFlags>& flags) {
    if (phis.empty()) fail(ErrorCode::EmptyFlags, "no proximity matrices supplied");
    DensityField field;
    field.metric = phis.begin()->second.metric;
    field.catalogs = phis.begin()->second.catalogs;
    for (const auto& [year, phi] : phis) {
        auto it = flags.find(year);
        if (it == flags.end()) {
            fail(ErrorCode::MissingYearSlice, "no flags for year " + std::to_string(year));
        }
        std::vector<DensityVector> per_country;
        per_country.reserve(field.catalogs->n_countries());
        for (const std::string& country : field.catalogs->countries) {
            per_country.push_back(avg_proximity(phi, it->second, country));
        }
        field.by_year.emplace(year, std::move(per_country));
    }
    return field;
}

RegressionDataset build_design(const GrowthPanel& growth, const DensityField& density,
                               DensityMode mode, Subsample subsample, bool with_interaction) {
    if (!same_catalogs(growth.catalogs, density.catalogs)) {
        fail(ErrorCode::InconsistentInputs, "growth panel and density field use different catalogs");
    }
    if (growth.metric != density.metric) {
        fail(ErrorCode::MetricMismatch, "growth panel and density field use different metrics");
    }

    RegressionDataset ds;
    ds.subsample = subsample;
    ds.with_interaction = with_interaction;
    ds.density_label =
        mode == DensityMode::delta_over_period ? "DeltaAvgProximity" : "AvgProximity";

    std::map<std::pair<int, int>, int> unit_codes;
    std::set<int> periods_seen;

    for (const GrowthRow& row : growth.rows) {
        const bool lt = row.start_value < 1.0;
        if ((subsample == Subsample::rca_lt_1) != lt) continue;

        const Period& period = growth.grid.periods[row.period];
        auto start_it = density.by_year.find(period.start);
        if (start_it == density.by_year.end()) {
            fail(ErrorCode::MissingYearSlice,
                 "density field lacks year " + std::to_string(period.start));
        }
        double x = start_it->second[row.country].density(row.discipline);
        if (mode == DensityMode::delta_over_period) {
            auto end_it = density.by_year.find(period.end);
            if (end_it == density.by_year.end()) {
                fail(ErrorCode::MissingYearSlice,
                     "density field lacks year " + std::to_string(period.end));
            }
            x = end_it->second[row.country].density(row.discipline) - x;
        }
        if (std::isnan(x)) {
            ++ds.n_dropped_join;  // JoinKeyMissing: counted, row dropped
            continue;
        }

        ds.y.push_back(row.growth);
        ds.x_density.push_back(x);
        ds.x_rca.push_back(row.start_value);
        if (with_interaction) ds.x_interaction.push_back(x * row.start_value);

        auto [it, inserted] = unit_codes.try_emplace({row.country, row.discipline},
                                                     static_cast<int>(unit_codes.size()));
        ds.unit_ids.push_back(it->second);
        ds.country_ids.push_back(row.country);
        ds.period_ids.push_back(row.period);
        periods_seen.insert(row.period);
    }

    ds.n_units = static_cast<int>(unit_codes.size());
    ds.grid_periods.assign(periods_seen.begin(), periods_seen.end());
    ds.n_periods = static_cast<int>(ds.grid_periods.size());

    // Compact period codes in grid order.
    std::map<int, int> dense;
    for (size_t i = 0; i < ds.grid_periods.size(); ++i) dense[ds.grid_periods[i]] = static_cast<int>(i);
    for (int& p : ds.period_ids) p = dense[p];

    // Name dummies by the actual period years.
    ds.period_names.clear();
    for (int grid_index : ds.grid_periods) {
        const Period& p = growth.grid.periods[grid_index];
        ds.period_names.push_back("period_" + std::to_string(p.start) + "_" +
                                  std::to_string(p.end));
    }
    return ds;
}

WithinTransformed within_transform(const RegressionDataset& ds, int base_period) {
    const long n = ds.n_rows();
    if (n == 0) fail(ErrorCode::EmptyDataset, "no rows to transform");
    if (base_period < 0) base_period = 0;
    if (base_period >= ds.n_periods) {
        fail(ErrorCode::InvalidConfig, "base period index out of range");
    }

    WithinTransformed wt;
    wt.base_period = base_period;
    wt.column_names.push_back("density");
    wt.column_names.push_back("rca");
    if (ds.with_interaction) wt.column_names.push_back("interaction");
    for (int p = 0; p < ds.n_periods; ++p) {
        if (p == base_period) continue;
        wt.column_names.push_back(ds.period_names[p]);
    }
    const int k = static_cast<int>(wt.column_names.size());

    wt.X = Eigen::MatrixXd::Zero(n, k);
    wt.y = Eigen::VectorXd(n);
    for (long r = 0; r < n; ++r) {
        int col = 0;
        wt.X(r, col++) = ds.x_density[r];
        wt.X(r, col++) = ds.x_rca[r];
        if (ds.with_interaction) wt.X(r, col++) = ds.x_interaction[r];
        for (int p = 0; p < ds.n_periods; ++p) {
            if (p == base_period) continue;
            if (ds.period_ids[r] == p) wt.X(r, col) = 1.0;
            ++col;
        }
        wt.y(r) = ds.y[r];
    }

    wt.x_grand_means = wt.X.colwise().mean();
    wt.y_grand_mean = wt.y.mean();

    // Demean everything, period dummies included, by unit.
    Eigen::MatrixXd unit_sums = Eigen::MatrixXd::Zero(ds.n_units, k);
    Eigen::VectorXd unit_y = Eigen::VectorXd::Zero(ds.n_units);
    Eigen::VectorXd unit_n = Eigen::VectorXd::Zero(ds.n_units);
    for (long r = 0; r < n; ++r) {
        const int u = ds.unit_ids[r];
        unit_sums.row(u) += wt.X.row(r);
        unit_y(u) += wt.y(r);
        unit_n(u) += 1.0;
    }
    for (long r = 0; r < n; ++r) {
        const int u = ds.unit_ids[r];
        wt.X.row(r) -= unit_sums.row(u) / unit_n(u);
        wt.y(r) -= unit_y(u) / unit_n(u);
    }
    return wt;
}

OlsFit ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
           const std::vector<std::string>& column_names) {
    if (X.rows() != y.size()) {
        fail(ErrorCode::InconsistentInputs, "design and response lengths differ");
    }
    if (X.rows() < X.cols()) {
        fail(ErrorCode::RankDeficient, "fewer rows than columns");
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    const int rank = static_cast<int>(qr.rank());
    if (rank < X.cols()) {
        // The pivot order identifies which columns the QR discarded.
        const auto& perm = qr.colsPermutation().indices();
        std::string dependent;
        for (int i = rank; i < X.cols(); ++i) {
            if (!dependent.empty()) dependent += ", ";
            const int col = perm(i);
            dependent += column_names.empty() || col >= static_cast<int>(column_names.size())
                             ? "column " + std::to_string(col)
                             : column_names[col];
        }
        fail(ErrorCode::RankDeficient, "linearly dependent columns: " + dependent);
    }
    OlsFit fit;
    fit.beta = qr.solve(y);
    fit.residuals = y - X * fit.beta;
    return fit;
}

Eigen::MatrixXd cluster_robust_vcov(const Eigen::MatrixXd& X, const Eigen::VectorXd& residuals,
                                    const std::vector<int>& cluster_ids, int n_absorbed) {
    const long n = X.rows();
    const int k = static_cast<int>(X.cols());
    if (static_cast<long>(cluster_ids.size()) != n) {
        fail(ErrorCode::InconsistentInputs, "cluster id count does not match row count");
    }

    std::map<int, std::vector<long>> groups;
    for (long r = 0; r < n; ++r) groups[cluster_ids[r]].push_back(r);
    const long G = static_cast<long>(groups.size());
    if (G < 2) fail(ErrorCode::SingleCluster, "clustered errors need at least two clusters");

    const double K = static_cast<double>(k + n_absorbed);
    if (static_cast<double>(n) <= K) {
        fail(ErrorCode::RankDeficient, "no residual degrees of freedom (N <= K)");
    }

    Eigen::MatrixXd meat = Eigen::MatrixXd::Zero(k, k);
    for (const auto& [label, rows] : groups) {
        Eigen::VectorXd score = Eigen::VectorXd::Zero(k);
        for (long r : rows) score += X.row(r).transpose() * residuals(r);
        meat += score * score.transpose();
    }

    Eigen::MatrixXd xtx = X.transpose() * X;
    Eigen::MatrixXd bread = xtx.ldlt().solve(Eigen::MatrixXd::Identity(k, k));

    const double scale = (static_cast<double>(G) / (G - 1.0)) *
                         ((static_cast<double>(n) - 1.0) / (static_cast<double>(n) - K));
    Eigen::MatrixXd vcov = scale * bread * meat * bread;
    // Symmetrize away the last-ulp asymmetry from the two-sided product.
    return 0.5 * (vcov + vcov.transpose());
}

int RegressionResult::index_of(const std::string& name) const {
    for (size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) return static_cast<int>(i);
    }
    return -1;
}

double RegressionResult::coef(const std::string& name) const {
    const int i = index_of(name);
    if (i < 0) fail(ErrorCode::MissingCoefficient, "no coefficient named '" + name + "'");
    return coefficients(i);
}

double RegressionResult::se(const std::string& name) const {
    const int i = index_of(name);
    if (i < 0) fail(ErrorCode::MissingCoefficient, "no coefficient named '" + name + "'");
    return std::sqrt(vcov(i, i));
}

RegressionResult fit_fe(const RegressionDataset& ds, const FitOptions& options) {
    if (ds.n_rows() == 0) fail(ErrorCode::EmptyDataset, "regression dataset is empty");

    WithinTransformed wt = within_transform(ds, options.base_period);
    const long n = ds.n_rows();
    const int k = static_cast<int>(wt.X.cols());

    // Stata-style augmented design: restore grand means and add an intercept.
    // Slopes equal the pure within estimates; the intercept recovers the
    // grand-mean constant; residuals are the within residuals.
    Eigen::MatrixXd W(n, k + 1);
    W.col(0).setOnes();
    W.rightCols(k) = wt.X + Eigen::VectorXd::Ones(n) * wt.x_grand_means;
    Eigen::VectorXd y_aug = wt.y.array() + wt.y_grand_mean;

    std::vector<std::string> names;
    names.push_back("const");
    names.insert(names.end(), wt.column_names.begin(), wt.column_names.end());

    OlsFit fit = ols(W, y_aug, names);

    std::vector<int> clusters;
    clusters.reserve(n);
    if (options.cluster == ClusterLevel::country_discipline) {
        clusters = ds.unit_ids;
    } else {
        clusters = ds.country_ids;
    }
    std::set<int> distinct(clusters.begin(), clusters.end());

    // Absorbed unit effects count toward K; the intercept already takes one
    // degree of freedom, so n_units - 1 remain.
    Eigen::MatrixXd vcov = cluster_robust_vcov(W, fit.residuals, clusters, ds.n_units - 1);

    const double sst = wt.y.squaredNorm();
    const double ssr = fit.residuals.squaredNorm();

    RegressionResult res;
    res.names = std::move(names);
    res.coefficients = fit.beta;
    res.vcov = std::move(vcov);
    res.n_obs = n;
    res.n_units = ds.n_units;
    res.n_clusters = static_cast<long>(distinct.size());
    res.r_squared_within = sst > 0.0 ? 1.0 - ssr / sst : 0.0;
    res.cluster_level = cluster_level_name(options.cluster);
    res.subsample = ds.subsample;
    res.with_interaction = ds.with_interaction;
    res.density_label = ds.density_label;
    res.mean_rca =
        std::accumulate(ds.x_rca.begin(), ds.x_rca.end(), 0.0) / static_cast<double>(n);
    res.mean_density =
        std::accumulate(ds.x_density.begin(), ds.x_density.end(), 0.0) / static_cast<double>(n);
    res.n_dropped_join = ds.n_dropped_join;
    return res;
}

MarginalEffects marginal_effects(const RegressionResult& res, double mean_rca,
                                 double mean_density) {
    const int d = res.index_of("density");
    const int r = res.index_of("rca");
    if (d < 0 || r < 0) {
        fail(ErrorCode::MissingCoefficient, "result lacks density or rca coefficients");
    }
    MarginalEffects me;
    me.mean_rca = mean_rca;
    me.mean_density = mean_density;

    const int x = res.index_of("interaction");
    if (x < 0) {
        me.ame_density = res.coefficients(d);
        me.ame_rca = res.coefficients(r);
        me.se_density = std::sqrt(res.vcov(d, d));
        me.se_rca = std::sqrt(res.vcov(r, r));
        return me;
    }
    const double a3 = res.coefficients(x);
    me.ame_density = res.coefficients(d) + a3 * mean_rca;
    me.ame_rca = res.coefficients(r) + a3 * mean_density;
    const double var_d = res.vcov(d, d) + mean_rca * mean_rca * res.vcov(x, x) +
                         2.0 * mean_rca * res.vcov(d, x);
    const double var_r = res.vcov(r, r) + mean_density * mean_density * res.vcov(x, x) +
                         2.0 * mean_density * res.vcov(r, x);
    me.se_density = std::sqrt(std::max(0.0, var_d));
    me.se_rca = std::sqrt(std::max(0.0, var_r));
    return me;
}

double sd_impact(double ame, double sd_density) {
    if (!(sd_density > 0.0)) {
        fail(ErrorCode::InvalidConfig, "standard deviation must be positive");
    }
    return ame * sd_density;
}

} // namespace scispace
