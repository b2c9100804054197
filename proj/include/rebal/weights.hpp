#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace rebal {

struct WeightConfig {
    double theta = 1.0;              // vol-of-vol adjustment strength
    double min_asset_weight = 0.0;   // floor used when aggregating bounds
    double max_asset_weight = 0.15;  // cap used when aggregating bounds
    double rp_perturbation = 0.02;   // +/- shift for the perturbed parity candidates
    double rp_tolerance = 1e-8;      // max relative spread of risk contributions
    double rp_damping = 0.5;         // fixed-point step damping
    int rp_max_iterations = 10000;
    double qp_tolerance = 1e-8;      // KKT residual for bounded solves
};

/// Per-asset allocation band handed to the rebalancing engine.
struct WeightBounds {
    double min_w = 0.0;
    double ideal_w = 0.0;
    double max_w = 0.0;
    bool full_exit = false;
};

struct WeightVector {
    std::vector<std::string> asset_ids;
    std::vector<double> weights;
};

/// 1/k each.
std::vector<double> equal_weights(std::size_t k);

/// Weights proportional to 1/measure, normalized to sum 1.
/// Every measure must be strictly positive.
std::vector<double> inverse_measure_weights(const std::vector<double>& measure);

/// Shifts every weight by delta and floors at zero; deliberately not
/// renormalized (these only feed the bound aggregation).
std::vector<double> perturbed_weights(const std::vector<double>& weights, double delta);

/// Equal-risk-contribution weights: w_i * (Cov w)_i identical across assets.
/// Damped fixed-point iteration with a cyclic coordinate-descent fallback.
std::vector<double> risk_parity_weights(const Eigen::MatrixXd& cov, const WeightConfig& config);

/// Global minimum-variance weights: Cov^-1 1 / (1' Cov^-1 1). May go negative.
std::vector<double> min_variance_weights(const Eigen::MatrixXd& cov);

/// Minimum variance subject to sum-to-one and per-asset box bounds,
/// solved by an active-set method. Pass +infinity for unbounded entries.
std::vector<double> constrained_min_variance_weights(const Eigen::MatrixXd& cov,
                                                     const std::vector<double>& lower,
                                                     const std::vector<double>& upper,
                                                     const WeightConfig& config);

/// w_i * (Cov w)_i per asset; sums to the portfolio variance.
std::vector<double> risk_contributions(const Eigen::MatrixXd& cov,
                                       const std::vector<double>& weights);

/// (max - min) / mean of the risk contributions; 0 means perfect parity.
double risk_contribution_spread(const Eigen::MatrixXd& cov, const std::vector<double>& weights);

/// Cov + lambda I with lambda = 1e-8 * trace / k, the shared conditioning
/// floor for every solver above.
Eigen::MatrixXd regularized(const Eigen::MatrixXd& cov);

/// Folds candidate weight vectors into per-asset [min, ideal, max] bands.
///
/// min bound: max(smallest candidate weight, min(ideal, min_asset_weight));
/// max bound: min(largest candidate weight, max(ideal, max_asset_weight));
/// ideal is the vol-of-vol adjusted weight. A bound that ends up on the wrong
/// side of ideal is widened to ideal. Full-exit assets get (0, 0, 0).
std::vector<WeightBounds> aggregate_weight_bounds(
    const std::vector<std::vector<double>>& candidates, const std::vector<double>& ideal,
    const WeightConfig& config, const std::vector<bool>& full_exit = {});

}  // namespace rebal
