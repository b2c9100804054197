#include "rebal/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rebal/errors.hpp"

namespace rebal {

namespace {

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<double> from_eigen(const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

void check_square(const Eigen::MatrixXd& cov) {
    if (cov.rows() == 0 || cov.rows() != cov.cols()) {
        fail(ErrorCategory::validation, "covariance matrix must be square and nonempty");
    }
}

}  // namespace

std::vector<double> equal_weights(std::size_t k) {
    if (k == 0) {
        fail(ErrorCategory::validation, "cannot weight an empty asset list");
    }
    return std::vector<double>(k, 1.0 / static_cast<double>(k));
}

std::vector<double> inverse_measure_weights(const std::vector<double>& measure) {
    if (measure.empty()) {
        fail(ErrorCategory::validation, "cannot weight an empty asset list");
    }
    std::vector<double> out(measure.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < measure.size(); ++i) {
        if (!(measure[i] > 0.0) || !std::isfinite(measure[i])) {
            fail(ErrorCategory::validation,
                 "inverse weighting needs strictly positive measures, got " +
                     std::to_string(measure[i]));
        }
        out[i] = 1.0 / measure[i];
        sum += out[i];
    }
    for (double& w : out) w /= sum;
    return out;
}

std::vector<double> perturbed_weights(const std::vector<double>& weights, double delta) {
    std::vector<double> out(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i) {
        out[i] = std::max(weights[i] + delta, 0.0);
    }
    return out;
}

Eigen::MatrixXd regularized(const Eigen::MatrixXd& cov) {
    check_square(cov);
    const double trace = cov.trace();
    if (!(trace > 0.0) || !cov.allFinite()) {
        fail(ErrorCategory::validation, "covariance matrix must be finite with positive trace");
    }
    const double lambda = 1e-8 * trace / static_cast<double>(cov.rows());
    return cov + lambda * Eigen::MatrixXd::Identity(cov.rows(), cov.cols());
}

std::vector<double> risk_contributions(const Eigen::MatrixXd& cov,
                                       const std::vector<double>& weights) {
    check_square(cov);
    if (static_cast<Eigen::Index>(weights.size()) != cov.rows()) {
        fail(ErrorCategory::validation, "weight/covariance dimension mismatch");
    }
    const Eigen::VectorXd w = to_eigen(weights);
    const Eigen::VectorXd cw = cov * w;
    std::vector<double> out(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i) {
        out[i] = weights[i] * cw[static_cast<Eigen::Index>(i)];
    }
    return out;
}

double risk_contribution_spread(const Eigen::MatrixXd& cov, const std::vector<double>& weights) {
    const auto rc = risk_contributions(cov, weights);
    const auto [lo, hi] = std::minmax_element(rc.begin(), rc.end());
    const double mean = std::accumulate(rc.begin(), rc.end(), 0.0) / static_cast<double>(rc.size());
    if (mean == 0.0) return *hi - *lo == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return (*hi - *lo) / std::fabs(mean);
}

namespace {

// One cyclic coordinate-descent sweep toward equal risk contributions.
// Each coordinate solves cov_ii w_i^2 + b w_i - target = 0 for its positive root.
void ccd_sweep(const Eigen::MatrixXd& cov, Eigen::VectorXd& w, Eigen::VectorXd& cw) {
    const Eigen::Index k = cov.rows();
    const double variance = w.dot(cw);
    const double target = variance / static_cast<double>(k);
    for (Eigen::Index i = 0; i < k; ++i) {
        const double b = cw[i] - cov(i, i) * w[i];
        const double disc = b * b + 4.0 * cov(i, i) * target;
        const double root = (-b + std::sqrt(std::max(disc, 0.0))) / (2.0 * cov(i, i));
        const double delta = root - w[i];
        if (delta != 0.0) {
            cw += cov.col(i) * delta;
            w[i] = root;
        }
    }
    const double sum = w.sum();
    w /= sum;
    cw /= sum;
}

}  // namespace

std::vector<double> risk_parity_weights(const Eigen::MatrixXd& cov, const WeightConfig& config) {
    check_square(cov);
    const Eigen::Index k = cov.rows();
    if (k == 1) return {1.0};
    // Parity only needs covariance products, never an inverse, so it runs on
    // the raw matrix: the spread tolerance is a promise about the input and a
    // conditioning shift would bias the fixed point past it.
    for (Eigen::Index i = 0; i < k; ++i) {
        if (!(cov(i, i) > 0.0)) {
            fail(ErrorCategory::solver,
                 "risk parity needs strictly positive variances; asset " + std::to_string(i) +
                     " has none");
        }
    }

    Eigen::VectorXd w = Eigen::VectorXd::Constant(k, 1.0 / static_cast<double>(k));
    auto spread = [&](const Eigen::VectorXd& v) {
        return risk_contribution_spread(cov, from_eigen(v));
    };

    // Damped fixed point: w_i <- portfolio variance / (k * (Cov w)_i).
    bool fixed_point_ok = true;
    int iter = 0;
    for (; iter < config.rp_max_iterations; ++iter) {
        if (spread(w) <= config.rp_tolerance) return from_eigen(w);
        const Eigen::VectorXd cw = cov * w;
        const double variance = w.dot(cw);
        Eigen::VectorXd next(k);
        for (Eigen::Index i = 0; i < k; ++i) {
            if (!(cw[i] > 0.0)) {
                fixed_point_ok = false;
                break;
            }
            next[i] = variance / (static_cast<double>(k) * cw[i]);
        }
        if (!fixed_point_ok) break;
        next /= next.sum();
        const Eigen::VectorXd blended = (1.0 - config.rp_damping) * w + config.rp_damping * next;
        if ((blended - w).cwiseAbs().maxCoeff() < 1e-15) {
            w = blended;
            break;  // stalled below the tolerance floor; hand over to descent
        }
        w = blended;
    }
    if (spread(w) <= config.rp_tolerance) return from_eigen(w);

    // Coordinate-descent fallback for covariances the fixed point cannot settle.
    Eigen::VectorXd cw = cov * w;
    for (int sweep = 0; sweep < config.rp_max_iterations; ++sweep) {
        ccd_sweep(cov, w, cw);
        if (spread(w) <= config.rp_tolerance) return from_eigen(w);
    }
    fail(ErrorCategory::solver,
         "risk parity failed to converge; residual spread " + std::to_string(spread(w)));
}

std::vector<double> min_variance_weights(const Eigen::MatrixXd& cov) {
    check_square(cov);
    const Eigen::MatrixXd x = regularized(cov);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(x.rows());
    const Eigen::VectorXd solved = x.ldlt().solve(ones);
    const double denom = ones.dot(solved);
    if (!(denom > 0.0) || !std::isfinite(denom)) {
        fail(ErrorCategory::solver, "minimum-variance system is degenerate");
    }
    return from_eigen(solved / denom);
}

std::vector<double> constrained_min_variance_weights(const Eigen::MatrixXd& cov,
                                                     const std::vector<double>& lower,
                                                     const std::vector<double>& upper,
                                                     const WeightConfig& config) {
    check_square(cov);
    const Eigen::Index k = cov.rows();
    if (lower.size() != static_cast<std::size_t>(k) || upper.size() != static_cast<std::size_t>(k)) {
        fail(ErrorCategory::validation, "bound/covariance dimension mismatch");
    }
    double lo_sum = 0.0, hi_sum = 0.0;
    bool hi_unbounded = false;
    for (Eigen::Index i = 0; i < k; ++i) {
        if (lower[i] > upper[i]) {
            fail(ErrorCategory::validation, "lower bound above upper bound");
        }
        lo_sum += lower[i];
        if (std::isinf(upper[i])) {
            hi_unbounded = true;
        } else {
            hi_sum += upper[i];
        }
    }
    const double eps = config.qp_tolerance;
    if (lo_sum > 1.0 + eps || (!hi_unbounded && hi_sum < 1.0 - eps)) {
        fail(ErrorCategory::infeasible, "weight bounds cannot sum to one");
    }
    const Eigen::MatrixXd x = regularized(cov);

    // Active-set over the box constraints; the budget constraint stays in the
    // reduced KKT system throughout.
    enum class State { free, at_lower, at_upper };
    std::vector<State> state(k, State::free);
    Eigen::VectorXd w = Eigen::VectorXd::Zero(k);
    double nu = 0.0;
    const int max_rounds = 50 + 20 * static_cast<int>(k);

    for (int round = 0; round < max_rounds; ++round) {
        std::vector<Eigen::Index> free_idx;
        double fixed_sum = 0.0;
        for (Eigen::Index i = 0; i < k; ++i) {
            if (state[i] == State::free) {
                free_idx.push_back(i);
            } else {
                w[i] = state[i] == State::at_lower ? lower[i] : upper[i];
                fixed_sum += w[i];
            }
        }
        if (free_idx.empty()) {
            if (std::fabs(fixed_sum - 1.0) > eps) {
                fail(ErrorCategory::solver, "active-set solve pinned every weight off budget");
            }
        } else {
            const Eigen::Index f = static_cast<Eigen::Index>(free_idx.size());
            Eigen::MatrixXd xff(f, f);
            Eigen::VectorXd rhs_fixed = Eigen::VectorXd::Zero(f);
            for (Eigen::Index a = 0; a < f; ++a) {
                for (Eigen::Index b = 0; b < f; ++b) {
                    xff(a, b) = x(free_idx[a], free_idx[b]);
                }
                for (Eigen::Index i = 0; i < k; ++i) {
                    if (state[i] != State::free) {
                        rhs_fixed[a] += x(free_idx[a], i) * w[i];
                    }
                }
            }
            const auto solver = xff.ldlt();
            const Eigen::VectorXd u = solver.solve(Eigen::VectorXd::Ones(f));
            const Eigen::VectorXd v = solver.solve(rhs_fixed);
            const double denom = u.sum();
            if (!(std::fabs(denom) > 0.0) || !std::isfinite(denom)) {
                fail(ErrorCategory::solver, "reduced minimum-variance system is degenerate");
            }
            nu = (1.0 - fixed_sum + v.sum()) / denom;
            for (Eigen::Index a = 0; a < f; ++a) {
                w[free_idx[a]] = nu * u[a] - v[a];
            }
        }

        // Pin the most violated free weight, if any.
        Eigen::Index worst = -1;
        double worst_violation = eps;
        State worst_state = State::free;
        for (Eigen::Index i : free_idx) {
            if (lower[i] - w[i] > worst_violation) {
                worst_violation = lower[i] - w[i];
                worst = i;
                worst_state = State::at_lower;
            }
            if (w[i] - upper[i] > worst_violation) {
                worst_violation = w[i] - upper[i];
                worst = i;
                worst_state = State::at_upper;
            }
        }
        if (worst >= 0) {
            state[worst] = worst_state;
            continue;
        }

        // All free weights feasible; release the worst-signed multiplier.
        const Eigen::VectorXd grad = x * w;
        Eigen::Index release = -1;
        double most_negative = -eps;
        for (Eigen::Index i = 0; i < k; ++i) {
            if (state[i] == State::at_lower && grad[i] - nu < most_negative) {
                most_negative = grad[i] - nu;
                release = i;
            } else if (state[i] == State::at_upper && nu - grad[i] < most_negative) {
                most_negative = nu - grad[i];
                release = i;
            }
        }
        if (release >= 0) {
            state[release] = State::free;
            continue;
        }
        return from_eigen(w);
    }
    fail(ErrorCategory::solver, "active-set minimum variance did not converge");
}

std::vector<WeightBounds> aggregate_weight_bounds(
    const std::vector<std::vector<double>>& candidates, const std::vector<double>& ideal,
    const WeightConfig& config, const std::vector<bool>& full_exit) {
    if (ideal.empty()) {
        fail(ErrorCategory::validation, "cannot aggregate bounds for an empty asset list");
    }
    if (candidates.empty()) {
        fail(ErrorCategory::validation, "need at least one candidate weight vector");
    }
    for (const auto& c : candidates) {
        if (c.size() != ideal.size()) {
            fail(ErrorCategory::validation, "candidate weight vector length mismatch");
        }
    }
    if (!full_exit.empty() && full_exit.size() != ideal.size()) {
        fail(ErrorCategory::validation, "full-exit flag length mismatch");
    }

    std::vector<WeightBounds> out(ideal.size());
    for (std::size_t i = 0; i < ideal.size(); ++i) {
        if (!full_exit.empty() && full_exit[i]) {
            out[i] = WeightBounds{0.0, 0.0, 0.0, true};
            continue;
        }
        double lo = candidates[0][i];
        double hi = candidates[0][i];
        for (const auto& c : candidates) {
            lo = std::min(lo, c[i]);
            hi = std::max(hi, c[i]);
        }
        WeightBounds b;
        b.ideal_w = ideal[i];
        b.min_w = std::max(lo, std::min(ideal[i], config.min_asset_weight));
        b.max_w = std::min(hi, std::max(ideal[i], config.max_asset_weight));
        b.min_w = std::max(b.min_w, 0.0);
        if (b.min_w > b.ideal_w) b.min_w = b.ideal_w;  // widen a crossing bound
        if (b.max_w < b.ideal_w) b.max_w = b.ideal_w;
        out[i] = b;
    }
    return out;
}

}  // namespace rebal
