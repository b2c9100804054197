#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rebal/dates.hpp"

namespace rebal {

struct PricePoint {
    Date date;
    double open = 0.0;
    double high = 0.0;
    double low = 0.0;
    double close = 0.0;
};

struct PriceSeries {
    std::string asset_id;
    std::vector<PricePoint> points;  // ascending by date, unique dates
};

/// Log returns on close prices; values[i] belongs to dates[i].
struct ReturnSeries {
    std::string asset_id;
    std::vector<Date> dates;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
};

/// Rolling risk statistics for one asset at one date.
struct RiskStats {
    Date date;
    int window = 0;            // number of returns actually used
    double mean_return = 0.0;
    double variance = 0.0;
    double volatility = 0.0;
    double vvv_factor = 0.0;   // dispersion of volatility-of-volatility steps
    double vvv_volatility = 0.0;
    bool degenerate_volatility = false;  // a zero volatility was hit inside a vvv window
};

struct CovarianceMatrix {
    std::vector<std::string> asset_ids;
    Eigen::MatrixXd values;  // symmetric, asset order matches asset_ids
    int window = 0;          // overlapping dates used
};

/// Reads OHLC candles from a comma-separated file.
///
/// Accepted headers: "date,open,high,low,close" (single asset, named after the
/// file stem) or "asset,date,open,high,low,close" (many assets in one file).
/// Rows are validated (positive prices, low <= open/close <= high, no
/// duplicate dates) and sorted ascending by date per asset.
std::vector<PriceSeries> load_price_series(const std::string& path);

/// ln(close_t / close_{t-1}); needs at least two points.
ReturnSeries log_returns(const PriceSeries& series);

/// Trailing mean/variance/volatility per date.
///
/// With at least `window` returns, stats start once a full window is
/// available. Shorter series fall back to expanding windows beginning at
/// `min_history` returns; fewer than `min_history` returns is an error.
std::vector<RiskStats> rolling_stats(const ReturnSeries& returns, int window = 90,
                                     int min_history = 30);

/// Adds the volatility-of-volatility adjustment on top of rolling stats.
///
/// Per step v_t = ln(vol_t / vol_{t-1}); the factor is the sample standard
/// deviation of v over a trailing window and the adjusted volatility is
/// vol + theta * factor. Zero volatilities inside a window contribute v = 0
/// and set the degenerate flag instead of failing.
std::vector<RiskStats> vvv_adjusted_volatility(const std::vector<RiskStats>& stats,
                                               int window = 90, double theta = 1.0,
                                               int min_history = 30);

/// Sample covariance over the trailing overlap of the given return series.
///
/// Dates are intersected across assets; the last `window` common dates feed a
/// 1/(n-1) covariance. Fewer than `min_history` common dates is an error.
CovarianceMatrix covariance_matrix(const std::vector<ReturnSeries>& returns,
                                   int window = 90, int min_history = 30);

}  // namespace rebal
