#include "rebal/market_data.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <set>

#include "text_io.hpp"

namespace rebal {

namespace {

void validate_point(const PricePoint& p, const std::string& where) {
    if (p.open <= 0.0 || p.high <= 0.0 || p.low <= 0.0 || p.close <= 0.0) {
        fail(ErrorCategory::validation, "nonpositive price " + where);
    }
    if (p.low > std::min(p.open, p.close) || std::max(p.open, p.close) > p.high) {
        fail(ErrorCategory::validation, "candle violates low/high ordering " + where);
    }
}

void finalize_series(PriceSeries& series, const std::string& path) {
    std::sort(series.points.begin(), series.points.end(),
              [](const PricePoint& a, const PricePoint& b) { return a.date < b.date; });
    for (std::size_t i = 1; i < series.points.size(); ++i) {
        if (series.points[i].date == series.points[i - 1].date) {
            fail(ErrorCategory::validation,
                 "duplicate date " + series.points[i].date.to_string() + " for asset '" +
                     series.asset_id + "' in " + path);
        }
    }
}

}  // namespace

std::vector<PriceSeries> load_price_series(const std::string& path) {
    const auto lines = detail::read_lines(path);
    if (lines.empty()) {
        fail(ErrorCategory::parse, "empty price file: " + path);
    }
    const auto header = detail::split_csv(detail::lower(lines[0]));
    bool combined = false;
    if (header.size() == 6 && detail::trim(header[0]) == "asset") {
        combined = true;
    } else if (header.size() != 5 || detail::trim(header[0]) != "date") {
        fail(ErrorCategory::parse,
             "unrecognized price header in " + path +
                 " (want date,open,high,low,close or asset,date,open,high,low,close)");
    }

    std::map<std::string, PriceSeries> by_asset;
    std::vector<std::string> order;
    const std::string stem = std::filesystem::path(path).stem().string();
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (detail::trim(lines[i]).empty()) continue;
        const std::string where = "at " + path + ":" + std::to_string(i + 1);
        const auto fields = detail::split_csv(lines[i]);
        const std::size_t expected = combined ? 6 : 5;
        if (fields.size() != expected) {
            fail(ErrorCategory::parse, "malformed row (" + std::to_string(fields.size()) +
                                           " fields, want " + std::to_string(expected) + ") " + where);
        }
        std::size_t f = 0;
        const std::string asset = combined ? detail::trim(fields[f++]) : stem;
        PricePoint p;
        p.date = parse_date(detail::trim(fields[f++]));
        p.open = detail::parse_double(fields[f++], where);
        p.high = detail::parse_double(fields[f++], where);
        p.low = detail::parse_double(fields[f++], where);
        p.close = detail::parse_double(fields[f++], where);
        validate_point(p, where);
        if (!by_asset.count(asset)) {
            order.push_back(asset);
            by_asset[asset].asset_id = asset;
        }
        by_asset[asset].points.push_back(p);
    }
    if (order.empty()) {
        fail(ErrorCategory::parse, "price file has no data rows: " + path);
    }

    std::vector<PriceSeries> out;
    out.reserve(order.size());
    for (const auto& asset : order) {
        PriceSeries& s = by_asset[asset];
        finalize_series(s, path);
        out.push_back(std::move(s));
    }
    return out;
}

ReturnSeries log_returns(const PriceSeries& series) {
    if (series.points.size() < 2) {
        fail(ErrorCategory::insufficient_data,
             "asset '" + series.asset_id + "' needs at least two prices for returns");
    }
    ReturnSeries out;
    out.asset_id = series.asset_id;
    out.dates.reserve(series.points.size() - 1);
    out.values.reserve(series.points.size() - 1);
    for (std::size_t i = 1; i < series.points.size(); ++i) {
        out.dates.push_back(series.points[i].date);
        out.values.push_back(std::log(series.points[i].close / series.points[i - 1].close));
    }
    return out;
}

namespace {

// Two-pass mean/variance over values[first..last].
void window_stats(const std::vector<double>& values, std::size_t first, std::size_t last,
                  double& mean, double& variance) {
    const std::size_t n = last - first + 1;
    double sum = 0.0;
    for (std::size_t i = first; i <= last; ++i) sum += values[i];
    mean = sum / static_cast<double>(n);
    double sq = 0.0;
    for (std::size_t i = first; i <= last; ++i) {
        const double d = values[i] - mean;
        sq += d * d;
    }
    variance = n > 1 ? sq / static_cast<double>(n - 1) : 0.0;
}

void check_windows(int window, int min_history) {
    if (window < 2) {
        fail(ErrorCategory::validation, "stats window must be at least 2");
    }
    if (min_history < 2 || min_history > window) {
        fail(ErrorCategory::validation, "min_history must be in [2, window]");
    }
}

}  // namespace

std::vector<RiskStats> rolling_stats(const ReturnSeries& returns, int window, int min_history) {
    check_windows(window, min_history);
    const std::size_t n = returns.size();
    if (n < static_cast<std::size_t>(min_history)) {
        fail(ErrorCategory::insufficient_data,
             "asset '" + returns.asset_id + "' has " + std::to_string(n) +
                 " returns, needs " + std::to_string(min_history));
    }
    // Full windows when the series is long enough, else expanding windows.
    const std::size_t start =
        n >= static_cast<std::size_t>(window) ? static_cast<std::size_t>(window) - 1
                                              : static_cast<std::size_t>(min_history) - 1;
    std::vector<RiskStats> out;
    out.reserve(n - start);
    for (std::size_t t = start; t < n; ++t) {
        const std::size_t used = std::min<std::size_t>(window, t + 1);
        RiskStats s;
        s.date = returns.dates[t];
        s.window = static_cast<int>(used);
        window_stats(returns.values, t + 1 - used, t, s.mean_return, s.variance);
        s.volatility = std::sqrt(s.variance);
        s.vvv_factor = 0.0;
        s.vvv_volatility = s.volatility;
        out.push_back(s);
    }
    return out;
}

std::vector<RiskStats> vvv_adjusted_volatility(const std::vector<RiskStats>& stats, int window,
                                               double theta, int min_history) {
    check_windows(window, min_history);
    if (stats.size() < 2) {
        fail(ErrorCategory::insufficient_data,
             "need at least two volatility points for a vol-of-vol step");
    }
    // Log steps of the volatility path; zero volatility yields a flagged 0.
    std::vector<double> steps(stats.size() - 1, 0.0);
    std::vector<bool> flagged(stats.size() - 1, false);
    for (std::size_t i = 1; i < stats.size(); ++i) {
        if (stats[i].volatility > 0.0 && stats[i - 1].volatility > 0.0) {
            steps[i - 1] = std::log(stats[i].volatility / stats[i - 1].volatility);
        } else {
            flagged[i - 1] = true;
        }
    }
    const std::size_t n = steps.size();
    if (n < static_cast<std::size_t>(min_history)) {
        fail(ErrorCategory::insufficient_data,
             "only " + std::to_string(n) + " vol-of-vol steps, needs " +
                 std::to_string(min_history));
    }
    const std::size_t start =
        n >= static_cast<std::size_t>(window) ? static_cast<std::size_t>(window) - 1
                                              : static_cast<std::size_t>(min_history) - 1;
    std::vector<RiskStats> out;
    out.reserve(n - start);
    for (std::size_t t = start; t < n; ++t) {
        const std::size_t used = std::min<std::size_t>(window, t + 1);
        double mean = 0.0, variance = 0.0;
        window_stats(steps, t + 1 - used, t, mean, variance);
        RiskStats s = stats[t + 1];  // step t spans stats[t] -> stats[t+1]
        s.vvv_factor = std::sqrt(variance);
        s.vvv_volatility = s.volatility + theta * s.vvv_factor;
        for (std::size_t i = t + 1 - used; i <= t; ++i) {
            if (flagged[i]) s.degenerate_volatility = true;
        }
        out.push_back(s);
    }
    return out;
}

CovarianceMatrix covariance_matrix(const std::vector<ReturnSeries>& returns, int window,
                                   int min_history) {
    check_windows(window, min_history);
    if (returns.empty()) {
        fail(ErrorCategory::validation, "covariance needs at least one return series");
    }
    std::set<Date> common(returns[0].dates.begin(), returns[0].dates.end());
    for (std::size_t a = 1; a < returns.size(); ++a) {
        std::set<Date> next;
        for (const Date& d : returns[a].dates) {
            if (common.count(d)) next.insert(d);
        }
        common.swap(next);
    }
    if (common.size() < static_cast<std::size_t>(min_history)) {
        fail(ErrorCategory::insufficient_data,
             "assets share only " + std::to_string(common.size()) +
                 " overlapping return dates, needs " + std::to_string(min_history));
    }
    std::vector<Date> dates(common.begin(), common.end());
    if (dates.size() > static_cast<std::size_t>(window)) {
        dates.erase(dates.begin(), dates.end() - window);
    }
    const std::size_t n = dates.size();
    const std::size_t k = returns.size();

    std::vector<std::vector<double>> obs(k, std::vector<double>(n));
    CovarianceMatrix out;
    out.asset_ids.reserve(k);
    for (std::size_t a = 0; a < k; ++a) {
        out.asset_ids.push_back(returns[a].asset_id);
        std::map<Date, double> lookup;
        for (std::size_t i = 0; i < returns[a].dates.size(); ++i) {
            lookup[returns[a].dates[i]] = returns[a].values[i];
        }
        for (std::size_t i = 0; i < n; ++i) {
            obs[a][i] = lookup[dates[i]];
        }
    }
    std::vector<double> means(k, 0.0);
    for (std::size_t a = 0; a < k; ++a) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) sum += obs[a][i];
        means[a] = sum / static_cast<double>(n);
    }
    // Plain loops keep the diagonal bit-for-bit equal to the two-pass rolling
    // variance on the same window.
    out.values.resize(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = a; b < k; ++b) {
            double sum = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                sum += (obs[a][i] - means[a]) * (obs[b][i] - means[b]);
            }
            const double cov = sum / static_cast<double>(n - 1);
            out.values(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = cov;
            out.values(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = cov;
        }
    }
    out.window = static_cast<int>(n);
    return out;
}

}  // namespace rebal
