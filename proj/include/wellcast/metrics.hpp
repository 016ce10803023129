#ifndef WELLCAST_METRICS_HPP
#define WELLCAST_METRICS_HPP

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wellcast {

/**
 * Forecast error metrics. Errors are predicted - actual; MAPE skips terms
 * with a zero actual (counted in n_skipped_zero_actuals); SMAPE terms with
 * actual + predicted = 0 contribute 0.
 */
struct MetricsReport {
    double smape = 0.0;
    double mape = 0.0;
    double rmse = 0.0;
    double r2 = 0.0;
    double mae = 0.0;
    double mse = 0.0;
    size_t n_points = 0;
    size_t n_skipped_zero_actuals = 0;

    double value(std::string_view metric) const; // by name: "smape", "mape", ...
};

/// Metric names in report order.
inline constexpr const char* kMetricNames[] = {"smape", "mape", "rmse", "r2", "mae", "mse"};

/// Error metrics suited to radar comparison (all non-negative).
inline const std::vector<std::string> kRadarMetrics = {"smape", "mape", "mae", "mse"};

MetricsReport compute_metrics(std::span<const double> actual, std::span<const double> predicted);

/// Divide each selected metric by its maximum across estimators, so 1.0
/// marks the worst performer per metric. All-zero columns stay zero.
std::map<std::string, std::vector<double>>
radar_normalize(const std::map<std::string, MetricsReport>& reports,
                std::span<const std::string> metrics);

} // namespace wellcast

#endif
