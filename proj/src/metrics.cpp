#include "wellcast/metrics.hpp"

#include "wellcast/errors.hpp"

#include <algorithm>
#include <cmath>

namespace wellcast {

double MetricsReport::value(std::string_view metric) const {
    if (metric == "smape") return smape;
    if (metric == "mape") return mape;
    if (metric == "rmse") return rmse;
    if (metric == "r2") return r2;
    if (metric == "mae") return mae;
    if (metric == "mse") return mse;
    throw ConfigError("unknown metric '" + std::string(metric) + "'");
}

MetricsReport compute_metrics(std::span<const double> actual, std::span<const double> predicted) {
    if (actual.size() != predicted.size()) {
        throw DataError("metric inputs differ in length");
    }
    if (actual.empty()) {
        throw DataError("metric inputs are empty");
    }
    const size_t n = actual.size();
    MetricsReport r;
    r.n_points = n;

    double sum_abs = 0.0, sum_sq = 0.0, sum_smape = 0.0, sum_ape = 0.0;
    double mean_actual = 0.0;
    for (size_t j = 0; j < n; ++j) {
        mean_actual += actual[j];
    }
    mean_actual /= double(n);

    double ss_tot = 0.0;
    for (size_t j = 0; j < n; ++j) {
        const double err = predicted[j] - actual[j];
        const double abs_err = std::abs(err);
        sum_abs += abs_err;
        sum_sq += err * err;
        ss_tot += (actual[j] - mean_actual) * (actual[j] - mean_actual);
        const double denom = (actual[j] + predicted[j]) / 2.0;
        if (denom != 0.0) {
            sum_smape += abs_err / denom;
        }
        if (actual[j] != 0.0) {
            sum_ape += abs_err / std::abs(actual[j]);
        } else {
            ++r.n_skipped_zero_actuals;
        }
    }
    r.mae = sum_abs / double(n);
    r.mse = sum_sq / double(n);
    r.rmse = std::sqrt(r.mse);
    r.smape = sum_smape / double(n);
    const size_t n_used = n - r.n_skipped_zero_actuals;
    r.mape = n_used > 0 ? sum_ape / double(n_used) : 0.0;
    if (ss_tot > 0.0) {
        r.r2 = 1.0 - sum_sq / ss_tot;
    } else {
        r.r2 = sum_sq == 0.0 ? 1.0 : 0.0; // constant actuals
    }
    return r;
}

std::map<std::string, std::vector<double>>
radar_normalize(const std::map<std::string, MetricsReport>& reports,
                std::span<const std::string> metrics) {
    if (reports.empty()) {
        throw DataError("radar normalization needs at least one estimator");
    }
    std::map<std::string, std::vector<double>> out;
    for (const auto& [name, rep] : reports) {
        out[name].resize(metrics.size(), 0.0);
    }
    for (size_t m = 0; m < metrics.size(); ++m) {
        double max_value = 0.0;
        for (const auto& [name, rep] : reports) {
            const double v = rep.value(metrics[m]);
            if (v < 0.0) {
                throw DataError("radar metric '" + metrics[m] + "' is negative for '" + name +
                                "'");
            }
            max_value = std::max(max_value, v);
        }
        for (const auto& [name, rep] : reports) {
            out[name][m] = max_value > 0.0 ? rep.value(metrics[m]) / max_value : 0.0;
        }
    }
    return out;
}

} // namespace wellcast
