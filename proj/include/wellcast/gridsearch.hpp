#ifndef WELLCAST_GRIDSEARCH_HPP
#define WELLCAST_GRIDSEARCH_HPP

#include "wellcast/forecaster.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace wellcast {

/**
 * Hyperparameter grid: the Cartesian product of every axis is evaluated
 * with a full rolling evaluation per point. Axes that an estimator ignores
 * (alpha for OLS/MLP, hidden size and activation for the linear kinds)
 * still multiply the grid, keeping trial count = product of cardinalities.
 */
struct GridSpec {
    std::vector<int> sampling_days{10};
    std::vector<int> look_back{15};
    std::vector<EstimatorKind> estimators{EstimatorKind::Ols};
    std::vector<double> alphas{0.0};
    std::vector<int> hidden_sizes{20};
    std::vector<Activation> activations{Activation::Identity};
    std::vector<size_t> min_train_steps{109};
    std::vector<WindowPolicy> policies{WindowPolicy::Incremental};
    std::vector<size_t> cadences{36};

    Scope scope = Scope::FullField;
    size_t horizon_steps = 18;
    bool auto_trim = true;
    double val_fraction = 0.2;
    MlpTrainConfig mlp;
    uint64_t seed = 0;
    unsigned n_threads = 0; // 0 = hardware concurrency

    size_t trial_count() const;
    void validate() const;
};

struct TrialConfig {
    size_t index = 0;
    int sampling_days = 10;
    int look_back = 15;
    EstimatorKind estimator = EstimatorKind::Ols;
    double alpha = 0.0;
    int hidden_size = 20;
    Activation activation = Activation::Identity;
    size_t min_train_steps = 0;
    WindowPolicy policy = WindowPolicy::Incremental;
    size_t cadence_steps = 1;

    std::string key() const; // stable, sortable description of the point
};

struct TrialResult {
    TrialConfig config;
    bool ok = false;
    std::string failure_reason;
    size_t rounds = 0;
    MetricsReport mean_metrics; // over rolling rounds
};

/// Marginal means: per axis, per axis value, the mean metrics over the
/// successful trials holding that value.
struct MarginalMean {
    std::string value;
    size_t n_trials = 0;
    MetricsReport metrics;
};

struct GridReport {
    std::vector<TrialResult> trials; // in Cartesian order
    std::map<std::string, std::vector<MarginalMean>> marginal_means;

    /// Best successful trial: argmin for error metrics, argmax for r2.
    std::optional<size_t> best_by(std::string_view metric) const;
};

GridReport grid_search(const FieldDataset& ds, const GridSpec& grid);

void save_grid_report_csv(const GridReport& report, const std::filesystem::path& path);
GridReport load_grid_report_csv(const std::filesystem::path& path);
void save_grid_marginals_csv(const GridReport& report, const std::string& axis,
                             const std::filesystem::path& path);

} // namespace wellcast

#endif
