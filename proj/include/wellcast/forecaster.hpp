#ifndef WELLCAST_FORECASTER_HPP
#define WELLCAST_FORECASTER_HPP

#include "wellcast/metrics.hpp"
#include "wellcast/model_io.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace wellcast {

/**
 * Planned future injector rates, indexed by future step 1..H (aligned to
 * the dataset sampling period). With hold_last set, steps past the end of
 * a sequence repeat its final value instead of failing.
 */
struct InjectionSchedule {
    std::map<std::string, std::map<Phase, std::vector<double>>> rates;
    bool hold_last = false;

    /// Planned rate for a well/phase at 1-based future step. For the FIELD
    /// aggregate well id, entries of that phase are summed across wells.
    double at(const std::string& well_id, Phase phase, size_t step_index) const;

    /// Longest step index covered by every sequence (0 when empty).
    size_t covered_steps() const;
};

InjectionSchedule load_schedule_csv(const std::filesystem::path& path);
void save_schedule_csv(const InjectionSchedule& schedule, const std::filesystem::path& path);

/// The actual injections of ds at steps origin_index .. origin_index+h-1,
/// exposed as a schedule (used by the rolling evaluation).
InjectionSchedule schedule_from_actuals(const FieldDataset& ds, size_t origin_index, size_t h);

/**
 * The rolling model input: the most recent look_back slices of every
 * tracked series, oldest row first.
 */
struct SlidingWindow {
    Eigen::MatrixXd slices;               // look_back x n_series
    std::vector<ColumnKey> series_keys;   // (well, phase) per column, lag 0
    std::vector<size_t> producer_columns; // indices into series_keys

    /// Flatten to the x layout: series-major, lags ascending.
    Eigen::VectorXd flatten() const;
};

/// Advance the window one step: drop the oldest slice and append one whose
/// producer entries come from `predicted` (in producer_columns order) and
/// whose injector entries come from the schedule at 1-based `step_index`.
SlidingWindow assemble_next_input(const SlidingWindow& window, const Eigen::VectorXd& predicted,
                                  const InjectionSchedule& schedule, size_t step_index);

struct ForecastResult {
    Date origin;      // date of the first forecast step
    int step_days = 1;
    size_t horizon = 0;
    std::vector<ColumnKey> output_keys; // producer series, lag 0
    Eigen::MatrixXd predictions;        // horizon x outputs, clamped >= 0
    std::string estimator;
};

/// Step-by-step recursive forecast: H rounds of normalize -> predict ->
/// denormalize -> clamp at 0 -> splice with the scheduled injections.
/// The model must have look_forward = 1 and history must cover look_back steps.
ForecastResult forecast_recursive(const TrainedEstimator& model, const FieldDataset& history,
                                  const InjectionSchedule& schedule, size_t horizon);

void save_forecast_csv(const ForecastResult& fc, const std::filesystem::path& path,
                       const FieldDataset* actuals = nullptr);
ForecastResult load_forecast_csv(const std::filesystem::path& path);

enum class WindowPolicy { Incremental, Fixed };

std::string_view policy_name(WindowPolicy p);
WindowPolicy policy_from_name(std::string_view name);

/**
 * Walk-forward evaluation configuration. Rounds start after min_train_steps
 * of history and advance by cadence_steps; each round trains on the policy
 * window ending at its origin and forecasts horizon_steps.
 */
struct RollingConfig {
    size_t min_train_steps = 0;
    WindowPolicy policy = WindowPolicy::Incremental;
    size_t fixed_window_steps = 0; // used by the fixed policy
    size_t cadence_steps = 1;
    size_t horizon_steps = 18;
    EstimatorKind estimator = EstimatorKind::Ols;
    double alpha = 0.0;
    int hidden_size = 20;
    Activation activation = Activation::Identity;
    MlpTrainConfig mlp;
    WindowConfig window;       // look_forward forced to 1
    double val_fraction = 0.2; // tail of each round's training slice, for MLP early stopping
    uint64_t seed = 0;

    void validate() const;
};

struct RollingRound {
    Date origin;            // forecast origin (first predicted step)
    Date max_train_origin;  // latest supervised origin used in training
    size_t train_rows = 0;
    ForecastResult forecast;
    MetricsReport metrics;
};

struct RollingReport {
    std::vector<RollingRound> rounds;
    MetricsReport mean_metrics; // per-metric mean over rounds
};

/// Number of rounds a dataset of n_steps supports.
size_t rolling_round_count(size_t n_steps, const RollingConfig& cfg);

/// Walk-forward evaluation using the actual injections as the schedule.
RollingReport run_rolling_evaluation(const FieldDataset& ds, const RollingConfig& cfg);

void save_rolling_report_csv(const RollingReport& report, const std::filesystem::path& path);

/// Train one estimator on a dataset slice (fits the normalizer on the train
/// rows only). Shared by the rolling evaluation, grid search, and the CLI.
TrainedEstimator train_estimator(const FieldDataset& ds, const RollingConfig& cfg,
                                 uint64_t seed);

} // namespace wellcast

#endif
