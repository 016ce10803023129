#ifndef WELLCAST_CONFIG_HPP
#define WELLCAST_CONFIG_HPP

#include "wellcast/forecaster.hpp"
#include "wellcast/gridsearch.hpp"
#include "wellcast/synth.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace wellcast {

/**
 * Fully validated run configuration with defaults applied. Every applied
 * default is recorded in `applied_defaults` and echoed to the run log.
 */
struct RunConfig {
    // input / output
    std::optional<std::filesystem::path> dataset_path;
    std::optional<std::filesystem::path> tests_path;
    std::optional<std::filesystem::path> schedule_path;
    std::optional<std::filesystem::path> model_path;
    std::filesystem::path out_dir = "out";
    std::vector<std::string> stages;
    uint64_t seed = 0;
    bool verbose = false;

    // dataset conditioning
    int sampling_days = 10;
    bool auto_trim = true;
    std::optional<Date> trim_override;
    bool use_potential = false;     // replace producer rates with test-anchored potential
    bool smooth_injectors = false;  // trailing moving average over injector rates
    int smoothing_window_steps = 30;

    // windowing
    WindowConfig window;
    SplitSpec split = SplitSpec::fractions(0.7, 0.15, 0.15);

    // estimator
    EstimatorKind estimator = EstimatorKind::Ols;
    double alpha = 0.2;
    int hidden_size = 20;
    Activation activation = Activation::Identity;
    MlpTrainConfig mlp;
    double lasso_tol = 1e-6;
    int lasso_max_iter = 10000;

    // forecast
    size_t horizon_steps = 18;
    bool hold_last = false;

    // rolling evaluation
    size_t min_train_steps = 109;
    WindowPolicy policy = WindowPolicy::Incremental;
    size_t fixed_window_steps = 109;
    size_t cadence_steps = 36;
    double val_fraction = 0.2;

    GridSpec grid;
    SynthPreset synth;
    bool has_synth = false;

    std::vector<std::string> applied_defaults;
    std::vector<std::string> warnings; // e.g. unknown keys

    RollingConfig rolling_config() const;
    bool wants_stage(std::string_view stage) const;
};

/// Parse and validate a JSON config file. Missing required keys and type
/// errors throw ConfigError naming the full key path; unknown keys are
/// collected as warnings, not errors.
RunConfig parse_config(const std::filesystem::path& path);

/// Stages in canonical workflow order.
extern const std::vector<std::string> kPipelineStages;

} // namespace wellcast

#endif
