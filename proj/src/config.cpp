#include "wellcast/config.hpp"

#include "wellcast/csv.hpp"
#include "wellcast/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <set>

namespace wellcast {

using nlohmann::json;

const std::vector<std::string> kPipelineStages = {
    "synth",    "condition", "reshape", "train",   "forecast",
    "evaluate", "gridsearch", "decline", "plot"};

namespace {

/// Type-checked JSON access that reports the full key path on errors and
/// records every applied default.
struct Walker {
    const json& root;
    RunConfig& cfg;
    std::set<std::string> visited;

    const json* find(const std::string& path) {
        const json* node = &root;
        size_t begin = 0;
        std::string walked;
        while (begin <= path.size()) {
            const size_t dot = path.find('.', begin);
            const std::string part =
                dot == std::string::npos ? path.substr(begin) : path.substr(begin, dot - begin);
            if (!node->is_object()) {
                throw ConfigError("config key '" + walked + "' must be an object");
            }
            auto it = node->find(part);
            if (it == node->end()) {
                return nullptr;
            }
            walked = walked.empty() ? part : walked + "." + part;
            visited.insert(walked);
            node = &*it;
            if (dot == std::string::npos) {
                break;
            }
            begin = dot + 1;
        }
        return node;
    }

    template <typename T>
    T require(const std::string& path) {
        const json* node = find(path);
        if (!node) {
            throw ConfigError("missing required config key '" + path + "'");
        }
        return convert<T>(*node, path);
    }

    template <typename T>
    T get_or(const std::string& path, T fallback, const std::string& shown = "") {
        const json* node = find(path);
        if (!node) {
            cfg.applied_defaults.push_back(path + " = " +
                                           (shown.empty() ? to_text(fallback) : shown) +
                                           " (default)");
            return fallback;
        }
        return convert<T>(*node, path);
    }

    template <typename T>
    std::optional<T> get_optional(const std::string& path) {
        const json* node = find(path);
        if (!node) {
            return std::nullopt;
        }
        return convert<T>(*node, path);
    }

    template <typename T>
    static T convert(const json& node, const std::string& path) {
        try {
            if constexpr (std::is_same_v<T, bool>) {
                if (!node.is_boolean()) {
                    throw ConfigError("");
                }
            } else if constexpr (std::is_arithmetic_v<T>) {
                if (!node.is_number()) {
                    throw ConfigError("");
                }
            } else if constexpr (std::is_same_v<T, std::string>) {
                if (!node.is_string()) {
                    throw ConfigError("");
                }
            }
            return node.get<T>();
        } catch (...) {
            throw ConfigError("config key '" + path + "' has the wrong type");
        }
    }

    template <typename T>
    static std::string to_text(const T& v) {
        if constexpr (std::is_same_v<T, std::string>) {
            return v;
        } else if constexpr (std::is_same_v<T, bool>) {
            return v ? "true" : "false";
        } else if constexpr (std::is_floating_point_v<T>) {
            return csv::format_double(double(v));
        } else if constexpr (std::is_arithmetic_v<T>) {
            return std::to_string(v);
        } else {
            return "?";
        }
    }

    /// Warn about keys the schema never touched (forward compatibility).
    void collect_unknown(const json& node, const std::string& prefix) {
        if (!node.is_object()) {
            return;
        }
        for (auto it = node.begin(); it != node.end(); ++it) {
            const std::string path = prefix.empty() ? it.key() : prefix + "." + it.key();
            if (!visited.count(path)) {
                cfg.warnings.push_back("unknown config key '" + path + "' ignored");
            } else {
                collect_unknown(it.value(), path);
            }
        }
    }
};

Date parse_date_key(const std::string& text, const std::string& path) {
    try {
        return Date::parse(text);
    } catch (const DataError& e) {
        throw ConfigError("config key '" + path + "': " + e.what());
    }
}

std::pair<double, double> range_pair(Walker& w, const std::string& path, double lo, double hi) {
    const json* node = w.find(path);
    if (!node) {
        w.cfg.applied_defaults.push_back(path + " = [" + csv::format_double(lo) + ", " +
                                         csv::format_double(hi) + "] (default)");
        return {lo, hi};
    }
    if (!node->is_array() || node->size() != 2 || !(*node)[0].is_number() ||
        !(*node)[1].is_number()) {
        throw ConfigError("config key '" + path + "' must be a [min, max] pair");
    }
    return {(*node)[0].get<double>(), (*node)[1].get<double>()};
}

template <typename T, typename Convert>
std::vector<T> list_or(Walker& w, const std::string& path, std::vector<T> fallback,
                       Convert convert, const std::string& shown) {
    const json* node = w.find(path);
    if (!node) {
        w.cfg.applied_defaults.push_back(path + " = " + shown + " (default)");
        return fallback;
    }
    if (!node->is_array() || node->empty()) {
        throw ConfigError("config key '" + path + "' must be a non-empty array");
    }
    std::vector<T> out;
    out.reserve(node->size());
    for (const auto& item : *node) {
        out.push_back(convert(item));
    }
    return out;
}

} // namespace

RollingConfig RunConfig::rolling_config() const {
    RollingConfig rc;
    rc.min_train_steps = min_train_steps;
    rc.policy = policy;
    rc.fixed_window_steps = fixed_window_steps;
    rc.cadence_steps = cadence_steps;
    rc.horizon_steps = horizon_steps;
    rc.estimator = estimator;
    rc.alpha = alpha;
    rc.hidden_size = hidden_size;
    rc.activation = activation;
    rc.mlp = mlp;
    rc.window = window;
    rc.window.look_forward = 1;
    rc.val_fraction = val_fraction;
    rc.seed = seed;
    return rc;
}

bool RunConfig::wants_stage(std::string_view stage) const {
    return std::find(stages.begin(), stages.end(), stage) != stages.end();
}

RunConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file: " + path.string());
    }
    json root;
    try {
        root = json::parse(in, nullptr, true, true); // allow comments
    } catch (const json::exception& e) {
        throw ConfigError("config parse error in " + path.string() + ": " + e.what());
    }
    if (!root.is_object()) {
        throw ConfigError("config root must be a JSON object");
    }

    RunConfig cfg;
    Walker w{root, cfg, {}};

    // input / output
    if (auto p = w.get_optional<std::string>("input.dataset")) {
        cfg.dataset_path = *p;
    }
    if (auto p = w.get_optional<std::string>("input.tests")) {
        cfg.tests_path = *p;
    }
    if (auto p = w.get_optional<std::string>("input.schedule")) {
        cfg.schedule_path = *p;
    }
    if (auto p = w.get_optional<std::string>("input.model")) {
        cfg.model_path = *p;
    }
    cfg.out_dir = w.get_or<std::string>("output.dir", "out");
    cfg.seed = uint64_t(w.get_or<double>("seed", 0));
    cfg.verbose = w.get_or<bool>("verbose", false);

    cfg.has_synth = w.find("synth") != nullptr;
    if (cfg.dataset_path && cfg.has_synth) {
        throw ConfigError("exactly one dataset source allowed: both 'input.dataset' and a "
                          "'synth' section are present");
    }
    if (!cfg.dataset_path && !cfg.has_synth) {
        throw ConfigError("missing required config key 'input.dataset' (or a 'synth' section)");
    }

    // stages
    if (const json* node = w.find("stages")) {
        if (!node->is_array()) {
            throw ConfigError("config key 'stages' must be an array of stage names");
        }
        for (const auto& item : *node) {
            const std::string stage = Walker::convert<std::string>(item, "stages");
            if (std::find(kPipelineStages.begin(), kPipelineStages.end(), stage) ==
                kPipelineStages.end()) {
                throw ConfigError("unknown pipeline stage '" + stage + "'");
            }
            cfg.stages.push_back(stage);
        }
    } else {
        if (cfg.has_synth) {
            cfg.stages = {"synth", "condition", "train", "evaluate", "plot"};
        } else {
            cfg.stages = {"condition", "train", "evaluate", "plot"};
        }
        std::string shown;
        for (const auto& s : cfg.stages) {
            shown += (shown.empty() ? "" : ",") + s;
        }
        cfg.applied_defaults.push_back("stages = " + shown + " (default)");
    }

    // dataset conditioning
    cfg.sampling_days = int(w.get_or<double>("dataset.sampling_days", 10));
    if (cfg.sampling_days < 1) {
        throw ConfigError("config key 'dataset.sampling_days' must be >= 1");
    }
    cfg.auto_trim = w.get_or<bool>("dataset.trim_rampup", true);
    if (auto t = w.get_optional<std::string>("dataset.trim_override")) {
        cfg.trim_override = parse_date_key(*t, "dataset.trim_override");
    }
    cfg.use_potential = w.get_or<bool>("dataset.use_potential", false);
    cfg.smooth_injectors = w.get_or<bool>("dataset.smooth_injectors", false);
    cfg.smoothing_window_steps = int(w.get_or<double>("dataset.smoothing_window_steps", 30));
    if (cfg.smoothing_window_steps < 1) {
        throw ConfigError("config key 'dataset.smoothing_window_steps' must be >= 1");
    }

    // windowing
    cfg.window.look_back = int(w.get_or<double>("window.look_back", 15));
    cfg.window.look_forward = int(w.get_or<double>("window.look_forward", 1));
    cfg.window.scope = scope_from_name(w.get_or<std::string>("window.scope", "full_field"));
    if (cfg.window.look_back < 1) {
        throw ConfigError("config key 'window.look_back' must be >= 1");
    }
    if (cfg.window.look_forward < 1) {
        throw ConfigError("config key 'window.look_forward' must be >= 1");
    }

    // split
    if (w.find("split.val_start") || w.find("split.test_start")) {
        const auto vs = w.get_optional<std::string>("split.val_start");
        const auto ts = w.get_optional<std::string>("split.test_start");
        if (!vs || !ts) {
            throw ConfigError("config keys 'split.val_start' and 'split.test_start' must both "
                              "be given");
        }
        cfg.split = SplitSpec::boundaries(parse_date_key(*vs, "split.val_start"),
                                          parse_date_key(*ts, "split.test_start"));
    } else {
        cfg.split = SplitSpec::fractions(w.get_or<double>("split.train", 0.7),
                                         w.get_or<double>("split.val", 0.15),
                                         w.get_or<double>("split.test", 0.15));
    }
    try {
        cfg.split.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(std::string("config section 'split': ") + e.what());
    }

    // estimator
    cfg.estimator = estimator_from_name(w.get_or<std::string>("estimator.kind", "ols"));
    cfg.alpha = w.get_or<double>("estimator.alpha", 0.2);
    if (cfg.alpha < 0.0) {
        throw ConfigError("config key 'estimator.alpha' must be >= 0");
    }
    cfg.hidden_size = int(w.get_or<double>("estimator.hidden_size", 20));
    if (cfg.hidden_size < 1) {
        throw ConfigError("config key 'estimator.hidden_size' must be >= 1");
    }
    cfg.activation =
        activation_from_name(w.get_or<std::string>("estimator.activation", "identity"));
    cfg.mlp.learning_rate = w.get_or<double>("estimator.learning_rate", 1e-3);
    cfg.mlp.beta1 = w.get_or<double>("estimator.beta1", 0.9);
    cfg.mlp.beta2 = w.get_or<double>("estimator.beta2", 0.999);
    cfg.mlp.epsilon = w.get_or<double>("estimator.epsilon", 1e-8);
    cfg.mlp.max_epochs = int(w.get_or<double>("estimator.max_epochs", 500));
    cfg.mlp.batch_size = int(w.get_or<double>("estimator.batch_size", 0));
    cfg.mlp.patience = int(w.get_or<double>("estimator.patience", 25));
    if (cfg.mlp.learning_rate < 0.0 || cfg.mlp.max_epochs < 1 || cfg.mlp.patience < 1) {
        throw ConfigError("config section 'estimator': bad training parameters");
    }
    cfg.lasso_tol = w.get_or<double>("estimator.lasso_tol", 1e-6);
    cfg.lasso_max_iter = int(w.get_or<double>("estimator.lasso_max_iter", 10000));

    // forecast
    cfg.horizon_steps = size_t(w.get_or<double>("forecast.horizon_steps", 18));
    if (cfg.horizon_steps < 1) {
        throw ConfigError("config key 'forecast.horizon_steps' must be >= 1");
    }
    cfg.hold_last = w.get_or<bool>("forecast.hold_last", false);

    // rolling
    cfg.min_train_steps = size_t(w.get_or<double>("rolling.min_train_steps", 109));
    cfg.policy = policy_from_name(w.get_or<std::string>("rolling.policy", "incremental"));
    cfg.fixed_window_steps =
        size_t(w.get_or<double>("rolling.fixed_window_steps", double(cfg.min_train_steps)));
    cfg.cadence_steps = size_t(w.get_or<double>("rolling.cadence_steps", 36));
    if (cfg.cadence_steps < 1) {
        throw ConfigError("config key 'rolling.cadence_steps' must be >= 1");
    }
    cfg.val_fraction = w.get_or<double>("rolling.val_fraction", 0.2);
    if (cfg.val_fraction < 0.0 || cfg.val_fraction >= 1.0) {
        throw ConfigError("config key 'rolling.val_fraction' must lie in [0, 1)");
    }

    // grid
    cfg.grid.sampling_days = list_or<int>(
        w, "grid.sampling_days", {5, 10, 20},
        [](const json& j) { return int(Walker::convert<double>(j, "grid.sampling_days")); },
        "[5, 10, 20]");
    cfg.grid.look_back = list_or<int>(
        w, "grid.look_back", {10, 15, 25},
        [](const json& j) { return int(Walker::convert<double>(j, "grid.look_back")); },
        "[10, 15, 25]");
    cfg.grid.estimators = list_or<EstimatorKind>(
        w, "grid.estimators", {EstimatorKind::Ols, EstimatorKind::Ridge},
        [](const json& j) {
            return estimator_from_name(Walker::convert<std::string>(j, "grid.estimators"));
        },
        "[ols, ridge]");
    cfg.grid.alphas = list_or<double>(
        w, "grid.alphas", {0.0, 0.05, 0.2, 0.4, 0.6},
        [](const json& j) { return Walker::convert<double>(j, "grid.alphas"); },
        "[0, 0.05, 0.2, 0.4, 0.6]");
    cfg.grid.hidden_sizes = list_or<int>(
        w, "grid.hidden_sizes", {10, 20, 40, 70},
        [](const json& j) { return int(Walker::convert<double>(j, "grid.hidden_sizes")); },
        "[10, 20, 40, 70]");
    cfg.grid.activations = list_or<Activation>(
        w, "grid.activations", {Activation::Identity},
        [](const json& j) {
            return activation_from_name(Walker::convert<std::string>(j, "grid.activations"));
        },
        "[identity]");
    cfg.grid.min_train_steps = list_or<size_t>(
        w, "grid.min_train_steps", {cfg.min_train_steps},
        [](const json& j) { return size_t(Walker::convert<double>(j, "grid.min_train_steps")); },
        std::to_string(cfg.min_train_steps));
    cfg.grid.policies = list_or<WindowPolicy>(
        w, "grid.policies", {WindowPolicy::Incremental},
        [](const json& j) {
            return policy_from_name(Walker::convert<std::string>(j, "grid.policies"));
        },
        "[incremental]");
    cfg.grid.cadences = list_or<size_t>(
        w, "grid.cadences", {cfg.cadence_steps},
        [](const json& j) { return size_t(Walker::convert<double>(j, "grid.cadences")); },
        std::to_string(cfg.cadence_steps));
    cfg.grid.scope = scope_from_name(
        w.get_or<std::string>("grid.scope", std::string(scope_name(cfg.window.scope))));
    cfg.grid.horizon_steps =
        size_t(w.get_or<double>("grid.horizon_steps", double(cfg.horizon_steps)));
    cfg.grid.auto_trim = cfg.auto_trim;
    cfg.grid.val_fraction = cfg.val_fraction;
    cfg.grid.mlp = cfg.mlp;
    cfg.grid.seed = cfg.seed;
    cfg.grid.n_threads = unsigned(w.get_or<double>("grid.threads", 0));

    // synth
    if (cfg.has_synth) {
        SynthPreset& s = cfg.synth;
        s.n_producers = size_t(w.get_or<double>("synth.n_producers", 6));
        s.n_injectors = size_t(w.get_or<double>("synth.n_injectors", 7));
        s.n_water_injectors = size_t(w.get_or<double>(
            "synth.n_water_injectors", double(std::min<size_t>(3, s.n_injectors))));
        s.n_wag_injectors = size_t(w.get_or<double>("synth.n_wag_injectors", 0));
        s.n_steps = size_t(w.get_or<double>("synth.n_steps", 2920));
        s.step_days = int(w.get_or<double>("synth.step_days", 1));
        s.start_date = parse_date_key(
            w.get_or<std::string>("synth.start_date", "2015-01-01"), "synth.start_date");
        std::tie(s.oil_initial_min, s.oil_initial_max) =
            range_pair(w, "synth.oil_initial", 800.0, 2400.0);
        std::tie(s.decline_min, s.decline_max) = range_pair(w, "synth.decline", 0.0003, 0.0012);
        std::tie(s.b_min, s.b_max) = range_pair(w, "synth.b", 0.0, 0.0);
        std::tie(s.gain_min, s.gain_max) = range_pair(w, "synth.gain", 0.02, 0.08);
        const auto [lag_lo, lag_hi] = range_pair(w, "synth.lag", 1.0, 5.0);
        s.lag_min = int(lag_lo);
        s.lag_max = int(lag_hi);
        s.program_changes = size_t(w.get_or<double>("synth.program_changes", 10));
        std::tie(s.injection_min, s.injection_max) =
            range_pair(w, "synth.injection", 500.0, 3000.0);
        s.gas_oil_ratio = w.get_or<double>("synth.gas_oil_ratio", 1.2);
        s.gas_coupling_scale = w.get_or<double>("synth.gas_coupling_scale", 0.3);
        s.water_cut_initial = w.get_or<double>("synth.water_cut_initial", 0.25);
        s.water_cut_max = w.get_or<double>("synth.water_cut_max", 0.8);
        s.water_cut_growth = w.get_or<double>("synth.water_cut_growth", 0.0);
        s.noise_level = w.get_or<double>("synth.noise_level", 0.0);
        s.rampup_steps = size_t(w.get_or<double>("synth.rampup_steps", 0));
        s.seed = uint64_t(w.get_or<double>("synth.seed", double(cfg.seed ? cfg.seed : 1)));
    }

    // Paths referenced by the selected stages must exist.
    auto check_exists = [&](const std::optional<std::filesystem::path>& p,
                            const std::string& key) {
        if (p && !std::filesystem::exists(*p)) {
            throw ConfigError("config key '" + key + "': file not found: " + p->string());
        }
    };
    if (cfg.dataset_path) {
        check_exists(cfg.dataset_path, "input.dataset");
    }
    if (cfg.use_potential && !cfg.tests_path) {
        throw ConfigError("missing required config key 'input.tests' (use_potential is set)");
    }
    check_exists(cfg.tests_path, "input.tests");
    if (cfg.wants_stage("forecast") && !cfg.schedule_path) {
        throw ConfigError("missing required config key 'input.schedule' (forecast stage "
                          "selected)");
    }
    check_exists(cfg.schedule_path, "input.schedule");
    check_exists(cfg.model_path, "input.model");

    w.collect_unknown(root, "");
    return cfg;
}

} // namespace wellcast
