#include "wellcast/gridsearch.hpp"

#include "wellcast/csv.hpp"
#include "wellcast/errors.hpp"
#include "wellcast/rng.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iterator>
#include <thread>

namespace wellcast {

size_t GridSpec::trial_count() const {
    return sampling_days.size() * look_back.size() * estimators.size() * alphas.size() *
           hidden_sizes.size() * activations.size() * min_train_steps.size() * policies.size() *
           cadences.size();
}

void GridSpec::validate() const {
    for (const size_t n :
         {sampling_days.size(), look_back.size(), estimators.size(), alphas.size(),
          hidden_sizes.size(), activations.size(), min_train_steps.size(), policies.size(),
          cadences.size()}) {
        if (n == 0) {
            throw ConfigError("every grid axis needs at least one value");
        }
    }
    if (horizon_steps < 1) {
        throw ConfigError("grid horizon must be >= 1");
    }
}

std::string TrialConfig::key() const {
    std::string k;
    k += "sampling=" + std::to_string(sampling_days);
    k += ",look_back=" + std::to_string(look_back);
    k += ",estimator=" + std::string(estimator_name(estimator));
    k += ",alpha=" + csv::format_double(alpha);
    k += ",hidden=" + std::to_string(hidden_size);
    k += ",activation=" + std::string(activation_name(activation));
    k += ",min_train=" + std::to_string(min_train_steps);
    k += ",policy=" + std::string(policy_name(policy));
    k += ",cadence=" + std::to_string(cadence_steps);
    return k;
}

namespace {

TrialConfig config_at(const GridSpec& g, size_t index) {
    TrialConfig c;
    c.index = index;
    size_t rest = index;
    auto pick = [&rest](const auto& axis) -> decltype(axis[0]) {
        const size_t i = rest % axis.size();
        rest /= axis.size();
        return axis[i];
    };
    // Row-major over the axes in declared order: the last axis varies fastest.
    c.cadence_steps = pick(g.cadences);
    c.policy = pick(g.policies);
    c.min_train_steps = pick(g.min_train_steps);
    c.activation = pick(g.activations);
    c.hidden_size = pick(g.hidden_sizes);
    c.alpha = pick(g.alphas);
    c.estimator = pick(g.estimators);
    c.look_back = pick(g.look_back);
    c.sampling_days = pick(g.sampling_days);
    return c;
}

TrialResult run_trial(const FieldDataset& ds, const GridSpec& grid, const TrialConfig& config) {
    TrialResult result;
    result.config = config;
    try {
        if (config.sampling_days < ds.step_days || config.sampling_days % ds.step_days != 0) {
            throw DataError("sampling of " + std::to_string(config.sampling_days) +
                            " days is not a multiple of the dataset step of " +
                            std::to_string(ds.step_days) + " days");
        }
        FieldDataset prepared = resample_mean(ds, config.sampling_days / ds.step_days);
        if (grid.auto_trim) {
            prepared = trim_rampup(prepared);
        }
        RollingConfig rc;
        rc.min_train_steps = config.min_train_steps;
        rc.policy = config.policy;
        rc.fixed_window_steps =
            config.policy == WindowPolicy::Fixed ? config.min_train_steps : 0;
        rc.cadence_steps = config.cadence_steps;
        rc.horizon_steps = grid.horizon_steps;
        rc.estimator = config.estimator;
        rc.alpha = config.alpha;
        rc.hidden_size = config.hidden_size;
        rc.activation = config.activation;
        rc.mlp = grid.mlp;
        rc.window.look_back = config.look_back;
        rc.window.look_forward = 1;
        rc.window.scope = grid.scope;
        rc.val_fraction = grid.val_fraction;
        rc.seed = mix_seed(grid.seed, config.index);

        const RollingReport report = run_rolling_evaluation(prepared, rc);
        result.ok = true;
        result.rounds = report.rounds.size();
        result.mean_metrics = report.mean_metrics;
    } catch (const Error& e) {
        result.ok = false;
        result.failure_reason = e.what();
    }
    return result;
}

struct AxisView {
    std::string name;
    std::string (*label)(const TrialConfig&);
};

const AxisView kAxes[] = {
    {"sampling_days", [](const TrialConfig& c) { return std::to_string(c.sampling_days); }},
    {"look_back", [](const TrialConfig& c) { return std::to_string(c.look_back); }},
    {"estimator", [](const TrialConfig& c) { return std::string(estimator_name(c.estimator)); }},
    {"alpha", [](const TrialConfig& c) { return csv::format_double(c.alpha); }},
    {"hidden_size", [](const TrialConfig& c) { return std::to_string(c.hidden_size); }},
    {"activation",
     [](const TrialConfig& c) { return std::string(activation_name(c.activation)); }},
    {"min_train_steps",
     [](const TrialConfig& c) { return std::to_string(c.min_train_steps); }},
    {"policy", [](const TrialConfig& c) { return std::string(policy_name(c.policy)); }},
    {"cadence_steps", [](const TrialConfig& c) { return std::to_string(c.cadence_steps); }},
};

void accumulate(MetricsReport& into, const MetricsReport& from) {
    into.smape += from.smape;
    into.mape += from.mape;
    into.rmse += from.rmse;
    into.r2 += from.r2;
    into.mae += from.mae;
    into.mse += from.mse;
    into.n_points += from.n_points;
    into.n_skipped_zero_actuals += from.n_skipped_zero_actuals;
}

void divide(MetricsReport& m, double n) {
    m.smape /= n;
    m.mape /= n;
    m.rmse /= n;
    m.r2 /= n;
    m.mae /= n;
    m.mse /= n;
}

std::map<std::string, std::vector<MarginalMean>>
compute_marginal_means(const std::vector<TrialResult>& trials) {
    std::map<std::string, std::vector<MarginalMean>> out;
    for (const AxisView& axis : kAxes) {
        std::vector<MarginalMean> means;
        for (const TrialResult& trial : trials) {
            const std::string label = axis.label(trial.config);
            auto it = std::find_if(means.begin(), means.end(),
                                   [&](const MarginalMean& m) { return m.value == label; });
            if (it == means.end()) {
                means.push_back(MarginalMean{label, 0, MetricsReport{}});
                it = std::prev(means.end());
            }
            if (trial.ok) {
                accumulate(it->metrics, trial.mean_metrics);
                ++it->n_trials;
            }
        }
        for (auto& m : means) {
            if (m.n_trials > 0) {
                divide(m.metrics, double(m.n_trials));
            }
        }
        out.emplace(axis.name, std::move(means));
    }
    return out;
}

} // namespace

GridReport grid_search(const FieldDataset& ds, const GridSpec& grid) {
    grid.validate();
    const size_t n_trials = grid.trial_count();
    GridReport report;
    report.trials.resize(n_trials);

    unsigned n_threads = grid.n_threads != 0 ? grid.n_threads : std::thread::hardware_concurrency();
    n_threads = std::max(1u, std::min<unsigned>(n_threads, unsigned(n_trials)));

    // Trials are independent and individually seeded: workers claim indices
    // from a shared counter and write into their own slot, so the assembled
    // report is identical regardless of scheduling.
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        while (true) {
            const size_t index = next.fetch_add(1);
            if (index >= n_trials) {
                return;
            }
            report.trials[index] = run_trial(ds, grid, config_at(grid, index));
        }
    };
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (unsigned t = 0; t < n_threads; ++t) {
            pool.emplace_back(worker);
        }
        for (auto& t : pool) {
            t.join();
        }
    }

    report.marginal_means = compute_marginal_means(report.trials);
    return report;
}

std::optional<size_t> GridReport::best_by(std::string_view metric) const {
    const bool maximize = metric == "r2";
    std::optional<size_t> best;
    for (size_t i = 0; i < trials.size(); ++i) {
        if (!trials[i].ok) {
            continue;
        }
        const double v = trials[i].mean_metrics.value(metric);
        if (!best) {
            best = i;
            continue;
        }
        const double b = trials[*best].mean_metrics.value(metric);
        if (maximize ? v > b : v < b) {
            best = i;
        }
    }
    return best;
}

void save_grid_report_csv(const GridReport& report, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot write file: " + path.string());
    }
    out << "trial,sampling_days,look_back,estimator,alpha,hidden_size,activation,"
           "min_train_steps,policy,cadence_steps,status,reason,rounds,smape,mape,rmse,r2,mae,mse\n";
    for (const TrialResult& t : report.trials) {
        const TrialConfig& c = t.config;
        out << c.index << ',' << c.sampling_days << ',' << c.look_back << ','
            << estimator_name(c.estimator) << ',' << csv::format_double(c.alpha) << ','
            << c.hidden_size << ',' << activation_name(c.activation) << ',' << c.min_train_steps
            << ',' << policy_name(c.policy) << ',' << c.cadence_steps << ','
            << (t.ok ? "ok" : "failed") << ',';
        for (char ch : t.failure_reason) {
            out << (ch == ',' ? ';' : ch);
        }
        out << ',' << t.rounds;
        if (t.ok) {
            const MetricsReport& m = t.mean_metrics;
            out << ',' << csv::format_double(m.smape) << ',' << csv::format_double(m.mape) << ','
                << csv::format_double(m.rmse) << ',' << csv::format_double(m.r2) << ','
                << csv::format_double(m.mae) << ',' << csv::format_double(m.mse);
        } else {
            out << ",,,,,,";
        }
        out << '\n';
    }
}

GridReport load_grid_report_csv(const std::filesystem::path& path) {
    const csv::Table table = csv::read_file(path);
    const char* needed[] = {"trial",   "sampling_days",   "look_back", "estimator",
                            "alpha",   "hidden_size",     "activation", "min_train_steps",
                            "policy",  "cadence_steps",   "status",     "reason",
                            "rounds",  "smape",           "mape",       "rmse",
                            "r2",      "mae",             "mse"};
    for (const char* col : needed) {
        if (table.column(col) < 0) {
            throw DataError(path.string() + ": not a grid report CSV (missing '" +
                            std::string(col) + "')");
        }
    }
    auto cell = [&](size_t r, const char* col) -> const std::string& {
        return table.rows[r][size_t(table.column(col))];
    };
    GridReport report;
    report.trials.reserve(table.rows.size());
    for (size_t r = 0; r < table.rows.size(); ++r) {
        const size_t line = table.line_numbers[r];
        TrialResult t;
        t.config.index = size_t(csv::parse_double(cell(r, "trial"), path, line, 0.0));
        t.config.sampling_days =
            int(csv::parse_double(cell(r, "sampling_days"), path, line, 0.0));
        t.config.look_back = int(csv::parse_double(cell(r, "look_back"), path, line, 0.0));
        t.config.estimator = estimator_from_name(cell(r, "estimator"));
        t.config.alpha = csv::parse_double(cell(r, "alpha"), path, line, 0.0);
        t.config.hidden_size = int(csv::parse_double(cell(r, "hidden_size"), path, line, 0.0));
        t.config.activation = activation_from_name(cell(r, "activation"));
        t.config.min_train_steps =
            size_t(csv::parse_double(cell(r, "min_train_steps"), path, line, 0.0));
        t.config.policy = policy_from_name(cell(r, "policy"));
        t.config.cadence_steps =
            size_t(csv::parse_double(cell(r, "cadence_steps"), path, line, 0.0));
        t.ok = cell(r, "status") == "ok";
        t.failure_reason = cell(r, "reason");
        t.rounds = size_t(csv::parse_double(cell(r, "rounds"), path, line, 0.0));
        if (t.ok) {
            t.mean_metrics.smape = csv::parse_double(cell(r, "smape"), path, line, 0.0);
            t.mean_metrics.mape = csv::parse_double(cell(r, "mape"), path, line, 0.0);
            t.mean_metrics.rmse = csv::parse_double(cell(r, "rmse"), path, line, 0.0);
            t.mean_metrics.r2 = csv::parse_double(cell(r, "r2"), path, line, 0.0);
            t.mean_metrics.mae = csv::parse_double(cell(r, "mae"), path, line, 0.0);
            t.mean_metrics.mse = csv::parse_double(cell(r, "mse"), path, line, 0.0);
        }
        report.trials.push_back(std::move(t));
    }
    report.marginal_means = compute_marginal_means(report.trials);
    return report;
}

void save_grid_marginals_csv(const GridReport& report, const std::string& axis,
                             const std::filesystem::path& path) {
    auto it = report.marginal_means.find(axis);
    if (it == report.marginal_means.end()) {
        throw ConfigError("unknown grid axis '" + axis + "'");
    }
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot write file: " + path.string());
    }
    out << axis << ",n_trials,smape,mape,rmse,r2,mae,mse\n";
    for (const MarginalMean& m : it->second) {
        out << m.value << ',' << m.n_trials << ',' << csv::format_double(m.metrics.smape) << ','
            << csv::format_double(m.metrics.mape) << ',' << csv::format_double(m.metrics.rmse)
            << ',' << csv::format_double(m.metrics.r2) << ',' << csv::format_double(m.metrics.mae)
            << ',' << csv::format_double(m.metrics.mse) << '\n';
    }
}

} // namespace wellcast
