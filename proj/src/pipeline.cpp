#include "wellcast/pipeline.hpp"

#include "wellcast/csv.hpp"
#include "wellcast/decline.hpp"
#include "wellcast/errors.hpp"
#include "wellcast/plots.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>

namespace wellcast {

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot hash missing file: " + path.string());
    }
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
        EVP_MD_CTX_free(ctx);
        throw NumericError("cannot initialize SHA-256");
    }
    char buf[65536];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        EVP_DigestUpdate(ctx, buf, size_t(in.gcount()));
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, digest, &len);
    EVP_MD_CTX_free(ctx);
    static const char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xF];
    }
    return out;
}

namespace {

/// Collects artifacts as stages write them, so the manifest always covers
/// exactly the files produced by this run.
class Artifacts {
public:
    explicit Artifacts(std::filesystem::path dir) : dir_(std::move(dir)) {
        std::filesystem::create_directories(dir_);
    }

    const std::filesystem::path& dir() const { return dir_; }

    std::filesystem::path path(const std::string& rel) const { return dir_ / rel; }

    void record(const std::string& rel) {
        manifest_.files.push_back(ManifestEntry{rel, sha256_file(dir_ / rel)});
    }

    void record_abs(const std::filesystem::path& abs) {
        record(std::filesystem::relative(abs, dir_).generic_string());
    }

    Manifest finish(const std::string& status, const std::string& error,
                    const std::vector<std::string>& log_lines) {
        {
            const std::filesystem::path log_path = dir_ / "run_log.txt";
            std::ofstream log(log_path);
            for (const auto& line : log_lines) {
                log << line << '\n';
            }
            log.close();
            record("run_log.txt");
        }
        manifest_.status = status;
        manifest_.error = error;
        std::ofstream out(dir_ / "manifest.json");
        out << "{\n  \"status\": \"" << manifest_.status << "\",\n";
        if (!manifest_.error.empty()) {
            std::string escaped;
            for (char c : manifest_.error) {
                if (c == '"' || c == '\\') {
                    escaped += '\\';
                }
                escaped += c == '\n' ? ' ' : c;
            }
            out << "  \"error\": \"" << escaped << "\",\n";
        }
        out << "  \"files\": [\n";
        for (size_t i = 0; i < manifest_.files.size(); ++i) {
            out << "    {\"path\": \"" << manifest_.files[i].path << "\", \"sha256\": \""
                << manifest_.files[i].sha256 << "\"}" << (i + 1 < manifest_.files.size() ? "," : "")
                << '\n';
        }
        out << "  ]\n}\n";
        return manifest_;
    }

private:
    std::filesystem::path dir_;
    Manifest manifest_;
};

struct PipelineState {
    std::optional<FieldDataset> dataset;
    std::optional<TrainedEstimator> model;
    std::optional<ForecastResult> forecast;
    std::optional<GridReport> grid;
    std::vector<std::string> log;

    void note(const std::string& line) { log.push_back(line); }
};

void ensure_dataset(const RunConfig& cfg, PipelineState& state) {
    if (state.dataset) {
        return;
    }
    if (!cfg.dataset_path) {
        throw DataError("no dataset available: provide input.dataset or run the synth stage");
    }
    state.dataset = load_field_table(*cfg.dataset_path);
    state.note("loaded dataset " + cfg.dataset_path->string() + " (" +
               std::to_string(state.dataset->n_steps) + " steps, " +
               std::to_string(state.dataset->wells.size()) + " wells)");
}

void run_synth(const RunConfig& cfg, PipelineState& state, Artifacts& artifacts) {
    const SynthSpec spec = make_synth_spec(cfg.synth);
    state.dataset = generate_field(spec);
    save_field_table(*state.dataset, artifacts.path("dataset.csv"));
    artifacts.record("dataset.csv");
    state.note("synth: generated " + std::to_string(state.dataset->n_steps) + " steps for " +
               std::to_string(state.dataset->wells.size()) + " wells");
}

void run_condition(const RunConfig& cfg, PipelineState& state, Artifacts& artifacts) {
    ensure_dataset(cfg, state);
    FieldDataset ds = *state.dataset;

    if (cfg.use_potential) {
        const auto tests = load_production_tests(*cfg.tests_path);
        for (auto& well : ds.wells) {
            if (well.role != WellRole::Producer) {
                continue;
            }
            std::vector<ProductionTest> own;
            for (const auto& t : tests) {
                if (t.well_id == well.well_id) {
                    own.push_back(t);
                }
            }
            if (own.empty()) {
                continue;
            }
            for (auto& [phase, series] : well.series) {
                series = estimate_potential(series, own, phase);
            }
        }
        state.note("condition: producer rates replaced with test-anchored potential");
    }
    if (cfg.smooth_injectors) {
        for (auto& well : ds.wells) {
            if (well.role != WellRole::Injector) {
                continue;
            }
            for (auto& [phase, series] : well.series) {
                series = smooth_injection(series, cfg.smoothing_window_steps);
            }
        }
        state.note("condition: injector rates smoothed over " +
                   std::to_string(cfg.smoothing_window_steps) + " steps");
    }
    if (cfg.sampling_days % ds.step_days != 0) {
        throw DataError("sampling of " + std::to_string(cfg.sampling_days) +
                        " days is not a multiple of the dataset step of " +
                        std::to_string(ds.step_days) + " days");
    }
    const int period = cfg.sampling_days / ds.step_days;
    if (period > 1) {
        ds = resample_mean(ds, period);
        state.note("condition: resampled to " + std::to_string(cfg.sampling_days) +
                   "-day means (" + std::to_string(ds.n_steps) + " steps)");
    }
    if (cfg.trim_override) {
        ds = trim_rampup(ds, cfg.trim_override);
        state.note("condition: trimmed to " + ds.start_date.str() + " (override)");
    } else if (cfg.auto_trim) {
        ds = trim_rampup(ds);
        state.note("condition: ramp-up trimmed, history starts " + ds.start_date.str());
    }
    state.dataset = std::move(ds);
    save_field_table(*state.dataset, artifacts.path("conditioned.csv"));
    artifacts.record("conditioned.csv");
}

void run_reshape(const RunConfig& cfg, PipelineState& state, Artifacts& artifacts) {
    ensure_dataset(cfg, state);
    const SupervisedSet ss = build_supervised(*state.dataset, cfg.window);
    export_supervised_csv(ss, artifacts.path("supervised.csv"));
    artifacts.record("supervised.csv");
    state.note("reshape: " + std::to_string(ss.rows()) + " rows, " +
               std::to_string(ss.x_keys.size()) + " inputs, " +
               std::to_string(ss.y_keys.size()) + " outputs");
}

void run_train(const RunConfig& cfg, PipelineState& state, Artifacts& artifacts) {
    ensure_dataset(cfg, state);
    RollingConfig rc = cfg.rolling_config();
    rc.window = cfg.window; // the train stage honours look_forward as configured
    state.model = train_estimator(*state.dataset, rc, cfg.seed);
    save_model(*state.model, artifacts.path("model.txt"));
    artifacts.record("model.txt");
    state.note("train: fitted " + state.model->describe() + " on " +
               std::to_string(state.dataset->n_steps) + " steps");
}

void run_forecast(const RunConfig& cfg, PipelineState& state, Artifacts& artifacts) {
    ensure_dataset(cfg, state);
    if (!state.model) {
        if (!cfg.model_path) {
            throw DataError("no trained model: run the train stage or set input.model");
        }
        state.model = load_model(*cfg.model_path);
        state.note("forecast: loaded model " + cfg.model_path->string());
    }
    InjectionSchedule schedule;
    if (cfg.schedule_path) {
        schedule = load_schedule_csv(*cfg.schedule_path);
    }
    schedule.hold_last = cfg.hold_last;
    try {
        state.forecast =
            forecast_recursive(*state.model, *state.dataset, schedule, cfg.horizon_steps);
    } catch (const ScheduleExhausted& e) {
        const std::string file = cfg.schedule_path ? cfg.schedule_path->string() : "<none>";
        throw ScheduleExhausted(std::string(e.what()) + " (schedule file: " + file + ")");
    }
    save_forecast_csv(*state.forecast, artifacts.path("forecast.csv"), nullptr);
    artifacts.record("forecast.csv");
    state.note("forecast: " + std::to_string(cfg.horizon_steps) + " steps from " +
               state.forecast->origin.str() + " with " + state.model->describe());
}

void run_evaluate(const RunConfig& cfg, PipelineState& state, Artifacts& artifacts) {
    ensure_dataset(cfg, state);
    const RollingReport report = run_rolling_evaluation(*state.dataset, cfg.rolling_config());
    save_rolling_report_csv(report, artifacts.path("rolling_report.csv"));
    artifacts.record("rolling_report.csv");
    state.note("evaluate: " + std::to_string(report.rounds.size()) + " rounds, mean smape " +
               csv::format_double(report.mean_metrics.smape));
}

void run_gridsearch(const RunConfig& cfg, PipelineState& state, Artifacts& artifacts) {
    ensure_dataset(cfg, state);
    state.grid = grid_search(*state.dataset, cfg.grid);
    save_grid_report_csv(*state.grid, artifacts.path("grid_report.csv"));
    artifacts.record("grid_report.csv");
    for (const auto& [axis, means] : state.grid->marginal_means) {
        const std::string rel = "grid_marginal_" + axis + ".csv";
        save_grid_marginals_csv(*state.grid, axis, artifacts.path(rel));
        artifacts.record(rel);
    }
    size_t failed = 0;
    for (const auto& t : state.grid->trials) {
        failed += t.ok ? 0 : 1;
    }
    state.note("gridsearch: " + std::to_string(state.grid->trials.size()) + " trials, " +
               std::to_string(failed) + " failed");
    if (const auto best = state.grid->best_by("smape")) {
        state.note("gridsearch: best by smape -> " + state.grid->trials[*best].config.key());
    }
}

void run_decline(const RunConfig& cfg, PipelineState& state, Artifacts& artifacts) {
    ensure_dataset(cfg, state);
    const FieldDataset& ds = *state.dataset;
    std::ofstream params(artifacts.path("decline_params.csv"));
    if (!params) {
        throw DataError("cannot write decline_params.csv");
    }
    params << "well_id,status,q_initial,decline_rate,b,residual_norm,non_decaying\n";
    std::ofstream fc(artifacts.path("decline_forecast.csv"));
    fc << "date,well_id,phase,predicted_rate\n";
    for (const auto& well : ds.wells) {
        if (well.role != WellRole::Producer || !well.has_phase(Phase::Oil)) {
            continue;
        }
        const RateSeries& oil = well.series.at(Phase::Oil);
        try {
            const ArpsFit fit = fit_arps(oil);
            params << well.well_id << ",ok," << csv::format_double(fit.params.q_initial) << ','
                   << csv::format_double(fit.params.decline_rate) << ','
                   << csv::format_double(fit.params.b) << ','
                   << csv::format_double(fit.residual_norm) << ','
                   << (fit.non_decaying ? "true" : "false") << '\n';
            const RateSeries ahead = forecast_arps(fit.params, int(ds.n_steps),
                                                   int(cfg.horizon_steps), ds.start_date,
                                                   ds.step_days);
            for (size_t s = 0; s < ahead.values.size(); ++s) {
                fc << ahead.date_at(s).str() << ',' << well.well_id << ",oil,"
                   << csv::format_double(ahead.values[s]) << '\n';
            }
        } catch (const Error& e) {
            std::string reason = e.what();
            std::replace(reason.begin(), reason.end(), ',', ';');
            params << well.well_id << ",failed: " << reason << ",,,,,\n";
        }
    }
    params.close();
    fc.close();
    artifacts.record("decline_params.csv");
    artifacts.record("decline_forecast.csv");
    state.note("decline: fitted producers' oil declines");
}

void run_plot(const RunConfig& cfg, PipelineState& state, Artifacts& artifacts) {
    // A standalone plot run re-reads artifacts written by earlier runs.
    if (!state.forecast && std::filesystem::exists(artifacts.path("forecast.csv"))) {
        state.forecast = load_forecast_csv(artifacts.path("forecast.csv"));
    }
    if (!state.dataset) {
        for (const char* name : {"conditioned.csv", "dataset.csv"}) {
            if (std::filesystem::exists(artifacts.path(name))) {
                state.dataset = load_field_table(artifacts.path(name));
                break;
            }
        }
        if (!state.dataset && cfg.dataset_path) {
            state.dataset = load_field_table(*cfg.dataset_path);
        }
    }
    if (!state.grid && std::filesystem::exists(artifacts.path("grid_report.csv"))) {
        state.grid = load_grid_report_csv(artifacts.path("grid_report.csv"));
    }

    bool any = false;
    if (state.forecast && state.dataset) {
        const auto files = emit_forecast_plots(*state.forecast, *state.dataset, nullptr,
                                               artifacts.dir(), size_t(cfg.window.look_back));
        for (const auto& f : files) {
            artifacts.record_abs(f);
        }
        any = any || !files.empty();
    } else {
        state.note("plot: no forecast artifact, forecast charts skipped");
    }
    if (state.grid) {
        const auto files = emit_grid_plots(*state.grid, artifacts.dir());
        for (const auto& f : files) {
            artifacts.record_abs(f);
        }
        any = any || !files.empty();
    } else {
        state.note("plot: no grid artifact, grid charts skipped");
    }
    if (any) {
        state.note("plot: charts written");
    }
}

} // namespace

Manifest execute_pipeline(const RunConfig& cfg) {
    Artifacts artifacts(cfg.out_dir);
    PipelineState state;
    for (const auto& line : cfg.applied_defaults) {
        state.note("default: " + line);
    }
    for (const auto& line : cfg.warnings) {
        state.note("warning: " + line);
    }

    // Selected stages run in canonical workflow order, regardless of the
    // order they were listed in.
    std::vector<std::string> stages;
    for (const auto& stage : kPipelineStages) {
        if (cfg.wants_stage(stage)) {
            stages.push_back(stage);
        }
    }
    try {
        for (const auto& stage : stages) {
            if (stage == "synth") {
                run_synth(cfg, state, artifacts);
            } else if (stage == "condition") {
                run_condition(cfg, state, artifacts);
            } else if (stage == "reshape") {
                run_reshape(cfg, state, artifacts);
            } else if (stage == "train") {
                run_train(cfg, state, artifacts);
            } else if (stage == "forecast") {
                run_forecast(cfg, state, artifacts);
            } else if (stage == "evaluate") {
                run_evaluate(cfg, state, artifacts);
            } else if (stage == "gridsearch") {
                run_gridsearch(cfg, state, artifacts);
            } else if (stage == "decline") {
                run_decline(cfg, state, artifacts);
            } else if (stage == "plot") {
                run_plot(cfg, state, artifacts);
            }
        }
    } catch (const Error& e) {
        state.note(std::string("error: ") + e.what());
        artifacts.finish("failed", e.what(), state.log);
        throw;
    }
    return artifacts.finish("ok", "", state.log);
}

} // namespace wellcast
