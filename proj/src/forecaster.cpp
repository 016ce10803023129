#include "wellcast/forecaster.hpp"

#include "wellcast/csv.hpp"
#include "wellcast/errors.hpp"
#include "wellcast/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace wellcast {

double InjectionSchedule::at(const std::string& well_id, Phase phase, size_t step_index) const {
    if (step_index == 0) {
        throw DataError("schedule steps are 1-based");
    }
    if (well_id == kFieldWellId) {
        double total = 0.0;
        bool any = false;
        for (const auto& [well, phases] : rates) {
            auto it = phases.find(phase);
            if (it == phases.end()) {
                continue;
            }
            any = true;
            const auto& seq = it->second;
            if (step_index <= seq.size()) {
                total += seq[step_index - 1];
            } else if (hold_last && !seq.empty()) {
                total += seq.back();
            } else {
                throw ScheduleExhausted("injection schedule for " + well + "/" +
                                        std::string(phase_name(phase)) + " covers " +
                                        std::to_string(seq.size()) + " steps, step " +
                                        std::to_string(step_index) + " requested");
            }
        }
        if (!any) {
            throw DataError("schedule has no entries for phase " + std::string(phase_name(phase)));
        }
        return total;
    }
    auto wit = rates.find(well_id);
    if (wit == rates.end() || !wit->second.count(phase)) {
        throw DataError("schedule missing well '" + well_id + "' phase " +
                        std::string(phase_name(phase)));
    }
    const auto& seq = wit->second.at(phase);
    if (step_index <= seq.size()) {
        return seq[step_index - 1];
    }
    if (hold_last && !seq.empty()) {
        return seq.back();
    }
    throw ScheduleExhausted("injection schedule for " + well_id + "/" +
                            std::string(phase_name(phase)) + " covers " +
                            std::to_string(seq.size()) + " steps, step " +
                            std::to_string(step_index) + " requested");
}

size_t InjectionSchedule::covered_steps() const {
    size_t cover = size_t(-1);
    bool any = false;
    for (const auto& [well, phases] : rates) {
        for (const auto& [phase, seq] : phases) {
            cover = std::min(cover, seq.size());
            any = true;
        }
    }
    return any ? cover : 0;
}

InjectionSchedule load_schedule_csv(const std::filesystem::path& path) {
    const csv::Table table = csv::read_file(path);
    const int c_step = table.column("step");
    const int c_well = table.column("well_id");
    const int c_phase = table.column("phase");
    const int c_rate = table.column("rate");
    if (c_step < 0 || c_well < 0 || c_phase < 0 || c_rate < 0) {
        throw DataError(path.string() + ": header must be step,well_id,phase,rate");
    }
    InjectionSchedule schedule;
    for (size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const size_t line = table.line_numbers[r];
        const double step_val = csv::parse_double(row[size_t(c_step)], path, line, 0.0);
        if (step_val < 1.0 || step_val != std::floor(step_val)) {
            throw DataError(path.string() + ":" + std::to_string(line) + ": bad step index");
        }
        const size_t step = size_t(step_val);
        const Phase phase = phase_from_name(row[size_t(c_phase)]);
        if (!is_injection_phase(phase)) {
            throw DataError(path.string() + ":" + std::to_string(line) +
                            ": schedules carry injection phases only");
        }
        const double rate = csv::parse_double(row[size_t(c_rate)], path, line, 0.0);
        if (rate < 0.0 || !std::isfinite(rate)) {
            throw DataError(path.string() + ":" + std::to_string(line) + ": bad rate");
        }
        auto& seq = schedule.rates[row[size_t(c_well)]][phase];
        if (seq.size() < step) {
            seq.resize(step, 0.0);
        }
        seq[step - 1] = rate;
    }
    return schedule;
}

void save_schedule_csv(const InjectionSchedule& schedule, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot write file: " + path.string());
    }
    out << "step,well_id,phase,rate\n";
    for (const auto& [well, phases] : schedule.rates) {
        for (const auto& [phase, seq] : phases) {
            for (size_t s = 0; s < seq.size(); ++s) {
                out << (s + 1) << ',' << well << ',' << phase_name(phase) << ','
                    << csv::format_double(seq[s]) << '\n';
            }
        }
    }
}

InjectionSchedule schedule_from_actuals(const FieldDataset& ds, size_t origin_index, size_t h) {
    if (origin_index + h > ds.n_steps) {
        throw DataError("actual injections cover " + std::to_string(ds.n_steps) +
                        " steps, schedule needs up to " + std::to_string(origin_index + h));
    }
    InjectionSchedule schedule;
    for (const auto& w : ds.wells) {
        if (w.role != WellRole::Injector) {
            continue;
        }
        for (const auto& [phase, s] : w.series) {
            auto& seq = schedule.rates[w.well_id][phase];
            seq.assign(s.values.begin() + long(origin_index),
                       s.values.begin() + long(origin_index + h));
        }
    }
    return schedule;
}

Eigen::VectorXd SlidingWindow::flatten() const {
    const long i = slices.rows();
    const long n_series = slices.cols();
    Eigen::VectorXd x(i * n_series);
    for (long s = 0; s < n_series; ++s) {
        for (long off = 0; off < i; ++off) {
            x(s * i + off) = slices(off, s);
        }
    }
    return x;
}

SlidingWindow assemble_next_input(const SlidingWindow& window, const Eigen::VectorXd& predicted,
                                  const InjectionSchedule& schedule, size_t step_index) {
    if (predicted.size() != long(window.producer_columns.size())) {
        throw SchemaError("predicted vector does not match the producer column count");
    }
    SlidingWindow next = window;
    const long i = window.slices.rows();
    next.slices.topRows(i - 1) = window.slices.bottomRows(i - 1);
    Eigen::RowVectorXd slice(window.slices.cols());
    size_t p = 0;
    for (long s = 0; s < window.slices.cols(); ++s) {
        const ColumnKey& key = window.series_keys[size_t(s)];
        if (is_injection_phase(key.phase)) {
            slice(s) = schedule.at(key.well_id, key.phase, step_index);
        } else {
            slice(s) = std::max(0.0, predicted(long(p)));
            ++p;
        }
    }
    next.slices.row(i - 1) = slice;
    return next;
}

ForecastResult forecast_recursive(const TrainedEstimator& model, const FieldDataset& history,
                                  const InjectionSchedule& schedule, size_t horizon) {
    if (model.window.look_forward != 1) {
        throw ConfigError("recursive forecasting requires look_forward = 1");
    }
    if (horizon < 1) {
        throw ConfigError("forecast horizon must be >= 1");
    }
    const long i = model.window.look_back;
    if (long(history.n_steps) < i) {
        throw DataError("history provides " + std::to_string(history.n_steps) +
                        " steps, look-back needs " + std::to_string(i));
    }
    const TrackedSeries ts = tracked_series(history, model.window.scope);
    // The model schema must match the history layout series-for-series.
    if (long(model.normalizer.x_keys.size()) != long(ts.keys.size()) * i) {
        throw SchemaError("history series do not match the model input layout");
    }
    for (size_t s = 0; s < ts.keys.size(); ++s) {
        const ColumnKey& expect = model.normalizer.x_keys[s * size_t(i)];
        if (expect.well_id != ts.keys[s].well_id || expect.phase != ts.keys[s].phase) {
            throw SchemaError("history series '" + ts.keys[s].header() +
                              "' does not match the model schema at position " +
                              std::to_string(s));
        }
    }

    SlidingWindow window;
    window.series_keys = ts.keys;
    window.producer_columns = ts.producer_columns;
    window.slices = ts.values.bottomRows(i);

    ForecastResult fc;
    fc.origin = history.date_at(history.n_steps); // first future step
    fc.step_days = history.step_days;
    fc.horizon = horizon;
    fc.output_keys = model.normalizer.y_keys;
    fc.predictions.resize(long(horizon), long(fc.output_keys.size()));
    fc.estimator = model.describe();

    for (size_t step = 1; step <= horizon; ++step) {
        const Eigen::VectorXd y = model.predict_raw(window.flatten());
        const Eigen::VectorXd clamped = y.cwiseMax(0.0);
        fc.predictions.row(long(step - 1)) = clamped.transpose();
        if (step < horizon) {
            window = assemble_next_input(window, clamped, schedule, step);
        }
    }
    return fc;
}

void save_forecast_csv(const ForecastResult& fc, const std::filesystem::path& path,
                       const FieldDataset* actuals) {
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot write file: " + path.string());
    }
    out << "date,well_id,phase,predicted_rate,actual_rate\n";
    const bool field_scope =
        !fc.output_keys.empty() && fc.output_keys.front().well_id == kFieldWellId;
    TrackedSeries actual_ts;
    if (actuals) {
        actual_ts = tracked_series(*actuals, field_scope ? Scope::FullField : Scope::PerWell);
    }
    for (size_t h = 0; h < fc.horizon; ++h) {
        const Date date = fc.origin.plus_days(int64_t(h) * fc.step_days);
        for (size_t c = 0; c < fc.output_keys.size(); ++c) {
            const ColumnKey& key = fc.output_keys[c];
            out << date.str() << ',' << key.well_id << ',' << phase_name(key.phase) << ','
                << csv::format_double(fc.predictions(long(h), long(c))) << ',';
            if (actuals) {
                const int64_t offset = days_between(actuals->start_date, date);
                if (offset >= 0 && offset % actuals->step_days == 0 &&
                    size_t(offset / actuals->step_days) < actuals->n_steps) {
                    const size_t t = size_t(offset / actuals->step_days);
                    for (size_t s = 0; s < actual_ts.keys.size(); ++s) {
                        if (actual_ts.keys[s].well_id == key.well_id &&
                            actual_ts.keys[s].phase == key.phase) {
                            out << csv::format_double(actual_ts.values(long(t), long(s)));
                            break;
                        }
                    }
                }
            }
            out << '\n';
        }
    }
}

ForecastResult load_forecast_csv(const std::filesystem::path& path) {
    const csv::Table table = csv::read_file(path);
    const int c_date = table.column("date");
    const int c_well = table.column("well_id");
    const int c_phase = table.column("phase");
    const int c_pred = table.column("predicted_rate");
    if (c_date < 0 || c_well < 0 || c_phase < 0 || c_pred < 0) {
        throw DataError(path.string() + ": not a forecast CSV");
    }
    if (table.rows.empty()) {
        throw DataError(path.string() + ": empty forecast");
    }
    ForecastResult fc;
    std::vector<Date> dates;
    std::vector<double> values;
    for (size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const Date date = Date::parse(row[size_t(c_date)]);
        if (dates.empty() || dates.back() != date) {
            dates.push_back(date);
        }
        if (dates.size() == 1) {
            ColumnKey key{row[size_t(c_well)], phase_from_name(row[size_t(c_phase)]), 0};
            fc.output_keys.push_back(std::move(key));
        }
        values.push_back(
            csv::parse_double(row[size_t(c_pred)], path, table.line_numbers[r], 0.0));
    }
    const size_t n_out = fc.output_keys.size();
    if (n_out == 0 || values.size() != dates.size() * n_out) {
        throw DataError(path.string() + ": ragged forecast rows");
    }
    fc.origin = dates.front();
    fc.horizon = dates.size();
    fc.step_days = dates.size() > 1 ? int(days_between(dates[0], dates[1])) : 1;
    fc.estimator = "loaded";
    fc.predictions.resize(long(fc.horizon), long(n_out));
    for (size_t h = 0; h < fc.horizon; ++h) {
        for (size_t c = 0; c < n_out; ++c) {
            fc.predictions(long(h), long(c)) = values[h * n_out + c];
        }
    }
    return fc;
}

std::string_view policy_name(WindowPolicy p) {
    return p == WindowPolicy::Incremental ? "incremental" : "fixed";
}

WindowPolicy policy_from_name(std::string_view name) {
    if (name == "incremental") {
        return WindowPolicy::Incremental;
    }
    if (name == "fixed") {
        return WindowPolicy::Fixed;
    }
    throw ConfigError("unknown window policy '" + std::string(name) + "'");
}

void RollingConfig::validate() const {
    window.validate();
    if (window.look_forward != 1) {
        throw ConfigError("rolling evaluation requires look_forward = 1");
    }
    if (min_train_steps < size_t(window.look_back) + 1) {
        throw ConfigError("min_train_steps must be at least look_back + 1");
    }
    if (cadence_steps < 1) {
        throw ConfigError("retrain cadence must be >= 1");
    }
    if (horizon_steps < 1) {
        throw ConfigError("horizon must be >= 1");
    }
    if (policy == WindowPolicy::Fixed) {
        if (fixed_window_steps < size_t(window.look_back) + 1) {
            throw ConfigError("fixed window must be at least look_back + 1");
        }
        if (fixed_window_steps > min_train_steps) {
            throw ConfigError("fixed window cannot exceed min_train_steps");
        }
    }
    if (val_fraction < 0.0 || val_fraction >= 1.0) {
        throw ConfigError("val_fraction must lie in [0, 1)");
    }
}

size_t rolling_round_count(size_t n_steps, const RollingConfig& cfg) {
    if (n_steps < cfg.min_train_steps + cfg.horizon_steps) {
        return 0;
    }
    return (n_steps - cfg.min_train_steps - cfg.horizon_steps) / cfg.cadence_steps + 1;
}

TrainedEstimator train_estimator(const FieldDataset& ds, const RollingConfig& cfg, uint64_t seed) {
    const SupervisedSet ss = build_supervised(ds, cfg.window);
    const bool wants_val = cfg.estimator == EstimatorKind::Mlp && cfg.val_fraction > 0.0;
    SplitSpec split = SplitSpec::fractions(wants_val ? 1.0 - cfg.val_fraction : 1.0,
                                           wants_val ? cfg.val_fraction : 0.0, 0.0);
    const SplitResult parts = chronological_split(ss, split);

    TrainedEstimator est;
    est.kind = cfg.estimator;
    est.window = cfg.window;
    est.normalizer = fit_normalizer(parts.train);
    const SupervisedSet train_n = normalize(parts.train, est.normalizer);

    switch (cfg.estimator) {
    case EstimatorKind::Ols:
        est.linear = fit_ols(train_n.x, train_n.y);
        break;
    case EstimatorKind::Ridge:
        est.linear = fit_ridge(train_n.x, train_n.y, cfg.alpha);
        break;
    case EstimatorKind::Lasso:
        est.linear = fit_lasso(train_n.x, train_n.y, cfg.alpha);
        break;
    case EstimatorKind::Mlp: {
        MlpTrainConfig mc = cfg.mlp;
        mc.seed = seed;
        if (parts.val.rows() > 0) {
            const SupervisedSet val_n = normalize(parts.val, est.normalizer);
            est.mlp = fit_mlp(train_n.x, train_n.y, val_n.x, val_n.y, cfg.hidden_size,
                              cfg.activation, mc);
        } else {
            est.mlp = fit_mlp(train_n.x, train_n.y, Eigen::MatrixXd(), Eigen::MatrixXd(),
                              cfg.hidden_size, cfg.activation, mc);
        }
        break;
    }
    }
    return est;
}

RollingReport run_rolling_evaluation(const FieldDataset& ds, const RollingConfig& cfg) {
    cfg.validate();
    const size_t n_rounds = rolling_round_count(ds.n_steps, cfg);
    if (n_rounds == 0) {
        throw DataError("dataset has " + std::to_string(ds.n_steps) + " steps; rolling needs " +
                        std::to_string(cfg.min_train_steps + cfg.horizon_steps));
    }
    const TrackedSeries full = tracked_series(ds, cfg.window.scope);

    RollingReport report;
    report.rounds.reserve(n_rounds);
    std::vector<double> actual_flat, predicted_flat;
    for (size_t r = 0; r < n_rounds; ++r) {
        const size_t origin = cfg.min_train_steps + r * cfg.cadence_steps;
        const size_t begin =
            cfg.policy == WindowPolicy::Fixed ? origin - cfg.fixed_window_steps : 0;
        const FieldDataset train_slice = slice_steps(ds, begin, origin - begin);

        const TrainedEstimator est = train_estimator(train_slice, cfg, mix_seed(cfg.seed, r));
        const InjectionSchedule schedule = schedule_from_actuals(ds, origin, cfg.horizon_steps);
        RollingRound round;
        round.origin = ds.date_at(origin);
        round.max_train_origin = ds.date_at(origin - 1);
        round.train_rows = (origin - begin) - size_t(cfg.window.look_back);
        round.forecast = forecast_recursive(est, train_slice, schedule, cfg.horizon_steps);

        actual_flat.clear();
        predicted_flat.clear();
        for (size_t h = 0; h < cfg.horizon_steps; ++h) {
            for (size_t p = 0; p < full.producer_columns.size(); ++p) {
                actual_flat.push_back(
                    full.values(long(origin + h), long(full.producer_columns[p])));
                predicted_flat.push_back(round.forecast.predictions(long(h), long(p)));
            }
        }
        round.metrics = compute_metrics(actual_flat, predicted_flat);
        report.rounds.push_back(std::move(round));
    }

    MetricsReport& mean = report.mean_metrics;
    for (const auto& round : report.rounds) {
        mean.smape += round.metrics.smape;
        mean.mape += round.metrics.mape;
        mean.rmse += round.metrics.rmse;
        mean.r2 += round.metrics.r2;
        mean.mae += round.metrics.mae;
        mean.mse += round.metrics.mse;
        mean.n_points += round.metrics.n_points;
        mean.n_skipped_zero_actuals += round.metrics.n_skipped_zero_actuals;
    }
    const double n = double(report.rounds.size());
    mean.smape /= n;
    mean.mape /= n;
    mean.rmse /= n;
    mean.r2 /= n;
    mean.mae /= n;
    mean.mse /= n;
    return report;
}

void save_rolling_report_csv(const RollingReport& report, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot write file: " + path.string());
    }
    out << "origin,smape,mape,rmse,r2,mae,mse\n";
    auto row = [&out](const std::string& label, const MetricsReport& m) {
        out << label << ',' << csv::format_double(m.smape) << ',' << csv::format_double(m.mape)
            << ',' << csv::format_double(m.rmse) << ',' << csv::format_double(m.r2) << ','
            << csv::format_double(m.mae) << ',' << csv::format_double(m.mse) << '\n';
    };
    for (const auto& round : report.rounds) {
        row(round.origin.str(), round.metrics);
    }
    row("mean", report.mean_metrics);
}

} // namespace wellcast
