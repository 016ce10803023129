#include "wellcast/plots.hpp"

#include "wellcast/csv.hpp"
#include "wellcast/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace wellcast {

namespace {

constexpr double kWidth = 760.0;
constexpr double kHeight = 420.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 34.0;
constexpr double kMarginBottom = 46.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string num(double v) { return csv::format_double(v); }

struct Svg {
    std::string body;

    void line(double x1, double y1, double x2, double y2, const std::string& stroke,
              double width = 1.0, const char* dash = nullptr) {
        body += "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) +
                "\" y2=\"" + num(y2) + "\" stroke=\"" + stroke + "\" stroke-width=\"" +
                num(width) + "\"";
        if (dash) {
            body += std::string(" stroke-dasharray=\"") + dash + "\"";
        }
        body += "/>\n";
    }

    void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& stroke,
                  double width = 1.5) {
        if (pts.size() < 2) {
            return;
        }
        body += "<polyline fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" + num(width) +
                "\" points=\"";
        for (const auto& [x, y] : pts) {
            body += num(x) + "," + num(y) + " ";
        }
        body += "\"/>\n";
    }

    void polygon(const std::vector<std::pair<double, double>>& pts, const std::string& stroke,
                 const std::string& fill) {
        body += "<polygon stroke=\"" + stroke + "\" fill=\"" + fill +
                "\" fill-opacity=\"0.15\" stroke-width=\"1.5\" points=\"";
        for (const auto& [x, y] : pts) {
            body += num(x) + "," + num(y) + " ";
        }
        body += "\"/>\n";
    }

    void circle(double x, double y, double r, const std::string& color) {
        body += "<circle cx=\"" + num(x) + "\" cy=\"" + num(y) + "\" r=\"" + num(r) +
                "\" fill=\"none\" stroke=\"" + color + "\"/>\n";
    }

    void cross(double x, double y, double r, const std::string& color) {
        line(x - r, y - r, x + r, y + r, color, 1.2);
        line(x - r, y + r, x + r, y - r, color, 1.2);
    }

    void text(double x, double y, const std::string& s, double size = 12.0,
              const char* anchor = "start", const std::string& color = "#333333") {
        body += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-size=\"" + num(size) +
                "\" font-family=\"sans-serif\" text-anchor=\"" + anchor + "\" fill=\"" + color +
                "\">" + s + "</text>\n";
    }

    void write(const std::filesystem::path& path, double width = kWidth,
               double height = kHeight) const {
        std::ofstream out(path);
        if (!out) {
            throw DataError("cannot write file: " + path.string());
        }
        out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width)
            << "\" height=\"" << num(height) << "\" viewBox=\"0 0 " << num(width) << ' '
            << num(height) << "\">\n";
        out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        out << body;
        out << "</svg>\n";
    }
};

struct Series {
    std::string label;
    std::vector<double> x; // serial day
    std::vector<double> y;
    std::string color;
    char marker = 0; // 0 none, 'o' circle, 'x' cross
};

void line_chart(const std::string& title, const std::string& y_label,
                const std::vector<Series>& series, const std::filesystem::path& path) {
    double x_min = 0, x_max = 1, y_min = 0, y_max = 1;
    bool first = true;
    for (const auto& s : series) {
        for (size_t i = 0; i < s.x.size(); ++i) {
            if (first) {
                x_min = x_max = s.x[i];
                y_min = y_max = s.y[i];
                first = false;
            }
            x_min = std::min(x_min, s.x[i]);
            x_max = std::max(x_max, s.x[i]);
            y_min = std::min(y_min, s.y[i]);
            y_max = std::max(y_max, s.y[i]);
        }
    }
    if (x_max <= x_min) {
        x_max = x_min + 1;
    }
    y_min = std::min(y_min, 0.0);
    if (y_max <= y_min) {
        y_max = y_min + 1;
    }
    y_max *= 1.05;

    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    auto sx = [&](double v) { return kMarginLeft + (v - x_min) / (x_max - x_min) * plot_w; };
    auto sy = [&](double v) {
        return kMarginTop + plot_h - (v - y_min) / (y_max - y_min) * plot_h;
    };

    Svg svg;
    svg.text(kWidth / 2.0, 20.0, title, 14.0, "middle");
    // axes + horizontal grid
    svg.line(kMarginLeft, kMarginTop, kMarginLeft, kMarginTop + plot_h, "#333333");
    svg.line(kMarginLeft, kMarginTop + plot_h, kMarginLeft + plot_w, kMarginTop + plot_h,
             "#333333");
    for (int g = 0; g <= 4; ++g) {
        const double v = y_min + (y_max - y_min) * double(g) / 4.0;
        const double y = sy(v);
        if (g > 0) {
            svg.line(kMarginLeft, y, kMarginLeft + plot_w, y, "#dddddd", 0.6);
        }
        svg.text(kMarginLeft - 6.0, y + 4.0, num(std::round(v * 100.0) / 100.0), 10.0, "end");
    }
    for (int g = 0; g <= 4; ++g) {
        const double v = x_min + (x_max - x_min) * double(g) / 4.0;
        svg.text(sx(v), kMarginTop + plot_h + 16.0, Date{int32_t(std::llround(v))}.str(), 10.0,
                 "middle");
    }
    svg.text(16.0, kMarginTop - 10.0, y_label, 11.0);

    double legend_x = kMarginLeft + 8.0;
    for (const auto& s : series) {
        std::vector<std::pair<double, double>> pts;
        pts.reserve(s.x.size());
        for (size_t i = 0; i < s.x.size(); ++i) {
            pts.emplace_back(sx(s.x[i]), sy(s.y[i]));
        }
        svg.polyline(pts, s.color);
        for (const auto& [px, py] : pts) {
            if (s.marker == 'o') {
                svg.circle(px, py, 2.6, s.color);
            } else if (s.marker == 'x') {
                svg.cross(px, py, 2.6, s.color);
            }
        }
        svg.text(legend_x, kHeight - 12.0, s.label, 11.0, "start", s.color);
        legend_x += 10.0 + 6.5 * double(s.label.size());
    }
    svg.write(path);
}

std::string sanitized(std::string s) {
    for (char& c : s) {
        if (!std::isalnum(static_cast<unsigned char>(c))) {
            c = '_';
        }
    }
    return s;
}

} // namespace

std::vector<std::filesystem::path> emit_forecast_plots(const ForecastResult& fc,
                                                       const FieldDataset& history,
                                                       const FieldDataset* actuals,
                                                       const std::filesystem::path& dir,
                                                       size_t history_steps) {
    const bool field_scope =
        !fc.output_keys.empty() && fc.output_keys.front().well_id == kFieldWellId;
    const Scope scope = field_scope ? Scope::FullField : Scope::PerWell;
    const TrackedSeries hist_ts = tracked_series(history, scope);
    TrackedSeries actual_ts;
    if (actuals) {
        actual_ts = tracked_series(*actuals, scope);
    }
    const size_t tail = std::min(history_steps, history.n_steps);
    const size_t tail_begin = history.n_steps - tail;

    std::vector<std::filesystem::path> written;
    for (Phase phase : {Phase::Oil, Phase::Gas, Phase::Water}) {
        std::vector<Series> series;
        std::ofstream data;
        std::filesystem::path data_path =
            dir / ("forecast_" + std::string(phase_name(phase)) + "_data.csv");
        bool any = false;
        size_t color = 0;
        for (size_t c = 0; c < fc.output_keys.size(); ++c) {
            const ColumnKey& key = fc.output_keys[c];
            if (key.phase != phase) {
                continue;
            }
            if (!any) {
                data.open(data_path);
                if (!data) {
                    throw DataError("cannot write file: " + data_path.string());
                }
                data << "date,well_id,kind,rate\n";
                any = true;
            }
            const std::string& base_color = kPalette[color % std::size(kPalette)];
            ++color;

            Series hist;
            hist.label = key.well_id + " history";
            hist.color = base_color;
            hist.marker = 'o';
            for (size_t s = 0; s < hist_ts.keys.size(); ++s) {
                if (hist_ts.keys[s].well_id != key.well_id || hist_ts.keys[s].phase != phase) {
                    continue;
                }
                for (size_t t = tail_begin; t < history.n_steps; ++t) {
                    hist.x.push_back(double(history.date_at(t).serial));
                    hist.y.push_back(hist_ts.values(long(t), long(s)));
                    data << history.date_at(t).str() << ',' << key.well_id << ",history,"
                         << csv::format_double(hist_ts.values(long(t), long(s))) << '\n';
                }
            }
            series.push_back(std::move(hist));

            Series pred;
            pred.label = key.well_id + " forecast";
            pred.color = base_color;
            pred.marker = 'x';
            for (size_t h = 0; h < fc.horizon; ++h) {
                const Date date = fc.origin.plus_days(int64_t(h) * fc.step_days);
                pred.x.push_back(double(date.serial));
                pred.y.push_back(fc.predictions(long(h), long(c)));
                data << date.str() << ',' << key.well_id << ",forecast,"
                     << csv::format_double(fc.predictions(long(h), long(c))) << '\n';
            }
            series.push_back(std::move(pred));

            if (actuals) {
                Series act;
                act.label = key.well_id + " actual";
                act.color = "#555555";
                for (size_t s = 0; s < actual_ts.keys.size(); ++s) {
                    if (actual_ts.keys[s].well_id != key.well_id ||
                        actual_ts.keys[s].phase != phase) {
                        continue;
                    }
                    for (size_t h = 0; h < fc.horizon; ++h) {
                        const Date date = fc.origin.plus_days(int64_t(h) * fc.step_days);
                        const int64_t off = days_between(actuals->start_date, date);
                        if (off < 0 || off % actuals->step_days != 0 ||
                            size_t(off / actuals->step_days) >= actuals->n_steps) {
                            continue;
                        }
                        const size_t t = size_t(off / actuals->step_days);
                        act.x.push_back(double(date.serial));
                        act.y.push_back(actual_ts.values(long(t), long(s)));
                        data << date.str() << ',' << key.well_id << ",actual,"
                             << csv::format_double(actual_ts.values(long(t), long(s))) << '\n';
                    }
                }
                series.push_back(std::move(act));
            }
        }
        if (!any) {
            continue;
        }
        const std::filesystem::path svg_path =
            dir / ("forecast_" + std::string(phase_name(phase)) + ".svg");
        line_chart(std::string(phase_name(phase)) + " rate, " + fc.estimator, "m3/d", series,
                   svg_path);
        written.push_back(svg_path);
        written.push_back(data_path);
    }
    return written;
}

std::vector<std::filesystem::path> emit_radar_plot(
    const std::map<std::string, MetricsReport>& reports, const std::filesystem::path& dir,
    const std::string& stem) {
    const auto normalized = radar_normalize(reports, kRadarMetrics);
    const double cx = kWidth / 2.0;
    const double cy = (kHeight + kMarginTop) / 2.0;
    const double radius = std::min(kWidth, kHeight) / 2.0 - 60.0;
    const size_t n_axes = kRadarMetrics.size();

    Svg svg;
    svg.text(kWidth / 2.0, 20.0, "estimator comparison (1.0 = worst per metric)", 14.0, "middle");
    auto point = [&](size_t axis, double r) {
        const double angle = 2.0 * M_PI * double(axis) / double(n_axes) - M_PI / 2.0;
        return std::pair<double, double>{cx + r * radius * std::cos(angle),
                                         cy + r * radius * std::sin(angle)};
    };
    for (double ring : {0.25, 0.5, 0.75, 1.0}) {
        std::vector<std::pair<double, double>> pts;
        for (size_t a = 0; a <= n_axes; ++a) {
            pts.push_back(point(a % n_axes, ring));
        }
        svg.polyline(pts, "#dddddd", 0.6);
    }
    for (size_t a = 0; a < n_axes; ++a) {
        const auto [x, y] = point(a, 1.0);
        svg.line(cx, cy, x, y, "#bbbbbb", 0.6);
        const auto [lx, ly] = point(a, 1.12);
        svg.text(lx, ly, kRadarMetrics[a], 11.0, "middle");
    }
    size_t color = 0;
    double legend_x = kMarginLeft;
    for (const auto& [name, values] : normalized) {
        std::vector<std::pair<double, double>> pts;
        for (size_t a = 0; a < n_axes; ++a) {
            pts.push_back(point(a, values[a]));
        }
        const std::string& c = kPalette[color % std::size(kPalette)];
        ++color;
        svg.polygon(pts, c, c);
        svg.text(legend_x, kHeight - 12.0, name, 11.0, "start", c);
        legend_x += 10.0 + 6.5 * double(name.size());
    }
    const std::filesystem::path svg_path = dir / (stem + ".svg");
    svg.write(svg_path);

    const std::filesystem::path data_path = dir / (stem + "_data.csv");
    std::ofstream data(data_path);
    if (!data) {
        throw DataError("cannot write file: " + data_path.string());
    }
    data << "estimator,metric,normalized,raw\n";
    for (const auto& [name, values] : normalized) {
        for (size_t a = 0; a < n_axes; ++a) {
            data << name << ',' << kRadarMetrics[a] << ',' << csv::format_double(values[a]) << ','
                 << csv::format_double(reports.at(name).value(kRadarMetrics[a])) << '\n';
        }
    }
    return {svg_path, data_path};
}

std::vector<std::filesystem::path> emit_grid_plots(const GridReport& report,
                                                   const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> written;
    for (const auto& [axis, means] : report.marginal_means) {
        if (means.size() < 2) {
            continue; // single-value axes carry no comparison
        }
        std::vector<Series> series;
        Series smape, mape;
        smape.label = "smape";
        smape.color = kPalette[0];
        smape.marker = 'o';
        mape.label = "mape";
        mape.color = kPalette[1];
        mape.marker = 'o';
        for (size_t i = 0; i < means.size(); ++i) {
            if (means[i].n_trials == 0) {
                continue;
            }
            smape.x.push_back(double(i));
            smape.y.push_back(means[i].metrics.smape);
            mape.x.push_back(double(i));
            mape.y.push_back(means[i].metrics.mape);
        }
        if (smape.x.empty()) {
            continue;
        }
        series.push_back(std::move(smape));
        series.push_back(std::move(mape));

        // Category axis: re-label ticks with the axis values.
        const double plot_w = kWidth - kMarginLeft - kMarginRight;
        Svg svg;
        const std::filesystem::path path = dir / ("grid_" + sanitized(axis) + ".svg");
        // Reuse the line chart then overwrite tick labels via a custom pass.
        double y_max = 0.0;
        for (const auto& s : series) {
            for (double v : s.y) {
                y_max = std::max(y_max, v);
            }
        }
        y_max = y_max > 0.0 ? y_max * 1.1 : 1.0;
        const double plot_h = kHeight - kMarginTop - kMarginBottom;
        const double x_span = std::max(1.0, double(means.size() - 1));
        auto sx = [&](double v) { return kMarginLeft + v / x_span * plot_w; };
        auto sy = [&](double v) { return kMarginTop + plot_h - v / y_max * plot_h; };
        svg.text(kWidth / 2.0, 20.0, "mean error by " + axis, 14.0, "middle");
        svg.line(kMarginLeft, kMarginTop, kMarginLeft, kMarginTop + plot_h, "#333333");
        svg.line(kMarginLeft, kMarginTop + plot_h, kMarginLeft + plot_w, kMarginTop + plot_h,
                 "#333333");
        for (int g = 0; g <= 4; ++g) {
            const double v = y_max * double(g) / 4.0;
            svg.text(kMarginLeft - 6.0, sy(v) + 4.0, num(std::round(v * 1000.0) / 1000.0), 10.0,
                     "end");
            if (g > 0) {
                svg.line(kMarginLeft, sy(v), kMarginLeft + plot_w, sy(v), "#dddddd", 0.6);
            }
        }
        for (size_t i = 0; i < means.size(); ++i) {
            svg.text(sx(double(i)), kMarginTop + plot_h + 16.0, means[i].value, 10.0, "middle");
        }
        double legend_x = kMarginLeft + 8.0;
        for (const auto& s : series) {
            std::vector<std::pair<double, double>> pts;
            for (size_t i = 0; i < s.x.size(); ++i) {
                pts.emplace_back(sx(s.x[i]), sy(s.y[i]));
            }
            svg.polyline(pts, s.color);
            for (const auto& [px, py] : pts) {
                svg.circle(px, py, 2.6, s.color);
            }
            svg.text(legend_x, kHeight - 12.0, s.label, 11.0, "start", s.color);
            legend_x += 10.0 + 6.5 * double(s.label.size());
        }
        svg.write(path);
        written.push_back(path);
    }

    // Radar over the estimator marginals.
    auto it = report.marginal_means.find("estimator");
    if (it != report.marginal_means.end()) {
        std::map<std::string, MetricsReport> by_estimator;
        for (const MarginalMean& m : it->second) {
            if (m.n_trials > 0) {
                by_estimator.emplace(m.value, m.metrics);
            }
        }
        if (!by_estimator.empty()) {
            for (auto& p : emit_radar_plot(by_estimator, dir)) {
                written.push_back(std::move(p));
            }
        }
    }
    return written;
}

} // namespace wellcast
