#ifndef WELLCAST_PLOTS_HPP
#define WELLCAST_PLOTS_HPP

#include "wellcast/forecaster.hpp"
#include "wellcast/gridsearch.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace wellcast {

/// One line chart per produced phase: trailing history with circle markers,
/// the forecast with X markers, and actuals when available. Writes
/// forecast_<phase>.svg plus forecast_<phase>_data.csv per phase and returns
/// the written paths.
std::vector<std::filesystem::path> emit_forecast_plots(const ForecastResult& fc,
                                                       const FieldDataset& history,
                                                       const FieldDataset* actuals,
                                                       const std::filesystem::path& dir,
                                                       size_t history_steps = 15);

/// Marginal-mean SMAPE/MAPE charts per grid axis (grid_<axis>.svg) and a
/// radar chart over the estimator marginals (radar.svg + radar_data.csv).
std::vector<std::filesystem::path> emit_grid_plots(const GridReport& report,
                                                   const std::filesystem::path& dir);

/// Radar chart of error metrics normalized to the worst performer per
/// metric (outer vertices = worst).
std::vector<std::filesystem::path> emit_radar_plot(
    const std::map<std::string, MetricsReport>& reports, const std::filesystem::path& dir,
    const std::string& stem = "radar");

} // namespace wellcast

#endif
