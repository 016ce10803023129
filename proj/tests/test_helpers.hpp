#ifndef WELLCAST_TEST_HELPERS_HPP
#define WELLCAST_TEST_HELPERS_HPP

#include "wellcast/dataset.hpp"
#include "wellcast/rng.hpp"

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace wellcast::testing {

inline Date day(int n) { return Date::from_ymd(2020, 1, 1).plus_days(n - 1); } // 1-based "day N"

inline RateSeries series(std::vector<double> values, Date start = day(1), int step_days = 1) {
    RateSeries s;
    s.start_date = start;
    s.step_days = step_days;
    s.values = std::move(values);
    return s;
}

inline WellRecord producer(std::string id, std::vector<double> oil,
                           std::vector<double> gas = {}, std::vector<double> water = {},
                           Date start = day(1), int step_days = 1) {
    WellRecord w;
    w.well_id = std::move(id);
    w.role = WellRole::Producer;
    w.series.emplace(Phase::Oil, series(std::move(oil), start, step_days));
    if (!gas.empty()) {
        w.series.emplace(Phase::Gas, series(std::move(gas), start, step_days));
    }
    if (!water.empty()) {
        w.series.emplace(Phase::Water, series(std::move(water), start, step_days));
    }
    return w;
}

inline WellRecord injector(std::string id, std::vector<double> water_inj,
                           std::vector<double> gas_inj = {}, Date start = day(1),
                           int step_days = 1) {
    WellRecord w;
    w.well_id = std::move(id);
    w.role = WellRole::Injector;
    if (!water_inj.empty()) {
        w.series.emplace(Phase::WaterInj, series(std::move(water_inj), start, step_days));
    }
    if (!gas_inj.empty()) {
        w.series.emplace(Phase::GasInj, series(std::move(gas_inj), start, step_days));
    }
    return w;
}

inline FieldDataset field(std::vector<WellRecord> wells, Date start = day(1),
                          int step_days = 1) {
    FieldDataset ds;
    ds.wells = std::move(wells);
    ds.start_date = start;
    ds.step_days = step_days;
    ds.n_steps = ds.wells.front().series.begin()->second.values.size();
    ds.validate();
    return ds;
}

/// Scratch directory cleaned up per test.
struct TempDir {
    std::filesystem::path path;

    explicit TempDir(const std::string& tag) {
        path = std::filesystem::temp_directory_path() / ("wellcast_test_" + tag);
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }

    std::filesystem::path file(const std::string& name, const std::string& content) const {
        const std::filesystem::path p = path / name;
        std::ofstream out(p);
        out << content;
        return p;
    }
};

} // namespace wellcast::testing

#endif
