#ifndef WELLCAST_DATASET_HPP
#define WELLCAST_DATASET_HPP

#include "wellcast/dates.hpp"

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wellcast {

enum class Phase { Oil, Gas, Water, WaterInj, GasInj };

/// Canonical phase order used everywhere a phase sequence matters.
inline constexpr std::array<Phase, 5> kPhaseOrder = {Phase::Oil, Phase::Gas, Phase::Water,
                                                     Phase::WaterInj, Phase::GasInj};

std::string_view phase_name(Phase p);   // "oil", "gas", "water", "water_inj", "gas_inj"
std::string_view phase_column(Phase p); // CSV column: "q_o", "q_g", "q_w", "q_wi", "q_gi"
Phase phase_from_name(std::string_view name);
bool is_injection_phase(Phase p);

enum class WellRole { Producer, Injector };

std::string_view role_name(WellRole r);

/**
 * One rate time series on a uniform date grid, in m3/d.
 */
struct RateSeries {
    Date start_date;
    int step_days = 1;
    std::vector<double> values;

    size_t size() const { return values.size(); }
    Date date_at(size_t idx) const { return start_date.plus_days(int64_t(idx) * step_days); }

    void validate() const; // throws DataError on violated invariants
};

/**
 * All rate series of one well. Producers carry a non-empty subset of
 * {oil, gas, water}; injectors a non-empty subset of {water_inj, gas_inj}
 * (both for a WAG well). All series share the same grid.
 */
struct WellRecord {
    std::string well_id;
    WellRole role = WellRole::Producer;
    std::map<Phase, RateSeries> series; // ordered by canonical phase order

    bool has_phase(Phase p) const { return series.count(p) != 0; }
    void validate() const;
};

/// One production test: measured well rates on a given date.
struct ProductionTest {
    std::string well_id;
    Date date;
    double oil = 0.0;
    double gas = 0.0;
    double water = 0.0;

    double rate(Phase p) const;
};

/**
 * A field of wells aligned to a single uniform date grid.
 */
struct FieldDataset {
    std::vector<WellRecord> wells;
    Date start_date;
    int step_days = 1;
    size_t n_steps = 0;

    Date date_at(size_t idx) const { return start_date.plus_days(int64_t(idx) * step_days); }
    size_t producer_count() const;
    size_t injector_count() const;
    const WellRecord* find_well(std::string_view id) const;

    void validate() const; // throws DataError on violated invariants
};

/// Load the long-format dataset CSV (header: date,well_id,role,q_o,q_g,q_w,q_wi,q_gi).
/// Missing cells become 0 (shut-in convention). Roles are read from the role
/// column when present, inferred from non-zero phases otherwise.
FieldDataset load_field_table(const std::filesystem::path& path);

/// Re-emit a dataset in the same long CSV format (phases a well does not
/// carry are left as empty cells).
void save_field_table(const FieldDataset& ds, const std::filesystem::path& path);

/// Load production tests (header: date,well_id,q_o,q_g,q_w), sorted by date.
std::vector<ProductionTest> load_production_tests(const std::filesystem::path& path);

/// Block means over `period` consecutive samples; the trailing partial block
/// is dropped. The output grid has step_days multiplied by `period`.
FieldDataset resample_mean(const FieldDataset& ds, int period);

/// Drop the ramp-up: truncate to the first date at which every well has been
/// non-zero at least once, or to `override_start` when given.
FieldDataset trim_rampup(const FieldDataset& ds, std::optional<Date> override_start = {});

/// Potential production aligned to the grid of `daily`: anchored at test
/// rates, linear interpolation between anchors, backward fill before the
/// first anchor, hold-last after the final one.
RateSeries estimate_potential(const RateSeries& daily, std::span<const ProductionTest> tests,
                              Phase phase);

/// Trailing (causal) moving average with a shortened window at the start.
RateSeries smooth_injection(const RateSeries& series, int window_steps);

/// The sub-dataset covering steps [begin, begin + count).
FieldDataset slice_steps(const FieldDataset& ds, size_t begin, size_t count);

} // namespace wellcast

#endif
