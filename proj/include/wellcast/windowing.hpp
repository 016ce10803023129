#ifndef WELLCAST_WINDOWING_HPP
#define WELLCAST_WINDOWING_HPP

#include "wellcast/dataset.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace wellcast {

enum class Scope { FullField, PerWell };

std::string_view scope_name(Scope s);
Scope scope_from_name(std::string_view name);

/// Well id used for field-level aggregate series.
inline constexpr const char* kFieldWellId = "FIELD";

/**
 * Lag-window geometry: look_back past samples feed each prediction of
 * look_forward future samples.
 */
struct WindowConfig {
    int look_back = 15;
    int look_forward = 1;
    Scope scope = Scope::FullField;

    void validate() const;
};

/**
 * Addresses one matrix column: a well/phase series at a relative time
 * offset. Inputs use negative lags (-look_back..-1), outputs leads
 * (0..look_forward-1) and producer phases only.
 */
struct ColumnKey {
    std::string well_id;
    Phase phase = Phase::Oil;
    int lag = 0;

    std::string header() const; // e.g. "P1_oil_t-3", "P1_oil_t", "P1_oil_t+1"
    bool operator==(const ColumnKey&) const = default;
};

/**
 * The tracked series of a dataset in canonical column order (wells in
 * dataset order, phases in canonical order); full-field scope aggregates
 * to five FIELD series. Shared by the reshaper and the forecaster so both
 * always agree on column meaning.
 */
struct TrackedSeries {
    std::vector<ColumnKey> keys;  // lag = 0 on every key
    Eigen::MatrixXd values;       // n_steps x n_series
    std::vector<size_t> producer_columns; // indices of producer-phase series
};

TrackedSeries tracked_series(const FieldDataset& ds, Scope scope);

/**
 * Supervised lag-window matrices. Row r holds inputs at origin-i..origin-1
 * and outputs at origin..origin+k-1, where origin = origin_dates[r].
 */
struct SupervisedSet {
    Eigen::MatrixXd x;
    Eigen::MatrixXd y;
    std::vector<ColumnKey> x_keys;
    std::vector<ColumnKey> y_keys;
    std::vector<Date> origin_dates;
    int step_days = 1;

    size_t rows() const { return size_t(x.rows()); }
};

/// Chronological split policy: fractions (floor allocation, remainder to
/// train) or explicit boundary dates bucketing rows by origin date.
struct SplitSpec {
    double train_fraction = 0.7;
    double val_fraction = 0.15;
    double test_fraction = 0.15;
    std::optional<Date> val_start;
    std::optional<Date> test_start;

    static SplitSpec fractions(double train, double val, double test);
    static SplitSpec boundaries(Date val_start, Date test_start);
    void validate() const;
};

struct SplitResult {
    SupervisedSet train;
    SupervisedSet val;
    SupervisedSet test;
};

/// Per-column Gaussian normalization statistics, train-derived only.
struct Normalizer {
    Eigen::VectorXd x_mean, x_std;
    Eigen::VectorXd y_mean, y_std;
    std::vector<ColumnKey> x_keys, y_keys;
};

SupervisedSet build_supervised(const FieldDataset& ds, const WindowConfig& cfg);
SplitResult chronological_split(const SupervisedSet& ss, const SplitSpec& spec);
Normalizer fit_normalizer(const SupervisedSet& train);
SupervisedSet normalize(const SupervisedSet& ss, const Normalizer& nz);
SupervisedSet denormalize(const SupervisedSet& ss, const Normalizer& nz);

void export_supervised_csv(const SupervisedSet& ss, const std::filesystem::path& path);

} // namespace wellcast

#endif
