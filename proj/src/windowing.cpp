#include "wellcast/windowing.hpp"

#include "wellcast/csv.hpp"
#include "wellcast/errors.hpp"

#include <cmath>
#include <fstream>

namespace wellcast {

std::string_view scope_name(Scope s) { return s == Scope::FullField ? "full_field" : "per_well"; }

Scope scope_from_name(std::string_view name) {
    if (name == "full_field") {
        return Scope::FullField;
    }
    if (name == "per_well") {
        return Scope::PerWell;
    }
    throw ConfigError("unknown scope '" + std::string(name) + "'");
}

void WindowConfig::validate() const {
    if (look_back < 1) {
        throw ConfigError("look_back must be >= 1");
    }
    if (look_forward < 1) {
        throw ConfigError("look_forward must be >= 1");
    }
}

std::string ColumnKey::header() const {
    std::string h = well_id;
    h += '_';
    h += phase_name(phase);
    h += "_t";
    if (lag < 0) {
        h += std::to_string(lag);
    } else if (lag > 0) {
        h += '+' + std::to_string(lag);
    }
    return h;
}

TrackedSeries tracked_series(const FieldDataset& ds, Scope scope) {
    ds.validate();
    TrackedSeries ts;
    const auto n = long(ds.n_steps);
    if (scope == Scope::FullField) {
        // Always the five canonical aggregates, so full-field dimensions are
        // fixed regardless of which phases individual wells carry.
        ts.values = Eigen::MatrixXd::Zero(n, 5);
        for (size_t i = 0; i < kPhaseOrder.size(); ++i) {
            const Phase phase = kPhaseOrder[i];
            ts.keys.push_back(ColumnKey{kFieldWellId, phase, 0});
            for (const auto& w : ds.wells) {
                auto it = w.series.find(phase);
                if (it == w.series.end()) {
                    continue;
                }
                for (long t = 0; t < n; ++t) {
                    ts.values(t, long(i)) += it->second.values[size_t(t)];
                }
            }
            if (!is_injection_phase(phase)) {
                ts.producer_columns.push_back(i);
            }
        }
    } else {
        size_t col = 0;
        for (const auto& w : ds.wells) {
            for (const auto& [phase, s] : w.series) {
                ts.keys.push_back(ColumnKey{w.well_id, phase, 0});
                ++col;
            }
        }
        ts.values.resize(n, long(col));
        col = 0;
        for (const auto& w : ds.wells) {
            for (const auto& [phase, s] : w.series) {
                for (long t = 0; t < n; ++t) {
                    ts.values(t, long(col)) = s.values[size_t(t)];
                }
                if (w.role == WellRole::Producer) {
                    ts.producer_columns.push_back(col);
                }
                ++col;
            }
        }
    }
    return ts;
}

SupervisedSet build_supervised(const FieldDataset& ds, const WindowConfig& cfg) {
    cfg.validate();
    const long i = cfg.look_back;
    const long k = cfg.look_forward;
    const long t_total = long(ds.n_steps);
    if (t_total < i + k) {
        throw DataError("insufficient history: need at least " + std::to_string(i + k) +
                        " steps, have " + std::to_string(t_total));
    }
    const TrackedSeries ts = tracked_series(ds, cfg.scope);
    const long n_series = long(ts.keys.size());
    const long n_prod = long(ts.producer_columns.size());
    const long n_rows = t_total - i - k + 1;

    SupervisedSet ss;
    ss.step_days = ds.step_days;
    ss.x.resize(n_rows, n_series * i);
    ss.y.resize(n_rows, n_prod * k);
    ss.x_keys.reserve(size_t(n_series * i));
    for (long s = 0; s < n_series; ++s) {
        for (long lag = -i; lag <= -1; ++lag) {
            ColumnKey key = ts.keys[size_t(s)];
            key.lag = int(lag);
            ss.x_keys.push_back(std::move(key));
        }
    }
    ss.y_keys.reserve(size_t(n_prod * k));
    for (long p = 0; p < n_prod; ++p) {
        for (long lead = 0; lead < k; ++lead) {
            ColumnKey key = ts.keys[ts.producer_columns[size_t(p)]];
            key.lag = int(lead);
            ss.y_keys.push_back(std::move(key));
        }
    }
    ss.origin_dates.reserve(size_t(n_rows));
    for (long r = 0; r < n_rows; ++r) {
        const long origin = i + r;
        ss.origin_dates.push_back(ds.date_at(size_t(origin)));
        for (long s = 0; s < n_series; ++s) {
            for (long off = 0; off < i; ++off) {
                ss.x(r, s * i + off) = ts.values(origin - i + off, s);
            }
        }
        for (long p = 0; p < n_prod; ++p) {
            const long col = long(ts.producer_columns[size_t(p)]);
            for (long lead = 0; lead < k; ++lead) {
                ss.y(r, p * k + lead) = ts.values(origin + lead, col);
            }
        }
    }
    return ss;
}

namespace {

SupervisedSet take_rows(const SupervisedSet& ss, long begin, long count) {
    SupervisedSet out;
    out.x_keys = ss.x_keys;
    out.y_keys = ss.y_keys;
    out.step_days = ss.step_days;
    out.x = ss.x.middleRows(begin, count);
    out.y = ss.y.middleRows(begin, count);
    out.origin_dates.assign(ss.origin_dates.begin() + begin,
                            ss.origin_dates.begin() + begin + count);
    return out;
}

} // namespace

SplitSpec SplitSpec::fractions(double train, double val, double test) {
    SplitSpec s;
    s.train_fraction = train;
    s.val_fraction = val;
    s.test_fraction = test;
    return s;
}

SplitSpec SplitSpec::boundaries(Date val_start, Date test_start) {
    SplitSpec s;
    s.val_start = val_start;
    s.test_start = test_start;
    return s;
}

void SplitSpec::validate() const {
    if (val_start || test_start) {
        if (!val_start || !test_start) {
            throw ConfigError("both val_start and test_start boundaries are required");
        }
        if (*test_start < *val_start) {
            throw ConfigError("split boundaries must be ordered: val_start <= test_start");
        }
        return;
    }
    for (double f : {train_fraction, val_fraction, test_fraction}) {
        if (f < 0.0 || f > 1.0) {
            throw ConfigError("split fractions must lie in [0, 1]");
        }
    }
    if (std::abs(train_fraction + val_fraction + test_fraction - 1.0) > 1e-9) {
        throw ConfigError("split fractions must sum to 1");
    }
}

SplitResult chronological_split(const SupervisedSet& ss, const SplitSpec& spec) {
    spec.validate();
    const long n = long(ss.rows());
    long n_train = 0, n_val = 0;
    if (spec.val_start) {
        while (n_train < n && ss.origin_dates[size_t(n_train)] < *spec.val_start) {
            ++n_train;
        }
        long end_val = n_train;
        while (end_val < n && ss.origin_dates[size_t(end_val)] < *spec.test_start) {
            ++end_val;
        }
        n_val = end_val - n_train;
    } else {
        n_val = long(std::floor(spec.val_fraction * double(n)));
        const long n_test = long(std::floor(spec.test_fraction * double(n)));
        n_train = n - n_val - n_test; // remainder rows stay in train
    }
    if (n_train <= 0) {
        throw DataError("chronological split produced an empty training subset");
    }
    SplitResult out;
    out.train = take_rows(ss, 0, n_train);
    out.val = take_rows(ss, n_train, n_val);
    out.test = take_rows(ss, n_train + n_val, n - n_train - n_val);
    return out;
}

namespace {

void column_stats(const Eigen::MatrixXd& m, Eigen::VectorXd& mean, Eigen::VectorXd& std) {
    const double n = double(m.rows());
    mean = m.colwise().mean();
    std.resize(m.cols());
    for (long c = 0; c < m.cols(); ++c) {
        const double var = (m.col(c).array() - mean(c)).square().sum() / n; // population (1/n)
        double s = std::sqrt(var);
        if (s < 1e-12) {
            s = 1.0; // zero-variance guard
        }
        std(c) = s;
    }
}

void check_keys(const SupervisedSet& ss, const Normalizer& nz) {
    if (ss.x_keys != nz.x_keys || ss.y_keys != nz.y_keys) {
        throw SchemaError("supervised set columns do not match the normalizer");
    }
}

} // namespace

Normalizer fit_normalizer(const SupervisedSet& train) {
    if (train.rows() == 0) {
        throw DataError("cannot fit a normalizer on an empty training set");
    }
    Normalizer nz;
    nz.x_keys = train.x_keys;
    nz.y_keys = train.y_keys;
    column_stats(train.x, nz.x_mean, nz.x_std);
    column_stats(train.y, nz.y_mean, nz.y_std);
    return nz;
}

SupervisedSet normalize(const SupervisedSet& ss, const Normalizer& nz) {
    check_keys(ss, nz);
    SupervisedSet out = ss;
    out.x = (ss.x.rowwise() - nz.x_mean.transpose()).array().rowwise() /
            nz.x_std.transpose().array();
    out.y = (ss.y.rowwise() - nz.y_mean.transpose()).array().rowwise() /
            nz.y_std.transpose().array();
    return out;
}

SupervisedSet denormalize(const SupervisedSet& ss, const Normalizer& nz) {
    check_keys(ss, nz);
    SupervisedSet out = ss;
    out.x = (ss.x.array().rowwise() * nz.x_std.transpose().array()).rowwise() +
            nz.x_mean.transpose().array();
    out.y = (ss.y.array().rowwise() * nz.y_std.transpose().array()).rowwise() +
            nz.y_mean.transpose().array();
    return out;
}

void export_supervised_csv(const SupervisedSet& ss, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot write file: " + path.string());
    }
    out << "origin_date";
    for (const auto& key : ss.x_keys) {
        out << ',' << key.header();
    }
    for (const auto& key : ss.y_keys) {
        out << ',' << key.header();
    }
    out << '\n';
    for (size_t r = 0; r < ss.rows(); ++r) {
        out << ss.origin_dates[r].str();
        for (long c = 0; c < ss.x.cols(); ++c) {
            out << ',' << csv::format_double(ss.x(long(r), c));
        }
        for (long c = 0; c < ss.y.cols(); ++c) {
            out << ',' << csv::format_double(ss.y(long(r), c));
        }
        out << '\n';
    }
}

} // namespace wellcast
