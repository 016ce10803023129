#include "wellcast/dataset.hpp"

#include "wellcast/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace wellcast {

std::string_view phase_name(Phase p) {
    switch (p) {
    case Phase::Oil: return "oil";
    case Phase::Gas: return "gas";
    case Phase::Water: return "water";
    case Phase::WaterInj: return "water_inj";
    case Phase::GasInj: return "gas_inj";
    }
    return "?";
}

std::string_view phase_column(Phase p) {
    switch (p) {
    case Phase::Oil: return "q_o";
    case Phase::Gas: return "q_g";
    case Phase::Water: return "q_w";
    case Phase::WaterInj: return "q_wi";
    case Phase::GasInj: return "q_gi";
    }
    return "?";
}

Phase phase_from_name(std::string_view name) {
    for (Phase p : kPhaseOrder) {
        if (phase_name(p) == name || phase_column(p) == name) {
            return p;
        }
    }
    throw DataError("unknown phase '" + std::string(name) + "'");
}

bool is_injection_phase(Phase p) { return p == Phase::WaterInj || p == Phase::GasInj; }

std::string_view role_name(WellRole r) {
    return r == WellRole::Producer ? "producer" : "injector";
}

void RateSeries::validate() const {
    if (values.empty()) {
        throw DataError("rate series is empty");
    }
    if (step_days < 1) {
        throw DataError("rate series step_days must be >= 1");
    }
    for (double v : values) {
        if (!std::isfinite(v) || v < 0.0) {
            throw DataError("rate series contains a negative or non-finite value");
        }
    }
}

void WellRecord::validate() const {
    if (series.empty()) {
        throw DataError("well '" + well_id + "' carries no series");
    }
    const RateSeries* first = nullptr;
    for (const auto& [phase, s] : series) {
        s.validate();
        const bool inj = is_injection_phase(phase);
        if (role == WellRole::Producer && inj) {
            throw DataError("producer '" + well_id + "' carries injection phase " +
                            std::string(phase_name(phase)));
        }
        if (role == WellRole::Injector && !inj) {
            throw DataError("injector '" + well_id + "' carries production phase " +
                            std::string(phase_name(phase)));
        }
        if (!first) {
            first = &s;
        } else if (s.start_date != first->start_date || s.step_days != first->step_days ||
                   s.values.size() != first->values.size()) {
            throw DataError("well '" + well_id + "' has series on mismatched grids");
        }
    }
}

double ProductionTest::rate(Phase p) const {
    switch (p) {
    case Phase::Oil: return oil;
    case Phase::Gas: return gas;
    case Phase::Water: return water;
    default: throw DataError("production tests carry no injection rates");
    }
}

size_t FieldDataset::producer_count() const {
    return size_t(std::count_if(wells.begin(), wells.end(),
                                [](const WellRecord& w) { return w.role == WellRole::Producer; }));
}

size_t FieldDataset::injector_count() const { return wells.size() - producer_count(); }

const WellRecord* FieldDataset::find_well(std::string_view id) const {
    for (const auto& w : wells) {
        if (w.well_id == id) {
            return &w;
        }
    }
    return nullptr;
}

void FieldDataset::validate() const {
    if (n_steps == 0) {
        throw DataError("dataset has no time steps");
    }
    if (producer_count() == 0) {
        throw DataError("dataset has no producer wells");
    }
    std::set<std::string> seen;
    for (const auto& w : wells) {
        w.validate();
        if (!seen.insert(w.well_id).second) {
            throw DataError("duplicate well id '" + w.well_id + "'");
        }
        for (const auto& [phase, s] : w.series) {
            if (s.start_date != start_date || s.step_days != step_days ||
                s.values.size() != n_steps) {
                throw DataError("well '" + w.well_id + "' is not aligned to the dataset grid");
            }
        }
    }
}

FieldDataset resample_mean(const FieldDataset& ds, int period) {
    if (period < 1) {
        throw DataError("resample period must be >= 1");
    }
    if (period == 1) {
        return ds;
    }
    const size_t blocks = ds.n_steps / size_t(period);
    if (blocks == 0) {
        throw DataError("resample period " + std::to_string(period) + " exceeds series length " +
                        std::to_string(ds.n_steps));
    }
    FieldDataset out;
    out.start_date = ds.start_date;
    out.step_days = ds.step_days * period;
    out.n_steps = blocks;
    out.wells.reserve(ds.wells.size());
    for (const auto& w : ds.wells) {
        WellRecord rw;
        rw.well_id = w.well_id;
        rw.role = w.role;
        for (const auto& [phase, s] : w.series) {
            RateSeries rs;
            rs.start_date = out.start_date;
            rs.step_days = out.step_days;
            rs.values.resize(blocks);
            for (size_t b = 0; b < blocks; ++b) {
                double sum = 0.0;
                for (size_t j = 0; j < size_t(period); ++j) {
                    sum += s.values[b * size_t(period) + j];
                }
                rs.values[b] = sum / double(period);
            }
            rw.series.emplace(phase, std::move(rs));
        }
        out.wells.push_back(std::move(rw));
    }
    return out;
}

FieldDataset trim_rampup(const FieldDataset& ds, std::optional<Date> override_start) {
    if (ds.n_steps == 0) {
        throw DataError("cannot trim an empty dataset");
    }
    size_t first = 0;
    if (override_start) {
        const int64_t delta = days_between(ds.start_date, *override_start);
        if (delta > 0) {
            first = size_t((delta + ds.step_days - 1) / ds.step_days); // first index with date >= override
        }
    } else {
        std::vector<std::string> inert;
        for (const auto& w : ds.wells) {
            size_t active = ds.n_steps; // first step with any non-zero rate
            for (size_t t = 0; t < ds.n_steps && active == ds.n_steps; ++t) {
                for (const auto& [phase, s] : w.series) {
                    if (s.values[t] > 0.0) {
                        active = t;
                        break;
                    }
                }
            }
            if (active == ds.n_steps) {
                inert.push_back(w.well_id);
            } else {
                first = std::max(first, active);
            }
        }
        if (!inert.empty()) {
            std::string msg = "wells never active:";
            for (const auto& id : inert) {
                msg += " " + id;
            }
            throw DataError(msg);
        }
    }
    if (first >= ds.n_steps) {
        throw DataError("trim start is past the end of the dataset");
    }
    if (first == 0) {
        return ds;
    }
    FieldDataset out;
    out.start_date = ds.date_at(first);
    out.step_days = ds.step_days;
    out.n_steps = ds.n_steps - first;
    out.wells.reserve(ds.wells.size());
    for (const auto& w : ds.wells) {
        WellRecord rw;
        rw.well_id = w.well_id;
        rw.role = w.role;
        for (const auto& [phase, s] : w.series) {
            RateSeries rs;
            rs.start_date = out.start_date;
            rs.step_days = out.step_days;
            rs.values.assign(s.values.begin() + long(first), s.values.end());
            rw.series.emplace(phase, std::move(rs));
        }
        out.wells.push_back(std::move(rw));
    }
    return out;
}

RateSeries estimate_potential(const RateSeries& daily, std::span<const ProductionTest> tests,
                              Phase phase) {
    if (tests.empty()) {
        throw DataError("cannot estimate potential without production tests");
    }
    for (size_t i = 1; i < tests.size(); ++i) {
        if (tests[i].date < tests[i - 1].date) {
            throw DataError("production tests must be sorted by date");
        }
    }
    RateSeries out;
    out.start_date = daily.start_date;
    out.step_days = daily.step_days;
    out.values.resize(daily.values.size());
    for (size_t t = 0; t < daily.values.size(); ++t) {
        const int64_t d = int64_t(daily.date_at(t).serial);
        double value;
        if (d <= tests.front().date.serial) {
            value = tests.front().rate(phase); // backward fill
        } else if (d >= tests.back().date.serial) {
            value = tests.back().rate(phase); // hold last
        } else {
            size_t hi = 1;
            while (int64_t(tests[hi].date.serial) < d) {
                ++hi;
            }
            const auto& a = tests[hi - 1];
            const auto& b = tests[hi];
            const double span = double(days_between(a.date, b.date));
            const double frac = span > 0.0 ? double(d - a.date.serial) / span : 0.0;
            value = a.rate(phase) + frac * (b.rate(phase) - a.rate(phase));
        }
        out.values[t] = std::max(0.0, value);
    }
    return out;
}

FieldDataset slice_steps(const FieldDataset& ds, size_t begin, size_t count) {
    if (count == 0 || begin + count > ds.n_steps) {
        throw DataError("slice [" + std::to_string(begin) + ", " + std::to_string(begin + count) +
                        ") is outside the dataset of " + std::to_string(ds.n_steps) + " steps");
    }
    FieldDataset out;
    out.start_date = ds.date_at(begin);
    out.step_days = ds.step_days;
    out.n_steps = count;
    out.wells.reserve(ds.wells.size());
    for (const auto& w : ds.wells) {
        WellRecord rw;
        rw.well_id = w.well_id;
        rw.role = w.role;
        for (const auto& [phase, s] : w.series) {
            RateSeries rs;
            rs.start_date = out.start_date;
            rs.step_days = out.step_days;
            rs.values.assign(s.values.begin() + long(begin), s.values.begin() + long(begin + count));
            rw.series.emplace(phase, std::move(rs));
        }
        out.wells.push_back(std::move(rw));
    }
    return out;
}

RateSeries smooth_injection(const RateSeries& series, int window_steps) {
    if (window_steps < 1) {
        throw DataError("smoothing window must be >= 1");
    }
    RateSeries out;
    out.start_date = series.start_date;
    out.step_days = series.step_days;
    out.values.resize(series.values.size());
    double sum = 0.0;
    for (size_t t = 0; t < series.values.size(); ++t) {
        sum += series.values[t];
        if (t >= size_t(window_steps)) {
            sum -= series.values[t - size_t(window_steps)];
        }
        const size_t width = std::min(t + 1, size_t(window_steps));
        out.values[t] = sum / double(width);
    }
    return out;
}

} // namespace wellcast
