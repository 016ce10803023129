#include "wellcast/csv.hpp"
#include "wellcast/dataset.hpp"
#include "wellcast/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

namespace wellcast {

namespace {

struct RawCell {
    double value = 0.0;
    bool present = false;
};

struct RawRow {
    size_t line = 0;
    std::string role;
    std::array<RawCell, kPhaseOrder.size()> cells;
};

struct RawWell {
    std::map<int32_t, RawRow> by_date; // serial date -> row
};

} // namespace

FieldDataset load_field_table(const std::filesystem::path& path) {
    const csv::Table table = csv::read_file(path);
    const int c_date = table.column("date");
    const int c_well = table.column("well_id");
    if (c_date < 0 || c_well < 0) {
        throw DataError(path.string() + ": header must contain 'date' and 'well_id'");
    }
    const int c_role = table.column("role");
    std::array<int, kPhaseOrder.size()> c_phase{};
    for (size_t i = 0; i < kPhaseOrder.size(); ++i) {
        c_phase[i] = table.column(phase_column(kPhaseOrder[i]));
    }

    std::map<std::string, RawWell> raw;
    std::vector<std::string> well_order;
    for (size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const size_t line = table.line_numbers[r];
        Date date;
        try {
            date = Date::parse(row[size_t(c_date)]);
        } catch (const DataError& e) {
            throw DataError(path.string() + ":" + std::to_string(line) + ": " + e.what());
        }
        const std::string& well_id = row[size_t(c_well)];
        if (well_id.empty()) {
            throw DataError(path.string() + ":" + std::to_string(line) + ": empty well_id");
        }
        if (!raw.count(well_id)) {
            well_order.push_back(well_id);
        }
        RawWell& rw = raw[well_id];
        if (rw.by_date.count(date.serial)) {
            throw DataError(path.string() + ":" + std::to_string(line) + ": duplicate row for (" +
                            date.str() + ", " + well_id + ")");
        }
        RawRow rr;
        rr.line = line;
        if (c_role >= 0) {
            rr.role = row[size_t(c_role)];
        }
        for (size_t i = 0; i < kPhaseOrder.size(); ++i) {
            if (c_phase[i] < 0) {
                continue;
            }
            const std::string& cell = row[size_t(c_phase[i])];
            if (cell.empty()) {
                continue; // missing cell: shut-in, value 0, not marked present
            }
            rr.cells[i].value = csv::parse_double(cell, path, line, 0.0);
            rr.cells[i].present = true;
            if (rr.cells[i].value < 0.0 || !std::isfinite(rr.cells[i].value)) {
                throw DataError(path.string() + ":" + std::to_string(line) +
                                ": negative or non-finite rate");
            }
        }
        rw.by_date.emplace(date.serial, std::move(rr));
    }
    if (raw.empty()) {
        throw DataError(path.string() + ": no data rows");
    }

    FieldDataset ds;
    bool grid_set = false;
    for (const auto& well_id : well_order) {
        const RawWell& rw = raw[well_id];
        const int32_t first = rw.by_date.begin()->first;
        const int32_t last = rw.by_date.rbegin()->first;

        // Infer the grid step as the smallest date gap, then demand uniformity.
        int32_t step = 1;
        if (rw.by_date.size() > 1) {
            step = last - first;
            int32_t prev = first;
            for (auto it = std::next(rw.by_date.begin()); it != rw.by_date.end(); ++it) {
                step = std::min(step, it->first - prev);
                prev = it->first;
            }
        }
        {
            int32_t expect = first;
            for (const auto& [serial, row] : rw.by_date) {
                if (serial != expect) {
                    throw DataError(path.string() + ": grid gap for well '" + well_id +
                                    "': missing " + Date{expect}.str());
                }
                expect += step;
            }
        }
        const size_t n = rw.by_date.size();

        if (!grid_set) {
            ds.start_date = Date{first};
            ds.step_days = step;
            ds.n_steps = n;
            grid_set = true;
        } else if (first != ds.start_date.serial || step != ds.step_days || n != ds.n_steps) {
            throw DataError(path.string() + ": well '" + well_id +
                            "' is not aligned to the grid of the first well");
        }

        // Role: explicit column wins; otherwise infer from non-zero phases.
        std::string role_text;
        std::array<bool, kPhaseOrder.size()> any_present{};
        std::array<bool, kPhaseOrder.size()> any_nonzero{};
        for (const auto& [serial, row] : rw.by_date) {
            if (role_text.empty() && !row.role.empty()) {
                role_text = row.role;
            }
            for (size_t i = 0; i < kPhaseOrder.size(); ++i) {
                any_present[i] = any_present[i] || row.cells[i].present;
                any_nonzero[i] = any_nonzero[i] || row.cells[i].value > 0.0;
            }
        }
        const bool produced = any_nonzero[0] || any_nonzero[1] || any_nonzero[2];
        const bool injected = any_nonzero[3] || any_nonzero[4];
        WellRole role;
        if (role_text == "producer") {
            role = WellRole::Producer;
        } else if (role_text == "injector") {
            role = WellRole::Injector;
        } else if (!role_text.empty()) {
            throw DataError(path.string() + ": unknown role '" + role_text + "' for well '" +
                            well_id + "'");
        } else if (produced && !injected) {
            role = WellRole::Producer;
        } else if (injected && !produced) {
            role = WellRole::Injector;
        } else if (produced && injected) {
            throw DataError(path.string() + ": well '" + well_id +
                            "' has both production and injection rates; add a role column");
        } else {
            throw DataError(path.string() + ": cannot infer role of all-zero well '" + well_id +
                            "'; add a role column");
        }
        if (role == WellRole::Producer && injected) {
            throw DataError(path.string() + ": producer '" + well_id +
                            "' has non-zero injection rates");
        }
        if (role == WellRole::Injector && produced) {
            throw DataError(path.string() + ": injector '" + well_id +
                            "' has non-zero production rates");
        }

        WellRecord rec;
        rec.well_id = well_id;
        rec.role = role;
        for (size_t i = 0; i < kPhaseOrder.size(); ++i) {
            const Phase phase = kPhaseOrder[i];
            const bool legal = (role == WellRole::Injector) == is_injection_phase(phase);
            // Carry a phase when any of its cells appeared in the file; zero-only
            // columns on the wrong side of the role are dropped, not errors.
            if (!any_present[i] || !legal) {
                continue;
            }
            RateSeries s;
            s.start_date = ds.start_date;
            s.step_days = ds.step_days;
            s.values.reserve(n);
            for (const auto& [serial, row] : rw.by_date) {
                s.values.push_back(row.cells[i].value);
            }
            rec.series.emplace(phase, std::move(s));
        }
        if (rec.series.empty()) {
            // Injector declared by role but with no injection data yet: keep an
            // all-zero water series so the record stays on the grid.
            const Phase fallback = role == WellRole::Injector ? Phase::WaterInj : Phase::Oil;
            RateSeries s;
            s.start_date = ds.start_date;
            s.step_days = ds.step_days;
            s.values.assign(n, 0.0);
            rec.series.emplace(fallback, std::move(s));
        }
        ds.wells.push_back(std::move(rec));
    }
    ds.validate();
    return ds;
}

void save_field_table(const FieldDataset& ds, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot write file: " + path.string());
    }
    out << "date,well_id,role,q_o,q_g,q_w,q_wi,q_gi\n";
    for (const auto& w : ds.wells) {
        for (size_t t = 0; t < ds.n_steps; ++t) {
            out << ds.date_at(t).str() << ',' << w.well_id << ',' << role_name(w.role);
            for (Phase p : kPhaseOrder) {
                out << ',';
                auto it = w.series.find(p);
                if (it != w.series.end()) {
                    out << csv::format_double(it->second.values[t]);
                }
            }
            out << '\n';
        }
    }
}

std::vector<ProductionTest> load_production_tests(const std::filesystem::path& path) {
    const csv::Table table = csv::read_file(path);
    const int c_date = table.column("date");
    const int c_well = table.column("well_id");
    if (c_date < 0 || c_well < 0) {
        throw DataError(path.string() + ": header must contain 'date' and 'well_id'");
    }
    const int c_o = table.column("q_o");
    const int c_g = table.column("q_g");
    const int c_w = table.column("q_w");
    std::vector<ProductionTest> tests;
    tests.reserve(table.rows.size());
    for (size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const size_t line = table.line_numbers[r];
        ProductionTest t;
        t.date = Date::parse(row[size_t(c_date)]);
        t.well_id = row[size_t(c_well)];
        if (c_o >= 0) t.oil = csv::parse_double(row[size_t(c_o)], path, line, 0.0);
        if (c_g >= 0) t.gas = csv::parse_double(row[size_t(c_g)], path, line, 0.0);
        if (c_w >= 0) t.water = csv::parse_double(row[size_t(c_w)], path, line, 0.0);
        if (t.oil < 0 || t.gas < 0 || t.water < 0) {
            throw DataError(path.string() + ":" + std::to_string(line) + ": negative test rate");
        }
        tests.push_back(std::move(t));
    }
    std::sort(tests.begin(), tests.end(), [](const ProductionTest& a, const ProductionTest& b) {
        return a.date != b.date ? a.date < b.date : a.well_id < b.well_id;
    });
    return tests;
}

} // namespace wellcast
