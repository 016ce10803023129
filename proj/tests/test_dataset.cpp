#include "wellcast/dataset.hpp"

#include "wellcast/errors.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

using namespace wellcast;
using namespace wellcast::testing;

TEST_CASE("dates parse and format") {
    const Date d = Date::parse("2021-03-07");
    CHECK(d.str() == "2021-03-07");
    CHECK(d.plus_days(25).str() == "2021-04-01");
    CHECK(days_between(d, d.plus_days(10)) == 10);
    CHECK_THROWS_AS(Date::parse("2021-13-01"), DataError);
    CHECK_THROWS_AS(Date::parse("2021-02-30"), DataError);
    CHECK_THROWS_AS(Date::parse("garbage"), DataError);
}

TEST_CASE("load_field_table reads a complete two-well file") {
    TempDir tmp("load_basic");
    std::string csv = "date,well_id,role,q_o,q_g,q_w,q_wi,q_gi\n";
    for (int i = 0; i < 10; ++i) {
        csv += day(1 + i).str() + ",P1,producer," + std::to_string(100 + i) + ",50,10,,\n";
        csv += day(1 + i).str() + ",I1,injector,,,," + std::to_string(500 + i) + ",\n";
    }
    const FieldDataset ds = load_field_table(tmp.file("field.csv", csv));
    CHECK(ds.n_steps == 10);
    CHECK(ds.wells.size() == 2);
    CHECK(ds.producer_count() == 1);
    CHECK(ds.wells[0].well_id == "P1");
    CHECK(ds.wells[0].series.at(Phase::Oil).values[3] == 103.0);
    CHECK(ds.wells[1].series.at(Phase::WaterInj).values[9] == 509.0);
    // producers only carry the phases present in the file
    CHECK(ds.wells[0].has_phase(Phase::Gas));
    CHECK_FALSE(ds.wells[0].has_phase(Phase::WaterInj));
}

TEST_CASE("load_field_table treats missing cells as shut-in zeros") {
    TempDir tmp("load_missing");
    const auto path = tmp.file("field.csv",
                               "date,well_id,role,q_o,q_g,q_w,q_wi,q_gi\n"
                               "2020-01-01,P1,producer,100,1,1,,\n"
                               "2020-01-02,P1,producer,,1,1,,\n"
                               "2020-01-03,P1,producer,90,1,1,,\n");
    const FieldDataset ds = load_field_table(path);
    CHECK(ds.wells[0].series.at(Phase::Oil).values == std::vector<double>{100.0, 0.0, 90.0});
}

TEST_CASE("load_field_table reports grid gaps with the missing date") {
    TempDir tmp("load_gap");
    std::string csv = "date,well_id,role,q_o,q_g,q_w,q_wi,q_gi\n";
    for (int i : {1, 2, 3, 4, 5, 7, 8, 9, 10}) { // day 6 missing
        csv += day(i).str() + ",A,producer,100,,,,\n";
    }
    try {
        load_field_table(tmp.file("field.csv", csv));
        FAIL("expected a grid error");
    } catch (const DataError& e) {
        const std::string what = e.what();
        CHECK(what.find('A') != std::string::npos);
        CHECK(what.find(day(6).str()) != std::string::npos);
    }
}

TEST_CASE("load_field_table rejects duplicate (date, well) rows") {
    TempDir tmp("load_dup");
    const auto path = tmp.file("field.csv",
                               "date,well_id,role,q_o,q_g,q_w,q_wi,q_gi\n"
                               "2020-01-01,P1,producer,100,,,,\n"
                               "2020-01-01,P1,producer,101,,,,\n");
    CHECK_THROWS_WITH_AS(load_field_table(path),
                         doctest::Contains("duplicate row for (2020-01-01, P1)"), DataError);
}

TEST_CASE("load_field_table infers roles when the role column is empty") {
    TempDir tmp("load_roles");
    const auto path = tmp.file("field.csv",
                               "date,well_id,role,q_o,q_g,q_w,q_wi,q_gi\n"
                               "2020-01-01,W1,,120,,,,\n"
                               "2020-01-01,W2,,,,,0,800\n");
    const FieldDataset ds = load_field_table(path);
    CHECK(ds.wells[0].role == WellRole::Producer);
    CHECK(ds.wells[1].role == WellRole::Injector);
    CHECK(ds.wells[1].has_phase(Phase::GasInj));
}

TEST_CASE("load_field_table rejects a producer with non-zero injection") {
    TempDir tmp("load_badrole");
    const auto path = tmp.file("field.csv",
                               "date,well_id,role,q_o,q_g,q_w,q_wi,q_gi\n"
                               "2020-01-01,P1,producer,100,,,5,\n");
    CHECK_THROWS_AS(load_field_table(path), DataError);
}

TEST_CASE("save/load field table round trip") {
    TempDir tmp("roundtrip");
    const FieldDataset ds = field({producer("P1", {10.5, 0.0, 30.25}, {1, 2, 3}, {4, 5, 6}),
                                   injector("I1", {100, 200, 300})});
    save_field_table(ds, tmp.path / "out.csv");
    const FieldDataset back = load_field_table(tmp.path / "out.csv");
    REQUIRE(back.wells.size() == ds.wells.size());
    CHECK(back.n_steps == ds.n_steps);
    CHECK(back.start_date == ds.start_date);
    for (size_t w = 0; w < ds.wells.size(); ++w) {
        CHECK(back.wells[w].well_id == ds.wells[w].well_id);
        CHECK(back.wells[w].role == ds.wells[w].role);
        for (const auto& [phase, s] : ds.wells[w].series) {
            CHECK(back.wells[w].series.at(phase).values == s.values);
        }
    }
}

TEST_CASE("resample_mean block arithmetic") {
    const FieldDataset ds = field({producer("P1", {10, 20, 30, 40, 50, 60})});
    const FieldDataset out = resample_mean(ds, 3);
    CHECK(out.wells[0].series.at(Phase::Oil).values == std::vector<double>{20.0, 50.0});
    CHECK(out.step_days == 3);
    CHECK(out.n_steps == 2);
}

TEST_CASE("resample_mean identity and trailing partial block") {
    const FieldDataset ds = field({producer("P1", {1, 2, 3, 4, 5, 6, 7})});
    CHECK(resample_mean(ds, 1).wells[0].series.at(Phase::Oil).values ==
          ds.wells[0].series.at(Phase::Oil).values);
    CHECK(resample_mean(ds, 3).n_steps == 2); // 7th value dropped
    CHECK_THROWS_AS(resample_mean(ds, 8), DataError);
}

TEST_CASE("resample_mean mass consistency on random data") {
    Rng rng(11);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> values(30 + rng.below(40));
        for (auto& v : values) {
            v = rng.uniform(0.0, 500.0);
        }
        const int period = 2 + int(rng.below(9));
        const FieldDataset ds = field({producer("P1", values)});
        const FieldDataset out = resample_mean(ds, period);
        const auto& means = out.wells[0].series.at(Phase::Oil).values;
        for (size_t b = 0; b < means.size(); ++b) {
            double block_sum = 0.0;
            for (int j = 0; j < period; ++j) {
                block_sum += values[b * size_t(period) + size_t(j)];
            }
            CHECK(means[b] * period == doctest::Approx(block_sum).epsilon(1e-9));
        }
    }
}

TEST_CASE("trim_rampup waits for every well to activate") {
    // A active from day 1, B first non-zero on day 5, grid days 1-10.
    const FieldDataset ds =
        field({producer("A", {1, 1, 1, 1, 1, 1, 1, 1, 1, 1}),
               producer("B", {0, 0, 0, 0, 2, 2, 2, 2, 2, 2})});
    const FieldDataset out = trim_rampup(ds);
    CHECK(out.start_date == day(5));
    CHECK(out.n_steps == 6);
}

TEST_CASE("trim_rampup is the identity when all wells start active") {
    const FieldDataset ds = field({producer("A", {1, 1, 1}), producer("B", {2, 2, 2})});
    const FieldDataset out = trim_rampup(ds);
    CHECK(out.start_date == ds.start_date);
    CHECK(out.n_steps == ds.n_steps);
}

TEST_CASE("trim_rampup override truncates regardless of activity") {
    const FieldDataset ds = field({producer("A", {1, 1, 1, 1, 1, 1, 1, 1, 1, 1})});
    const FieldDataset out = trim_rampup(ds, day(8));
    CHECK(out.n_steps == 3);
    CHECK(out.start_date == day(8));
}

TEST_CASE("trim_rampup names inert wells") {
    const FieldDataset ds =
        field({producer("A", {1, 1, 1}), producer("DEAD", {0, 0, 0})});
    CHECK_THROWS_WITH_AS(trim_rampup(ds), doctest::Contains("DEAD"), DataError);
}

TEST_CASE("trim_rampup is idempotent") {
    Rng rng(5);
    for (int rep = 0; rep < 10; ++rep) {
        std::vector<double> a(12, 0.0), b(12, 0.0);
        for (size_t t = rng.below(6); t < a.size(); ++t) {
            a[t] = rng.uniform(1.0, 10.0);
        }
        for (size_t t = rng.below(6); t < b.size(); ++t) {
            b[t] = rng.uniform(1.0, 10.0);
        }
        a[11] = b[11] = 1.0; // both active eventually
        const FieldDataset once = trim_rampup(field({producer("A", a), producer("B", b)}));
        const FieldDataset twice = trim_rampup(once);
        CHECK(twice.start_date == once.start_date);
        CHECK(twice.n_steps == once.n_steps);
    }
}

TEST_CASE("estimate_potential interpolates between test anchors") {
    const RateSeries daily = series(std::vector<double>(30, 50.0));
    std::vector<ProductionTest> tests = {
        {"P1", day(10), 100.0, 0.0, 0.0},
        {"P1", day(20), 80.0, 0.0, 0.0},
    };
    const RateSeries pot = estimate_potential(daily, tests, Phase::Oil);
    REQUIRE(pot.values.size() == daily.values.size());
    CHECK(pot.values[14] == doctest::Approx(90.0));  // day 15
    CHECK(pot.values[4] == doctest::Approx(100.0));  // day 5: backward fill
    CHECK(pot.values[24] == doctest::Approx(80.0));  // day 25: hold last
    // exact at anchors
    CHECK(pot.values[9] == doctest::Approx(100.0));
    CHECK(pot.values[19] == doctest::Approx(80.0));
}

TEST_CASE("estimate_potential requires tests") {
    const RateSeries daily = series({1, 2, 3});
    CHECK_THROWS_AS(estimate_potential(daily, {}, Phase::Oil), DataError);
}

TEST_CASE("smooth_injection trailing moving average") {
    const RateSeries s = series({0, 0, 30, 30, 30});
    const RateSeries out = smooth_injection(s, 3);
    CHECK(out.values == std::vector<double>{0.0, 0.0, 10.0, 20.0, 30.0});
}

TEST_CASE("smooth_injection degenerate cases") {
    const RateSeries constant = series({7, 7, 7, 7});
    CHECK(smooth_injection(constant, 3).values == constant.values);
    const RateSeries s = series({1, 5, 2, 8});
    CHECK(smooth_injection(s, 1).values == s.values);
}

TEST_CASE("smooth_injection is causal") {
    Rng rng(3);
    std::vector<double> base(20);
    for (auto& v : base) {
        v = rng.uniform(0.0, 100.0);
    }
    for (size_t t = 0; t + 1 < base.size(); ++t) {
        std::vector<double> changed = base;
        for (size_t u = t + 1; u < changed.size(); ++u) {
            changed[u] += 13.0;
        }
        const auto a = smooth_injection(series(base), 4).values;
        const auto b = smooth_injection(series(changed), 4).values;
        for (size_t u = 0; u <= t; ++u) {
            CHECK(a[u] == b[u]);
        }
    }
}

TEST_CASE("slice_steps cuts a window out of the grid") {
    const FieldDataset ds = field({producer("P1", {1, 2, 3, 4, 5})});
    const FieldDataset out = slice_steps(ds, 1, 3);
    CHECK(out.start_date == day(2));
    CHECK(out.wells[0].series.at(Phase::Oil).values == std::vector<double>{2, 3, 4});
    CHECK_THROWS_AS(slice_steps(ds, 3, 4), DataError);
}
