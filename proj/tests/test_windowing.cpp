#include "wellcast/windowing.hpp"

#include "wellcast/errors.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

#include <fstream>

using namespace wellcast;
using namespace wellcast::testing;

namespace {

// The three-producer oil table used throughout the reshaping examples:
// P1 10..100, P2 130..220, P3 250..340, by tens over 10 timesteps.
FieldDataset ramp_table() {
    auto ramp = [](double first) {
        std::vector<double> v(10);
        for (int i = 0; i < 10; ++i) {
            v[size_t(i)] = first + 10.0 * i;
        }
        return v;
    };
    return field({producer("P1", ramp(10)), producer("P2", ramp(130)),
                  producer("P3", ramp(250))});
}

} // namespace

TEST_CASE("reshaping the three-producer table reproduces the known first row") {
    const WindowConfig cfg{3, 3, Scope::PerWell};
    const SupervisedSet ss = build_supervised(ramp_table(), cfg);

    // Only complete rows are emitted: origins at timesteps 4..8.
    REQUIRE(ss.rows() == 5);
    CHECK(ss.origin_dates.front() == day(4));
    CHECK(ss.origin_dates.back() == day(8));
    REQUIRE(ss.x.cols() == 9);
    REQUIRE(ss.y.cols() == 9);

    const std::vector<double> want_x = {10, 20, 30, 130, 140, 150, 250, 260, 270};
    const std::vector<double> want_y = {40, 50, 60, 160, 170, 180, 280, 290, 300};
    for (int c = 0; c < 9; ++c) {
        CHECK(ss.x(0, c) == want_x[size_t(c)]);
        CHECK(ss.y(0, c) == want_y[size_t(c)]);
    }

    // Column order: wells in dataset order, lags ascending.
    CHECK(ss.x_keys[0].header() == "P1_oil_t-3");
    CHECK(ss.x_keys[2].header() == "P1_oil_t-1");
    CHECK(ss.x_keys[3].header() == "P2_oil_t-3");
    CHECK(ss.y_keys[0].header() == "P1_oil_t");
    CHECK(ss.y_keys[1].header() == "P1_oil_t+1");
    CHECK(ss.y_keys[8].header() == "P3_oil_t+2");
}

TEST_CASE("input/output dimensions follow the window laws") {
    // 6 producers with all three phases, 7 single-phase injectors, i=15, k=1.
    std::vector<WellRecord> wells;
    const std::vector<double> v(17, 1.0);
    for (int p = 0; p < 6; ++p) {
        wells.push_back(producer("P" + std::to_string(p + 1), v, v, v));
    }
    for (int j = 0; j < 7; ++j) {
        wells.push_back(j < 3 ? injector("I" + std::to_string(j + 1), v)
                              : injector("I" + std::to_string(j + 1), {}, v));
    }
    const SupervisedSet ss = build_supervised(field(std::move(wells)), {15, 1, Scope::PerWell});
    CHECK(ss.x.cols() == 15 * (3 * 6 + 7));
    CHECK(ss.x.cols() == 375);
    CHECK(ss.y.cols() == 1 * (3 * 6));
}

TEST_CASE("dimension law holds for random window shapes") {
    Rng rng(2024);
    for (int rep = 0; rep < 100; ++rep) {
        const int i = 1 + int(rng.below(6));
        const int k = 1 + int(rng.below(4));
        const int n_prod = 1 + int(rng.below(4));
        const int n_inj = int(rng.below(4));
        const size_t t_total = size_t(i + k) + rng.below(8);

        std::vector<WellRecord> wells;
        std::vector<double> v(t_total, 1.0);
        for (int p = 0; p < n_prod; ++p) {
            wells.push_back(producer("P" + std::to_string(p + 1), v, v, v));
        }
        for (int j = 0; j < n_inj; ++j) {
            wells.push_back(injector("I" + std::to_string(j + 1), v));
        }
        const SupervisedSet ss =
            build_supervised(field(std::move(wells)), {i, k, Scope::PerWell});
        CHECK(ss.x.cols() == long(i) * (3 * n_prod + n_inj));
        CHECK(ss.y.cols() == long(k) * 3 * n_prod);
        CHECK(long(ss.rows()) == long(t_total) - i - k + 1);
    }
}

TEST_CASE("every supervised cell equals the raw series value its key addresses") {
    Rng rng(77);
    for (Scope scope : {Scope::PerWell, Scope::FullField}) {
        std::vector<double> o1(12), g1(12), w1(12), o2(12), g2(12), w2(12), wi(12);
        for (size_t t = 0; t < 12; ++t) {
            o1[t] = rng.uniform(0, 100);
            g1[t] = rng.uniform(0, 100);
            w1[t] = rng.uniform(0, 100);
            o2[t] = rng.uniform(0, 100);
            g2[t] = rng.uniform(0, 100);
            w2[t] = rng.uniform(0, 100);
            wi[t] = rng.uniform(0, 100);
        }
        const FieldDataset ds =
            field({producer("P1", o1, g1, w1), producer("P2", o2, g2, w2), injector("I1", wi)});
        const WindowConfig cfg{4, 2, scope};
        const SupervisedSet ss = build_supervised(ds, cfg);
        const TrackedSeries ts = tracked_series(ds, scope);

        auto series_value = [&](const ColumnKey& key, long t) {
            for (size_t s = 0; s < ts.keys.size(); ++s) {
                if (ts.keys[s].well_id == key.well_id && ts.keys[s].phase == key.phase) {
                    return ts.values(t, long(s));
                }
            }
            FAIL("key not found");
            return 0.0;
        };
        for (size_t r = 0; r < ss.rows(); ++r) {
            const long origin = long(days_between(ds.start_date, ss.origin_dates[r]));
            for (long c = 0; c < ss.x.cols(); ++c) {
                const ColumnKey& key = ss.x_keys[size_t(c)];
                CHECK(ss.x(long(r), c) == series_value(key, origin + key.lag));
            }
            for (long c = 0; c < ss.y.cols(); ++c) {
                const ColumnKey& key = ss.y_keys[size_t(c)];
                CHECK(ss.y(long(r), c) == series_value(key, origin + key.lag));
            }
        }
    }
}

TEST_CASE("full-field scope aggregates to the five canonical series") {
    const FieldDataset ds = field({producer("P1", {1, 2, 3, 4}, {5, 6, 7, 8}, {1, 1, 1, 1}),
                                   producer("P2", {10, 20, 30, 40}, {1, 1, 1, 1}, {2, 2, 2, 2}),
                                   injector("I1", {100, 100, 100, 100})});
    const SupervisedSet ss = build_supervised(ds, {2, 1, Scope::FullField});
    CHECK(ss.x.cols() == 2 * 5);
    CHECK(ss.y.cols() == 3);
    CHECK(ss.x_keys[0].well_id == kFieldWellId);
    // Row origin t=2: oil aggregate at t-2 is 1+10.
    CHECK(ss.x(0, 0) == 11.0);
    // Gas-injection aggregate is a zero series (no gas injector present).
    CHECK(ss.x(0, 9) == 0.0);
    CHECK(ss.y(0, 0) == 3.0 + 30.0);
}

TEST_CASE("build_supervised rejects too-short histories") {
    const FieldDataset ds = field({producer("P1", {1, 2, 3})});
    CHECK_THROWS_AS(build_supervised(ds, {3, 1, Scope::PerWell}), DataError);
    CHECK_NOTHROW(build_supervised(ds, {2, 1, Scope::PerWell}));
}

TEST_CASE("chronological_split of 10 rows at 0.6/0.2/0.2 gives 6/2/2") {
    const SupervisedSet ss = build_supervised(
        field({producer("P1", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11})}), {1, 1, Scope::PerWell});
    REQUIRE(ss.rows() == 10);
    const SplitResult parts = chronological_split(ss, SplitSpec::fractions(0.6, 0.2, 0.2));
    CHECK(parts.train.rows() == 6);
    CHECK(parts.val.rows() == 2);
    CHECK(parts.test.rows() == 2);
    // strict chronological ordering across the boundaries
    CHECK(parts.train.origin_dates.back() < parts.val.origin_dates.front());
    CHECK(parts.val.origin_dates.back() < parts.test.origin_dates.front());
}

TEST_CASE("fractional split pushes remainder rows into train") {
    const SupervisedSet ss = build_supervised(
        field({producer("P1", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12})}), {1, 1, Scope::PerWell});
    REQUIRE(ss.rows() == 11);
    // floor(.2*11) = 2 for val and test, the leftover row goes to train.
    const SplitResult parts = chronological_split(ss, SplitSpec::fractions(0.6, 0.2, 0.2));
    CHECK(parts.train.rows() == 7);
    CHECK(parts.val.rows() == 2);
    CHECK(parts.test.rows() == 2);
}

TEST_CASE("degenerate split keeps everything in train") {
    const SupervisedSet ss = build_supervised(
        field({producer("P1", {1, 2, 3, 4, 5, 6})}), {1, 1, Scope::PerWell});
    const SplitResult parts = chronological_split(ss, SplitSpec::fractions(1.0, 0.0, 0.0));
    CHECK(parts.train.rows() == ss.rows());
    CHECK(parts.val.rows() == 0);
    CHECK(parts.test.rows() == 0);
}

TEST_CASE("boundary dates bucket rows by origin date") {
    const SupervisedSet ss = build_supervised(
        field({producer("P1", {1, 2, 3, 4, 5, 6, 7, 8})}), {1, 1, Scope::PerWell});
    // origins are days 2..8
    const SplitResult parts =
        chronological_split(ss, SplitSpec::boundaries(day(5), day(7)));
    CHECK(parts.train.rows() == 3); // days 2,3,4
    CHECK(parts.val.rows() == 2);   // days 5,6
    CHECK(parts.test.rows() == 2);  // days 7,8
}

TEST_CASE("split with an empty train subset is an error") {
    const SupervisedSet ss = build_supervised(
        field({producer("P1", {1, 2, 3})}), {1, 1, Scope::PerWell});
    CHECK_THROWS_AS(chronological_split(ss, SplitSpec::fractions(0.0, 0.5, 0.5)), DataError);
}

TEST_CASE("fit_normalizer uses population statistics with a zero-variance guard") {
    SupervisedSet ss;
    ss.x.resize(3, 2);
    ss.x << 1, 5, 2, 5, 3, 5;
    ss.y.resize(3, 1);
    ss.y << 1, 2, 3;
    ss.x_keys = {{"P1", Phase::Oil, -1}, {"P1", Phase::Gas, -1}};
    ss.y_keys = {{"P1", Phase::Oil, 0}};
    ss.origin_dates = {day(1), day(2), day(3)};

    const Normalizer nz = fit_normalizer(ss);
    CHECK(nz.x_mean(0) == doctest::Approx(2.0));
    CHECK(nz.x_std(0) == doctest::Approx(0.8164965809277260).epsilon(1e-12));
    CHECK(nz.x_mean(1) == doctest::Approx(5.0));
    CHECK(nz.x_std(1) == 1.0); // guard

    const SupervisedSet n = normalize(ss, nz);
    CHECK(n.x(2, 0) == doctest::Approx(1.2247448713915890).epsilon(1e-12));
    CHECK(n.x(0, 1) == 0.0);
    CHECK(n.x(1, 1) == 0.0);

    const SupervisedSet back = denormalize(n, nz);
    CHECK((back.x - ss.x).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((back.y - ss.y).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("normalizing an already standardized column is near-identity in stats") {
    Rng rng(9);
    SupervisedSet ss;
    ss.x.resize(200, 1);
    for (long r = 0; r < 200; ++r) {
        ss.x(r, 0) = rng.normal();
    }
    ss.y = ss.x;
    ss.x_keys = {{"P1", Phase::Oil, -1}};
    ss.y_keys = {{"P1", Phase::Oil, 0}};
    ss.origin_dates.assign(200, day(1));
    const Normalizer nz = fit_normalizer(ss);
    const SupervisedSet n = normalize(ss, nz);
    const Normalizer nz2 = fit_normalizer(n);
    CHECK(nz2.x_mean(0) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(nz2.x_std(0) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("normalizer statistics never look past the training rows") {
    const SupervisedSet ss = build_supervised(
        field({producer("P1", {1, 4, 9, 16, 25, 36, 49, 64, 81, 100})}), {2, 1, Scope::PerWell});
    const SplitResult parts = chronological_split(ss, SplitSpec::fractions(0.5, 0.25, 0.25));
    const Normalizer before = fit_normalizer(parts.train);

    SupervisedSet perturbed = ss;
    perturbed.x.bottomRows(3).array() += 1e6; // poke val/test history
    perturbed.y.bottomRows(3).array() += 1e6;
    const SplitResult parts2 =
        chronological_split(perturbed, SplitSpec::fractions(0.5, 0.25, 0.25));
    const Normalizer after = fit_normalizer(parts2.train);
    CHECK(before.x_mean == after.x_mean);
    CHECK(before.x_std == after.x_std);
    CHECK(before.y_mean == after.y_mean);
}

TEST_CASE("normalize rejects mismatched schemas") {
    const SupervisedSet a = build_supervised(
        field({producer("P1", {1, 2, 3, 4})}), {1, 1, Scope::PerWell});
    const SupervisedSet b = build_supervised(
        field({producer("OTHER", {1, 2, 3, 4})}), {1, 1, Scope::PerWell});
    const Normalizer nz = fit_normalizer(a);
    CHECK_THROWS_AS(normalize(b, nz), SchemaError);
}

TEST_CASE("supervised export writes key-derived headers") {
    TempDir tmp("sup_export");
    const SupervisedSet ss = build_supervised(
        field({producer("P1", {1, 2, 3, 4, 5})}), {3, 1, Scope::PerWell});
    export_supervised_csv(ss, tmp.path / "sup.csv");
    std::ifstream in(tmp.path / "sup.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "origin_date,P1_oil_t-3,P1_oil_t-2,P1_oil_t-1,P1_oil_t");
    std::string row;
    std::getline(in, row);
    CHECK(row == day(4).str() + ",1,2,3,4");
}
