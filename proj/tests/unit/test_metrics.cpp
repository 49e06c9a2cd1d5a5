// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the SpectraCast Project.

#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "spectracast/metrics.hpp"

using namespace spectracast;

namespace {

Spectrum random_spectrum(std::uint64_t seed, double lo = 0.01, double hi = 1.0) {
    CounterRng rng(seed, 0);
    Vector v(default_grid().count);
    for (int i = 0; i < v.size(); ++i)
        v[i] = rng.uniform(lo, hi);
    return Spectrum(default_grid(), v);
}

} // namespace

TEST_CASE("rmse: zero, impulse, constant offset") {
    Spectrum r = random_spectrum(1);
    CHECK(rmse(r, r) == 0.0);

    Spectrum impulse = Spectrum::constant(default_grid(), 0.0);
    impulse.values[10] = 1.0;
    Spectrum zero = Spectrum::constant(default_grid(), 0.0);
    CHECK(rmse(impulse, zero) == Catch::Approx(std::sqrt(1.0 / 31.0)).margin(1e-12));

    Spectrum shifted = r;
    shifted.values.array() += 0.125;
    CHECK(rmse(r, shifted) == Catch::Approx(0.125).margin(1e-12));
}

TEST_CASE("rmse is a metric") {
    Spectrum a = random_spectrum(2);
    Spectrum b = random_spectrum(3);
    Spectrum c = random_spectrum(4);
    CHECK(rmse(a, b) == rmse(b, a));
    CHECK(rmse(a, b) > 0.0);
    CHECK(rmse(a, c) <= rmse(a, b) + rmse(b, c) + 1e-15);
    Spectrum wrong = Spectrum::constant(WavelengthGrid{400.0, 10.0, 31}, 0.5);
    CHECK_THROWS_AS(rmse(a, wrong), GridMismatch);
}

TEST_CASE("gfc: identity, scale invariance, orthogonality, degenerate input") {
    Spectrum r = random_spectrum(5);
    CHECK(gfc(r, r) == Catch::Approx(1.0).margin(1e-12));

    Spectrum doubled = r;
    doubled.values *= 2.0;
    CHECK(gfc(r, doubled) == Catch::Approx(1.0).margin(1e-12));

    Spectrum left = Spectrum::constant(default_grid(), 0.0);
    Spectrum right = Spectrum::constant(default_grid(), 0.0);
    for (int i = 0; i < 15; ++i)
        left.values[i] = 0.5;
    for (int i = 15; i < 31; ++i)
        right.values[i] = 0.5;
    CHECK(gfc(left, right) == 0.0);

    Spectrum zero = Spectrum::constant(default_grid(), 0.0);
    CHECK_THROWS_AS(gfc(r, zero), DegenerateSpectrum);
}

TEST_CASE("gfc scale invariance over random positive scales") {
    Spectrum r = random_spectrum(6);
    Spectrum h = random_spectrum(7);
    double base = gfc(r, h);
    CounterRng rng(8, 0);
    for (int trial = 0; trial < 20; ++trial) {
        Spectrum ra = r;
        Spectrum hb = h;
        ra.values *= rng.uniform(0.1, 5.0);
        hb.values *= rng.uniform(0.1, 5.0);
        CHECK(gfc(ra, hb) == Catch::Approx(base).margin(1e-12));
    }
}

TEST_CASE("delta-E: identical spectra, white vs black, gray levels") {
    ColorimetryTables t = ColorimetryTables::load();
    Spectrum r = random_spectrum(9);
    CHECK(delta_e_ab(r, r, t) == 0.0);

    Spectrum white = Spectrum::constant(t.grid, 1.0);
    Spectrum black = Spectrum::constant(t.grid, 0.0);
    CHECK(delta_e_ab(white, black, t) == Catch::Approx(100.0).margin(1e-9));

    Spectrum half = Spectrum::constant(t.grid, 0.5);
    Spectrum quarter = Spectrum::constant(t.grid, 0.25);
    // flat reflectors are neutral, so the distance is along L* only; evaluate
    // the cube-root formula directly as the oracle
    double l_half = 116.0 * std::cbrt(0.5) - 16.0;
    double l_quarter = 116.0 * std::cbrt(0.25) - 16.0;
    CHECK(delta_e_ab(half, quarter, t) ==
          Catch::Approx(std::abs(l_half - l_quarter)).margin(1e-9));
}

TEST_CASE("evaluate_cube: perfect estimates, single pixels, known means") {
    ColorimetryTables t = ColorimetryTables::load();
    SpectralCube truth(2, 2, t.grid);
    CounterRng rng(10, 0);
    for (auto& v : truth.samples)
        v = rng.uniform(0.05, 1.0);

    MetricReport perfect = evaluate_cube(truth, truth, t);
    CHECK(perfect.mean_rmse == 0.0);
    CHECK(perfect.mean_gfc == Catch::Approx(1.0).margin(1e-12));
    CHECK(perfect.mean_delta_e == 0.0);
    CHECK(perfect.highlight_fraction == 0.0);

    SpectralCube one(1, 1, t.grid);
    for (auto& v : one.samples)
        v = rng.uniform(0.05, 1.0);
    SpectralCube one_est = one;
    for (auto& v : one_est.samples)
        v += 0.01;
    MetricReport single = evaluate_cube(one, one_est, t);
    CHECK(single.mean_rmse == Catch::Approx(rmse(one.pixel(0, 0), one_est.pixel(0, 0))));
    CHECK(single.mean_delta_e ==
          Catch::Approx(delta_e_ab(one.pixel(0, 0), one_est.pixel(0, 0), t)));

    // per-pixel rmse {0.1, 0.1, 0.1, 0.5} -> mean 0.2
    SpectralCube zeros(2, 2, t.grid);
    SpectralCube offsets(2, 2, t.grid);
    double levels[4] = {0.1, 0.1, 0.1, 0.5};
    for (size_t p = 0; p < 4; ++p)
        for (int b = 0; b < t.grid.count; ++b)
            offsets.samples[p * t.grid.count + b] = levels[p];
    MetricReport four = evaluate_cube(zeros, offsets, t);
    CHECK(four.mean_rmse == Catch::Approx(0.2).margin(1e-12));
}

TEST_CASE("evaluate_cube equals a brute-force loop") {
    ColorimetryTables t = ColorimetryTables::load();
    SpectralCube truth(16, 16, t.grid);
    SpectralCube est(16, 16, t.grid);
    CounterRng rng(11, 0);
    for (auto& v : truth.samples)
        v = rng.uniform(0.05, 1.0);
    for (size_t i = 0; i < est.samples.size(); ++i)
        est.samples[i] = std::clamp(truth.samples[i] + rng.uniform(-0.05, 0.05), 0.0, 1.0);

    MetricReport report = evaluate_cube(truth, est, t);

    double sum_rmse = 0.0, sum_gfc = 0.0, sum_de = 0.0;
    for (int y = 0; y < 16; ++y)
        for (int x = 0; x < 16; ++x) {
            Spectrum a = truth.pixel(y, x);
            Spectrum b = est.pixel(y, x);
            sum_rmse += rmse(a, b);
            sum_gfc += gfc(a, b);
            sum_de += delta_e_ab(a, b, t);
        }
    CHECK(report.mean_rmse == Catch::Approx(sum_rmse / 256.0).margin(1e-12));
    CHECK(report.mean_gfc == Catch::Approx(sum_gfc / 256.0).margin(1e-12));
    CHECK(report.mean_delta_e == Catch::Approx(sum_de / 256.0).margin(1e-12));
}

TEST_CASE("evaluate_cube validates shapes and grids") {
    ColorimetryTables t = ColorimetryTables::load();
    SpectralCube a(2, 2, t.grid);
    SpectralCube b(2, 3, t.grid);
    CHECK_THROWS_AS(evaluate_cube(a, b, t), ShapeMismatch);
}

TEST_CASE("highlight_mask thresholds at twice the mean") {
    ScalarField uniform(2, 2, 0.3);
    PixelMask none = highlight_mask(uniform);
    CHECK(none.count_set() == 0);

    ScalarField spiky(2, 2);
    spiky.values = {1.0, 1.0, 1.0, 10.0}; // mean 3.25, threshold 6.5
    PixelMask mask = highlight_mask(spiky);
    CHECK(mask.count_set() == 1);
    CHECK(mask.get(1, 1));
}

TEST_CASE("split_metrics partitions the error map") {
    MetricReport report;
    report.per_pixel_rmse = ScalarField(1, 2);
    report.per_pixel_rmse.values = {0.1, 0.3};

    PixelMask mask(1, 2);
    mask.values = {0, 1};
    SplitMeans split = split_metrics(report, mask);
    CHECK(split.masked == Catch::Approx(0.3));
    CHECK(split.unmasked == Catch::Approx(0.1));

    PixelMask all_false(1, 2);
    SplitMeans none = split_metrics(report, all_false);
    CHECK(std::isnan(none.masked));
    CHECK(none.unmasked == Catch::Approx(0.2));

    PixelMask all_true(1, 2, true);
    SplitMeans all = split_metrics(report, all_true);
    CHECK(all.masked == Catch::Approx(0.2));
    CHECK(std::isnan(all.unmasked));
}

TEST_CASE("removing above-threshold pixels lowers the mean") {
    ScalarField map(4, 4, 0.02);
    map.values[3] = 0.4;
    map.values[9] = 0.5;
    PixelMask mask = highlight_mask(map);
    REQUIRE(mask.count_set() == 2);
    MetricReport report;
    report.per_pixel_rmse = map;
    SplitMeans split = split_metrics(report, mask);
    double overall = detail::pairwise_mean(map.values);
    CHECK(split.unmasked < overall);
    CHECK(split.masked > split.unmasked);
}
