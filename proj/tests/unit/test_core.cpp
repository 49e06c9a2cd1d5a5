// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the SpectraCast Project.

#include <catch2/catch_amalgamated.hpp>

#include "spectracast/colorimetry.hpp"
#include "spectracast/rng.hpp"
#include "spectracast/types.hpp"

using namespace spectracast;

TEST_CASE("grid wavelengths") {
    WavelengthGrid def = default_grid();
    Vector w = grid_wavelengths(def);
    CHECK(w.size() == 31);
    CHECK(w[0] == 420.0);
    CHECK(w[30] == 720.0);

    Vector w2 = grid_wavelengths(WavelengthGrid{400.0, 50.0, 3});
    CHECK(w2[0] == 400.0);
    CHECK(w2[1] == 450.0);
    CHECK(w2[2] == 500.0);
}

TEST_CASE("resample constant and ramp tables") {
    WavelengthGrid g = default_grid();

    Vector ones = resample({{420.0, 1.0}, {720.0, 1.0}}, g);
    for (int i = 0; i < g.count; ++i)
        CHECK(ones[i] == Catch::Approx(1.0).margin(1e-15));

    Vector ramp = resample({{420.0, 0.0}, {720.0, 3.0}}, g);
    int i570 = g.nearest_index(570.0);
    CHECK(ramp[i570] == Catch::Approx(1.5).margin(1e-12));
}

TEST_CASE("resample rejects empty tables and zeroes outside coverage") {
    CHECK_THROWS_AS(resample({}, default_grid()), EmptyTable);

    Vector v = resample({{500.0, 2.0}, {600.0, 2.0}}, default_grid());
    CHECK(v[0] == 0.0);  // 420 nm, below coverage
    CHECK(v[30] == 0.0); // 720 nm, above coverage
    CHECK(v[default_grid().nearest_index(550.0)] == Catch::Approx(2.0));
}

TEST_CASE("cie y-bar at a 5nm table knot survives resampling") {
    ColorimetryTables t = ColorimetryTables::load();
    int i550 = t.grid.nearest_index(550.0);
    // published 2-degree observer value at 550 nm
    CHECK(t.cmf_y[i550] == Catch::Approx(0.9950).margin(1e-3));
}

namespace {
bool bits_equal(const Vector& a, const Vector& b) {
    return a.size() == b.size() && a.cwiseEqual(b).all();
}
} // namespace

TEST_CASE("colorimetry tables are deterministic and sized to the grid") {
    ColorimetryTables a = ColorimetryTables::load();
    ColorimetryTables b = ColorimetryTables::load();
    CHECK(bits_equal(a.cmf_x, b.cmf_x));
    CHECK(bits_equal(a.cmf_y, b.cmf_y));
    CHECK(bits_equal(a.cmf_z, b.cmf_z));
    CHECK(bits_equal(a.d65, b.d65));
    CHECK(a.cmf_x.size() == 31);
    CHECK(a.d65.size() == 31);
    CHECK(a.cmf_x.minCoeff() >= 0.0);
    CHECK(a.cmf_y.minCoeff() >= 0.0);
    CHECK(a.cmf_z.minCoeff() >= 0.0);
    CHECK(a.d65.minCoeff() >= 0.0);
}

TEST_CASE("cube pixel insert/extract round trip") {
    CounterRng rng(7, 0);
    SpectralCube cube(4, 5, default_grid());
    for (auto& v : cube.samples)
        v = rng.uniform();
    for (int y = 0; y < cube.height; ++y)
        for (int x = 0; x < cube.width; ++x) {
            Spectrum s = cube.pixel(y, x);
            SpectralCube copy = cube;
            copy.set_pixel(y, x, s);
            CHECK(copy.samples == cube.samples);
        }
}

TEST_CASE("spectrum validates length against grid") {
    CHECK_THROWS_AS(Spectrum(default_grid(), Vector::Zero(7)), ShapeMismatch);
    Spectrum s = Spectrum::constant(default_grid(), 2.0);
    s.clamp_unit();
    CHECK(s.clamped);
    CHECK(s.values.maxCoeff() == 1.0);
}

TEST_CASE("counter rng is stateless in the counter") {
    CounterRng a(42, 1);
    CounterRng b(42, 1);
    for (int i = 0; i < 100; ++i)
        CHECK(a.uniform() == b.uniform_at(static_cast<std::uint64_t>(i)));
    // different streams decorrelate
    CounterRng c(42, 2);
    CHECK(c.uniform_at(0) != a.uniform_at(0));
}

TEST_CASE("sample_without_replacement yields distinct indices") {
    CounterRng rng(3, 9);
    auto picks = sample_without_replacement(100, 40, rng);
    REQUIRE(picks.size() == 40);
    std::vector<bool> seen(100, false);
    for (auto p : picks) {
        CHECK(p < 100);
        CHECK(!seen[p]);
        seen[p] = true;
    }
}
