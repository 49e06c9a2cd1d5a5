// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the SpectraCast Project.

#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "spectracast/camera.hpp"
#include "spectracast/colorimetry.hpp"

using namespace spectracast;

namespace {

WavelengthGrid tiny_grid() { return WavelengthGrid{400.0, 100.0, 3}; }

CameraSpec identity_camera() {
    Matrix s = Matrix::Identity(3, 3);
    Vector l = Vector::Ones(3);
    CameraSpec cam(tiny_grid(), s, l);
    cam.white_scale = Vector::Ones(3);
    return cam;
}

} // namespace

TEST_CASE("system matrix: identity-like sensitivities") {
    CameraSpec cam = identity_camera();
    Matrix q = system_matrix(cam);
    CHECK((q - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("system matrix: dark illuminant kills the response") {
    Matrix s = oracle::random_matrix(3, 3, 11);
    CameraSpec cam(tiny_grid(), s, Vector::Zero(3));
    Matrix q = system_matrix(cam);
    CHECK(q.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("system matrix matches the elementwise oracle") {
    WavelengthGrid g = default_grid();
    Matrix s = oracle::random_matrix(3, g.count, 21, 0.0, 1.0);
    Vector l = oracle::random_matrix(g.count, 1, 22, 0.1, 1.0).col(0);
    CameraSpec cam(g, s, l);
    Matrix q = system_matrix(cam);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < g.count; ++j)
            CHECK(q(i, j) == Catch::Approx(cam.white_scale[i] * s(i, j) * l[j]).margin(1e-15));
}

TEST_CASE("simulate_response: zero and perfect reflectors") {
    CameraSpec cam = gaussian_camera();
    Vector zero = simulate_response(Spectrum::constant(cam.grid, 0.0), cam);
    CHECK(zero.cwiseAbs().maxCoeff() == 0.0);
    Vector white = simulate_response(Spectrum::constant(cam.grid, 1.0), cam);
    for (int i = 0; i < 3; ++i)
        CHECK(white[i] == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("simulate_response matches a dot-product oracle") {
    CameraSpec cam = gaussian_camera();
    CounterRng rng(5, 0);
    Vector r(cam.grid.count);
    for (int i = 0; i < r.size(); ++i)
        r[i] = rng.uniform();
    Vector rho = simulate_response(Spectrum(cam.grid, r), cam);
    Matrix q = system_matrix(cam);
    for (int i = 0; i < 3; ++i) {
        double s = 0.0;
        for (int j = 0; j < cam.grid.count; ++j)
            s += q(i, j) * r[j];
        CHECK(rho[i] == Catch::Approx(s).margin(1e-12));
    }
}

TEST_CASE("simulate_response rejects grid mismatch") {
    CameraSpec cam = gaussian_camera();
    Spectrum wrong = Spectrum::constant(WavelengthGrid{400.0, 10.0, 31}, 0.5);
    CHECK_THROWS_AS(simulate_response(wrong, cam), GridMismatch);
}

TEST_CASE("response is linear in the reflectance under zero noise") {
    CameraSpec cam = colorimetric_camera();
    CounterRng rng(99, 0);
    Vector r1(cam.grid.count), r2(cam.grid.count);
    for (int i = 0; i < cam.grid.count; ++i) {
        r1[i] = rng.uniform();
        r2[i] = rng.uniform();
    }
    double a = 0.3, b = 0.6;
    Vector combined = simulate_response(Spectrum(cam.grid, a * r1 + b * r2), cam);
    Vector separate = a * simulate_response(Spectrum(cam.grid, r1), cam) +
                      b * simulate_response(Spectrum(cam.grid, r2), cam);
    CHECK((combined - separate).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("noise draws are deterministic in seed and counter") {
    NoiseModel noise = NoiseModel::gaussian(Vector::Constant(3, 0.01), 1234);
    CameraSpec cam1 = gaussian_camera(default_grid(), noise);
    CameraSpec cam2 = gaussian_camera(default_grid(), noise);
    Spectrum r = Spectrum::constant(default_grid(), 0.5);
    Vector a = simulate_response(r, cam1, 7);
    Vector b = simulate_response(r, cam2, 7);
    CHECK(a.cwiseEqual(b).all());
    Vector c = simulate_response(r, cam1, 8);
    CHECK(!(a.cwiseEqual(c).all()));
    // and noise actually perturbs the clean response
    CameraSpec clean = gaussian_camera();
    Vector d = simulate_response(r, clean, 7);
    CHECK((a - d).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("render_rgb_cube: constant cubes and the per-pixel oracle") {
    CameraSpec cam = colorimetric_camera();
    SpectralCube white(2, 3, cam.grid);
    for (auto& v : white.samples)
        v = 1.0;
    RgbImage img = render_rgb_cube(white, cam);
    for (double v : img.values)
        CHECK(v == Catch::Approx(1.0).margin(1e-12));

    SpectralCube black(2, 3, cam.grid);
    RgbImage dark = render_rgb_cube(black, cam);
    for (double v : dark.values)
        CHECK(v == 0.0);

    SpectralCube random(2, 2, cam.grid);
    CounterRng rng(17, 3);
    for (auto& v : random.samples)
        v = rng.uniform();
    RgbImage rendered = render_rgb_cube(random, cam);
    for (int y = 0; y < 2; ++y)
        for (int x = 0; x < 2; ++x) {
            Vector rho = simulate_response(random.pixel(y, x), cam);
            for (int c = 0; c < 3; ++c) {
                double expected = std::clamp(rho[c], 0.0, 1.0);
                CHECK(rendered.pixel(y, x)[c] == expected);
            }
        }
}

TEST_CASE("render clipping is counted") {
    CameraSpec cam = colorimetric_camera();
    SpectralCube bright(1, 1, cam.grid);
    for (auto& v : bright.samples)
        v = 2.0; // beyond a perfect reflector
    RenderStats stats;
    RgbImage img = render_rgb_cube(bright, cam, &stats);
    CHECK(stats.clipped_values == 3);
    for (int c = 0; c < 3; ++c)
        CHECK(img.values[c] == 1.0);
}

TEST_CASE("xyz integration: white, black, and linearity") {
    ColorimetryTables t = ColorimetryTables::load();
    Vec3 white = xyz_from_spectrum(Spectrum::constant(t.grid, 1.0), t);
    CHECK(white[1] == Catch::Approx(100.0).margin(1e-9));
    Vec3 black = xyz_from_spectrum(Spectrum::constant(t.grid, 0.0), t);
    CHECK(black.norm() == 0.0);
    Vec3 half = xyz_from_spectrum(Spectrum::constant(t.grid, 0.5), t);
    CHECK((half - 0.5 * white).norm() < 1e-12);
}

TEST_CASE("lab conversion: white point, black, and the cube-root branch") {
    Vec3 white(95.047, 100.0, 108.883);
    Vec3 lab_white = lab_from_xyz(white, white);
    CHECK(lab_white[0] == Catch::Approx(100.0).margin(1e-12));
    CHECK(lab_white[1] == Catch::Approx(0.0).margin(1e-12));
    CHECK(lab_white[2] == Catch::Approx(0.0).margin(1e-12));

    Vec3 lab_black = lab_from_xyz(Vec3(0, 0, 0), white);
    CHECK(lab_black[0] == Catch::Approx(0.0).margin(1e-12));
    CHECK(lab_black[1] == Catch::Approx(0.0).margin(1e-12));
    CHECK(lab_black[2] == Catch::Approx(0.0).margin(1e-12));

    // an eighth of the white point: L* = 116 * (1/8)^(1/3) - 16 = 42 exactly
    Vec3 lab_eighth = lab_from_xyz(white / 8.0, white);
    CHECK(lab_eighth[0] == Catch::Approx(42.0).margin(1e-12));
    CHECK(lab_eighth[1] == Catch::Approx(0.0).margin(1e-12));
    CHECK(lab_eighth[2] == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("lab linear segment below the knee") {
    Vec3 white(100.0, 100.0, 100.0);
    double t = 0.001; // below (6/29)^3 ~ 0.008856
    Vec3 lab = lab_from_xyz(Vec3(0.1, 0.1, 0.1), white);
    double f = t / (3.0 * (6.0 / 29.0) * (6.0 / 29.0)) + 4.0 / 29.0;
    CHECK(lab[0] == Catch::Approx(116.0 * f - 16.0).margin(1e-12));
}
