// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the SpectraCast Project.

#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

#include "spectracast/colorimetry.hpp"
#include "spectracast/rng.hpp"
#include "spectracast/types.hpp"

namespace spectracast {

struct NoiseModel {
    enum class Kind { none, additive_gaussian };

    Kind kind = Kind::none;
    Vector sigma;       // per-channel standard deviation
    std::uint64_t seed = 0;

    static NoiseModel none(int channels = 3) {
        return NoiseModel{Kind::none, Vector::Zero(channels), 0};
    }
    static NoiseModel gaussian(Vector sigma, std::uint64_t seed) {
        return NoiseModel{Kind::additive_gaussian, std::move(sigma), seed};
    }

    /// diag(sigma^2): the autocorrelation of the additive noise term.
    [[nodiscard]] Matrix autocorrelation() const {
        return sigma.cwiseProduct(sigma).asDiagonal();
    }
};

/// Sensor sensitivities and illuminant on a shared grid. white_scale holds
/// per-channel constants chosen so a perfect reflector maps to (1,...,1)
/// under zero noise.
struct CameraSpec {
    WavelengthGrid grid;
    Matrix sensitivities; // M x N, rows are channels
    Vector illuminant;    // N
    NoiseModel noise;
    Vector white_scale;   // M

    CameraSpec() = default;

    CameraSpec(WavelengthGrid g, Matrix s, Vector l, NoiseModel n = {})
        : grid(g), sensitivities(std::move(s)), illuminant(std::move(l)), noise(std::move(n)) {
        if (sensitivities.cols() != grid.count || illuminant.size() != grid.count)
            throw ShapeMismatch("camera sensitivities/illuminant do not match grid");
        white_scale = Vector::Ones(channels());
        for (int i = 0; i < channels(); ++i) {
            double white_response = sensitivities.row(i).dot(illuminant);
            if (white_response > 0.0)
                white_scale[i] = 1.0 / white_response;
        }
        if (noise.sigma.size() == 0)
            noise.sigma = Vector::Zero(channels());
    }

    [[nodiscard]] int channels() const { return static_cast<int>(sensitivities.rows()); }
};

/// Q = white_scale . S . diag(L): the combined map from reflectance to
/// normalized device response.
inline Matrix system_matrix(const CameraSpec& camera) {
    return camera.white_scale.asDiagonal() * camera.sensitivities *
           camera.illuminant.asDiagonal();
}

/// Device response for one reflectance: Q r plus optional additive noise.
/// The noise draw is a pure function of (noise seed, counter), so concurrent
/// per-pixel simulation stays reproducible.
inline Vector simulate_response(const Spectrum& r, const CameraSpec& camera,
                                std::uint64_t noise_counter = 0) {
    if (!(r.grid == camera.grid))
        throw GridMismatch("spectrum grid does not match camera grid");
    Vector rho = system_matrix(camera) * r.values;
    if (camera.noise.kind == NoiseModel::Kind::additive_gaussian) {
        CounterRng rng(camera.noise.seed, noise_counter);
        for (int i = 0; i < rho.size(); ++i)
            rho[i] += camera.noise.sigma[i] * rng.normal();
    }
    return rho;
}

struct RenderStats {
    size_t clipped_values = 0;
};

/// Noise-free per-pixel response of a whole cube, clipped to [0,1].
inline RgbImage render_rgb_cube(const SpectralCube& cube, const CameraSpec& camera,
                                RenderStats* stats = nullptr) {
    if (!(cube.grid == camera.grid))
        throw GridMismatch("cube grid does not match camera grid");
    if (camera.channels() != 3)
        throw ShapeMismatch("RGB rendering requires a 3-channel camera");
    Matrix q = system_matrix(camera);
    RgbImage out(cube.height, cube.width);
    size_t clipped = 0;
    for (size_t i = 0; i < cube.pixel_count(); ++i) {
        Eigen::Map<const Vector> r(cube.pixel_data(i), cube.bands());
        Vector rho = q * r;
        for (int c = 0; c < 3; ++c) {
            double v = rho[c];
            if (v < 0.0 || v > 1.0) {
                ++clipped;
                v = std::clamp(v, 0.0, 1.0);
            }
            out.values[i * 3 + c] = v;
        }
    }
    if (stats)
        stats->clipped_values = clipped;
    return out;
}

/// Three Gaussian sensitivity curves (R/G/B peaks at 600/550/450 nm,
/// sigma 30 nm) under D65.
inline CameraSpec gaussian_camera(const WavelengthGrid& grid = default_grid(),
                                  NoiseModel noise = {}) {
    constexpr double peaks[3] = {600.0, 550.0, 450.0};
    constexpr double sigma = 30.0;
    Matrix s(3, grid.count);
    for (int c = 0; c < 3; ++c)
        for (int j = 0; j < grid.count; ++j) {
            double d = (grid.wavelength(j) - peaks[c]) / sigma;
            s(c, j) = std::exp(-0.5 * d * d);
        }
    ColorimetryTables tables = ColorimetryTables::load(grid);
    return CameraSpec(grid, std::move(s), tables.d65, std::move(noise));
}

/// Colour-matching-function camera: channels are the CIE x/y/z curves under
/// D65, the same projection used to render reference colour images.
inline CameraSpec colorimetric_camera(const WavelengthGrid& grid = default_grid(),
                                      NoiseModel noise = {}) {
    ColorimetryTables tables = ColorimetryTables::load(grid);
    Matrix s(3, grid.count);
    s.row(0) = tables.cmf_x.transpose();
    s.row(1) = tables.cmf_y.transpose();
    s.row(2) = tables.cmf_z.transpose();
    return CameraSpec(grid, std::move(s), tables.d65, std::move(noise));
}

} // namespace spectracast
