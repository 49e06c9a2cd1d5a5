// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the SpectraCast Project.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "spectracast/error.hpp"

namespace spectracast {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Vec3 = Eigen::Vector3d;

/// Uniform wavelength sampling: count samples from start_nm in steps of step_nm.
struct WavelengthGrid {
    double start_nm = 420.0;
    double step_nm = 10.0;
    int count = 31;

    [[nodiscard]] bool valid() const {
        return start_nm > 0.0 && step_nm > 0.0 && count >= 2;
    }

    [[nodiscard]] double wavelength(int i) const { return start_nm + i * step_nm; }

    [[nodiscard]] double end_nm() const { return wavelength(count - 1); }

    /// Index of the sample closest to the given wavelength.
    [[nodiscard]] int nearest_index(double nm) const {
        int i = static_cast<int>(std::lround((nm - start_nm) / step_nm));
        return std::clamp(i, 0, count - 1);
    }

    friend bool operator==(const WavelengthGrid& a, const WavelengthGrid& b) {
        return a.start_nm == b.start_nm && a.step_nm == b.step_nm && a.count == b.count;
    }
};

/// The 420-720 nm grid at 10 nm steps (31 bands) used throughout by default.
inline WavelengthGrid default_grid() { return WavelengthGrid{420.0, 10.0, 31}; }

/// All sampled wavelengths of a grid, in nanometres.
inline Vector grid_wavelengths(const WavelengthGrid& grid) {
    Vector w(grid.count);
    for (int i = 0; i < grid.count; ++i)
        w[i] = grid.wavelength(i);
    return w;
}

/// A reflectance vector sampled on a wavelength grid. Estimated spectra are
/// kept unclamped; `clamped` records whether clamp_unit() has been applied.
struct Spectrum {
    WavelengthGrid grid;
    Vector values;
    bool clamped = false;

    Spectrum() : values(Vector::Zero(grid.count)) {}
    Spectrum(WavelengthGrid g, Vector v) : grid(g), values(std::move(v)) {
        if (values.size() != grid.count)
            throw ShapeMismatch("spectrum length does not match grid count");
    }

    static Spectrum constant(const WavelengthGrid& g, double value) {
        return Spectrum(g, Vector::Constant(g.count, value));
    }

    /// Clamp all samples into [0,1] and mark the spectrum as clamped.
    Spectrum& clamp_unit() {
        values = values.cwiseMax(0.0).cwiseMin(1.0);
        clamped = true;
        return *this;
    }
};

/// H x W x 3 image with channel values in [0,1].
struct RgbImage {
    int height = 0;
    int width = 0;
    std::vector<double> values; // row-major, RGB interleaved

    RgbImage() = default;
    RgbImage(int h, int w) : height(h), width(w), values(static_cast<size_t>(h) * w * 3, 0.0) {}

    [[nodiscard]] size_t pixel_count() const { return static_cast<size_t>(height) * width; }

    double* pixel(int y, int x) { return values.data() + (static_cast<size_t>(y) * width + x) * 3; }
    const double* pixel(int y, int x) const {
        return values.data() + (static_cast<size_t>(y) * width + x) * 3;
    }

    [[nodiscard]] Vec3 rgb(int y, int x) const {
        const double* p = pixel(y, x);
        return Vec3(p[0], p[1], p[2]);
    }
    void set_rgb(int y, int x, const Vec3& v) {
        double* p = pixel(y, x);
        p[0] = v[0];
        p[1] = v[1];
        p[2] = v[2];
    }
};

/// Dense H x W image of spectra sharing one grid. Samples are stored
/// pixel-major: all bands of pixel (0,0), then (0,1), ...
struct SpectralCube {
    int height = 0;
    int width = 0;
    WavelengthGrid grid;
    std::vector<double> samples;

    SpectralCube() = default;
    SpectralCube(int h, int w, WavelengthGrid g)
        : height(h), width(w), grid(g),
          samples(static_cast<size_t>(h) * w * g.count, 0.0) {}

    [[nodiscard]] size_t pixel_count() const { return static_cast<size_t>(height) * width; }
    [[nodiscard]] int bands() const { return grid.count; }

    double* pixel_data(size_t flat_index) {
        return samples.data() + flat_index * grid.count;
    }
    const double* pixel_data(size_t flat_index) const {
        return samples.data() + flat_index * grid.count;
    }
    double* pixel_data(int y, int x) { return pixel_data(static_cast<size_t>(y) * width + x); }
    const double* pixel_data(int y, int x) const {
        return pixel_data(static_cast<size_t>(y) * width + x);
    }

    [[nodiscard]] Eigen::Map<const Vector> pixel_view(int y, int x) const {
        return Eigen::Map<const Vector>(pixel_data(y, x), grid.count);
    }

    [[nodiscard]] Spectrum pixel(int y, int x) const {
        Vector v(grid.count);
        const double* p = pixel_data(y, x);
        for (int b = 0; b < grid.count; ++b)
            v[b] = p[b];
        return Spectrum(grid, std::move(v));
    }

    void set_pixel(int y, int x, const Spectrum& s) {
        if (!(s.grid == grid))
            throw GridMismatch("pixel spectrum grid differs from cube grid");
        double* p = pixel_data(y, x);
        for (int b = 0; b < grid.count; ++b)
            p[b] = s.values[b];
    }

    void set_pixel(int y, int x, const Vector& v) {
        if (v.size() != grid.count)
            throw ShapeMismatch("pixel vector length differs from cube bands");
        double* p = pixel_data(y, x);
        for (int b = 0; b < grid.count; ++b)
            p[b] = v[b];
    }

    /// One band as an H x W plane.
    [[nodiscard]] std::vector<double> band_plane(int band) const {
        std::vector<double> plane(pixel_count());
        for (size_t i = 0; i < pixel_count(); ++i)
            plane[i] = samples[i * grid.count + band];
        return plane;
    }
};

/// H x W scalar plane (per-pixel metric maps, single-band data).
struct ScalarField {
    int height = 0;
    int width = 0;
    std::vector<double> values;

    ScalarField() = default;
    ScalarField(int h, int w, double fill = 0.0)
        : height(h), width(w), values(static_cast<size_t>(h) * w, fill) {}

    [[nodiscard]] size_t size() const { return values.size(); }
    double& at(int y, int x) { return values[static_cast<size_t>(y) * width + x]; }
    [[nodiscard]] double at(int y, int x) const {
        return values[static_cast<size_t>(y) * width + x];
    }
};

/// H x W boolean mask.
struct PixelMask {
    int height = 0;
    int width = 0;
    std::vector<std::uint8_t> values;

    PixelMask() = default;
    PixelMask(int h, int w, bool fill = false)
        : height(h), width(w), values(static_cast<size_t>(h) * w, fill ? 1 : 0) {}

    [[nodiscard]] size_t size() const { return values.size(); }
    [[nodiscard]] bool get(size_t flat) const { return values[flat] != 0; }
    [[nodiscard]] bool get(int y, int x) const {
        return values[static_cast<size_t>(y) * width + x] != 0;
    }
    void set(int y, int x, bool v) { values[static_cast<size_t>(y) * width + x] = v ? 1 : 0; }

    [[nodiscard]] size_t count_set() const {
        size_t n = 0;
        for (auto v : values)
            n += (v != 0);
        return n;
    }
};

namespace detail {

/// Pairwise (cascade) sum: reduction order is fixed by the data layout, so
/// results do not depend on thread count or accumulation scheduling.
inline double pairwise_sum(const double* data, size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (size_t i = 0; i < n; ++i)
            s += data[i];
        return s;
    }
    size_t half = n / 2;
    return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

inline double pairwise_mean(const std::vector<double>& v) {
    if (v.empty())
        return 0.0;
    return pairwise_sum(v.data(), v.size()) / static_cast<double>(v.size());
}

} // namespace detail

} // namespace spectracast
