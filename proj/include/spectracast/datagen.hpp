// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the SpectraCast Project.

#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "spectracast/rng.hpp"
#include "spectracast/types.hpp"

namespace spectracast {

/// Parameters of a synthetic spectral scene. The generated reflectances are
/// red-biased, non-smooth mixtures with optional spiky highlight pixels,
/// mimicking the statistics of surgical spectral footage.
struct SceneRecipe {
    int height = 64;
    int width = 64;
    WavelengthGrid grid = default_grid();
    int n_materials = 8;
    double smoothness_sigma_nm = 40.0; // width scale of the material bumps
    double highlight_fraction = 0.0;   // in [0, 1)
    double highlight_gain = 3.0;       // > 1
    double red_bias = 0.3;             // >= 0, monotone ramp toward long wavelengths
    double jitter = 0.02;              // per-band roughness amplitude
    std::uint64_t seed = 0;
};

struct SceneSample {
    SpectralCube cube;
    PixelMask highlight_mask;
};

namespace detail {

// Stream ids keep every random decision of the generator on its own counter
// sequence, so pixels can be generated in any order.
inline constexpr std::uint64_t kStreamMaterials = 1;
inline constexpr std::uint64_t kStreamField = 2;
inline constexpr std::uint64_t kStreamHighlightPos = 3;
inline constexpr std::uint64_t kStreamHighlightShape = 4;
inline constexpr std::uint64_t kStreamJitter = 5;

/// Smooth value noise in [0,1): bilinear interpolation of a random lattice.
inline double value_noise(const CounterRng& rng, int x, int y, int cell) {
    auto lattice = [&](int cx, int cy) {
        std::uint64_t counter =
            (static_cast<std::uint64_t>(static_cast<std::uint32_t>(cx)) << 32) |
            static_cast<std::uint32_t>(cy);
        return rng.uniform_at(counter);
    };
    int cx = x / cell;
    int cy = y / cell;
    double fx = static_cast<double>(x % cell) / cell;
    double fy = static_cast<double>(y % cell) / cell;
    // smoothstep weights
    fx = fx * fx * (3.0 - 2.0 * fx);
    fy = fy * fy * (3.0 - 2.0 * fy);
    double v00 = lattice(cx, cy);
    double v10 = lattice(cx + 1, cy);
    double v01 = lattice(cx, cy + 1);
    double v11 = lattice(cx + 1, cy + 1);
    double a = v00 + (v10 - v00) * fx;
    double b = v01 + (v11 - v01) * fx;
    return a + (b - a) * fy;
}

} // namespace detail

/// Generate a scene and its ground-truth highlight mask. Fully deterministic
/// in the recipe seed; the mask has exactly round(fraction * H * W) pixels.
inline SceneSample generate_scene(const SceneRecipe& recipe) {
    const WavelengthGrid& grid = recipe.grid;
    const int n = grid.count;
    const double span = grid.end_nm() - grid.start_nm;

    // Material reflectance curves: a few Gaussian bumps plus a monotone
    // red ramp, clamped to [0,1].
    CounterRng mat_rng(recipe.seed, detail::kStreamMaterials);
    std::vector<Vector> materials(recipe.n_materials);
    for (int m = 0; m < recipe.n_materials; ++m) {
        int bumps = 2 + static_cast<int>(mat_rng.below(3)); // 2..4
        Vector curve = Vector::Zero(n);
        for (int bump = 0; bump < bumps; ++bump) {
            double center = mat_rng.uniform(grid.start_nm, grid.end_nm());
            double width = recipe.smoothness_sigma_nm * mat_rng.uniform(0.5, 1.5);
            double amp = mat_rng.uniform(0.15, 0.45);
            for (int j = 0; j < n; ++j) {
                double d = (grid.wavelength(j) - center) / width;
                curve[j] += amp * std::exp(-0.5 * d * d);
            }
        }
        for (int j = 0; j < n; ++j) {
            double ramp = (grid.wavelength(j) - grid.start_nm) / span;
            curve[j] = std::clamp(curve[j] + recipe.red_bias * ramp, 0.0, 1.0);
        }
        materials[m] = curve;
    }

    // Smooth material-index field.
    CounterRng field_rng(recipe.seed, detail::kStreamField);
    const int cell = 8;
    SceneSample out;
    out.cube = SpectralCube(recipe.height, recipe.width, grid);
    out.highlight_mask = PixelMask(recipe.height, recipe.width);
    CounterRng jitter_rng(recipe.seed, detail::kStreamJitter);
    for (int y = 0; y < recipe.height; ++y) {
        for (int x = 0; x < recipe.width; ++x) {
            double s = detail::value_noise(field_rng, x, y, cell);
            int m = std::min(recipe.n_materials - 1,
                             static_cast<int>(s * recipe.n_materials));
            double* px = out.cube.pixel_data(y, x);
            std::uint64_t pixel_index =
                static_cast<std::uint64_t>(y) * recipe.width + x;
            for (int j = 0; j < n; ++j) {
                double v = materials[m][j];
                if (recipe.jitter > 0.0) {
                    double u = jitter_rng.uniform_at(pixel_index * n + j);
                    v += recipe.jitter * (2.0 * u - 1.0);
                }
                px[j] = std::clamp(v, 0.0, 1.0);
            }
        }
    }

    // Spiky highlight pixels at distinct random positions.
    std::uint64_t total = out.cube.pixel_count();
    auto n_highlights =
        static_cast<std::uint64_t>(std::llround(recipe.highlight_fraction * total));
    if (n_highlights > 0) {
        CounterRng pos_rng(recipe.seed, detail::kStreamHighlightPos);
        CounterRng shape_rng(recipe.seed, detail::kStreamHighlightShape);
        auto picks = sample_without_replacement(total, n_highlights, pos_rng);
        for (std::uint64_t flat : picks) {
            out.highlight_mask.values[flat] = 1;
            double* px = out.cube.pixel_data(flat);
            int peaks = 3 + static_cast<int>(shape_rng.below(3)); // 3..5
            for (int p = 0; p < peaks; ++p) {
                double center = shape_rng.uniform(grid.start_nm, grid.end_nm());
                double width = shape_rng.uniform(5.0, 15.0);
                double amp = recipe.highlight_gain * shape_rng.uniform(0.5, 1.0);
                for (int j = 0; j < n; ++j) {
                    double d = (grid.wavelength(j) - center) / width;
                    px[j] += amp * std::exp(-0.5 * d * d);
                }
            }
            for (int j = 0; j < n; ++j)
                px[j] = std::clamp(px[j], 0.0, 1.0);
        }
    }
    return out;
}

/// Horizontal wrap-around translation by dx pixels (content moves right).
inline SpectralCube wrap_translate(const SpectralCube& cube, long long dx) {
    SpectralCube out(cube.height, cube.width, cube.grid);
    int w = cube.width;
    long long shift = ((dx % w) + w) % w;
    for (int y = 0; y < cube.height; ++y)
        for (int x = 0; x < w; ++x) {
            int src = static_cast<int>((x - shift + w) % w);
            const double* from = cube.pixel_data(y, src);
            double* to = out.pixel_data(y, x);
            for (int b = 0; b < cube.bands(); ++b)
                to[b] = from[b];
        }
    return out;
}

inline PixelMask wrap_translate_mask(const PixelMask& mask, long long dx) {
    PixelMask out(mask.height, mask.width);
    int w = mask.width;
    long long shift = ((dx % w) + w) % w;
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < w; ++x)
            out.values[static_cast<size_t>(y) * w + x] =
                mask.values[static_cast<size_t>(y) * w + (x - shift + w) % w];
    return out;
}

/// Pixel shift of frame t under a constant drift rate.
inline long long frame_shift(int frame, double drift_px_per_frame) {
    return std::llround(frame * drift_px_per_frame);
}

/// Synthetic video: the base scene translated by round(t * drift) per frame,
/// with wrap-around.
inline std::vector<SpectralCube> generate_video(const SceneRecipe& recipe, int n_frames,
                                                double drift_px_per_frame) {
    if (n_frames < 1)
        throw InvalidConfig("video generation needs at least one frame");
    SceneSample base = generate_scene(recipe);
    std::vector<SpectralCube> frames;
    frames.reserve(n_frames);
    for (int t = 0; t < n_frames; ++t)
        frames.push_back(wrap_translate(base.cube, frame_shift(t, drift_px_per_frame)));
    return frames;
}

} // namespace spectracast
