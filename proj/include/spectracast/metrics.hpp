// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the SpectraCast Project.

#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "spectracast/colorimetry.hpp"
#include "spectracast/types.hpp"

namespace spectracast {

/// Root mean square difference over the shared grid.
inline double rmse(const Spectrum& r, const Spectrum& r_hat) {
    if (!(r.grid == r_hat.grid))
        throw GridMismatch("rmse requires spectra on one grid");
    return std::sqrt((r.values - r_hat.values).squaredNorm() / static_cast<double>(r.grid.count));
}

/// Goodness-of-fit coefficient: |<r, r_hat>| / (|r| |r_hat|), in [0,1];
/// 1 means a perfect (scale-invariant) match.
inline double gfc(const Spectrum& r, const Spectrum& r_hat) {
    if (!(r.grid == r_hat.grid))
        throw GridMismatch("gfc requires spectra on one grid");
    double nr = r.values.norm();
    double nh = r_hat.values.norm();
    if (nr == 0.0 || nh == 0.0)
        throw DegenerateSpectrum("gfc is undefined for a zero spectrum");
    double v = std::abs(r.values.dot(r_hat.values)) / (nr * nh);
    return v > 1.0 ? 1.0 : v; // Cauchy-Schwarz, modulo rounding
}

/// Euclidean distance in CIELAB with the D65 white reference.
inline double delta_e_ab(const Spectrum& r, const Spectrum& r_hat,
                         const ColorimetryTables& tables) {
    if (!(r.grid == r_hat.grid))
        throw GridMismatch("delta-E requires spectra on one grid");
    Vec3 white = white_point(tables);
    Vec3 lab_a = lab_from_xyz(xyz_from_spectrum(r, tables), white);
    Vec3 lab_b = lab_from_xyz(xyz_from_spectrum(r_hat, tables), white);
    return (lab_a - lab_b).norm();
}

/// Pixels whose error exceeds twice the map mean.
inline PixelMask highlight_mask(const ScalarField& per_pixel_rmse) {
    if (per_pixel_rmse.size() == 0)
        throw ShapeMismatch("highlight mask needs a non-empty error map");
    double threshold = 2.0 * detail::pairwise_mean(per_pixel_rmse.values);
    PixelMask mask(per_pixel_rmse.height, per_pixel_rmse.width);
    for (size_t i = 0; i < per_pixel_rmse.size(); ++i)
        mask.values[i] = per_pixel_rmse.values[i] > threshold ? 1 : 0;
    return mask;
}

struct MetricReport {
    double mean_rmse = 0.0;
    double mean_gfc = 0.0;
    double mean_delta_e = 0.0;
    ScalarField per_pixel_rmse;
    double highlight_fraction = 0.0;
};

namespace detail {

/// gfc with a deterministic convention for zero-norm pixels: two zero
/// spectra agree perfectly, a single zero spectrum matches nothing.
inline double gfc_or_default(const Vector& a, const Vector& b) {
    double na = a.norm();
    double nb = b.norm();
    if (na == 0.0 || nb == 0.0)
        return (na == 0.0 && nb == 0.0) ? 1.0 : 0.0;
    double v = std::abs(a.dot(b)) / (na * nb);
    return v > 1.0 ? 1.0 : v;
}

} // namespace detail

/// Per-pixel spectral and colorimetric errors, averaged uniformly over all
/// pixels (excluded pixels, when a mask is given, do not contribute to any
/// mean). Reductions use pairwise summation so results do not depend on
/// evaluation threading.
inline MetricReport evaluate_cube(const SpectralCube& truth, const SpectralCube& estimate,
                                  const ColorimetryTables& tables,
                                  const PixelMask* exclude = nullptr) {
    if (truth.height != estimate.height || truth.width != estimate.width)
        throw ShapeMismatch("cube dimensions differ");
    if (!(truth.grid == estimate.grid))
        throw GridMismatch("cube grids differ");
    if (!(truth.grid == tables.grid))
        throw GridMismatch("cube grid does not match colorimetry tables");
    if (exclude && (exclude->height != truth.height || exclude->width != truth.width))
        throw ShapeMismatch("exclusion mask dimensions differ from the cubes");

    size_t pixels = truth.pixel_count();
    int n = truth.bands();
    Vec3 white = white_point(tables);
    double xyz_scale = 100.0 / tables.cmf_y.dot(tables.d65);

    MetricReport report;
    report.per_pixel_rmse = ScalarField(truth.height, truth.width);
    std::vector<double> rmse_kept;
    std::vector<double> gfc_kept;
    std::vector<double> de_kept;
    rmse_kept.reserve(pixels);
    gfc_kept.reserve(pixels);
    de_kept.reserve(pixels);

    for (size_t i = 0; i < pixels; ++i) {
        Eigen::Map<const Vector> a(truth.pixel_data(i), n);
        Eigen::Map<const Vector> b(estimate.pixel_data(i), n);
        double pixel_rmse = std::sqrt((a - b).squaredNorm() / static_cast<double>(n));
        report.per_pixel_rmse.values[i] = pixel_rmse;
        if (exclude && exclude->get(i))
            continue;
        rmse_kept.push_back(pixel_rmse);
        gfc_kept.push_back(detail::gfc_or_default(a, b));

        Vector wa = a.cwiseProduct(tables.d65);
        Vector wb = b.cwiseProduct(tables.d65);
        Vec3 xyz_a(xyz_scale * wa.dot(tables.cmf_x), xyz_scale * wa.dot(tables.cmf_y),
                   xyz_scale * wa.dot(tables.cmf_z));
        Vec3 xyz_b(xyz_scale * wb.dot(tables.cmf_x), xyz_scale * wb.dot(tables.cmf_y),
                   xyz_scale * wb.dot(tables.cmf_z));
        de_kept.push_back((lab_from_xyz(xyz_a, white) - lab_from_xyz(xyz_b, white)).norm());
    }

    report.mean_rmse = detail::pairwise_mean(rmse_kept);
    report.mean_gfc = detail::pairwise_mean(gfc_kept);
    report.mean_delta_e = detail::pairwise_mean(de_kept);
    PixelMask flagged = highlight_mask(report.per_pixel_rmse);
    report.highlight_fraction =
        static_cast<double>(flagged.count_set()) / static_cast<double>(pixels);
    return report;
}

struct SplitMeans {
    double masked = std::numeric_limits<double>::quiet_NaN();
    double unmasked = std::numeric_limits<double>::quiet_NaN();
};

/// Mean per-pixel RMSE over each mask partition; an empty partition stays NaN.
inline SplitMeans split_metrics(const MetricReport& report, const PixelMask& mask) {
    const ScalarField& map = report.per_pixel_rmse;
    if (mask.height != map.height || mask.width != map.width)
        throw ShapeMismatch("mask dimensions differ from the error map");
    std::vector<double> in;
    std::vector<double> out;
    for (size_t i = 0; i < map.size(); ++i)
        (mask.get(i) ? in : out).push_back(map.values[i]);
    SplitMeans result;
    if (!in.empty())
        result.masked = detail::pairwise_mean(in);
    if (!out.empty())
        result.unmasked = detail::pairwise_mean(out);
    return result;
}

/// Mean per-pixel RMSE between two cubes: the scoring measure used by the
/// training-set search.
inline double mean_cube_rmse(const SpectralCube& truth, const SpectralCube& estimate) {
    if (truth.height != estimate.height || truth.width != estimate.width)
        throw ShapeMismatch("cube dimensions differ");
    if (!(truth.grid == estimate.grid))
        throw GridMismatch("cube grids differ");
    size_t pixels = truth.pixel_count();
    int n = truth.bands();
    std::vector<double> per_pixel(pixels);
    for (size_t i = 0; i < pixels; ++i) {
        Eigen::Map<const Vector> a(truth.pixel_data(i), n);
        Eigen::Map<const Vector> b(estimate.pixel_data(i), n);
        per_pixel[i] = std::sqrt((a - b).squaredNorm() / static_cast<double>(n));
    }
    return detail::pairwise_mean(per_pixel);
}

} // namespace spectracast
