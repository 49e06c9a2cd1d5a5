// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the SpectraCast Project.

#pragma once

#include <array>
#include <cmath>
#include <utility>
#include <vector>

#include "spectracast/types.hpp"

namespace spectracast {

namespace cie {

// CIE 1931 2-degree standard observer colour matching functions,
// 380-780 nm at 5 nm intervals (the classic 81-entry table).
inline constexpr int kCmfSamples = 81;
inline constexpr double kCmfStartNm = 380.0;
inline constexpr double kCmfStepNm = 5.0;

inline constexpr std::array<std::array<double, 3>, kCmfSamples> kCmf = {{
    {0.0014, 0.0000, 0.0065}, {0.0022, 0.0001, 0.0105}, {0.0042, 0.0001, 0.0201},
    {0.0076, 0.0002, 0.0362}, {0.0143, 0.0004, 0.0679}, {0.0232, 0.0006, 0.1102},
    {0.0435, 0.0012, 0.2074}, {0.0776, 0.0022, 0.3713}, {0.1344, 0.0040, 0.6456},
    {0.2148, 0.0073, 1.0391}, {0.2839, 0.0116, 1.3856}, {0.3285, 0.0168, 1.6230},
    {0.3483, 0.0230, 1.7471}, {0.3481, 0.0298, 1.7826}, {0.3362, 0.0380, 1.7721},
    {0.3187, 0.0480, 1.7441}, {0.2908, 0.0600, 1.6692}, {0.2511, 0.0739, 1.5281},
    {0.1954, 0.0910, 1.2876}, {0.1421, 0.1126, 1.0419}, {0.0956, 0.1390, 0.8130},
    {0.0580, 0.1693, 0.6162}, {0.0320, 0.2080, 0.4652}, {0.0147, 0.2586, 0.3533},
    {0.0049, 0.3230, 0.2720}, {0.0024, 0.4073, 0.2123}, {0.0093, 0.5030, 0.1582},
    {0.0291, 0.6082, 0.1117}, {0.0633, 0.7100, 0.0782}, {0.1096, 0.7932, 0.0573},
    {0.1655, 0.8620, 0.0422}, {0.2257, 0.9149, 0.0298}, {0.2904, 0.9540, 0.0203},
    {0.3597, 0.9803, 0.0134}, {0.4334, 0.9950, 0.0087}, {0.5121, 1.0000, 0.0057},
    {0.5945, 0.9950, 0.0039}, {0.6784, 0.9786, 0.0027}, {0.7621, 0.9520, 0.0021},
    {0.8425, 0.9154, 0.0018}, {0.9163, 0.8700, 0.0017}, {0.9786, 0.8163, 0.0014},
    {1.0263, 0.7570, 0.0011}, {1.0567, 0.6949, 0.0010}, {1.0622, 0.6310, 0.0008},
    {1.0456, 0.5668, 0.0006}, {1.0026, 0.5030, 0.0003}, {0.9384, 0.4412, 0.0002},
    {0.8544, 0.3810, 0.0002}, {0.7514, 0.3210, 0.0001}, {0.6424, 0.2650, 0.0000},
    {0.5419, 0.2170, 0.0000}, {0.4479, 0.1750, 0.0000}, {0.3608, 0.1382, 0.0000},
    {0.2835, 0.1070, 0.0000}, {0.2187, 0.0816, 0.0000}, {0.1649, 0.0610, 0.0000},
    {0.1212, 0.0446, 0.0000}, {0.0874, 0.0320, 0.0000}, {0.0636, 0.0232, 0.0000},
    {0.0468, 0.0170, 0.0000}, {0.0329, 0.0119, 0.0000}, {0.0227, 0.0082, 0.0000},
    {0.0158, 0.0057, 0.0000}, {0.0114, 0.0041, 0.0000}, {0.0081, 0.0029, 0.0000},
    {0.0058, 0.0021, 0.0000}, {0.0041, 0.0015, 0.0000}, {0.0029, 0.0010, 0.0000},
    {0.0020, 0.0007, 0.0000}, {0.0014, 0.0005, 0.0000}, {0.0010, 0.0004, 0.0000},
    {0.0007, 0.0002, 0.0000}, {0.0005, 0.0002, 0.0000}, {0.0003, 0.0001, 0.0000},
    {0.0002, 0.0001, 0.0000}, {0.0002, 0.0001, 0.0000}, {0.0001, 0.0000, 0.0000},
    {0.0001, 0.0000, 0.0000}, {0.0001, 0.0000, 0.0000}, {0.0000, 0.0000, 0.0000},
}};

// CIE standard illuminant D65, relative spectral power distribution
// normalized to 100 at 560 nm. 360-830 nm at 5 nm intervals.
inline constexpr int kD65Samples = 95;
inline constexpr double kD65StartNm = 360.0;
inline constexpr double kD65StepNm = 5.0;

inline constexpr std::array<double, kD65Samples> kD65 = {
    46.6383,  49.3637,  52.0891,  51.0323,  49.9755,  52.3118,  54.6482,  68.7015,
    82.7549,  87.1204,  91.486,   92.4589,  93.4318,  90.057,   86.6823,  95.7736,
    104.865,  110.936,  117.008,  117.41,   117.812,  116.336,  114.861,  115.392,
    115.923,  112.367,  108.811,  109.082,  109.354,  108.578,  107.802,  106.296,
    104.79,   106.239,  107.689,  106.047,  104.405,  104.225,  104.046,  102.023,
    100.0,    98.1671,  96.3342,  96.0611,  95.788,   92.2368,  88.6856,  89.3459,
    90.0062,  89.8026,  89.5991,  88.6489,  87.6987,  85.4936,  83.2886,  83.4939,
    83.6992,  81.863,   80.0268,  80.1207,  80.2146,  81.2462,  82.2778,  80.281,
    78.2842,  74.0027,  69.7213,  70.6652,  71.6091,  72.979,   74.349,   67.9765,
    61.604,   65.7448,  69.8856,  72.4863,  75.087,   69.3398,  63.5927,  55.0054,
    46.4182,  56.6118,  66.8054,  65.0941,  63.3828,  63.8434,  64.304,   61.8779,
    59.4519,  55.7054,  51.959,   54.6998,  57.4406,  58.8765,  60.3125,
};

} // namespace cie

/// One sample of a tabulated function of wavelength.
using TablePoint = std::pair<double, double>; // (wavelength_nm, value)

/// Linearly interpolate a tabulated function onto a wavelength grid.
/// Wavelengths outside the table's coverage map to 0.
inline Vector resample(std::vector<TablePoint> table, const WavelengthGrid& grid) {
    if (table.empty())
        throw EmptyTable("cannot resample an empty table");
    std::sort(table.begin(), table.end());
    Vector out = Vector::Zero(grid.count);
    for (int i = 0; i < grid.count; ++i) {
        double nm = grid.wavelength(i);
        if (nm < table.front().first || nm > table.back().first)
            continue;
        auto hi = std::lower_bound(table.begin(), table.end(), nm,
                                   [](const TablePoint& p, double x) { return p.first < x; });
        if (hi->first == nm) {
            out[i] = hi->second;
            continue;
        }
        auto lo = hi - 1;
        double t = (nm - lo->first) / (hi->first - lo->first);
        out[i] = lo->second + t * (hi->second - lo->second);
    }
    return out;
}

namespace detail {

template <typename Array>
std::vector<TablePoint> to_table(const Array& values, double start_nm, double step_nm,
                                 int component = -1) {
    std::vector<TablePoint> t;
    t.reserve(values.size());
    for (size_t i = 0; i < values.size(); ++i) {
        double v = component < 0 ? static_cast<double>(values[i])
                                 : static_cast<double>(values[i][component]);
        t.emplace_back(start_nm + step_nm * static_cast<double>(i), v);
    }
    return t;
}

} // namespace detail

/// CIE 1931 2-degree colour matching functions and illuminant D65 resampled
/// onto one wavelength grid.
struct ColorimetryTables {
    WavelengthGrid grid;
    Vector cmf_x;
    Vector cmf_y;
    Vector cmf_z;
    Vector d65;

    static ColorimetryTables load(const WavelengthGrid& grid = default_grid()) {
        ColorimetryTables t;
        t.grid = grid;
        t.cmf_x = resample(detail::to_table(cie::kCmf, cie::kCmfStartNm, cie::kCmfStepNm, 0), grid);
        t.cmf_y = resample(detail::to_table(cie::kCmf, cie::kCmfStartNm, cie::kCmfStepNm, 1), grid);
        t.cmf_z = resample(detail::to_table(cie::kCmf, cie::kCmfStartNm, cie::kCmfStepNm, 2), grid);
        t.d65 = resample(detail::to_table(cie::kD65, cie::kD65StartNm, cie::kD65StepNm), grid);
        return t;
    }
};

/// Tristimulus integration under D65: X = k * sum r * d65 * cmf_x, with k
/// normalizing a perfect reflector to Y = 100.
inline Vec3 xyz_from_spectrum(const Spectrum& r, const ColorimetryTables& tables) {
    if (!(r.grid == tables.grid))
        throw GridMismatch("spectrum grid does not match colorimetry tables");
    double k = 100.0 / tables.cmf_y.dot(tables.d65);
    Vector weighted = r.values.cwiseProduct(tables.d65);
    return Vec3(k * weighted.dot(tables.cmf_x), k * weighted.dot(tables.cmf_y),
                k * weighted.dot(tables.cmf_z));
}

/// XYZ of the D65 white point on the tables' grid (perfect reflector, Y = 100).
inline Vec3 white_point(const ColorimetryTables& tables) {
    return xyz_from_spectrum(Spectrum::constant(tables.grid, 1.0), tables);
}

/// CIE L*a*b* from XYZ, including the linear segment below (6/29)^3.
inline Vec3 lab_from_xyz(const Vec3& xyz, const Vec3& white) {
    constexpr double delta = 6.0 / 29.0;
    constexpr double delta3 = delta * delta * delta;
    auto f = [&](double t) {
        return t > delta3 ? std::cbrt(t) : t / (3.0 * delta * delta) + 4.0 / 29.0;
    };
    double fx = f(xyz[0] / white[0]);
    double fy = f(xyz[1] / white[1]);
    double fz = f(xyz[2] / white[2]);
    return Vec3(116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz));
}

inline Vec3 lab_from_spectrum(const Spectrum& r, const ColorimetryTables& tables) {
    return lab_from_xyz(xyz_from_spectrum(r, tables), white_point(tables));
}

} // namespace spectracast
