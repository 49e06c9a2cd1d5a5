// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the SpectraCast Project.

#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spectracast/camera.hpp"
#include "spectracast/estimators.hpp"
#include "spectracast/types.hpp"

namespace spectracast {

namespace io {

// ---- little-endian primitives -------------------------------------------

inline void put_bytes(std::ostream& out, const void* data, size_t n) {
    out.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
}

template <typename T>
void put_le(std::ostream& out, T value) {
    static_assert(std::is_trivially_copyable_v<T>);
    std::array<unsigned char, sizeof(T)> bytes{};
    std::uint64_t bits;
    if constexpr (sizeof(T) == 8)
        bits = std::bit_cast<std::uint64_t>(value);
    else if constexpr (sizeof(T) == 4)
        bits = std::bit_cast<std::uint32_t>(value);
    else if constexpr (sizeof(T) == 2)
        bits = std::bit_cast<std::uint16_t>(value);
    else
        bits = std::bit_cast<std::uint8_t>(value);
    for (size_t i = 0; i < sizeof(T); ++i)
        bytes[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xff);
    put_bytes(out, bytes.data(), bytes.size());
}

template <typename T>
T get_le(std::istream& in) {
    std::array<unsigned char, sizeof(T)> bytes{};
    in.read(reinterpret_cast<char*>(bytes.data()), sizeof(T));
    if (in.gcount() != static_cast<std::streamsize>(sizeof(T)))
        throw CorruptFile("unexpected end of file");
    std::uint64_t bits = 0;
    for (size_t i = 0; i < sizeof(T); ++i)
        bits |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
    if constexpr (sizeof(T) == 8)
        return std::bit_cast<T>(bits);
    else if constexpr (sizeof(T) == 4)
        return std::bit_cast<T>(static_cast<std::uint32_t>(bits));
    else if constexpr (sizeof(T) == 2)
        return std::bit_cast<T>(static_cast<std::uint16_t>(bits));
    else
        return std::bit_cast<T>(static_cast<std::uint8_t>(bits));
}

inline void expect_eof(std::istream& in, const char* what) {
    if (in.peek() != std::char_traits<char>::eof())
        throw CorruptFile(std::string(what) + ": trailing bytes after payload");
}

inline void put_magic(std::ostream& out, std::string_view magic) {
    put_bytes(out, magic.data(), magic.size());
}

inline bool check_magic(std::istream& in, std::string_view magic) {
    std::array<char, 4> buf{};
    in.read(buf.data(), 4);
    return in.gcount() == 4 && std::string_view(buf.data(), 4) == magic;
}

inline std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoFailure("cannot open for writing: " + path.string());
    return out;
}

inline std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoFailure("cannot open for reading: " + path.string());
    return in;
}

inline void put_matrix(std::ostream& out, const Matrix& m) {
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(m.rows()));
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(m.cols()));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            put_le<double>(out, m(r, c));
}

inline Matrix get_matrix(std::istream& in) {
    auto rows = get_le<std::uint32_t>(in);
    auto cols = get_le<std::uint32_t>(in);
    Matrix m(rows, cols);
    for (std::uint32_t r = 0; r < rows; ++r)
        for (std::uint32_t c = 0; c < cols; ++c)
            m(r, c) = get_le<double>(in);
    return m;
}

inline std::string format_double(double v) {
    char buf[64];
    int n = std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf, static_cast<size_t>(n));
}

inline double parse_double(std::string_view token, const char* what) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size())
        throw CorruptFile(std::string(what) + ": bad number '" + std::string(token) + "'");
    return v;
}

} // namespace io

// ---- spectral cube (SPC1) ------------------------------------------------

enum class CubeEncoding : std::uint8_t { f32 = 0, f64 = 1 };

/// Binary cube file: SPC1 magic, u32 dims, f64 grid, one byte encoding, then
/// band-sequential planes (all of band 0, then band 1, ...).
inline void write_cube(const std::filesystem::path& path, const SpectralCube& cube,
                       CubeEncoding encoding = CubeEncoding::f64) {
    auto out = io::open_out(path);
    io::put_magic(out, "SPC1");
    io::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(cube.width));
    io::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(cube.height));
    io::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(cube.bands()));
    io::put_le<double>(out, cube.grid.start_nm);
    io::put_le<double>(out, cube.grid.step_nm);
    io::put_le<std::uint8_t>(out, static_cast<std::uint8_t>(encoding));
    size_t pixels = cube.pixel_count();
    for (int b = 0; b < cube.bands(); ++b)
        for (size_t i = 0; i < pixels; ++i) {
            double v = cube.samples[i * cube.bands() + b];
            if (encoding == CubeEncoding::f64)
                io::put_le<double>(out, v);
            else
                io::put_le<float>(out, static_cast<float>(v));
        }
    if (!out)
        throw IoFailure("write failed: " + path.string());
}

inline SpectralCube read_cube(const std::filesystem::path& path) {
    auto in = io::open_in(path);
    if (!io::check_magic(in, "SPC1"))
        throw NotACube("not a spectral cube file: " + path.string());
    auto width = io::get_le<std::uint32_t>(in);
    auto height = io::get_le<std::uint32_t>(in);
    auto bands = io::get_le<std::uint32_t>(in);
    double start = io::get_le<double>(in);
    double step = io::get_le<double>(in);
    auto enc = io::get_le<std::uint8_t>(in);
    if (width < 1 || height < 1 || bands < 1)
        throw CorruptFile("cube header declares empty dimensions");
    if (enc > 1)
        throw CorruptFile("unknown cube encoding byte");
    WavelengthGrid grid{start, step, static_cast<int>(bands)};
    SpectralCube cube(static_cast<int>(height), static_cast<int>(width), grid);
    size_t pixels = cube.pixel_count();
    for (std::uint32_t b = 0; b < bands; ++b)
        for (size_t i = 0; i < pixels; ++i) {
            double v = enc == 1 ? io::get_le<double>(in)
                                : static_cast<double>(io::get_le<float>(in));
            cube.samples[i * bands + b] = v;
        }
    io::expect_eof(in, "cube file");
    return cube;
}

// ---- spectra CSV -----------------------------------------------------------

/// CSV with a `wavelength,s1,s2,...` header and one row per band.
inline void write_spectra_csv(const std::filesystem::path& path, const WavelengthGrid& grid,
                              const std::vector<Vector>& spectra) {
    for (const auto& s : spectra)
        if (s.size() != grid.count)
            throw GridMismatch("spectrum length does not match grid");
    auto out = io::open_out(path);
    out << "wavelength";
    for (size_t j = 0; j < spectra.size(); ++j)
        out << ",s" << (j + 1);
    out << "\n";
    for (int i = 0; i < grid.count; ++i) {
        out << io::format_double(grid.wavelength(i));
        for (const auto& s : spectra)
            out << "," << io::format_double(s[i]);
        out << "\n";
    }
    if (!out)
        throw IoFailure("write failed: " + path.string());
}

struct SpectraCsv {
    WavelengthGrid grid;
    std::vector<Vector> spectra;
};

inline SpectraCsv read_spectra_csv(const std::filesystem::path& path) {
    auto in = io::open_in(path);
    std::string line;
    if (!std::getline(in, line))
        throw CorruptFile("empty spectra csv");
    size_t columns = 1 + static_cast<size_t>(std::count(line.begin(), line.end(), ','));
    if (columns < 2)
        throw CorruptFile("spectra csv needs at least one spectrum column");
    std::vector<double> wavelengths;
    std::vector<std::vector<double>> cols(columns - 1);
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        size_t pos = 0;
        size_t field = 0;
        while (pos <= line.size()) {
            size_t comma = line.find(',', pos);
            std::string_view tok(line.data() + pos,
                                 (comma == std::string::npos ? line.size() : comma) - pos);
            double v = io::parse_double(tok, "spectra csv");
            if (field == 0)
                wavelengths.push_back(v);
            else if (field < columns)
                cols[field - 1].push_back(v);
            else
                throw CorruptFile("spectra csv: ragged row (too many fields)");
            ++field;
            if (comma == std::string::npos)
                break;
            pos = comma + 1;
        }
        if (field != columns)
            throw CorruptFile("spectra csv: ragged row (missing fields)");
    }
    if (wavelengths.size() < 2)
        throw CorruptFile("spectra csv needs at least two bands");
    SpectraCsv result;
    result.grid.start_nm = wavelengths.front();
    result.grid.step_nm = wavelengths[1] - wavelengths[0];
    result.grid.count = static_cast<int>(wavelengths.size());
    for (auto& c : cols) {
        Vector v(c.size());
        for (size_t i = 0; i < c.size(); ++i)
            v[i] = c[i];
        result.spectra.push_back(std::move(v));
    }
    return result;
}

// ---- PPM (P6, maxval 255) --------------------------------------------------

namespace io {

inline int ppm_token(std::istream& in) {
    // skip whitespace and '#' comments, then parse an unsigned int
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n')
                c = in.get();
        } else if (std::isspace(c)) {
            c = in.get();
        } else {
            break;
        }
    }
    if (c == EOF)
        throw CorruptFile("ppm: truncated header");
    int value = 0;
    bool any = false;
    while (c != EOF && c >= '0' && c <= '9') {
        value = value * 10 + (c - '0');
        any = true;
        c = in.get();
    }
    if (!any)
        throw CorruptFile("ppm: malformed header token");
    return value;
}

inline std::uint8_t quantize_unit(double v) {
    v = std::clamp(v, 0.0, 1.0);
    return static_cast<std::uint8_t>(std::floor(v * 255.0 + 0.5)); // round half up
}

} // namespace io

inline RgbImage read_ppm(const std::filesystem::path& path) {
    auto in = io::open_in(path);
    std::array<char, 2> magic{};
    in.read(magic.data(), 2);
    if (in.gcount() != 2 || magic[0] != 'P' || magic[1] != '6')
        throw UnsupportedFormat("only binary P6 ppm is supported: " + path.string());
    int width = io::ppm_token(in);
    int height = io::ppm_token(in);
    int maxval = io::ppm_token(in);
    if (maxval != 255)
        throw UnsupportedFormat("ppm maxval must be 255");
    // single whitespace byte separates header and payload; already consumed
    // by the token parser's trailing get().
    RgbImage img(height, width);
    std::vector<unsigned char> row(static_cast<size_t>(width) * 3);
    size_t idx = 0;
    for (int y = 0; y < height; ++y) {
        in.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(row.size()));
        if (in.gcount() != static_cast<std::streamsize>(row.size()))
            throw CorruptFile("ppm: truncated pixel data");
        for (size_t i = 0; i < row.size(); ++i)
            img.values[idx++] = row[i] / 255.0;
    }
    return img;
}

inline void write_ppm(const std::filesystem::path& path, const RgbImage& img) {
    auto out = io::open_out(path);
    out << "P6\n" << img.width << " " << img.height << "\n255\n";
    std::vector<unsigned char> row(static_cast<size_t>(img.width) * 3);
    size_t idx = 0;
    for (int y = 0; y < img.height; ++y) {
        for (size_t i = 0; i < row.size(); ++i)
            row[i] = io::quantize_unit(img.values[idx++]);
        io::put_bytes(out, row.data(), row.size());
    }
    if (!out)
        throw IoFailure("write failed: " + path.string());
}

/// Grayscale band view as a P6 image (equal channels), round-half-up.
inline void write_gray_ppm(const std::filesystem::path& path, const ScalarField& plane) {
    RgbImage img(plane.height, plane.width);
    for (size_t i = 0; i < plane.size(); ++i) {
        img.values[i * 3] = plane.values[i];
        img.values[i * 3 + 1] = plane.values[i];
        img.values[i * 3 + 2] = plane.values[i];
    }
    write_ppm(path, img);
}

// ---- training set (SPTS) ---------------------------------------------------

inline void write_training_set(const std::filesystem::path& path, const TrainingSet& ts) {
    auto out = io::open_out(path);
    io::put_magic(out, "SPTS");
    io::put_le<std::uint16_t>(out, 1); // version
    io::put_le<double>(out, ts.grid.start_nm);
    io::put_le<double>(out, ts.grid.step_nm);
    io::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(ts.grid.count));
    io::put_matrix(out, ts.reflectances);
    io::put_matrix(out, ts.responses);
    io::put_le<double>(out, ts.provenance.fraction);
    io::put_le<std::uint64_t>(out, ts.provenance.seed);
    io::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(ts.provenance.sources.size()));
    for (const auto& s : ts.provenance.sources) {
        io::put_le<std::uint16_t>(out, static_cast<std::uint16_t>(s.size()));
        io::put_bytes(out, s.data(), s.size());
    }
    if (!out)
        throw IoFailure("write failed: " + path.string());
}

inline TrainingSet read_training_set(const std::filesystem::path& path) {
    auto in = io::open_in(path);
    if (!io::check_magic(in, "SPTS"))
        throw CorruptFile("not a training-set file: " + path.string());
    auto version = io::get_le<std::uint16_t>(in);
    if (version != 1)
        throw UnsupportedFormat("unsupported training-set version");
    TrainingSet ts;
    ts.grid.start_nm = io::get_le<double>(in);
    ts.grid.step_nm = io::get_le<double>(in);
    ts.grid.count = static_cast<int>(io::get_le<std::uint32_t>(in));
    ts.reflectances = io::get_matrix(in);
    ts.responses = io::get_matrix(in);
    ts.provenance.fraction = io::get_le<double>(in);
    ts.provenance.seed = io::get_le<std::uint64_t>(in);
    auto n_sources = io::get_le<std::uint32_t>(in);
    for (std::uint32_t i = 0; i < n_sources; ++i) {
        auto len = io::get_le<std::uint16_t>(in);
        std::string s(len, '\0');
        in.read(s.data(), len);
        if (in.gcount() != len)
            throw CorruptFile("training-set file: truncated source string");
        ts.provenance.sources.push_back(std::move(s));
    }
    io::expect_eof(in, "training-set file");
    if (ts.reflectances.cols() != ts.responses.cols())
        throw CorruptFile("training-set file: reflectance/response sample counts differ");
    if (ts.reflectances.rows() != ts.grid.count)
        throw CorruptFile("training-set file: reflectance rows do not match grid");
    return ts;
}

// ---- estimation model (SPEM) -----------------------------------------------

inline void write_model(const std::filesystem::path& path, const EstimationModel& m) {
    auto out = io::open_out(path);
    io::put_magic(out, "SPEM");
    io::put_le<std::uint16_t>(out, 1); // version
    io::put_le<std::uint8_t>(out, static_cast<std::uint8_t>(m.kind));
    io::put_le<double>(out, m.grid.start_nm);
    io::put_le<double>(out, m.grid.step_nm);
    io::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(m.grid.count));
    io::put_le<std::uint16_t>(out, static_cast<std::uint16_t>(m.combo.terms.size()));
    for (const auto& t : m.combo.terms) {
        io::put_le<std::uint8_t>(out, t.r);
        io::put_le<std::uint8_t>(out, t.g);
        io::put_le<std::uint8_t>(out, t.b);
    }
    switch (m.kind) {
    case EstimatorKind::wiener_prior:
    case EstimatorKind::wiener_data:
    case EstimatorKind::pseudoinverse:
        io::put_matrix(out, m.w);
        break;
    case EstimatorKind::linear:
        io::put_matrix(out, m.basis);
        io::put_matrix(out, m.system);
        break;
    case EstimatorKind::imai_berns:
        io::put_matrix(out, m.basis);
        io::put_matrix(out, m.weights_map);
        break;
    case EstimatorKind::shi_healey:
        io::put_matrix(out, m.basis_free);
        io::put_matrix(out, m.basis_pinned);
        io::put_matrix(out, m.q);
        io::put_matrix(out, m.bank);
        break;
    }
    if (!out)
        throw IoFailure("write failed: " + path.string());
}

inline EstimationModel read_model(const std::filesystem::path& path) {
    auto in = io::open_in(path);
    if (!io::check_magic(in, "SPEM"))
        throw CorruptFile("not a model file: " + path.string());
    auto version = io::get_le<std::uint16_t>(in);
    if (version != 1)
        throw UnsupportedFormat("unsupported model version");
    EstimationModel m;
    auto kind = io::get_le<std::uint8_t>(in);
    if (kind > static_cast<std::uint8_t>(EstimatorKind::shi_healey))
        throw CorruptFile("model file: unknown estimator kind");
    m.kind = static_cast<EstimatorKind>(kind);
    m.grid.start_nm = io::get_le<double>(in);
    m.grid.step_nm = io::get_le<double>(in);
    m.grid.count = static_cast<int>(io::get_le<std::uint32_t>(in));
    auto n_terms = io::get_le<std::uint16_t>(in);
    m.combo.terms.clear();
    m.combo.name = "custom";
    for (std::uint16_t i = 0; i < n_terms; ++i) {
        PolyTerm t;
        t.r = io::get_le<std::uint8_t>(in);
        t.g = io::get_le<std::uint8_t>(in);
        t.b = io::get_le<std::uint8_t>(in);
        m.combo.terms.push_back(t);
    }
    switch (m.kind) {
    case EstimatorKind::wiener_prior:
    case EstimatorKind::wiener_data:
    case EstimatorKind::pseudoinverse:
        m.w = io::get_matrix(in);
        break;
    case EstimatorKind::linear:
        m.basis = io::get_matrix(in);
        m.system = io::get_matrix(in);
        break;
    case EstimatorKind::imai_berns:
        m.basis = io::get_matrix(in);
        m.weights_map = io::get_matrix(in);
        break;
    case EstimatorKind::shi_healey:
        m.basis_free = io::get_matrix(in);
        m.basis_pinned = io::get_matrix(in);
        m.q = io::get_matrix(in);
        m.bank = io::get_matrix(in);
        break;
    }
    io::expect_eof(in, "model file");
    m.finalize();
    return m;
}

// ---- camera spec (text) ------------------------------------------------------

inline void write_camera_spec(const std::filesystem::path& path, const CameraSpec& camera) {
    auto out = io::open_out(path);
    out << "CAMSPEC 1\n";
    out << "grid " << io::format_double(camera.grid.start_nm) << " "
        << io::format_double(camera.grid.step_nm) << " " << camera.grid.count << "\n";
    out << "illuminant";
    for (int j = 0; j < camera.grid.count; ++j)
        out << " " << io::format_double(camera.illuminant[j]);
    out << "\n";
    for (int c = 0; c < camera.channels(); ++c) {
        out << "channel " << c;
        for (int j = 0; j < camera.grid.count; ++j)
            out << " " << io::format_double(camera.sensitivities(c, j));
        out << "\n";
    }
    if (camera.noise.kind == NoiseModel::Kind::additive_gaussian) {
        out << "noise gaussian";
        for (int c = 0; c < camera.noise.sigma.size(); ++c)
            out << " " << io::format_double(camera.noise.sigma[c]);
        out << " seed " << camera.noise.seed << "\n";
    }
    if (!out)
        throw IoFailure("write failed: " + path.string());
}

inline CameraSpec read_camera_spec(const std::filesystem::path& path) {
    auto in = io::open_in(path);
    std::vector<std::string> tokens;
    std::string tok;
    while (in >> tok)
        tokens.push_back(tok);
    size_t pos = 0;
    auto need = [&](const char* what) -> const std::string& {
        if (pos >= tokens.size())
            throw CorruptFile(std::string("camera spec: missing ") + what);
        return tokens[pos++];
    };
    if (need("magic") != "CAMSPEC" || need("version") != "1")
        throw UnsupportedFormat("not a CAMSPEC 1 file: " + path.string());
    if (need("grid keyword") != "grid")
        throw CorruptFile("camera spec: expected 'grid'");
    WavelengthGrid grid;
    grid.start_nm = io::parse_double(need("grid start"), "camera spec");
    grid.step_nm = io::parse_double(need("grid step"), "camera spec");
    grid.count = static_cast<int>(io::parse_double(need("grid count"), "camera spec"));
    if (!grid.valid())
        throw CorruptFile("camera spec: invalid grid");
    if (need("illuminant keyword") != "illuminant")
        throw CorruptFile("camera spec: expected 'illuminant'");
    Vector illuminant(grid.count);
    for (int j = 0; j < grid.count; ++j)
        illuminant[j] = io::parse_double(need("illuminant value"), "camera spec");
    std::vector<Vector> channels;
    NoiseModel noise;
    while (pos < tokens.size()) {
        const std::string& key = tokens[pos];
        if (key == "channel") {
            ++pos;
            int index = static_cast<int>(io::parse_double(need("channel index"), "camera spec"));
            if (index != static_cast<int>(channels.size()))
                throw CorruptFile("camera spec: channels out of order");
            Vector s(grid.count);
            for (int j = 0; j < grid.count; ++j)
                s[j] = io::parse_double(need("sensitivity value"), "camera spec");
            channels.push_back(std::move(s));
        } else if (key == "noise") {
            ++pos;
            if (need("noise kind") != "gaussian")
                throw UnsupportedFormat("camera spec: unknown noise kind");
            Vector sigma(static_cast<Eigen::Index>(channels.size()));
            for (Eigen::Index c = 0; c < sigma.size(); ++c)
                sigma[c] = io::parse_double(need("noise sigma"), "camera spec");
            if (need("seed keyword") != "seed")
                throw CorruptFile("camera spec: expected 'seed'");
            noise.kind = NoiseModel::Kind::additive_gaussian;
            noise.sigma = std::move(sigma);
            noise.seed = std::stoull(need("seed value"));
        } else {
            throw CorruptFile("camera spec: unexpected token '" + key + "'");
        }
    }
    if (channels.empty())
        throw CorruptFile("camera spec: no channels");
    Matrix s(static_cast<Eigen::Index>(channels.size()), grid.count);
    for (size_t c = 0; c < channels.size(); ++c)
        s.row(static_cast<Eigen::Index>(c)) = channels[c].transpose();
    return CameraSpec(grid, std::move(s), std::move(illuminant), std::move(noise));
}

// ---- raw RGB video stream (SPVR) ---------------------------------------------

/// SPVR: magic, u32 width, u32 height, u32 frame count, then 8-bit RGB
/// frames back-to-back (row-major, interleaved).
inline void write_raw_video(const std::filesystem::path& path,
                            const std::vector<RgbImage>& frames) {
    if (frames.empty())
        throw InvalidConfig("raw video writer needs at least one frame");
    auto out = io::open_out(path);
    io::put_magic(out, "SPVR");
    io::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(frames[0].width));
    io::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(frames[0].height));
    io::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(frames.size()));
    for (const auto& f : frames) {
        if (f.width != frames[0].width || f.height != frames[0].height)
            throw ShapeMismatch("raw video frames must share dimensions");
        std::vector<unsigned char> bytes(f.values.size());
        for (size_t i = 0; i < f.values.size(); ++i)
            bytes[i] = io::quantize_unit(f.values[i]);
        io::put_bytes(out, bytes.data(), bytes.size());
    }
    if (!out)
        throw IoFailure("write failed: " + path.string());
}

// ---- spectral video (SPVC) -----------------------------------------------------

/// SPVC: magic, u32 width/height/bands/frame-count, f64 grid start/step,
/// then f32 frames, band-sequential within each frame.
class SpectralVideoWriter {
public:
    SpectralVideoWriter(std::filesystem::path path, int width, int height,
                        const WavelengthGrid& grid)
        : path_(std::move(path)), out_(io::open_out(path_)), width_(width), height_(height),
          grid_(grid) {
        io::put_magic(out_, "SPVC");
        io::put_le<std::uint32_t>(out_, static_cast<std::uint32_t>(width_));
        io::put_le<std::uint32_t>(out_, static_cast<std::uint32_t>(height_));
        io::put_le<std::uint32_t>(out_, static_cast<std::uint32_t>(grid_.count));
        io::put_le<std::uint32_t>(out_, 0); // frame count, patched by close()
        io::put_le<double>(out_, grid_.start_nm);
        io::put_le<double>(out_, grid_.step_nm);
    }

    void append(const SpectralCube& cube) {
        if (cube.width != width_ || cube.height != height_ || !(cube.grid == grid_))
            throw ShapeMismatch("spectral video frame shape changed mid-stream");
        size_t pixels = cube.pixel_count();
        for (int b = 0; b < grid_.count; ++b)
            for (size_t i = 0; i < pixels; ++i)
                io::put_le<float>(out_, static_cast<float>(cube.samples[i * grid_.count + b]));
        ++frames_;
    }

    void close() {
        if (closed_)
            return;
        out_.seekp(4 + 4 + 4 + 4, std::ios::beg);
        io::put_le<std::uint32_t>(out_, static_cast<std::uint32_t>(frames_));
        out_.flush();
        if (!out_)
            throw IoFailure("write failed: " + path_.string());
        out_.close();
        closed_ = true;
    }

    ~SpectralVideoWriter() {
        try {
            close();
        } catch (...) {
        }
    }

    [[nodiscard]] std::uint32_t frames() const { return frames_; }

private:
    std::filesystem::path path_;
    std::ofstream out_;
    int width_;
    int height_;
    WavelengthGrid grid_;
    std::uint32_t frames_ = 0;
    bool closed_ = false;
};

inline std::vector<SpectralCube> read_spectral_video(const std::filesystem::path& path) {
    auto in = io::open_in(path);
    if (!io::check_magic(in, "SPVC"))
        throw CorruptFile("not a spectral video file: " + path.string());
    auto width = io::get_le<std::uint32_t>(in);
    auto height = io::get_le<std::uint32_t>(in);
    auto bands = io::get_le<std::uint32_t>(in);
    auto count = io::get_le<std::uint32_t>(in);
    WavelengthGrid grid;
    grid.start_nm = io::get_le<double>(in);
    grid.step_nm = io::get_le<double>(in);
    grid.count = static_cast<int>(bands);
    std::vector<SpectralCube> frames;
    frames.reserve(count);
    for (std::uint32_t f = 0; f < count; ++f) {
        SpectralCube cube(static_cast<int>(height), static_cast<int>(width), grid);
        size_t pixels = cube.pixel_count();
        for (std::uint32_t b = 0; b < bands; ++b)
            for (size_t i = 0; i < pixels; ++i)
                cube.samples[i * bands + b] = static_cast<double>(io::get_le<float>(in));
        frames.push_back(std::move(cube));
    }
    io::expect_eof(in, "spectral video file");
    return frames;
}

// ---- text report -------------------------------------------------------------

/// Line-oriented `key = value` report.
inline void write_report(const std::filesystem::path& path,
                         const std::vector<std::pair<std::string, std::string>>& entries) {
    auto out = io::open_out(path);
    for (const auto& [key, value] : entries)
        out << key << " = " << value << "\n";
    if (!out)
        throw IoFailure("write failed: " + path.string());
}

} // namespace spectracast
