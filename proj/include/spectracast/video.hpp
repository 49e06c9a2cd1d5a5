// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the SpectraCast Project.

#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <thread>
#include <utility>
#include <vector>

#include "spectracast/estimators.hpp"
#include "spectracast/io.hpp"
#include "spectracast/types.hpp"

namespace spectracast {

/// Scale integer pixel data to [0,1] by the full range of the bit depth.
inline RgbImage normalize_rgb(const std::vector<std::uint16_t>& raw, int height, int width,
                              int bit_depth) {
    if (bit_depth != 8 && bit_depth != 16)
        throw InvalidConfig("bit depth must be 8 or 16");
    if (raw.size() != static_cast<size_t>(height) * width * 3)
        throw ShapeMismatch("raw pixel buffer does not match the declared dimensions");
    const std::uint32_t maxval = (1u << bit_depth) - 1;
    RgbImage img(height, width);
    for (size_t i = 0; i < raw.size(); ++i) {
        if (raw[i] > maxval)
            throw BadPixelValue("pixel value exceeds the declared bit depth");
        img.values[i] = static_cast<double>(raw[i]) / static_cast<double>(maxval);
    }
    return img;
}

/// 1 minus the mean absolute per-channel difference; 1 for identical frames.
inline double frame_similarity(const RgbImage& a, const RgbImage& b) {
    if (a.height != b.height || a.width != b.width)
        throw ShapeMismatch("frames differ in shape");
    std::vector<double> diffs(a.values.size());
    for (size_t i = 0; i < a.values.size(); ++i)
        diffs[i] = std::abs(a.values[i] - b.values[i]);
    return 1.0 - detail::pairwise_mean(diffs);
}

struct SkipPolicy {
    enum class Mode { none, similarity };
    Mode mode = Mode::none;
    double threshold = 1.0; // similarity at or above this reuses the last frame

    static SkipPolicy none() { return {}; }
    static SkipPolicy similarity(double threshold) {
        return SkipPolicy{Mode::similarity, threshold};
    }
};

struct PipelineStats {
    std::uint64_t frames_in = 0;
    std::uint64_t frames_estimated = 0;
    std::uint64_t frames_skipped = 0;
    std::vector<double> per_frame_ms;
    double throughput_fps = 0.0;
};

/// Pull-based frame supplier; next() yields frames in order until empty.
class FrameSource {
public:
    virtual ~FrameSource() = default;
    virtual std::optional<RgbImage> next() = 0;
};

/// Ordered consumer of estimated spectral frames.
class CubeSink {
public:
    virtual ~CubeSink() = default;
    virtual void push(const SpectralCube& frame) = 0;
};

class MemoryFrameSource final : public FrameSource {
public:
    explicit MemoryFrameSource(std::vector<RgbImage> frames) : frames_(std::move(frames)) {}
    std::optional<RgbImage> next() override {
        if (index_ >= frames_.size())
            return std::nullopt;
        return frames_[index_++];
    }

private:
    std::vector<RgbImage> frames_;
    size_t index_ = 0;
};

/// Reads frame_000000.ppm, frame_000001.ppm, ... until the first gap.
class PpmDirectorySource final : public FrameSource {
public:
    explicit PpmDirectorySource(std::filesystem::path dir) : dir_(std::move(dir)) {}

    std::optional<RgbImage> next() override {
        char name[32];
        std::snprintf(name, sizeof name, "frame_%06zu.ppm", index_);
        std::filesystem::path p = dir_ / name;
        if (!std::filesystem::exists(p))
            return std::nullopt;
        ++index_;
        return read_ppm(p);
    }

    static std::filesystem::path frame_path(const std::filesystem::path& dir, size_t index) {
        char name[32];
        std::snprintf(name, sizeof name, "frame_%06zu.ppm", index);
        return dir / name;
    }

private:
    std::filesystem::path dir_;
    size_t index_ = 0;
};

/// Streams frames out of an SPVR raw video file.
class RawVideoSource final : public FrameSource {
public:
    explicit RawVideoSource(const std::filesystem::path& path) : in_(io::open_in(path)) {
        if (!io::check_magic(in_, "SPVR"))
            throw CorruptFile("not a raw video file: " + path.string());
        width_ = io::get_le<std::uint32_t>(in_);
        height_ = io::get_le<std::uint32_t>(in_);
        count_ = io::get_le<std::uint32_t>(in_);
    }

    std::optional<RgbImage> next() override {
        if (index_ >= count_)
            return std::nullopt;
        std::vector<unsigned char> bytes(static_cast<size_t>(width_) * height_ * 3);
        in_.read(reinterpret_cast<char*>(bytes.data()),
                 static_cast<std::streamsize>(bytes.size()));
        if (in_.gcount() != static_cast<std::streamsize>(bytes.size()))
            throw CorruptFile("raw video: truncated frame payload");
        RgbImage img(static_cast<int>(height_), static_cast<int>(width_));
        for (size_t i = 0; i < bytes.size(); ++i)
            img.values[i] = bytes[i] / 255.0;
        ++index_;
        return img;
    }

    [[nodiscard]] std::uint32_t frame_count() const { return count_; }
    [[nodiscard]] std::uint32_t width() const { return width_; }
    [[nodiscard]] std::uint32_t height() const { return height_; }

private:
    std::ifstream in_;
    std::uint32_t width_ = 0;
    std::uint32_t height_ = 0;
    std::uint32_t count_ = 0;
    std::uint32_t index_ = 0;
};

class MemoryCubeSink final : public CubeSink {
public:
    void push(const SpectralCube& frame) override { frames_.push_back(frame); }
    [[nodiscard]] const std::vector<SpectralCube>& frames() const { return frames_; }

private:
    std::vector<SpectralCube> frames_;
};

class SpectralVideoSink final : public CubeSink {
public:
    SpectralVideoSink(std::filesystem::path path, int width, int height,
                      const WavelengthGrid& grid)
        : writer_(std::move(path), width, height, grid) {}
    void push(const SpectralCube& frame) override { writer_.append(frame); }
    void close() { writer_.close(); }

private:
    SpectralVideoWriter writer_;
};

struct VideoOptions {
    int threads = 1;
    std::chrono::milliseconds frame_delay{0}; // optional pacing between frames
};

/// Estimate every frame in order. With a similarity skip policy, a frame that
/// matches the last estimated frame at or above the threshold re-emits the
/// previous spectral frame, so output frame count always equals input count.
/// One frame is held in memory at a time.
inline PipelineStats process_video(FrameSource& source, const EstimationModel& model,
                                   CubeSink& sink, const SkipPolicy& skip = {},
                                   const VideoOptions& options = {}) {
    if (!model.fitted)
        throw ModelNotFitted("video pipeline needs a fitted model");
    PipelineStats stats;
    std::optional<RgbImage> last_estimated_rgb;
    SpectralCube last_spectral;
    auto t_start = std::chrono::steady_clock::now();
    while (true) {
        std::optional<RgbImage> frame = source.next();
        if (!frame)
            break;
        auto t0 = std::chrono::steady_clock::now();
        ++stats.frames_in;
        bool reuse = false;
        if (skip.mode == SkipPolicy::Mode::similarity && last_estimated_rgb)
            reuse = frame_similarity(*frame, *last_estimated_rgb) >= skip.threshold;
        if (reuse) {
            ++stats.frames_skipped;
            sink.push(last_spectral);
        } else {
            try {
                last_spectral = estimate_cube(model, *frame, options.threads);
            } catch (const Error& e) {
                throw Error("frame " + std::to_string(stats.frames_in - 1) + ": " + e.what());
            }
            last_estimated_rgb = std::move(*frame);
            ++stats.frames_estimated;
            sink.push(last_spectral);
        }
        auto t1 = std::chrono::steady_clock::now();
        stats.per_frame_ms.push_back(
            std::chrono::duration<double, std::milli>(t1 - t0).count());
        if (options.frame_delay.count() > 0)
            std::this_thread::sleep_for(options.frame_delay);
    }
    auto t_end = std::chrono::steady_clock::now();
    double seconds = std::chrono::duration<double>(t_end - t_start).count();
    stats.throughput_fps = seconds > 0.0 ? static_cast<double>(stats.frames_in) / seconds : 0.0;
    return stats;
}

} // namespace spectracast
