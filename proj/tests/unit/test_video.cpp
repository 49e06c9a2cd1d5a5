// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the SpectraCast Project.

#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "spectracast/datagen.hpp"
#include "spectracast/training.hpp"
#include "spectracast/video.hpp"

using namespace spectracast;

namespace {

EstimationModel quick_model(const CameraSpec& cam) {
    Matrix r = oracle::random_matrix(cam.grid.count, 100, 61, 0.0, 1.0);
    TrainingSet ts;
    ts.grid = cam.grid;
    ts.reflectances = r;
    ts.responses = system_matrix(cam) * r;
    return fit_pseudoinverse(ts, PolyCombo::preset("sq6"));
}

std::vector<RgbImage> random_frames(int n, int h, int w, std::uint64_t seed) {
    CounterRng rng(seed, 0);
    std::vector<RgbImage> frames;
    for (int t = 0; t < n; ++t) {
        RgbImage img(h, w);
        for (auto& v : img.values)
            v = rng.uniform();
        frames.push_back(std::move(img));
    }
    return frames;
}

} // namespace

TEST_CASE("normalize_rgb scales by the full bit-depth range") {
    std::vector<std::uint16_t> raw = {255, 0, 51, 128, 255, 0};
    RgbImage img = normalize_rgb(raw, 1, 2, 8);
    CHECK(img.values[0] == 1.0);
    CHECK(img.values[1] == 0.0);
    CHECK(img.values[2] == Catch::Approx(0.2).margin(1e-12));

    std::vector<std::uint16_t> raw16 = {65535, 0, 32768, 0, 0, 0};
    RgbImage img16 = normalize_rgb(raw16, 1, 2, 16);
    CHECK(img16.values[0] == 1.0);

    std::vector<std::uint16_t> bad = {300, 0, 0};
    CHECK_THROWS_AS(normalize_rgb(bad, 1, 1, 8), BadPixelValue);
    CHECK_THROWS_AS(normalize_rgb(raw, 1, 2, 12), InvalidConfig);
}

TEST_CASE("frame_similarity: identical, opposite, offset frames") {
    RgbImage a(4, 4);
    for (auto& v : a.values)
        v = 0.25;
    CHECK(frame_similarity(a, a) == 1.0);

    RgbImage black(4, 4);
    RgbImage white(4, 4);
    for (auto& v : white.values)
        v = 1.0;
    CHECK(frame_similarity(black, white) == 0.0);

    RgbImage shifted = a;
    for (auto& v : shifted.values)
        v += 0.1;
    CHECK(frame_similarity(a, shifted) == Catch::Approx(0.9).margin(1e-12));

    RgbImage other(4, 5);
    CHECK_THROWS_AS(frame_similarity(a, other), ShapeMismatch);
}

TEST_CASE("process_video without skipping estimates every frame") {
    CameraSpec cam = colorimetric_camera();
    EstimationModel model = quick_model(cam);
    auto frames = random_frames(10, 6, 6, 3);
    MemoryFrameSource source(frames);
    MemoryCubeSink sink;
    PipelineStats stats = process_video(source, model, sink);
    CHECK(stats.frames_in == 10);
    CHECK(stats.frames_estimated == 10);
    CHECK(stats.frames_skipped == 0);
    CHECK(stats.frames_in == stats.frames_estimated + stats.frames_skipped);
    CHECK(sink.frames().size() == 10);
    CHECK(stats.per_frame_ms.size() == 10);
    CHECK(stats.throughput_fps > 0.0);

    // each output frame equals a standalone estimate of its input
    for (int t = 0; t < 10; ++t) {
        SpectralCube direct = estimate_cube(model, frames[t]);
        CHECK(sink.frames()[t].samples == direct.samples);
    }
}

TEST_CASE("identical frames are skipped above the similarity threshold") {
    CameraSpec cam = colorimetric_camera();
    EstimationModel model = quick_model(cam);
    RgbImage frame = random_frames(1, 5, 5, 4)[0];
    std::vector<RgbImage> frames(8, frame);
    MemoryFrameSource source(frames);
    MemoryCubeSink sink;
    PipelineStats stats = process_video(source, model, sink, SkipPolicy::similarity(0.99));
    CHECK(stats.frames_in == 8);
    CHECK(stats.frames_estimated == 1);
    CHECK(stats.frames_skipped == 7);
    CHECK(sink.frames().size() == 8);
    for (const auto& f : sink.frames())
        CHECK(f.samples == sink.frames()[0].samples);
}

TEST_CASE("threshold 1.0 skips only bit-identical frames") {
    CameraSpec cam = colorimetric_camera();
    EstimationModel model = quick_model(cam);
    RgbImage base = random_frames(1, 4, 4, 5)[0];
    RgbImage nearly = base;
    nearly.values[7] += 1e-9;
    std::vector<RgbImage> frames{base, base, nearly, base};
    MemoryFrameSource source(frames);
    MemoryCubeSink sink;
    PipelineStats stats = process_video(source, model, sink, SkipPolicy::similarity(1.0));
    CHECK(stats.frames_estimated == 3); // base, nearly, base(after nearly)
    CHECK(stats.frames_skipped == 1);   // the second bit-identical base
}

TEST_CASE("skip compares against the last estimated frame") {
    CameraSpec cam = colorimetric_camera();
    EstimationModel model = quick_model(cam);
    RgbImage a = random_frames(1, 4, 4, 6)[0];
    for (auto& v : a.values)
        v = 0.1 + 0.8 * v; // keep headroom so the drift below never clamps
    RgbImage b = a;
    for (auto& v : b.values)
        v += 0.003;
    RgbImage c = b;
    for (auto& v : c.values)
        v += 0.003;
    // threshold between one and two drift steps: each step keeps similarity
    // ~0.997 to the previous frame, but c vs a is ~0.994
    std::vector<RgbImage> frames{a, b, c};
    MemoryFrameSource source(frames);
    MemoryCubeSink sink;
    PipelineStats stats = process_video(source, model, sink, SkipPolicy::similarity(0.995));
    // b skips (vs a: 0.997 >= 0.995); c estimates because it is compared to
    // a (the last ESTIMATED frame), not b
    CHECK(stats.frames_estimated == 2);
    CHECK(stats.frames_skipped == 1);
}

TEST_CASE("pipeline output is independent of the worker count") {
    CameraSpec cam = colorimetric_camera();
    EstimationModel model = quick_model(cam);
    auto frames = random_frames(6, 9, 7, 8);
    MemoryFrameSource s1(frames);
    MemoryCubeSink k1;
    VideoOptions opt1;
    opt1.threads = 1;
    process_video(s1, model, k1, {}, opt1);
    MemoryFrameSource s4(frames);
    MemoryCubeSink k4;
    VideoOptions opt4;
    opt4.threads = 4;
    process_video(s4, model, k4, {}, opt4);
    REQUIRE(k1.frames().size() == k4.frames().size());
    for (size_t t = 0; t < k1.frames().size(); ++t)
        CHECK(k1.frames()[t].samples == k4.frames()[t].samples);
}

TEST_CASE("ppm directory source reads frames in order until the first gap") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "spectracast_ppm_src_test";
    fs::create_directories(dir);
    auto frames = random_frames(3, 4, 4, 9);
    for (size_t t = 0; t < frames.size(); ++t)
        write_ppm(PpmDirectorySource::frame_path(dir, t), frames[t]);

    PpmDirectorySource source(dir);
    int count = 0;
    while (auto f = source.next()) {
        CHECK(f->width == 4);
        ++count;
    }
    CHECK(count == 3);
    fs::remove_all(dir);
}
