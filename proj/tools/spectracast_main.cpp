// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the SpectraCast Project.

#include <CLI11.hpp>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spectracast/spectracast.hpp"

namespace sc = spectracast;
namespace fs = std::filesystem;

namespace {

using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

void print_config(const ConfigEcho& config) {
    for (const auto& [k, v] : config)
        std::cout << "config." << k << " = " << v << "\n";
}

ConfigEcho with_prefix(const ConfigEcho& config) {
    ConfigEcho out;
    out.reserve(config.size());
    for (const auto& [k, v] : config)
        out.emplace_back("config." + k, v);
    return out;
}

std::string fmt(double v) { return sc::io::format_double(v); }

sc::CameraSpec load_camera(const std::string& spec, const sc::WavelengthGrid& grid) {
    if (spec == "colorimetric")
        return sc::colorimetric_camera(grid);
    if (spec == "gaussian")
        return sc::gaussian_camera(grid);
    return sc::read_camera_spec(spec);
}

sc::EstimatorKind parse_method(const std::string& name) {
    if (name == "wiener-prior")
        return sc::EstimatorKind::wiener_prior;
    if (name == "wiener-data")
        return sc::EstimatorKind::wiener_data;
    if (name == "pseudoinverse")
        return sc::EstimatorKind::pseudoinverse;
    if (name == "linear")
        return sc::EstimatorKind::linear;
    if (name == "imai-berns")
        return sc::EstimatorKind::imai_berns;
    if (name == "shi-healey")
        return sc::EstimatorKind::shi_healey;
    throw sc::InvalidConfig("unknown method: " + name +
                            " (expected wiener-prior, wiener-data, pseudoinverse, linear, "
                            "imai-berns or shi-healey)");
}

std::vector<double> parse_fractions(const std::string& list) {
    std::vector<double> out;
    size_t pos = 0;
    while (pos < list.size()) {
        size_t comma = list.find(',', pos);
        std::string tok = list.substr(pos, comma == std::string::npos ? std::string::npos
                                                                      : comma - pos);
        if (!tok.empty())
            out.push_back(std::stod(tok));
        if (comma == std::string::npos)
            break;
        pos = comma + 1;
    }
    return out;
}

double condition_number(const sc::Matrix& m) {
    Eigen::BDCSVD<sc::Matrix> svd(m);
    const sc::Vector& sv = svd.singularValues();
    if (sv.size() == 0 || sv[sv.size() - 1] <= 0.0)
        return std::numeric_limits<double>::infinity();
    return sv[0] / sv[sv.size() - 1];
}

// ---- datagen ---------------------------------------------------------------

struct DatagenOpts {
    std::string size = "64x64";
    int materials = 8;
    double smoothness = 40.0;
    double highlight_fraction = 0.0;
    double highlight_gain = 3.0;
    double red_bias = 0.3;
    double jitter = 0.02;
    std::uint64_t seed = 0;
    int frames = 1;
    double drift = 0.0;
    std::string out;
    std::string mask_out;
    std::string video_out;
    std::string rgb_out;
    std::string camera = "colorimetric";
};

void run_datagen(const DatagenOpts& o) {
    sc::SceneRecipe recipe;
    auto x = o.size.find('x');
    if (x == std::string::npos)
        throw sc::InvalidConfig("--size must look like 64x64 (WxH)");
    recipe.width = std::stoi(o.size.substr(0, x));
    recipe.height = std::stoi(o.size.substr(x + 1));
    recipe.n_materials = o.materials;
    recipe.smoothness_sigma_nm = o.smoothness;
    recipe.highlight_fraction = o.highlight_fraction;
    recipe.highlight_gain = o.highlight_gain;
    recipe.red_bias = o.red_bias;
    recipe.jitter = o.jitter;
    recipe.seed = o.seed;
    if (recipe.width < 1 || recipe.height < 1 || recipe.n_materials < 1)
        throw sc::InvalidConfig("scene dimensions and material count must be positive");
    if (recipe.highlight_fraction < 0.0 || recipe.highlight_fraction >= 1.0)
        throw sc::InvalidConfig("--highlight-fraction must be in [0, 1)");
    if (o.frames < 1)
        throw sc::InvalidConfig("--frames must be at least 1");

    ConfigEcho config{{"subcommand", "datagen"},
                      {"size", o.size},
                      {"materials", std::to_string(o.materials)},
                      {"smoothness", fmt(o.smoothness)},
                      {"highlight_fraction", fmt(o.highlight_fraction)},
                      {"highlight_gain", fmt(o.highlight_gain)},
                      {"red_bias", fmt(o.red_bias)},
                      {"jitter", fmt(o.jitter)},
                      {"seed", std::to_string(o.seed)},
                      {"frames", std::to_string(o.frames)},
                      {"drift", fmt(o.drift)}};
    print_config(config);

    sc::SceneSample scene = sc::generate_scene(recipe);
    if (!o.out.empty()) {
        sc::write_cube(o.out, scene.cube, sc::CubeEncoding::f64);
        std::cout << "wrote scene cube: " << o.out << "\n";
    }
    if (!o.mask_out.empty()) {
        // single-band 0/1 cube so the standard reader applies
        sc::SpectralCube mask(recipe.height, recipe.width,
                              sc::WavelengthGrid{recipe.grid.start_nm, recipe.grid.step_nm, 1});
        for (size_t i = 0; i < scene.highlight_mask.size(); ++i)
            mask.samples[i] = scene.highlight_mask.values[i] ? 1.0 : 0.0;
        sc::write_cube(o.mask_out, mask, sc::CubeEncoding::f64);
        std::cout << "wrote highlight mask: " << o.mask_out << "\n";
    }
    std::optional<sc::CameraSpec> camera;
    if (!o.rgb_out.empty())
        camera = load_camera(o.camera, recipe.grid);

    if (o.frames == 1) {
        if (!o.video_out.empty()) {
            sc::SpectralVideoWriter writer(o.video_out, recipe.width, recipe.height, recipe.grid);
            writer.append(scene.cube);
            writer.close();
            std::cout << "wrote spectral video: " << o.video_out << "\n";
        }
        if (camera) {
            sc::RgbImage rgb = sc::render_rgb_cube(scene.cube, *camera);
            sc::write_ppm(o.rgb_out, rgb);
            std::cout << "wrote rgb frame: " << o.rgb_out << "\n";
        }
        return;
    }

    std::vector<sc::SpectralCube> frames = sc::generate_video(recipe, o.frames, o.drift);
    if (!o.video_out.empty()) {
        sc::SpectralVideoWriter writer(o.video_out, recipe.width, recipe.height, recipe.grid);
        for (const auto& f : frames)
            writer.append(f);
        writer.close();
        std::cout << "wrote spectral video (" << frames.size() << " frames): " << o.video_out
                  << "\n";
    }
    if (camera) {
        std::vector<sc::RgbImage> rgb_frames;
        rgb_frames.reserve(frames.size());
        for (const auto& f : frames)
            rgb_frames.push_back(sc::render_rgb_cube(f, *camera));
        sc::write_raw_video(o.rgb_out, rgb_frames);
        std::cout << "wrote rgb video (" << rgb_frames.size() << " frames): " << o.rgb_out
                  << "\n";
    }
}

// ---- sample ------------------------------------------------------------------

struct SampleOpts {
    std::string cube;
    std::string camera = "colorimetric";
    double fraction = 0.05;
    std::uint64_t seed = 0;
    std::string out;
    std::string source_id;
};

void run_sample(const SampleOpts& o) {
    sc::SpectralCube cube = sc::read_cube(o.cube);
    sc::CameraSpec camera = load_camera(o.camera, cube.grid);
    std::string source = o.source_id.empty() ? o.cube : o.source_id;
    sc::TrainingSet ts = sc::sample_training(cube, camera, o.fraction, o.seed, source);
    ConfigEcho config{{"subcommand", "sample"}, {"cube", o.cube},
                      {"camera", o.camera},     {"fraction", fmt(o.fraction)},
                      {"seed", std::to_string(o.seed)}, {"samples", std::to_string(ts.sample_count())}};
    print_config(config);
    sc::write_training_set(o.out, ts);
    std::cout << "wrote training set (" << ts.sample_count() << " samples): " << o.out << "\n";
}

// ---- fit ----------------------------------------------------------------------

struct FitOpts {
    std::string method = "pseudoinverse";
    std::string train;
    std::string camera;
    std::string combo = "linear3";
    std::string combo_terms;
    int basis = 0; // 0 -> per-method default
    std::string out;
};

void run_fit(const FitOpts& o) {
    sc::EstimatorKind kind = parse_method(o.method);
    if (o.train.empty())
        throw sc::InvalidConfig("method '" + o.method +
                                "' requires training Reflectance data: pass --train <file.spts>");
    bool needs_camera = kind == sc::EstimatorKind::wiener_prior ||
                        kind == sc::EstimatorKind::linear ||
                        kind == sc::EstimatorKind::shi_healey;
    if (needs_camera && o.camera.empty())
        throw sc::InvalidConfig(
            "method '" + o.method +
            "' requires prior knowledge of Sensitivities and Illumination: pass --camera "
            "<camspec|colorimetric|gaussian>");

    sc::TrainingSet ts = sc::read_training_set(o.train);
    sc::MethodSpec method;
    method.kind = kind;
    if (!o.combo_terms.empty())
        method.combo = sc::PolyCombo::parse_terms(o.combo_terms);
    else
        method.combo = sc::PolyCombo::preset(o.combo);
    int default_basis = kind == sc::EstimatorKind::shi_healey ? 5 : 3;
    method.basis_count = o.basis > 0 ? o.basis : default_basis;
    if (kind == sc::EstimatorKind::shi_healey &&
        (method.basis_count < 4 || method.basis_count > 8))
        throw sc::InvalidConfig("shi-healey basis count must be in [4, 8]");

    sc::CameraSpec camera;
    if (needs_camera)
        camera = load_camera(o.camera, ts.grid);

    ConfigEcho config{{"subcommand", "fit"},
                      {"method", o.method},
                      {"train", o.train},
                      {"camera", o.camera.empty() ? "(none)" : o.camera},
                      {"combo", method.combo.name},
                      {"combo_terms", method.combo.terms_string()},
                      {"basis", std::to_string(method.basis_count)},
                      {"samples", std::to_string(ts.sample_count())}};
    print_config(config);

    sc::EstimationModel model = sc::fit_model(ts, camera, method);
    sc::write_model(o.out, model);

    std::cout << "k = " << ts.sample_count() << "\n";
    std::cout << "terms = " << model.combo.term_count() << "\n";
    if (kind == sc::EstimatorKind::linear || kind == sc::EstimatorKind::imai_berns ||
        kind == sc::EstimatorKind::shi_healey)
        std::cout << "basis = " << model.basis_count() << "\n";
    if (sc::uses_feature_expansion(kind)) {
        sc::Matrix pe = sc::expand_columns(ts.responses, model.combo);
        std::cout << "condition = " << fmt(condition_number(pe)) << "\n";
    } else if (kind == sc::EstimatorKind::linear) {
        std::cout << "condition = " << fmt(condition_number(model.system)) << "\n";
    }
    std::cout << "training_rmse = " << fmt(sc::training_rmse(model, ts)) << "\n";
    std::cout << "wrote model: " << o.out << "\n";
}

// ---- estimate -------------------------------------------------------------------

struct EstimateOpts {
    std::vector<std::string> models;
    std::string in;
    std::string out;
    int threads = 1;
    bool f32 = false;
    std::string scan_basis;
};

void run_estimate(const EstimateOpts& o) {
    if (o.models.empty())
        throw sc::InvalidConfig("--model is required");
    sc::RgbImage image = sc::read_ppm(o.in);
    ConfigEcho config{{"subcommand", "estimate"},
                      {"in", o.in},
                      {"threads", std::to_string(o.threads)},
                      {"encoding", o.f32 ? "f32" : "f64"}};
    for (const auto& m : o.models)
        config.emplace_back("model", m);
    if (!o.scan_basis.empty())
        config.emplace_back("scan_basis", o.scan_basis);
    print_config(config);

    std::vector<sc::EstimationModel> models;
    models.reserve(o.models.size());
    for (const auto& path : o.models)
        models.push_back(sc::read_model(path));

    if (!o.scan_basis.empty()) {
        auto colon = o.scan_basis.find(':');
        if (colon == std::string::npos)
            throw sc::InvalidConfig("--scan-basis expects lo:hi, e.g. 4:8");
        int lo = std::stoi(o.scan_basis.substr(0, colon));
        int hi = std::stoi(o.scan_basis.substr(colon + 1));
        if (lo < 4 || hi > 8 || lo > hi)
            throw sc::InvalidConfig("--scan-basis range must lie within [4, 8]");
        if (models.size() != 1 || models[0].kind != sc::EstimatorKind::shi_healey)
            throw sc::InvalidConfig("--scan-basis needs exactly one shi-healey model");
        const sc::EstimationModel& base = models[0];
        std::vector<sc::EstimationModel> scan;
        for (int d = lo; d <= hi; ++d)
            scan.push_back(sc::shi_healey_with_basis(base.bank, base.q, base.grid, d));
        models = std::move(scan);
    }

    sc::SpectralCube cube;
    if (models.size() == 1) {
        cube = sc::estimate_cube(models[0], image, o.threads);
    } else {
        for (const auto& m : models)
            if (m.kind != sc::EstimatorKind::shi_healey)
                throw sc::InvalidConfig("multiple models are only supported for shi-healey scans");
        cube = sc::estimate_cube_scan(models, image, o.threads);
    }
    sc::write_cube(o.out, cube, o.f32 ? sc::CubeEncoding::f32 : sc::CubeEncoding::f64);
    std::cout << "wrote cube: " << o.out << "\n";
}

// ---- video ---------------------------------------------------------------------

struct VideoOpts {
    std::string model;
    std::string in;
    std::string out;
    std::string stats_out;
    double skip_threshold = -1.0;
    int threads = 1;
    int delay_ms = 0;
};

void run_video(const VideoOpts& o) {
    sc::EstimationModel model = sc::read_model(o.model);
    std::unique_ptr<sc::FrameSource> source;
    int width = 0;
    int height = 0;
    if (fs::is_directory(o.in)) {
        sc::RgbImage first = sc::read_ppm(sc::PpmDirectorySource::frame_path(o.in, 0));
        width = first.width;
        height = first.height;
        source = std::make_unique<sc::PpmDirectorySource>(o.in);
    } else {
        auto raw = std::make_unique<sc::RawVideoSource>(o.in);
        width = static_cast<int>(raw->width());
        height = static_cast<int>(raw->height());
        source = std::move(raw);
    }

    sc::SkipPolicy skip;
    if (o.skip_threshold >= 0.0)
        skip = sc::SkipPolicy::similarity(o.skip_threshold);
    sc::VideoOptions options;
    options.threads = o.threads;
    options.frame_delay = std::chrono::milliseconds(o.delay_ms);

    ConfigEcho config{{"subcommand", "video"},
                      {"model", o.model},
                      {"in", o.in},
                      {"out", o.out},
                      {"skip_mode", skip.mode == sc::SkipPolicy::Mode::none ? "none" : "similarity"},
                      {"skip_threshold", fmt(skip.threshold)},
                      {"threads", std::to_string(o.threads)},
                      {"delay_ms", std::to_string(o.delay_ms)}};
    print_config(config);

    sc::SpectralVideoSink sink(o.out, width, height, model.grid);
    sc::PipelineStats stats = sc::process_video(*source, model, sink, skip, options);
    sink.close();

    double mean_ms = sc::detail::pairwise_mean(stats.per_frame_ms);
    std::cout << "frames_in = " << stats.frames_in << "\n";
    std::cout << "frames_estimated = " << stats.frames_estimated << "\n";
    std::cout << "frames_skipped = " << stats.frames_skipped << "\n";
    std::cout << "mean_frame_ms = " << fmt(mean_ms) << "\n";
    std::cout << "throughput_fps = " << fmt(stats.throughput_fps) << "\n";
    if (!o.stats_out.empty()) {
        ConfigEcho report = with_prefix(config);
        report.emplace_back("frames_in", std::to_string(stats.frames_in));
        report.emplace_back("frames_estimated", std::to_string(stats.frames_estimated));
        report.emplace_back("frames_skipped", std::to_string(stats.frames_skipped));
        report.emplace_back("mean_frame_ms", fmt(mean_ms));
        report.emplace_back("throughput_fps", fmt(stats.throughput_fps));
        sc::write_report(o.stats_out, report);
        std::cout << "wrote stats: " << o.stats_out << "\n";
    }
    std::cout << "wrote spectral video: " << o.out << "\n";
}

// ---- evaluate --------------------------------------------------------------------

struct EvaluateOpts {
    std::string truth;
    std::string estimated;
    std::string report;
    std::string rmse_map;
    std::string mask;
};

bool is_spvc(const std::string& path) {
    auto in = sc::io::open_in(path);
    return sc::io::check_magic(in, "SPVC");
}

void run_evaluate(const EvaluateOpts& o) {
    ConfigEcho config{{"subcommand", "evaluate"},
                      {"truth", o.truth},
                      {"estimated", o.estimated},
                      {"mask", o.mask.empty() ? "(none)" : o.mask}};
    print_config(config);
    sc::ColorimetryTables tables;
    ConfigEcho report = with_prefix(config);

    if (is_spvc(o.truth) || is_spvc(o.estimated)) {
        std::vector<sc::SpectralCube> truth = sc::read_spectral_video(o.truth);
        std::vector<sc::SpectralCube> estimated = sc::read_spectral_video(o.estimated);
        if (truth.size() != estimated.size())
            throw sc::ShapeMismatch("videos differ in frame count");
        if (truth.empty())
            throw sc::ShapeMismatch("empty videos cannot be evaluated");
        tables = sc::ColorimetryTables::load(truth[0].grid);
        std::vector<double> rmse_means(truth.size());
        std::vector<double> gfc_means(truth.size());
        std::vector<double> de_means(truth.size());
        for (size_t t = 0; t < truth.size(); ++t) {
            sc::MetricReport r = sc::evaluate_cube(truth[t], estimated[t], tables);
            rmse_means[t] = r.mean_rmse;
            gfc_means[t] = r.mean_gfc;
            de_means[t] = r.mean_delta_e;
            report.emplace_back("frame_" + std::to_string(t) + ".mean_rmse", fmt(r.mean_rmse));
        }
        double mean_rmse = sc::detail::pairwise_mean(rmse_means);
        double mean_gfc = sc::detail::pairwise_mean(gfc_means);
        double mean_de = sc::detail::pairwise_mean(de_means);
        report.emplace_back("frames", std::to_string(truth.size()));
        report.emplace_back("mean_rmse", fmt(mean_rmse));
        report.emplace_back("mean_gfc", fmt(mean_gfc));
        report.emplace_back("mean_delta_e", fmt(mean_de));
        std::cout << "mean_rmse = " << fmt(mean_rmse) << "\n";
        std::cout << "mean_gfc = " << fmt(mean_gfc) << "\n";
        std::cout << "mean_delta_e = " << fmt(mean_de) << "\n";
        if (!o.report.empty()) {
            sc::write_report(o.report, report);
            std::cout << "wrote report: " << o.report << "\n";
        }
        return;
    }

    sc::SpectralCube truth = sc::read_cube(o.truth);
    sc::SpectralCube estimated = sc::read_cube(o.estimated);
    tables = sc::ColorimetryTables::load(truth.grid);
    sc::MetricReport r = sc::evaluate_cube(truth, estimated, tables);
    report.emplace_back("mean_rmse", fmt(r.mean_rmse));
    report.emplace_back("mean_gfc", fmt(r.mean_gfc));
    report.emplace_back("mean_delta_e", fmt(r.mean_delta_e));
    report.emplace_back("highlight_fraction", fmt(r.highlight_fraction));
    std::cout << "mean_rmse = " << fmt(r.mean_rmse) << "\n";
    std::cout << "mean_gfc = " << fmt(r.mean_gfc) << "\n";
    std::cout << "mean_delta_e = " << fmt(r.mean_delta_e) << "\n";
    std::cout << "highlight_fraction = " << fmt(r.highlight_fraction) << "\n";

    if (!o.mask.empty()) {
        sc::SpectralCube mask_cube = sc::read_cube(o.mask);
        if (mask_cube.height != truth.height || mask_cube.width != truth.width)
            throw sc::ShapeMismatch("mask dimensions differ from the cubes");
        sc::PixelMask mask(mask_cube.height, mask_cube.width);
        for (size_t i = 0; i < mask.size(); ++i)
            mask.values[i] = mask_cube.samples[i * mask_cube.bands()] != 0.0 ? 1 : 0;
        sc::SplitMeans split = sc::split_metrics(r, mask);
        report.emplace_back("masked_mean_rmse", fmt(split.masked));
        report.emplace_back("unmasked_mean_rmse", fmt(split.unmasked));
        std::cout << "masked_mean_rmse = " << fmt(split.masked) << "\n";
        std::cout << "unmasked_mean_rmse = " << fmt(split.unmasked) << "\n";
    }
    if (!o.rmse_map.empty()) {
        sc::SpectralCube map_cube(truth.height, truth.width,
                                  sc::WavelengthGrid{truth.grid.start_nm, truth.grid.step_nm, 1});
        map_cube.samples = r.per_pixel_rmse.values;
        sc::write_cube(o.rmse_map, map_cube, sc::CubeEncoding::f64);
        std::cout << "wrote rmse map: " << o.rmse_map << "\n";
    }
    if (!o.report.empty()) {
        sc::write_report(o.report, report);
        std::cout << "wrote report: " << o.report << "\n";
    }
}

// ---- search-train -------------------------------------------------------------------

struct SearchOpts {
    std::vector<std::string> images;
    std::string camera = "colorimetric";
    std::string method = "pseudoinverse";
    std::string combo = "linear3";
    std::string combo_terms;
    int basis = 0;
    std::string fractions = "0.01,0.05,0.1,0.2,0.5";
    std::uint64_t seed = 0;
    std::string out;
    std::string report;
    int threads = 1;
};

void run_search(const SearchOpts& o) {
    if (o.images.empty())
        throw sc::InvalidConfig("--images requires at least one cube");
    std::vector<sc::SpectralCube> images;
    images.reserve(o.images.size());
    for (const auto& path : o.images)
        images.push_back(sc::read_cube(path));
    sc::CameraSpec camera = load_camera(o.camera, images[0].grid);
    sc::MethodSpec method;
    method.kind = parse_method(o.method);
    if (!o.combo_terms.empty())
        method.combo = sc::PolyCombo::parse_terms(o.combo_terms);
    else
        method.combo = sc::PolyCombo::preset(o.combo);
    method.basis_count = o.basis > 0
                             ? o.basis
                             : (method.kind == sc::EstimatorKind::shi_healey ? 5 : 3);
    std::vector<double> fractions = parse_fractions(o.fractions);

    ConfigEcho config{{"subcommand", "search-train"},
                      {"camera", o.camera},
                      {"method", o.method},
                      {"combo", method.combo.name},
                      {"basis", std::to_string(method.basis_count)},
                      {"fractions", o.fractions},
                      {"seed", std::to_string(o.seed)},
                      {"threads", std::to_string(o.threads)}};
    for (const auto& p : o.images)
        config.emplace_back("image", p);
    print_config(config);

    sc::SearchResult result =
        sc::search_representative(images, camera, fractions, o.seed, method, o.threads);

    ConfigEcho report = with_prefix(config);
    std::cout << "candidate sets (step 2 winners, then unions):\n";
    auto emit = [&](const sc::CandidateSet& c, const char* stage) {
        std::string line = std::string(stage) + " " + c.id + " k=" +
                           std::to_string(c.training.sample_count()) +
                           " score=" + fmt(c.score.value_or(-1.0));
        std::cout << "  " << line << (c.id == result.winner.id ? "  <- winner" : "") << "\n";
        report.emplace_back(std::string("candidate.") + c.id,
                            "k=" + std::to_string(c.training.sample_count()) +
                                " score=" + fmt(c.score.value_or(-1.0)) + " stage=" + stage);
    };
    for (const auto& c : result.step1_winners)
        emit(c, "step2");
    for (const auto& c : result.step3_candidates)
        emit(c, "step3");
    report.emplace_back("winner", result.winner.id);
    report.emplace_back("winner_score", fmt(*result.winner.score));
    report.emplace_back("winner_k", std::to_string(result.winner.training.sample_count()));
    std::cout << "winner = " << result.winner.id << " (score " << fmt(*result.winner.score)
              << ")\n";

    if (!o.out.empty()) {
        sc::write_training_set(o.out, result.winner.training);
        std::cout << "wrote winning training set: " << o.out << "\n";
    }
    if (!o.report.empty()) {
        sc::write_report(o.report, report);
        std::cout << "wrote report: " << o.report << "\n";
    }
}

// ---- band-view -----------------------------------------------------------------------

struct BandViewOpts {
    std::string in;
    int band = -1;
    double wavelength = -1.0;
    std::string out;
};

void run_band_view(const BandViewOpts& o) {
    sc::SpectralCube cube = sc::read_cube(o.in);
    int band = o.band;
    if (band < 0 && o.wavelength >= 0.0)
        band = cube.grid.nearest_index(o.wavelength);
    if (band < 0 || band >= cube.bands())
        throw sc::InvalidConfig("pass --band <index> or --wavelength <nm> within the cube range");
    ConfigEcho config{{"subcommand", "band-view"},
                      {"in", o.in},
                      {"band", std::to_string(band)},
                      {"wavelength_nm", fmt(cube.grid.wavelength(band))}};
    print_config(config);
    sc::ScalarField plane(cube.height, cube.width);
    plane.values = cube.band_plane(band);
    sc::write_gray_ppm(o.out, plane);
    std::cout << "wrote band view: " << o.out << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectracast: spectral image and video estimation from RGB"};
    app.require_subcommand(1);

    DatagenOpts dg;
    auto* datagen = app.add_subcommand("datagen", "generate a synthetic spectral scene or video");
    datagen->add_option("--size", dg.size, "scene size WxH")->capture_default_str();
    datagen->add_option("--materials", dg.materials)->capture_default_str();
    datagen->add_option("--smoothness", dg.smoothness, "material bump width, nm")
        ->capture_default_str();
    datagen->add_option("--highlight-fraction", dg.highlight_fraction)->capture_default_str();
    datagen->add_option("--highlight-gain", dg.highlight_gain)->capture_default_str();
    datagen->add_option("--red-bias", dg.red_bias)->capture_default_str();
    datagen->add_option("--jitter", dg.jitter)->capture_default_str();
    datagen->add_option("--seed", dg.seed)->capture_default_str();
    datagen->add_option("--frames", dg.frames)->capture_default_str();
    datagen->add_option("--drift", dg.drift, "pixels per frame")->capture_default_str();
    datagen->add_option("--out", dg.out, "base scene cube (SPC1)");
    datagen->add_option("--mask-out", dg.mask_out, "ground-truth highlight mask cube");
    datagen->add_option("--video-out", dg.video_out, "truth spectral video (SPVC)");
    datagen->add_option("--rgb-out", dg.rgb_out, "rendered RGB (PPM for 1 frame, SPVR otherwise)");
    datagen->add_option("--camera", dg.camera, "camspec path, 'colorimetric' or 'gaussian'")
        ->capture_default_str();
    datagen->callback([&]() { run_datagen(dg); });

    SampleOpts sm;
    auto* sample = app.add_subcommand("sample", "sample a training set from a spectral cube");
    sample->add_option("--cube", sm.cube)->required();
    sample->add_option("--camera", sm.camera)->capture_default_str();
    sample->add_option("--fraction", sm.fraction)->capture_default_str();
    sample->add_option("--seed", sm.seed)->capture_default_str();
    sample->add_option("--out", sm.out)->required();
    sample->add_option("--source-id", sm.source_id, "provenance label (default: cube path)");
    sample->callback([&]() { run_sample(sm); });

    FitOpts ft;
    auto* fit = app.add_subcommand("fit", "fit an estimation model from a training set");
    fit->add_option("--method", ft.method,
                    "wiener-prior|wiener-data|pseudoinverse|linear|imai-berns|shi-healey")
        ->capture_default_str();
    fit->add_option("--train", ft.train, "training set (SPTS)");
    fit->add_option("--camera", ft.camera, "needed by wiener-prior, linear, shi-healey");
    fit->add_option("--combo", ft.combo, "combo preset name")->capture_default_str();
    fit->add_option("--combo-terms", ft.combo_terms, "explicit terms, e.g. R,G,B,R2,G2,B2");
    fit->add_option("--basis", ft.basis, "basis count (linear/imai-berns/shi-healey)");
    fit->add_option("--out", ft.out)->required();
    fit->callback([&]() { run_fit(ft); });

    EstimateOpts es;
    auto* estimate = app.add_subcommand("estimate", "estimate a spectral cube from an RGB image");
    estimate->add_option("--model", es.models, "model file (repeat for shi-healey scans)")
        ->required();
    estimate->add_option("--in", es.in, "input PPM")->required();
    estimate->add_option("--out", es.out, "output cube (SPC1)")->required();
    estimate->add_option("--threads", es.threads)->envname("SPECTRACAST_THREADS");
    estimate->add_flag("--f32", es.f32, "write 32-bit samples");
    estimate->add_option("--scan-basis", es.scan_basis,
                         "shi-healey basis scan range lo:hi within [4,8]");
    estimate->callback([&]() { run_estimate(es); });

    VideoOpts vd;
    auto* video = app.add_subcommand("video", "estimate a spectral video from RGB frames");
    video->add_option("--model", vd.model)->required();
    video->add_option("--in", vd.in, "PPM frame directory or SPVR file")->required();
    video->add_option("--out", vd.out, "output spectral video (SPVC)")->required();
    video->add_option("--skip-threshold", vd.skip_threshold,
                      "similarity at or above this reuses the previous frame");
    video->add_option("--stats-out", vd.stats_out);
    video->add_option("--threads", vd.threads)->envname("SPECTRACAST_THREADS");
    video->add_option("--delay-ms", vd.delay_ms, "fixed inter-frame pacing delay");
    video->callback([&]() { run_video(vd); });

    EvaluateOpts ev;
    auto* evaluate = app.add_subcommand("evaluate", "compare an estimate against ground truth");
    evaluate->add_option("--truth", ev.truth)->required();
    evaluate->add_option("--estimated", ev.estimated)->required();
    evaluate->add_option("--report", ev.report);
    evaluate->add_option("--rmse-map", ev.rmse_map, "write the per-pixel RMSE map as a cube");
    evaluate->add_option("--mask", ev.mask, "0/1 mask cube for split means");
    evaluate->callback([&]() { run_evaluate(ev); });

    SearchOpts sr;
    auto* search = app.add_subcommand("search-train", "three-step representative set search");
    search->add_option("--images", sr.images, "spectral cubes")->required();
    search->add_option("--camera", sr.camera)->capture_default_str();
    search->add_option("--method", sr.method)->capture_default_str();
    search->add_option("--combo", sr.combo)->capture_default_str();
    search->add_option("--combo-terms", sr.combo_terms);
    search->add_option("--basis", sr.basis);
    search->add_option("--fractions", sr.fractions)->capture_default_str();
    search->add_option("--seed", sr.seed)->capture_default_str();
    search->add_option("--out", sr.out, "winning training set (SPTS)");
    search->add_option("--report", sr.report);
    search->add_option("--threads", sr.threads)->envname("SPECTRACAST_THREADS");
    search->callback([&]() { run_search(sr); });

    BandViewOpts bv;
    auto* band_view = app.add_subcommand("band-view", "export one band as a grayscale image");
    band_view->add_option("--in", bv.in)->required();
    band_view->add_option("--band", bv.band, "band index");
    band_view->add_option("--wavelength", bv.wavelength, "band wavelength, nm");
    band_view->add_option("--out", bv.out)->required();
    band_view->callback([&]() { run_band_view(bv); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const sc::InvalidConfig& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
