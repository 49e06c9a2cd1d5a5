// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the SpectraCast Project.

#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spectracast/camera.hpp"
#include "spectracast/estimators.hpp"
#include "spectracast/metrics.hpp"
#include "spectracast/rng.hpp"
#include "spectracast/types.hpp"

namespace spectracast {

/// Which estimator to fit and with what parameters, for search scoring.
struct MethodSpec {
    EstimatorKind kind = EstimatorKind::pseudoinverse;
    PolyCombo combo;    // regression kinds
    int basis_count = 3; // linear / imai-berns / shi-healey (shi needs > channels)
};

/// Fit any estimator kind from a training set and camera.
inline EstimationModel fit_model(const TrainingSet& ts, const CameraSpec& camera,
                                 const MethodSpec& method) {
    switch (method.kind) {
    case EstimatorKind::wiener_prior:
        return fit_wiener_prior(ts.reflectances, camera, camera.noise.autocorrelation());
    case EstimatorKind::wiener_data:
        return fit_wiener_data(ts, method.combo);
    case EstimatorKind::pseudoinverse:
        return fit_pseudoinverse(ts, method.combo);
    case EstimatorKind::linear:
        return fit_linear(ts.reflectances, camera, method.basis_count);
    case EstimatorKind::imai_berns:
        return fit_imai_berns(ts, method.basis_count, method.combo);
    case EstimatorKind::shi_healey:
        return fit_shi_healey(ts.reflectances, camera, method.basis_count);
    }
    throw InvalidConfig("unknown estimator kind");
}

/// Pick floor(fraction * H * W) distinct random pixels of a cube; pairs each
/// reflectance with its noise-free device response. Deterministic in seed.
inline TrainingSet sample_training(const SpectralCube& cube, const CameraSpec& camera,
                                   double fraction, std::uint64_t seed,
                                   const std::string& source_id = "") {
    if (!(cube.grid == camera.grid))
        throw GridMismatch("cube grid does not match camera grid");
    auto total = static_cast<std::uint64_t>(cube.pixel_count());
    auto take = static_cast<std::uint64_t>(fraction * static_cast<double>(total));
    if (take < 1)
        throw EmptySample("fraction selects no pixels");
    if (take > total)
        take = total;
    CounterRng rng(seed, 0x53414d50ull); // sampling stream
    auto picks = sample_without_replacement(total, take, rng);

    Matrix q = system_matrix(camera);
    TrainingSet ts;
    ts.grid = cube.grid;
    ts.reflectances.resize(cube.grid.count, static_cast<Eigen::Index>(take));
    ts.responses.resize(camera.channels(), static_cast<Eigen::Index>(take));
    ts.origins.reserve(take);
    for (std::uint64_t j = 0; j < take; ++j) {
        Eigen::Map<const Vector> r(cube.pixel_data(picks[j]), cube.grid.count);
        ts.reflectances.col(static_cast<Eigen::Index>(j)) = r;
        ts.responses.col(static_cast<Eigen::Index>(j)).noalias() = q * r;
        ts.origins.push_back(SampleOrigin{0, picks[j]});
    }
    ts.provenance.sources = {source_id};
    ts.provenance.fraction = fraction;
    ts.provenance.seed = seed;
    return ts;
}

/// A candidate training set with its average-RMSE score.
struct CandidateSet {
    std::string id;
    TrainingSet training;
    std::optional<double> score;
};

/// Fit once on the candidate, then estimate every image from its own
/// rendered responses and return the mean of per-image mean RMSEs.
inline double score_set(const CandidateSet& candidate, const std::vector<SpectralCube>& images,
                        const CameraSpec& camera, const MethodSpec& method, int threads = 1) {
    if (candidate.training.sample_count() < 1)
        throw EmptyTrainingSet("cannot score an empty training set");
    EstimationModel model = fit_model(candidate.training, camera, method);
    std::vector<double> per_image(images.size());
    for (size_t i = 0; i < images.size(); ++i) {
        RgbImage rendered = render_rgb_cube(images[i], camera);
        SpectralCube estimated = estimate_cube(model, rendered, threads);
        per_image[i] = mean_cube_rmse(images[i], estimated);
    }
    return detail::pairwise_mean(per_image);
}

/// Union of training sets with per-sample de-duplication across shared
/// sources. Provenance sources concatenate; sample order follows member
/// order, first occurrence wins.
inline TrainingSet merge_training(const std::vector<const TrainingSet*>& members) {
    if (members.empty())
        throw EmptyTrainingSet("cannot merge zero training sets");
    const WavelengthGrid grid = members[0]->grid;
    std::vector<std::string> sources;
    std::map<std::pair<std::string, std::uint64_t>, bool> seen;
    std::vector<std::pair<const TrainingSet*, Eigen::Index>> kept;
    std::vector<SampleOrigin> origins;
    for (const TrainingSet* ts : members) {
        if (!(ts->grid == grid))
            throw GridMismatch("training sets on different grids cannot merge");
        std::uint32_t source_base = static_cast<std::uint32_t>(sources.size());
        for (const auto& s : ts->provenance.sources)
            sources.push_back(s);
        bool has_origins = ts->origins.size() == static_cast<size_t>(ts->sample_count());
        for (Eigen::Index j = 0; j < ts->sample_count(); ++j) {
            if (has_origins) {
                const SampleOrigin& o = ts->origins[static_cast<size_t>(j)];
                std::string source_name = o.source < ts->provenance.sources.size()
                                              ? ts->provenance.sources[o.source]
                                              : std::string();
                auto key = std::make_pair(source_name, o.pixel);
                if (!source_name.empty()) {
                    if (seen.contains(key))
                        continue;
                    seen[key] = true;
                }
                origins.push_back(SampleOrigin{source_base + o.source, o.pixel});
            } else {
                origins.push_back(SampleOrigin{source_base, static_cast<std::uint64_t>(j)});
            }
            kept.emplace_back(ts, j);
        }
    }
    TrainingSet out;
    out.grid = grid;
    out.reflectances.resize(members[0]->reflectances.rows(),
                            static_cast<Eigen::Index>(kept.size()));
    out.responses.resize(members[0]->responses.rows(), static_cast<Eigen::Index>(kept.size()));
    for (size_t j = 0; j < kept.size(); ++j) {
        out.reflectances.col(static_cast<Eigen::Index>(j)) =
            kept[j].first->reflectances.col(kept[j].second);
        out.responses.col(static_cast<Eigen::Index>(j)) =
            kept[j].first->responses.col(kept[j].second);
    }
    out.provenance.sources = std::move(sources);
    out.provenance.fraction = 0.0; // mixed fractions
    out.provenance.seed = members[0]->provenance.seed;
    out.origins = std::move(origins);
    return out;
}

struct SearchResult {
    CandidateSet winner;
    std::vector<CandidateSet> step1_winners; // one per image, globally scored
    std::vector<CandidateSet> step3_candidates;
};

namespace detail {

inline std::string fraction_label(double fraction) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", fraction * 100.0);
    return std::string(buf);
}

} // namespace detail

/// Three-step representative training-set search.
/// Step 1: per image, keep the fraction-set with the lowest self-estimation
/// RMSE. Step 2: score each winner against all images and sort ascending.
/// Step 3: form every non-empty union of the top five, score those too, and
/// return the global minimum (ties: smaller set, then lexicographic id).
inline SearchResult search_representative(const std::vector<SpectralCube>& images,
                                          const CameraSpec& camera,
                                          const std::vector<double>& fractions,
                                          std::uint64_t seed, const MethodSpec& method,
                                          int threads = 1) {
    if (images.empty())
        throw InvalidConfig("search needs at least one image");
    if (fractions.empty())
        throw InvalidConfig("search needs at least one fraction");

    // Step 1: best fraction per image, judged on the image itself.
    std::vector<CandidateSet> step1;
    for (size_t i = 0; i < images.size(); ++i) {
        std::optional<CandidateSet> best;
        for (size_t j = 0; j < fractions.size(); ++j) {
            CandidateSet cand;
            cand.id = "img" + std::to_string(i) + ":p" + detail::fraction_label(fractions[j]);
            cand.training = sample_training(images[i], camera, fractions[j],
                                            derive_seed(seed, i, j),
                                            "img" + std::to_string(i));
            std::vector<SpectralCube> self{images[i]};
            cand.score = score_set(cand, self, camera, method, threads);
            if (!best || *cand.score < *best->score)
                best = std::move(cand);
        }
        step1.push_back(std::move(*best));
    }

    // Step 2: global scores, ascending.
    for (auto& cand : step1)
        cand.score = score_set(cand, images, camera, method, threads);
    std::sort(step1.begin(), step1.end(), [](const CandidateSet& a, const CandidateSet& b) {
        if (*a.score != *b.score)
            return *a.score < *b.score;
        return a.id < b.id;
    });

    // Step 3: all non-empty unions of the top five.
    size_t top = std::min<size_t>(5, step1.size());
    std::vector<CandidateSet> step3;
    for (std::uint32_t mask = 1; mask < (1u << top); ++mask) {
        std::vector<const TrainingSet*> members;
        std::string id;
        for (size_t b = 0; b < top; ++b) {
            if (!(mask & (1u << b)))
                continue;
            members.push_back(&step1[b].training);
            if (!id.empty())
                id += "+";
            id += step1[b].id;
        }
        CandidateSet cand;
        cand.id = std::move(id);
        cand.training = members.size() == 1 ? *members[0] : merge_training(members);
        cand.score = score_set(cand, images, camera, method, threads);
        step3.push_back(std::move(cand));
    }

    auto better = [](const CandidateSet& a, const CandidateSet& b) {
        if (*a.score != *b.score)
            return *a.score < *b.score;
        if (a.training.sample_count() != b.training.sample_count())
            return a.training.sample_count() < b.training.sample_count();
        return a.id < b.id;
    };
    const CandidateSet* winner = &step3.front();
    for (const auto& cand : step3)
        if (better(cand, *winner))
            winner = &cand;

    SearchResult result;
    result.winner = *winner;
    result.step1_winners = std::move(step1);
    result.step3_candidates = std::move(step3);
    return result;
}

} // namespace spectracast
