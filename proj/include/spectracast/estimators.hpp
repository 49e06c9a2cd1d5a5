// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the SpectraCast Project.

#pragma once

#include <Eigen/SVD>
#include <cstdint>
#include <limits>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "spectracast/camera.hpp"
#include "spectracast/types.hpp"

namespace spectracast {

enum class EstimatorKind : std::uint8_t {
    wiener_prior = 0,
    wiener_data = 1,
    pseudoinverse = 2,
    linear = 3,
    imai_berns = 4,
    shi_healey = 5,
};

inline const char* kind_name(EstimatorKind k) {
    switch (k) {
    case EstimatorKind::wiener_prior: return "wiener-prior";
    case EstimatorKind::wiener_data: return "wiener-data";
    case EstimatorKind::pseudoinverse: return "pseudoinverse";
    case EstimatorKind::linear: return "linear";
    case EstimatorKind::imai_berns: return "imai-berns";
    case EstimatorKind::shi_healey: return "shi-healey";
    }
    return "unknown";
}

/// True for the methods that regress against (optionally expanded) response
/// features; the prior-based methods consume raw 3-channel responses only.
inline bool uses_feature_expansion(EstimatorKind k) {
    return k == EstimatorKind::wiener_data || k == EstimatorKind::pseudoinverse ||
           k == EstimatorKind::imai_berns;
}

/// One monomial over the response channels: R^r * G^g * B^b.
struct PolyTerm {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    friend bool operator==(const PolyTerm&, const PolyTerm&) = default;
};

/// An ordered list of response monomials. The first three terms are always
/// the linear R, G, B terms.
struct PolyCombo {
    std::string name = "linear3";
    std::vector<PolyTerm> terms = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};

    [[nodiscard]] int term_count() const { return static_cast<int>(terms.size()); }

    void validate() const {
        if (terms.size() < 3 || terms[0] != PolyTerm{1, 0, 0} || terms[1] != PolyTerm{0, 1, 0} ||
            terms[2] != PolyTerm{0, 0, 1})
            throw InvalidConfig("polynomial combo must start with the linear terms R, G, B");
    }

    static PolyCombo linear3() { return {}; }

    /// Named presets for the standard term combinations.
    static PolyCombo preset(const std::string& name);

    /// Parse a comma-separated monomial list such as "R,G,B,R2,G2,B2" or
    /// "R,G,B,RG,GB,BR,R2G2B2". Exponents follow their channel letter.
    static PolyCombo parse_terms(const std::string& spec);

    [[nodiscard]] std::string terms_string() const {
        std::string s;
        for (size_t i = 0; i < terms.size(); ++i) {
            if (i)
                s += ",";
            auto part = [&](char c, int e) {
                if (e == 0)
                    return;
                s += c;
                if (e > 1)
                    s += static_cast<char>('0' + e);
            };
            part('R', terms[i].r);
            part('G', terms[i].g);
            part('B', terms[i].b);
        }
        return s;
    }
};

inline PolyCombo PolyCombo::parse_terms(const std::string& spec) {
    PolyCombo combo;
    combo.name = "custom";
    combo.terms.clear();
    PolyTerm term;
    bool in_term = false;
    std::uint8_t* last_channel = nullptr;
    auto flush = [&]() {
        if (in_term) {
            combo.terms.push_back(term);
            term = PolyTerm{};
            in_term = false;
            last_channel = nullptr;
        }
    };
    for (char c : spec) {
        if (c == ',' || c == ' ' || c == '\t') {
            flush();
            continue;
        }
        if (c == 'R' || c == 'r')
            last_channel = &term.r;
        else if (c == 'G' || c == 'g')
            last_channel = &term.g;
        else if (c == 'B' || c == 'b')
            last_channel = &term.b;
        else if (c >= '0' && c <= '9') {
            if (!last_channel)
                throw InvalidConfig("combo term exponent without a channel letter");
            *last_channel = static_cast<std::uint8_t>(*last_channel - 1 + (c - '0'));
            in_term = true;
            continue;
        } else {
            throw InvalidConfig(std::string("unexpected character in combo terms: ") + c);
        }
        *last_channel = static_cast<std::uint8_t>(*last_channel + 1);
        in_term = true;
    }
    flush();
    combo.validate();
    return combo;
}

inline PolyCombo PolyCombo::preset(const std::string& name) {
    auto mk = [&](const char* terms) {
        PolyCombo c = parse_terms(terms);
        c.name = name;
        return c;
    };
    if (name == "linear3")
        return mk("R,G,B");
    if (name == "cross6")
        return mk("R,G,B,RG,GB,BR");
    if (name == "sq6")
        return mk("R,G,B,R2,G2,B2");
    if (name == "cube6")
        return mk("R,G,B,R3,G3,B3");
    if (name == "mixed6")
        return mk("R,G,B,RG2,GB2,BR2");
    if (name == "cross7")
        return mk("R,G,B,RG,GB,BR,R2G2B2");
    if (name == "mixed9")
        return mk("R,G,B,RG,GB,BR,RG2,GB2,BR2");
    if (name == "full12")
        return mk("R,G,B,RG,GB,BR,R2,G2,B2,RG2,GB2,BR2");
    if (name == "sq12")
        return mk("R,G,B,RG,GB,BR,R2,G2,B2,R2G2,G2B2,B2R2");
    throw InvalidConfig("unknown combo preset: " + name);
}

namespace detail {

inline double int_pow(double x, int e) {
    double v = 1.0;
    for (int i = 0; i < e; ++i)
        v *= x;
    return v;
}

} // namespace detail

/// Evaluate every combo monomial at one response triple.
inline Vector expand_polynomial(const Vec3& rgb, const PolyCombo& combo) {
    Vector out(combo.term_count());
    for (int t = 0; t < combo.term_count(); ++t) {
        const PolyTerm& m = combo.terms[t];
        out[t] = detail::int_pow(rgb[0], m.r) * detail::int_pow(rgb[1], m.g) *
                 detail::int_pow(rgb[2], m.b);
    }
    return out;
}

/// Expand every column of an M x k response matrix into T x k features.
inline Matrix expand_columns(const Matrix& responses, const PolyCombo& combo) {
    if (responses.rows() != 3)
        throw ShapeMismatch("feature expansion expects 3-channel responses");
    Matrix out(combo.term_count(), responses.cols());
    for (Eigen::Index j = 0; j < responses.cols(); ++j)
        out.col(j) = expand_polynomial(Vec3(responses.col(j)), combo);
    return out;
}

/// Moore-Penrose pseudoinverse via SVD; singular values below
/// rcond * sigma_max are treated as zero.
inline Matrix pseudoinverse(const Matrix& a, double rcond = 1e-10) {
    Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector& sv = svd.singularValues();
    double cutoff = sv.size() ? rcond * sv[0] : 0.0;
    Vector inv = Vector::Zero(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv[i] > cutoff && sv[i] > 0.0)
            inv[i] = 1.0 / sv[i];
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

/// Top-d eigenvectors of the uncentered scatter R R^t, ordered by decreasing
/// eigenvalue. Sign convention: the largest-magnitude entry of each column
/// is positive.
inline Matrix pca_basis(const Matrix& reflectances, int d) {
    Eigen::Index n = reflectances.rows();
    Eigen::Index k = reflectances.cols();
    if (d < 1 || d > std::min(n, k))
        throw BadBasisCount("basis count must be in [1, min(bands, samples)]");
    Matrix scatter = reflectances * reflectances.transpose();
    Eigen::SelfAdjointEigenSolver<Matrix> es(scatter);
    if (es.info() != Eigen::Success)
        throw SingularSystem("eigendecomposition of the scatter matrix failed");
    Matrix v(n, d);
    for (int j = 0; j < d; ++j) {
        Vector col = es.eigenvectors().col(n - 1 - j); // ascending -> take from the back
        Eigen::Index imax = 0;
        double amax = -1.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            double a = std::abs(col[i]);
            if (a > amax) {
                amax = a;
                imax = i;
            }
        }
        if (col[imax] < 0.0)
            col = -col;
        v.col(j) = col;
    }
    return v;
}

/// Paired training data: reflectance columns with their device responses.
struct SampleOrigin {
    std::uint32_t source = 0; // index into provenance.sources
    std::uint64_t pixel = 0;  // flat pixel index in the source image

    friend bool operator==(const SampleOrigin&, const SampleOrigin&) = default;
    friend auto operator<=>(const SampleOrigin&, const SampleOrigin&) = default;
};

struct Provenance {
    std::vector<std::string> sources;
    double fraction = 1.0;
    std::uint64_t seed = 0;
};

struct TrainingSet {
    WavelengthGrid grid;
    Matrix reflectances; // N x k
    Matrix responses;    // M x k
    Provenance provenance;
    std::vector<SampleOrigin> origins; // per-sample identity, used by set unions

    [[nodiscard]] int sample_count() const { return static_cast<int>(reflectances.cols()); }
};

/// A fitted estimator. Only the members for its kind are populated; the
/// derived operators are rebuilt by finalize() after fitting or file load.
struct EstimationModel {
    EstimatorKind kind = EstimatorKind::pseudoinverse;
    WavelengthGrid grid;
    PolyCombo combo;

    Matrix w;            // wiener-prior / wiener-data / pseudoinverse: N x T
    Matrix basis;        // linear / imai-berns: V, N x d
    Matrix system;       // linear: QV, M x d
    Matrix weights_map;  // imai-berns: D, d x T
    Matrix bank;         // shi-healey: training reflectances, N x k
    Matrix basis_free;   // shi-healey: V1, N x (d-M)
    Matrix basis_pinned; // shi-healey: V2, N x M
    Matrix q;            // shi-healey: M x N

    bool fitted = false;

    // Derived (never serialized).
    Matrix direct_map;        // N x T single-matrix predictor, all kinds but shi-healey
    Matrix sh_particular;     // V2 (Q V2)^-1: the Q r = rho particular solution operator
    Matrix sh_homogeneous;    // V1 - sh_particular Q V1: in-basis null directions of Q
    Matrix sh_homogeneous_pinv;

    [[nodiscard]] int basis_count() const {
        if (kind == EstimatorKind::shi_healey)
            return static_cast<int>(basis_free.cols() + basis_pinned.cols());
        return static_cast<int>(basis.cols());
    }

    void finalize() {
        switch (kind) {
        case EstimatorKind::wiener_prior:
        case EstimatorKind::wiener_data:
        case EstimatorKind::pseudoinverse:
            direct_map = w;
            break;
        case EstimatorKind::linear: {
            if (system.rows() == system.cols()) {
                Eigen::FullPivLU<Matrix> lu(system);
                if (!lu.isInvertible())
                    throw SingularSystem("linear-method system matrix QV is singular");
                direct_map = basis * lu.inverse();
            } else {
                direct_map = basis * pseudoinverse(system);
            }
            break;
        }
        case EstimatorKind::imai_berns:
            direct_map = basis * weights_map;
            break;
        case EstimatorKind::shi_healey: {
            Matrix qv2 = q * basis_pinned;
            Eigen::FullPivLU<Matrix> lu(qv2);
            if (!lu.isInvertible())
                throw SingularSystem("shi-healey pinned system Q V2 is singular");
            sh_particular = basis_pinned * lu.inverse();
            sh_homogeneous = basis_free - sh_particular * (q * basis_free);
            sh_homogeneous_pinv = pseudoinverse(sh_homogeneous);
            break;
        }
        }
        fitted = true;
    }
};

/// Wiener estimator from prior knowledge: W = Rss Q^t (Q Rss Q^t + Rdd)^-1
/// with Rss the (1/k) R R^t sample autocorrelation.
inline EstimationModel fit_wiener_prior(const Matrix& reflectances, const CameraSpec& camera,
                                        const Matrix& noise_autocorr = Matrix()) {
    if (reflectances.cols() < 1)
        throw EmptyTrainingSet("wiener-prior fit needs at least one training spectrum");
    if (reflectances.rows() != camera.grid.count)
        throw GridMismatch("training spectra do not match the camera grid");
    Matrix qmat = system_matrix(camera);
    Matrix rss = reflectances * reflectances.transpose() /
                 static_cast<double>(reflectances.cols());
    Matrix inner = qmat * rss * qmat.transpose();
    if (noise_autocorr.size() > 0)
        inner += noise_autocorr;
    Eigen::FullPivLU<Matrix> lu(inner);
    if (!lu.isInvertible())
        throw SingularSystem("wiener-prior inner matrix Q Rss Q^t + Rdd is singular; "
                             "a nonzero noise autocorrelation regularizes it");
    EstimationModel m;
    m.kind = EstimatorKind::wiener_prior;
    m.grid = camera.grid;
    m.combo = PolyCombo::linear3();
    m.w = rss * qmat.transpose() * lu.inverse();
    m.finalize();
    return m;
}

/// Wiener estimator from data: W = (R Pe^t)(Pe Pe^t)^-1 over expanded
/// responses.
inline EstimationModel fit_wiener_data(const TrainingSet& ts, const PolyCombo& combo = {}) {
    combo.validate();
    if (ts.sample_count() < 1)
        throw EmptyTrainingSet("wiener-data fit needs training samples");
    Matrix pe = expand_columns(ts.responses, combo);
    Matrix gram = pe * pe.transpose();
    Eigen::FullPivLU<Matrix> lu(gram);
    if (!lu.isInvertible())
        throw SingularSystem("expanded responses are rank deficient; reduce the combo "
                             "or add training samples");
    EstimationModel m;
    m.kind = EstimatorKind::wiener_data;
    m.grid = ts.grid;
    m.combo = combo;
    m.w = (ts.reflectances * pe.transpose()) * lu.inverse();
    m.finalize();
    return m;
}

/// Least-squares estimator W = R Pe^+ with the SVD pseudoinverse.
inline EstimationModel fit_pseudoinverse(const TrainingSet& ts, const PolyCombo& combo = {}) {
    combo.validate();
    if (ts.sample_count() < 1)
        throw EmptyTrainingSet("pseudoinverse fit needs training samples");
    Matrix pe = expand_columns(ts.responses, combo);
    EstimationModel m;
    m.kind = EstimatorKind::pseudoinverse;
    m.grid = ts.grid;
    m.combo = combo;
    m.w = ts.reflectances * pseudoinverse(pe);
    m.finalize();
    return m;
}

/// Basis-projection estimator: r = V (QV)^-1 rho, with V from PCA of the
/// training spectra. d != channel count switches to the pseudoinverse of QV.
inline EstimationModel fit_linear(const Matrix& reflectances, const CameraSpec& camera, int d) {
    if (reflectances.rows() != camera.grid.count)
        throw GridMismatch("training spectra do not match the camera grid");
    EstimationModel m;
    m.kind = EstimatorKind::linear;
    m.grid = camera.grid;
    m.combo = PolyCombo::linear3();
    m.basis = pca_basis(reflectances, d);
    m.system = system_matrix(camera) * m.basis;
    m.finalize();
    return m;
}

/// Basis-weight regression: D maps expanded responses to basis weights,
/// r = V D pe(rho).
inline EstimationModel fit_imai_berns(const TrainingSet& ts, int d, const PolyCombo& combo = {}) {
    combo.validate();
    if (ts.sample_count() < 1)
        throw EmptyTrainingSet("imai-berns fit needs training samples");
    EstimationModel m;
    m.kind = EstimatorKind::imai_berns;
    m.grid = ts.grid;
    m.combo = combo;
    m.basis = pca_basis(ts.reflectances, d);
    Matrix weights = m.basis.transpose() * ts.reflectances; // d x k
    Matrix pe = expand_columns(ts.responses, combo);
    m.weights_map = weights * pseudoinverse(pe);
    m.finalize();
    return m;
}

/// Shi-Healey model straight from a bank and system matrix (used when
/// rebuilding a loaded model at a different basis count).
inline EstimationModel shi_healey_with_basis(const Matrix& bank, const Matrix& q,
                                             const WavelengthGrid& grid, int d) {
    if (bank.cols() < 1)
        throw EmptyTrainingSet("shi-healey fit needs a training bank");
    if (bank.rows() != grid.count)
        throw GridMismatch("training spectra do not match the grid");
    int channels = static_cast<int>(q.rows());
    if (d <= channels)
        throw BadBasisCount("shi-healey requires more basis vectors than channels");
    EstimationModel m;
    m.kind = EstimatorKind::shi_healey;
    m.grid = grid;
    m.combo = PolyCombo::linear3();
    Matrix v = pca_basis(bank, d);
    m.basis_free = v.leftCols(d - channels);
    m.basis_pinned = v.rightCols(channels);
    m.q = q;
    m.bank = bank;
    m.finalize();
    return m;
}

/// Candidate-search estimator that keeps more basis vectors than channels.
/// The basis splits into V1 (first d-M columns) and V2 (last M columns).
inline EstimationModel fit_shi_healey(const Matrix& reflectances, const CameraSpec& camera,
                                      int d = 5) {
    return shi_healey_with_basis(reflectances, system_matrix(camera), camera.grid, d);
}

struct ShiHealeyChoice {
    Vector estimate;
    int index = -1;      // winning training-bank column
    double distance = std::numeric_limits<double>::infinity();
};

namespace detail {

struct ShiHealeyWorkspace {
    Vector particular;
    Vector target;
    Vector omega;
    Vector candidate;
};

inline void shi_healey_search(const Vector& rho, const EstimationModel& m,
                              ShiHealeyWorkspace& ws, ShiHealeyChoice& best) {
    ws.particular.noalias() = m.sh_particular * rho;
    int k = static_cast<int>(m.bank.cols());
    for (int i = 0; i < k; ++i) {
        ws.target = m.bank.col(i) - ws.particular;
        ws.omega.noalias() = m.sh_homogeneous_pinv * ws.target;
        ws.candidate.noalias() = m.sh_homogeneous * ws.omega;
        ws.candidate += ws.particular;
        double dist = (ws.candidate - m.bank.col(i)).norm();
        if (dist < best.distance) {
            best.distance = dist;
            best.index = i;
            best.estimate = ws.candidate;
        }
    }
}

} // namespace detail

/// For each bank spectrum, solve for the in-basis reflectance consistent
/// with the response and keep the candidate closest to its bank spectrum.
/// Ties break toward the lowest training index. The result always satisfies
/// Q r = rho.
inline ShiHealeyChoice estimate_shi_healey_choice(const Vector& rho, const EstimationModel& m) {
    if (!m.fitted)
        throw ModelNotFitted("shi-healey model is not fitted");
    if (m.kind != EstimatorKind::shi_healey)
        throw Error("estimate_shi_healey requires a shi-healey model");
    if (m.bank.cols() == 0)
        throw EmptyTrainingSet("shi-healey model has an empty training bank");
    ShiHealeyChoice best;
    detail::ShiHealeyWorkspace ws;
    detail::shi_healey_search(rho, m, ws, best);
    return best;
}

inline Spectrum estimate_shi_healey(const Vector& rho, const EstimationModel& m) {
    return Spectrum(m.grid, estimate_shi_healey_choice(rho, m).estimate);
}

namespace detail {

/// Hot path shared by estimate_pixel and estimate_cube: writes N doubles.
inline void estimate_pixel_into(const EstimationModel& m, const Vec3& rgb, double* out,
                                Vector& feature_buf, ShiHealeyWorkspace& ws) {
    if (m.kind == EstimatorKind::shi_healey) {
        ShiHealeyChoice best;
        Vector rho = rgb;
        shi_healey_search(rho, m, ws, best);
        for (int b = 0; b < m.grid.count; ++b)
            out[b] = best.estimate[b];
        return;
    }
    feature_buf.resize(m.combo.term_count());
    for (int t = 0; t < m.combo.term_count(); ++t) {
        const PolyTerm& term = m.combo.terms[t];
        feature_buf[t] = int_pow(rgb[0], term.r) * int_pow(rgb[1], term.g) *
                         int_pow(rgb[2], term.b);
    }
    Eigen::Map<Vector> view(out, m.grid.count);
    view.noalias() = m.direct_map * feature_buf;
}

} // namespace detail

/// Apply a fitted model to one response triple. Estimates are unclamped.
inline Spectrum estimate_pixel(const EstimationModel& m, const Vec3& rgb) {
    if (!m.fitted)
        throw ModelNotFitted("cannot estimate with an unfitted model");
    Vector out(m.grid.count);
    Vector features;
    detail::ShiHealeyWorkspace ws;
    detail::estimate_pixel_into(m, rgb, out.data(), features, ws);
    return Spectrum(m.grid, std::move(out));
}

/// Per-pixel estimation over a whole image. Pixels partition statically
/// across workers; the result is identical for every thread count.
inline SpectralCube estimate_cube(const EstimationModel& m, const RgbImage& image,
                                  int threads = 1) {
    if (!m.fitted)
        throw ModelNotFitted("cannot estimate with an unfitted model");
    SpectralCube cube(image.height, image.width, m.grid);
    size_t pixels = image.pixel_count();
    auto worker = [&](size_t begin, size_t end) {
        Vector features;
        detail::ShiHealeyWorkspace ws;
        for (size_t i = begin; i < end; ++i) {
            Vec3 rgb(image.values[i * 3], image.values[i * 3 + 1], image.values[i * 3 + 2]);
            detail::estimate_pixel_into(m, rgb, cube.pixel_data(i), features, ws);
        }
    };
    if (threads <= 1 || pixels < 2) {
        worker(0, pixels);
        return cube;
    }
    size_t n_workers = std::min<size_t>(threads, pixels);
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    size_t chunk = (pixels + n_workers - 1) / n_workers;
    for (size_t w = 0; w < n_workers; ++w) {
        size_t begin = w * chunk;
        size_t end = std::min(pixels, begin + chunk);
        if (begin >= end)
            break;
        pool.emplace_back(worker, begin, end);
    }
    for (auto& t : pool)
        t.join();
    return cube;
}

/// Basis-count scan for shi-healey: evaluate every supplied model per pixel
/// and keep the candidate with the smallest search distance (ties toward the
/// earlier model, then the lower bank index).
inline Spectrum shi_healey_scan(const Vec3& rgb, const std::vector<EstimationModel>& models) {
    if (models.empty())
        throw EmptyTrainingSet("basis scan needs at least one model");
    ShiHealeyChoice best;
    const EstimationModel* best_model = nullptr;
    Vector rho = rgb;
    for (const auto& m : models) {
        ShiHealeyChoice c = estimate_shi_healey_choice(rho, m);
        if (c.distance < best.distance) {
            best = c;
            best_model = &m;
        }
    }
    return Spectrum(best_model->grid, best.estimate);
}

/// Per-pixel basis-count scan over a whole image.
inline SpectralCube estimate_cube_scan(const std::vector<EstimationModel>& models,
                                       const RgbImage& image, int threads = 1) {
    if (models.empty())
        throw EmptyTrainingSet("basis scan needs at least one model");
    SpectralCube cube(image.height, image.width, models.front().grid);
    size_t pixels = image.pixel_count();
    auto worker = [&](size_t begin, size_t end) {
        for (size_t i = begin; i < end; ++i) {
            Vec3 rgb(image.values[i * 3], image.values[i * 3 + 1], image.values[i * 3 + 2]);
            Spectrum s = shi_healey_scan(rgb, models);
            double* out = cube.pixel_data(i);
            for (int b = 0; b < cube.bands(); ++b)
                out[b] = s.values[b];
        }
    };
    if (threads <= 1 || pixels < 2) {
        worker(0, pixels);
        return cube;
    }
    size_t n_workers = std::min<size_t>(threads, pixels);
    std::vector<std::thread> pool;
    size_t chunk = (pixels + n_workers - 1) / n_workers;
    for (size_t w = 0; w < n_workers; ++w) {
        size_t begin = w * chunk;
        size_t end = std::min(pixels, begin + chunk);
        if (begin >= end)
            break;
        pool.emplace_back(worker, begin, end);
    }
    for (auto& t : pool)
        t.join();
    return cube;
}

/// Predictions for a whole response matrix (columns), on the fit's own path.
inline Matrix predict_responses(const EstimationModel& m, const Matrix& responses) {
    if (!m.fitted)
        throw ModelNotFitted("cannot predict with an unfitted model");
    Matrix out(m.grid.count, responses.cols());
    Vector features;
    detail::ShiHealeyWorkspace ws;
    for (Eigen::Index j = 0; j < responses.cols(); ++j) {
        Vec3 rgb(responses(0, j), responses(1, j), responses(2, j));
        detail::estimate_pixel_into(m, rgb, out.col(j).data(), features, ws);
    }
    return out;
}

/// Aggregate residual of a fit on its own training pairs:
/// sqrt(|R - W pe(P)|_F^2 / (N k)). Least-squares fits cannot get worse when
/// the term set grows.
inline double training_rmse(const EstimationModel& m, const TrainingSet& ts) {
    Matrix predicted = predict_responses(m, ts.responses);
    Matrix residual = ts.reflectances - predicted;
    return std::sqrt(residual.squaredNorm() /
                     static_cast<double>(residual.rows() * residual.cols()));
}

} // namespace spectracast
