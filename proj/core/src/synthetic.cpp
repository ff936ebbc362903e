#include "omics/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "omics/error.hpp"
#include "omics/io_util.hpp"
#include "omics/manifest.hpp"
#include "omics/rng.hpp"
#include "omics/vol_io.hpp"

namespace omics {

namespace {

// Latent features go through exp(kSkew * g) before standardization so that
// linear combinations inherit a right tail.
constexpr double kSkew = 1.0;
constexpr double kLabelCentre = 0.35;

std::string numbered(const char* prefix, std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%03zu", prefix, i);
    return buf;
}

double standardized_lognormal(double g) {
    const double s2 = kSkew * kSkew;
    const double mean = std::exp(s2 / 2.0);
    const double sd = std::sqrt((std::exp(s2) - 1.0) * std::exp(s2));
    return (std::exp(kSkew * g) - mean) / sd;
}

/// Affine map putting the median at kLabelCentre and the sample into [0.05, 1.45].
std::pair<double, double> label_map(const Eigen::VectorXd& raw) {
    std::vector<double> v(raw.data(), raw.data() + raw.size());
    std::sort(v.begin(), v.end());
    const double lo = v.front(), hi = v.back();
    const double med = v.size() % 2 ? v[v.size() / 2] : 0.5 * (v[v.size() / 2 - 1] + v[v.size() / 2]);
    if (!(hi > lo)) throw InvalidArgument("synthetic labels are constant; set noise_sd > 0 or n_informative > 0");
    double scale = std::numeric_limits<double>::infinity();
    if (hi > med) scale = std::min(scale, 1.1 / (hi - med));
    if (med > lo) scale = std::min(scale, 0.3 / (med - lo));
    return {kLabelCentre - med * scale, scale};
}

}  // namespace

void SyntheticSpec::validate() const {
    if (n_samples < 3) throw ConfigError("n_samples must be >= 3");
    if (n_features_per_block < 1) throw ConfigError("n_features_per_block must be >= 1");
    if (signal_blocks.empty() && n_informative > 0) throw ConfigError("signal_blocks is empty");
    const std::size_t capacity = n_features_per_block * signal_blocks.size();
    if (!volume_mode && n_informative > capacity)
        throw ConfigError("n_informative (" + std::to_string(n_informative) + ") exceeds the columns of the signal blocks (" +
                          std::to_string(capacity) + ")");
    if (volume_mode && n_informative > 5) throw ConfigError("volume mode supports at most 5 informative factors");
    if (!(noise_sd >= 0.0) || !std::isfinite(noise_sd)) throw ConfigError("noise_sd must be >= 0");
    if (!(feature_correlation > -1.0 && feature_correlation < 1.0))
        throw ConfigError("feature_correlation must be in (-1, 1)");
    if (volume_mode && volume_size < 8) throw ConfigError("volume_size must be >= 8");
    if (lesions_per_patient < 1) throw ConfigError("lesions_per_patient must be >= 1");
}

nlohmann::json SyntheticSpec::to_json() const {
    nlohmann::json blocks = nlohmann::json::array();
    for (auto b : signal_blocks) blocks.push_back(to_string(b));
    return {{"n_samples", n_samples},
            {"n_features_per_block", n_features_per_block},
            {"n_informative", n_informative},
            {"noise_sd", noise_sd},
            {"feature_correlation", feature_correlation},
            {"signal_blocks", blocks},
            {"volume_mode", volume_mode},
            {"volume_size", volume_size},
            {"lesions_per_patient", lesions_per_patient},
            {"seed", seed}};
}

SyntheticSpec SyntheticSpec::from_json(const nlohmann::json& j) {
    static const std::vector<std::string> keys{"n_samples",     "n_features_per_block", "n_informative",
                                               "noise_sd",      "feature_correlation",  "signal_blocks",
                                               "volume_mode",   "volume_size",          "lesions_per_patient",
                                               "seed"};
    for (const auto& [k, _] : j.items())
        if (std::find(keys.begin(), keys.end(), k) == keys.end()) throw ConfigError("synthetic: unknown key \"" + k + "\"");
    SyntheticSpec s;
    auto get = [&](const char* k, auto& out) {
        if (j.contains(k)) out = j.at(k).get<std::remove_reference_t<decltype(out)>>();
    };
    get("n_samples", s.n_samples);
    get("n_features_per_block", s.n_features_per_block);
    get("n_informative", s.n_informative);
    get("noise_sd", s.noise_sd);
    get("feature_correlation", s.feature_correlation);
    get("volume_mode", s.volume_mode);
    get("volume_size", s.volume_size);
    get("lesions_per_patient", s.lesions_per_patient);
    get("seed", s.seed);
    if (j.contains("signal_blocks")) {
        s.signal_blocks.clear();
        for (const auto& b : j.at("signal_blocks")) s.signal_blocks.push_back(parse_block_tag(b.get<std::string>()));
    }
    s.validate();
    return s;
}

nlohmann::json SyntheticFeatureCohort::ground_truth() const {
    nlohmann::json inf = nlohmann::json::array();
    for (const auto& f : informative) inf.push_back({{"column", f.column.str()}, {"beta", f.beta}});
    return {{"mode", "features"}, {"informative", inf}, {"label_offset", label_offset}, {"label_scale", label_scale}};
}

SyntheticFeatureCohort generate_feature_cohort(const SyntheticSpec& spec) {
    spec.validate();
    const auto n = static_cast<Eigen::Index>(spec.n_samples);
    const auto p = static_cast<Eigen::Index>(spec.n_features_per_block);
    const double rho = spec.feature_correlation;
    const double innov = std::sqrt(1.0 - rho * rho);

    SyntheticFeatureCohort out;
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < spec.n_samples; ++i) {
        ids.push_back(numbered("L", i));
        out.patient_ids.push_back(numbered("P", i / spec.lesions_per_patient));
    }

    for (std::size_t b = 0; b < kAllBlocks.size(); ++b) {
        Rng rng(derive_seed(spec.seed, b, 1));
        FeatureMatrix& m = out.features.blocks[b];
        m.sample_ids = ids;
        for (Eigen::Index c = 0; c < p; ++c)
            m.columns.push_back({kAllBlocks[b], {"original", Family::firstorder, numbered("x", static_cast<std::size_t>(c))}});
        m.values.resize(n, p);
        for (Eigen::Index i = 0; i < n; ++i) {
            double g = rng.normal();
            for (Eigen::Index c = 0; c < p; ++c) {
                if (c > 0) g = rho * g + innov * rng.normal();
                m.values(i, c) = standardized_lognormal(g);
            }
        }
    }

    // Spread the informative columns round-robin over the signal blocks.
    Rng pick(derive_seed(spec.seed, 2));
    std::vector<std::vector<std::size_t>> free_cols(kAllBlocks.size());
    for (auto& v : free_cols) {
        for (std::size_t c = 0; c < spec.n_features_per_block; ++c) v.push_back(c);
        pick.shuffle(v);
    }
    Eigen::VectorXd raw = Eigen::VectorXd::Zero(n);
    for (std::size_t t = 0; t < spec.n_informative; ++t) {
        const BlockTag tag = spec.signal_blocks[t % spec.signal_blocks.size()];
        auto& pool = free_cols[static_cast<std::size_t>(tag)];
        const std::size_t col = pool.back();
        pool.pop_back();
        const double beta = pick.uniform(0.5, 1.0);
        const FeatureMatrix& m = out.features.block(tag);
        raw += beta * m.values.col(static_cast<Eigen::Index>(col));
        out.informative.push_back({m.columns[col], beta});
    }
    Rng noise(derive_seed(spec.seed, 3));
    for (Eigen::Index i = 0; i < n; ++i) raw[i] += spec.noise_sd * noise.normal();

    const auto [offset, scale] = label_map(raw);
    out.label_offset = offset;
    out.label_scale = scale;
    out.features.labels.sample_ids = ids;
    out.features.labels.values = (raw.array() * scale + offset).matrix();
    return out;
}

nlohmann::json SyntheticVolumeCohort::ground_truth() const {
    nlohmann::json lat = nlohmann::json::array();
    for (std::size_t i = 0; i < lesions.size(); ++i) lat.push_back({{"lesion_id", lesions[i].lesion_id}, {"factors", latent[i]}});
    return {{"mode", "volumes"},
            {"factors", {"size", "texture", "intensity", "dose_peak", "shrinkage"}},
            {"weights", weights},
            {"lesions", lat}};
}

SyntheticVolumeCohort generate_volume_cohort(const SyntheticSpec& spec) {
    spec.validate();
    const std::size_t N = spec.volume_size;
    Grid grid;
    grid.dims = {N, N, N};
    grid.spacing = {1.0, 1.0, 1.5};
    const Vec3 centre{0.5 * static_cast<double>(N - 1) * grid.spacing[0], 0.5 * static_cast<double>(N - 1) * grid.spacing[1],
                      0.5 * static_cast<double>(N - 1) * grid.spacing[2]};
    const double max_r = 0.3 * static_cast<double>(N);

    SyntheticVolumeCohort out;
    Rng wrng(derive_seed(spec.seed, 4));
    for (std::size_t k = 0; k < spec.n_informative; ++k) out.weights.push_back(wrng.uniform(0.5, 1.0));

    auto ellipsoid = [&](double r, double dx, double dy) {
        std::vector<std::uint8_t> m(grid.size(), 0);
        for (std::size_t z = 0; z < N; ++z)
            for (std::size_t y = 0; y < N; ++y)
                for (std::size_t x = 0; x < N; ++x) {
                    const double px = static_cast<double>(x) * grid.spacing[0] - centre[0] - dx;
                    const double py = static_cast<double>(y) * grid.spacing[1] - centre[1] - dy;
                    const double pz = static_cast<double>(z) * grid.spacing[2] - centre[2];
                    const double q = px * px / (r * r) + py * py / (0.64 * r * r) + pz * pz / (0.81 * r * r);
                    if (q <= 1.0) m[grid.offset(x, y, z)] = 1;
                }
        return Mask3D(grid, std::move(m));
    };

    for (std::size_t i = 0; i < spec.n_samples; ++i) {
        Rng rng(derive_seed(spec.seed, 5, i));
        std::vector<double> z(5);
        for (auto& v : z) v = rng.normal();
        // Factors beyond n_informative still vary the volumes but carry no label signal.
        const double r = std::clamp(0.18 * static_cast<double>(N) * (1.0 + 0.2 * z[0]), 2.5, max_r);
        const double rough = 10.0 * std::exp(0.4 * z[1]);
        const double level = 200.0 + 25.0 * z[2];
        const double peak = 40.0 + 6.0 * z[3];
        const double shrink = std::clamp(0.85 + 0.05 * z[4], 0.6, 1.0);
        const double dx = rng.uniform(-1.0, 1.0), dy = rng.uniform(-1.0, 1.0);

        double raw = 0.0;
        for (std::size_t k = 0; k < spec.n_informative; ++k) raw += out.weights[k] * z[k];
        raw = kLabelCentre + 0.1 * raw + 0.1 * spec.noise_sd * rng.normal();
        const double label = std::clamp(raw, 0.02, 1.5);

        const Mask3D m_init = ellipsoid(r, dx, dy);
        const Mask3D m_intra = ellipsoid(std::max(2.0, r * shrink), dx, dy);

        auto image = [&](const Mask3D& m, double lvl, double rgh, Rng& g) {
            std::vector<double> v(grid.size());
            for (std::size_t t = 0; t < v.size(); ++t)
                v[t] = m[t] ? lvl + rgh * g.normal() : 100.0 + 5.0 * g.normal();
            return Volume3D(grid, std::move(v));
        };
        auto dose = [&](double pk, double width) {
            std::vector<double> v(grid.size());
            for (std::size_t zz = 0; zz < N; ++zz)
                for (std::size_t y = 0; y < N; ++y)
                    for (std::size_t x = 0; x < N; ++x) {
                        const double px = static_cast<double>(x) * grid.spacing[0] - centre[0] - dx;
                        const double py = static_cast<double>(y) * grid.spacing[1] - centre[1] - dy;
                        const double pz = static_cast<double>(zz) * grid.spacing[2] - centre[2];
                        const double d2 = px * px + py * py + pz * pz;
                        v[grid.offset(x, y, zz)] = 2.0 + pk * std::exp(-d2 / (2.0 * width * width));
                    }
            return Volume3D(grid, std::move(v));
        };

        Rng tex(derive_seed(spec.seed, 6, i));
        LesionSample s{numbered("L", i),
                       numbered("P", i / spec.lesions_per_patient),
                       image(m_init, level, rough, tex),
                       image(m_intra, level * (0.9 + 0.05 * z[4]), rough * shrink, tex),
                       dose(peak, 3.0 + r),
                       dose(peak * (1.0 + 0.1 * z[4]), 3.0 + r * shrink),
                       m_init,
                       m_intra,
                       0.0,
                       0.0};
        s.gtv_init_mm3 = m_init.physical_volume();
        s.gtv_followup_mm3 = label * s.gtv_init_mm3;
        out.lesions.push_back(std::move(s));
        out.latent.push_back(z);
    }
    return out;
}

std::filesystem::path write_volume_cohort(const std::filesystem::path& dir, const SyntheticVolumeCohort& cohort) {
    CohortManifest m;
    for (const auto& s : cohort.lesions) {
        const auto d = dir / "lesions" / s.lesion_id;
        std::filesystem::create_directories(d);
        ManifestEntry e{s.lesion_id,           s.patient_id,          d / "image_init.json", d / "image_intra.json",
                        d / "dose_init.json",  d / "dose_intra.json", d / "mask_init.json",  d / "mask_intra.json",
                        s.gtv_init_mm3,        s.gtv_followup_mm3};
        write_volume(e.image_init, s.image_init);
        write_volume(e.image_intra, s.image_intra);
        write_volume(e.dose_init, s.dose_init);
        write_volume(e.dose_intra, s.dose_intra);
        write_mask(e.mask_init, s.mask_init);
        write_mask(e.mask_intra, s.mask_intra);
        m.lesions.push_back(std::move(e));
    }
    const auto path = dir / "manifest.json";
    write_file_atomic(path, m.to_json(dir).dump(2) + "\n");
    return path;
}

}  // namespace omics
