#include "omics/extraction.hpp"

#include <algorithm>
#include <cmath>

#include "omics/error.hpp"
#include "omics/parallel.hpp"

namespace omics {

namespace {

constexpr double kDeltaEps = 1e-8;
constexpr double kDeltaCap = 1e6;

bool wants(const ExtractionConfig& cfg, Family f) {
    return std::find(cfg.families.begin(), cfg.families.end(), f) != cfg.families.end();
}

constexpr std::array<std::pair<TextureKind, Family>, 5> kTextures{{{TextureKind::glcm, Family::glcm},
                                                                   {TextureKind::glrlm, Family::glrlm},
                                                                   {TextureKind::glszm, Family::glszm},
                                                                   {TextureKind::gldm, Family::gldm},
                                                                   {TextureKind::ngtdm, Family::ngtdm}}};

}  // namespace

FeatureVector extract_features(const Volume3D& image, const Mask3D& mask, const ExtractionConfig& cfg) {
    require_same_grid(image, mask);
    FeatureVector out;
    for (const auto& filter : cfg.filters) {
        const Volume3D filtered = apply_filter(image, filter);
        const std::string label = filter.label();
        if (wants(cfg, Family::firstorder)) out.append(first_order(filtered, mask, cfg.n_bins, label));
        if (filter.kind() == FilterKind::original && wants(cfg, Family::shape)) out.append(shape_features(mask));
        bool any_texture = false;
        for (const auto& [kind, fam] : kTextures) any_texture = any_texture || wants(cfg, fam);
        if (!any_texture) continue;
        const LabelVolume labels = discretize(filtered, mask, cfg.n_bins);
        for (const auto& [kind, fam] : kTextures)
            if (wants(cfg, fam)) out.append(texture_features(texture_matrix(kind, labels), label));
    }
    for (std::size_t i = 0; i < out.size(); ++i)
        if (!std::isfinite(out.values[i])) throw DataError("feature " + out.names[i].str() + " is not finite");
    return out;
}

double relative_change(double init, double intra) {
    const double diff = init - intra;
    if (std::abs(init) >= kDeltaEps) return std::clamp(diff / init, -kDeltaCap, kDeltaCap);
    if (std::abs(diff) < kDeltaEps) return 0.0;
    return diff > 0.0 ? kDeltaCap : -kDeltaCap;
}

FeatureVector delta_features(const FeatureVector& init, const FeatureVector& intra) {
    if (init.names != intra.names) throw InvalidArgument("delta features need identical feature name lists");
    FeatureVector out;
    out.names = init.names;
    out.values.resize(init.size());
    for (std::size_t i = 0; i < init.size(); ++i) out.values[i] = relative_change(init.values[i], intra.values[i]);
    return out;
}

double LesionSample::label() const {
    if (!(gtv_init_mm3 > 0.0)) throw DataError("lesion " + lesion_id + ": initial GTV must be positive");
    if (!(gtv_followup_mm3 >= 0.0) || !std::isfinite(gtv_followup_mm3))
        throw DataError("lesion " + lesion_id + ": follow-up GTV must be finite and non-negative");
    return gtv_followup_mm3 / gtv_init_mm3;
}

const FeatureVector& LesionFeatures::block(BlockTag t) const {
    switch (t) {
        case BlockTag::R_init: return r_init;
        case BlockTag::R_intra: return r_intra;
        case BlockTag::R_delta: return r_delta;
        case BlockTag::D_init: return d_init;
        case BlockTag::D_intra: return d_intra;
        case BlockTag::D_delta: return d_delta;
    }
    return r_init;
}

LesionFeatures extract_lesion(const LesionSample& s, const ExtractionConfig& cfg) {
    try {
        const auto img_i = resample(s.image_init, cfg.spacing, Interpolation::trilinear);
        const auto img_t = resample(s.image_intra, cfg.spacing, Interpolation::trilinear);
        const auto dose_i = resample(s.dose_init, cfg.spacing, Interpolation::trilinear);
        const auto dose_t = resample(s.dose_intra, cfg.spacing, Interpolation::trilinear);
        const auto mask_i = resample(s.mask_init, cfg.spacing);
        const auto mask_t = resample(s.mask_intra, cfg.spacing);
        if (!(img_i.grid() == mask_i.grid()) || !(dose_i.grid() == mask_i.grid()))
            throw DataError("initial image, dose and mask grids differ after resampling");
        if (!(img_t.grid() == mask_t.grid()) || !(dose_t.grid() == mask_t.grid()))
            throw DataError("intra-treatment image, dose and mask grids differ after resampling");

        LesionFeatures f;
        f.r_init = extract_features(img_i, mask_i, cfg);
        f.r_intra = extract_features(img_t, mask_t, cfg);
        f.d_init = extract_features(dose_i, mask_i, cfg);
        f.d_intra = extract_features(dose_t, mask_t, cfg);
        f.r_delta = delta_features(f.r_init, f.r_intra);
        f.d_delta = delta_features(f.d_init, f.d_intra);
        return f;
    } catch (const std::exception& e) {
        throw DataError("lesion " + s.lesion_id + ": " + e.what());
    }
}

CohortFeatures extract_cohort(const std::vector<LesionSample>& cohort, const ExtractionConfig& cfg) {
    if (cohort.empty()) throw InvalidArgument("empty cohort");
    std::vector<LesionFeatures> per(cohort.size());
    parallel_for(cohort.size(), cfg.threads, [&](std::size_t i) { per[i] = extract_lesion(cohort[i], cfg); });

    CohortFeatures out;
    std::vector<std::string> ids;
    out.labels.values.resize(static_cast<Eigen::Index>(cohort.size()));
    for (std::size_t i = 0; i < cohort.size(); ++i) {
        ids.push_back(cohort[i].lesion_id);
        out.labels.values[static_cast<Eigen::Index>(i)] = cohort[i].label();
    }
    out.labels.sample_ids = ids;
    for (BlockTag t : kAllBlocks) {
        std::vector<FeatureVector> rows;
        rows.reserve(per.size());
        for (const auto& p : per) rows.push_back(p.block(t));
        out.blocks[static_cast<std::size_t>(t)] = make_block(t, ids, rows);
    }
    return out;
}

std::string to_string(Scenario s) {
    std::string out;
    for (BlockTag t : blocks_of(s)) out += (out.empty() ? "" : "+") + to_string(t);
    return out;
}

std::string slug(Scenario s) {
    switch (s) {
        case Scenario::R_all: return "R_all";
        case Scenario::D_all: return "D_all";
        case Scenario::RD_all: return "RD_all";
        default: return to_string(s);
    }
}

Scenario parse_scenario(std::string_view s) {
    for (Scenario sc : kAllScenarios)
        if (s == to_string(sc) || s == slug(sc)) return sc;
    throw InvalidArgument("unknown scenario '" + std::string(s) + "'");
}

std::vector<BlockTag> blocks_of(Scenario s) {
    using B = BlockTag;
    switch (s) {
        case Scenario::R_init: return {B::R_init};
        case Scenario::R_intra: return {B::R_intra};
        case Scenario::R_delta: return {B::R_delta};
        case Scenario::D_init: return {B::D_init};
        case Scenario::D_intra: return {B::D_intra};
        case Scenario::D_delta: return {B::D_delta};
        case Scenario::R_all: return {B::R_init, B::R_intra, B::R_delta};
        case Scenario::D_all: return {B::D_init, B::D_intra, B::D_delta};
        case Scenario::RD_all: return {B::R_init, B::R_intra, B::R_delta, B::D_init, B::D_intra, B::D_delta};
    }
    return {};
}

ScenarioData scenario_matrix(const CohortFeatures& cf, Scenario s) {
    std::vector<FeatureMatrix> parts;
    for (BlockTag t : blocks_of(s)) parts.push_back(cf.block(t));
    ScenarioData out{FeatureMatrix::hstack(parts), cf.labels};
    if (out.X.sample_ids != out.y.sample_ids) throw DataError("label sample ids do not match feature sample ids");
    return out;
}

ScenarioData assemble_scenario(const std::vector<LesionSample>& cohort, Scenario s, const ExtractionConfig& cfg) {
    return scenario_matrix(extract_cohort(cohort, cfg), s);
}

}  // namespace omics
