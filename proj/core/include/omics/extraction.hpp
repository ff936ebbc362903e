#pragma once

#include <string>
#include <vector>

#include "omics/feature_matrix.hpp"
#include "omics/features.hpp"
#include "omics/filters.hpp"
#include "omics/texture.hpp"
#include "omics/volume.hpp"

namespace omics {

struct ExtractionConfig {
    int n_bins = 32;
    std::vector<FilterSpec> filters = default_filters();
    std::vector<Family> families{Family::firstorder, Family::shape, Family::glcm, Family::glrlm,
                                 Family::glszm,      Family::gldm,  Family::ngtdm};
    Vec3 spacing{1.0, 1.0, 1.0};
    unsigned threads = 1;
};

/// Full catalogue for one volume inside one mask. Shape features are emitted
/// once, under the original filter.
FeatureVector extract_features(const Volume3D& image, const Mask3D& mask, const ExtractionConfig& cfg);

/// Relative change (init - intra) / init per feature. Where |init| < 1e-8 the
/// change is 0 if |init - intra| < 1e-8 and otherwise sign(init - intra) * 1e6.
FeatureVector delta_features(const FeatureVector& init, const FeatureVector& intra);
double relative_change(double init, double intra);

/// One lesion at two time points with its follow-up volume.
struct LesionSample {
    std::string lesion_id;
    std::string patient_id;
    Volume3D image_init, image_intra;
    Volume3D dose_init, dose_intra;
    Mask3D mask_init, mask_intra;
    double gtv_init_mm3 = 0.0;
    double gtv_followup_mm3 = 0.0;

    /// Follow-up GTV relative to the initial GTV.
    double label() const;
};

/// The six per-lesion blocks (radiomic/dosiomic x init/intra/delta).
struct LesionFeatures {
    FeatureVector r_init, r_intra, r_delta, d_init, d_intra, d_delta;
    const FeatureVector& block(BlockTag t) const;
};

/// Resample to the configured spacing, check co-registration, extract.
/// Errors name the lesion.
LesionFeatures extract_lesion(const LesionSample& s, const ExtractionConfig& cfg);

/// All six tagged blocks plus labels for a cohort, rows in input order.
struct CohortFeatures {
    std::array<FeatureMatrix, 6> blocks;  // indexed by BlockTag
    Labels labels;

    const FeatureMatrix& block(BlockTag t) const { return blocks[static_cast<std::size_t>(t)]; }
};

CohortFeatures extract_cohort(const std::vector<LesionSample>& cohort, const ExtractionConfig& cfg);

/// The nine feature-set scenarios: six individual blocks and three
/// multi-block combinations.
enum class Scenario { R_init, R_intra, R_delta, D_init, D_intra, D_delta, R_all, D_all, RD_all };

inline constexpr std::array<Scenario, 9> kAllScenarios{Scenario::R_init,  Scenario::R_intra, Scenario::R_delta,
                                                       Scenario::D_init,  Scenario::D_intra, Scenario::D_delta,
                                                       Scenario::R_all,   Scenario::D_all,   Scenario::RD_all};

/// "R_init", ..., "R_init+R_intra+R_delta", ...
std::string to_string(Scenario s);
/// Short form safe for file names ("R_init", "R_all", "RD_all").
std::string slug(Scenario s);
/// Accepts both the long "+"-joined form and the slug.
Scenario parse_scenario(std::string_view s);
std::vector<BlockTag> blocks_of(Scenario s);

struct ScenarioData {
    FeatureMatrix X;
    Labels y;
};

ScenarioData scenario_matrix(const CohortFeatures& cf, Scenario s);
ScenarioData assemble_scenario(const std::vector<LesionSample>& cohort, Scenario s, const ExtractionConfig& cfg);

}  // namespace omics
