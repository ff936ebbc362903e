#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "omics/extraction.hpp"
#include "omics/feature_matrix.hpp"

namespace omics {

struct SyntheticSpec {
    std::size_t n_samples = 69;
    std::size_t n_features_per_block = 50;
    std::size_t n_informative = 5;
    /// Noise sd on the raw linear predictor scale (features have unit variance).
    double noise_sd = 0.1;
    /// AR(1) correlation between neighbouring latent features of a block.
    double feature_correlation = 0.5;
    /// Blocks that carry informative columns, dealt round-robin.
    std::vector<BlockTag> signal_blocks{kAllBlocks.begin(), kAllBlocks.end()};
    bool volume_mode = false;
    std::size_t volume_size = 16;
    std::size_t lesions_per_patient = 2;  // volume mode patient grouping
    std::uint64_t seed = 0;

    /// Throws ConfigError when inconsistent.
    void validate() const;

    nlohmann::json to_json() const;
    static SyntheticSpec from_json(const nlohmann::json& j);
};

struct InformativeFeature {
    ColumnName column;
    double beta = 0.0;
};

/// Feature-mode cohort: six tagged blocks, labels and the planted model
/// y = a + b * (X beta + noise) with (a, b) mapping y into (0, 1.5].
struct SyntheticFeatureCohort {
    CohortFeatures features;
    std::vector<std::string> patient_ids;
    std::vector<InformativeFeature> informative;
    double label_offset = 0.0;
    double label_scale = 1.0;

    nlohmann::json ground_truth() const;
};

SyntheticFeatureCohort generate_feature_cohort(const SyntheticSpec& spec);

/// Volume-mode cohort: lesions whose size, intensity texture and dose shape
/// follow latent factors; the label is an affine function of the factors.
struct SyntheticVolumeCohort {
    std::vector<LesionSample> lesions;
    std::vector<std::vector<double>> latent;  // per lesion
    std::vector<double> weights;              // label weights on the factors

    nlohmann::json ground_truth() const;
};

SyntheticVolumeCohort generate_volume_cohort(const SyntheticSpec& spec);

/// Write VOL1 files plus manifest.json under `dir`; returns the manifest path.
std::filesystem::path write_volume_cohort(const std::filesystem::path& dir, const SyntheticVolumeCohort& cohort);

}  // namespace omics
