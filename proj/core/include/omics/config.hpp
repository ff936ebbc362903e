#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "omics/evaluation.hpp"
#include "omics/extraction.hpp"
#include "omics/synthetic.hpp"

namespace omics {

/// Whole-run configuration, read from JSON. Unknown keys are rejected.
/// Relative paths resolve against the config file's directory.
struct PipelineConfig {
    std::uint64_t seed = 0;
    std::filesystem::path manifest;    // empty: <output_dir>/cohort/manifest.json
    std::filesystem::path output_dir;  // required unless given on the command line
    std::filesystem::path features_dir;  // empty: <output_dir>/features

    ExtractionConfig extraction;
    SelectionConfig selection;
    std::vector<Criterion> criteria{Criterion::X_abs, Criterion::X_cnt};

    std::size_t folds = 5;
    std::size_t repeats = 10;
    bool group_by_patient = false;
    EvaluationConfig evaluation;  // inner plan sizes, grids, solver, rrmse flag

    std::vector<Scenario> scenarios{kAllScenarios.begin(), kAllScenarios.end()};
    std::vector<KernelKind> kernels{KernelKind::linear, KernelKind::rbf, KernelKind::polynomial, KernelKind::sigmoid};
    std::vector<int> n_features{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15};
    std::vector<double> effect_size_thresholds{0.2, 0.4, 0.6, 0.8};
    unsigned threads = 1;

    SyntheticSpec synthetic;

    /// Throws ConfigError on out-of-range values.
    void validate() const;

    std::filesystem::path manifest_path() const;
    std::filesystem::path features_path() const;

    nlohmann::json to_json() const;
    /// `base` resolves relative paths. Throws ConfigError.
    static PipelineConfig from_json(const nlohmann::json& j, const std::filesystem::path& base = {});
};

PipelineConfig load_config(const std::filesystem::path& path);

}  // namespace omics
