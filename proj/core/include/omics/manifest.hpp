#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "omics/extraction.hpp"

namespace omics {

struct ManifestEntry {
    std::string lesion_id;
    std::string patient_id;
    std::filesystem::path image_init, image_intra, dose_init, dose_intra, mask_init, mask_intra;
    double gtv_init_mm3 = 0.0;
    double gtv_followup_mm3 = 0.0;
};

/// JSON: {"lesions": [{"lesion_id", "patient_id", "image_init", ...,
/// "gtv_init_mm3", "gtv_followup_mm3"}]}. Paths are relative to the
/// manifest file.
struct CohortManifest {
    std::vector<ManifestEntry> lesions;

    /// Ids unique, GTVs positive, and (when check_files) every path exists.
    void validate(bool check_files = true) const;

    nlohmann::json to_json(const std::filesystem::path& base = {}) const;
    static CohortManifest from_json(const nlohmann::json& j, const std::filesystem::path& base = {});
};

CohortManifest load_manifest(const std::filesystem::path& path);

/// Read every referenced VOL1 file. Errors name the lesion and the path.
std::vector<LesionSample> load_cohort(const CohortManifest& m);

}  // namespace omics
