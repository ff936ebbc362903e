#include "omics/manifest.hpp"

#include <set>

#include "omics/error.hpp"
#include "omics/io_util.hpp"
#include "omics/vol_io.hpp"

namespace omics {

namespace {

constexpr const char* kPathKeys[] = {"image_init", "image_intra", "dose_init", "dose_intra", "mask_init", "mask_intra"};

std::filesystem::path* path_field(ManifestEntry& e, std::string_view key) {
    if (key == "image_init") return &e.image_init;
    if (key == "image_intra") return &e.image_intra;
    if (key == "dose_init") return &e.dose_init;
    if (key == "dose_intra") return &e.dose_intra;
    if (key == "mask_init") return &e.mask_init;
    return &e.mask_intra;
}

}  // namespace

void CohortManifest::validate(bool check_files) const {
    if (lesions.empty()) throw DataError("manifest lists no lesions");
    std::set<std::string> ids;
    for (const auto& e : lesions) {
        if (e.lesion_id.empty()) throw DataError("manifest: empty lesion_id");
        if (!ids.insert(e.lesion_id).second) throw DataError("manifest: duplicate lesion_id " + e.lesion_id);
        if (!(e.gtv_init_mm3 > 0.0) || !(e.gtv_followup_mm3 > 0.0))
            throw DataError("manifest: lesion " + e.lesion_id + " has a nonpositive GTV");
        if (check_files) {
            ManifestEntry copy = e;
            for (const char* k : kPathKeys) {
                const auto& p = *path_field(copy, k);
                if (!std::filesystem::exists(p))
                    throw IoError("manifest: lesion " + e.lesion_id + " " + k + " file not found: " + p.string());
            }
        }
    }
}

nlohmann::json CohortManifest::to_json(const std::filesystem::path& base) const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& e : lesions) {
        nlohmann::json o{{"lesion_id", e.lesion_id}, {"patient_id", e.patient_id}};
        ManifestEntry copy = e;
        for (const char* k : kPathKeys) {
            const auto& p = *path_field(copy, k);
            o[k] = (base.empty() ? p : p.lexically_relative(base)).generic_string();
        }
        o["gtv_init_mm3"] = e.gtv_init_mm3;
        o["gtv_followup_mm3"] = e.gtv_followup_mm3;
        arr.push_back(o);
    }
    return {{"lesions", arr}};
}

CohortManifest CohortManifest::from_json(const nlohmann::json& j, const std::filesystem::path& base) {
    CohortManifest m;
    try {
        for (const auto& o : j.at("lesions")) {
            ManifestEntry e;
            e.lesion_id = o.at("lesion_id").get<std::string>();
            e.patient_id = o.contains("patient_id") ? o.at("patient_id").get<std::string>() : e.lesion_id;
            for (const char* k : kPathKeys) {
                const std::filesystem::path p = o.at(k).get<std::string>();
                *path_field(e, k) = p.is_absolute() || base.empty() ? p : base / p;
            }
            e.gtv_init_mm3 = o.at("gtv_init_mm3").get<double>();
            e.gtv_followup_mm3 = o.at("gtv_followup_mm3").get<double>();
            m.lesions.push_back(std::move(e));
        }
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("manifest: ") + e.what());
    }
    return m;
}

CohortManifest load_manifest(const std::filesystem::path& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw DataError("manifest " + path.string() + " is not valid JSON: " + e.what());
    }
    CohortManifest m = CohortManifest::from_json(j, path.parent_path());
    m.validate(true);
    return m;
}

std::vector<LesionSample> load_cohort(const CohortManifest& m) {
    std::vector<LesionSample> out;
    out.reserve(m.lesions.size());
    for (const auto& e : m.lesions) {
        try {
            out.push_back(LesionSample{e.lesion_id, e.patient_id, read_volume(e.image_init), read_volume(e.image_intra),
                                       read_volume(e.dose_init), read_volume(e.dose_intra), read_mask(e.mask_init),
                                       read_mask(e.mask_intra), e.gtv_init_mm3, e.gtv_followup_mm3});
        } catch (...) {
            rethrow_with_context("lesion " + e.lesion_id);
        }
    }
    return out;
}

}  // namespace omics
