#include "omics/config.hpp"

#include <set>

#include "omics/error.hpp"
#include "omics/io_util.hpp"

namespace omics {

namespace {

using nlohmann::json;

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [k, _] : j.items())
        if (!ok.count(k)) throw ConfigError(where + ": unknown key \"" + k + "\"");
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& where) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(where + "." + key + ": " + e.what());
    }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::filesystem::path& p) {
    if (p.empty() || p.is_absolute() || base.empty()) return p;
    return base / p;
}

template <typename E, typename Parse>
std::vector<E> read_enum_list(const json& j, const char* key, std::vector<E> fallback, Parse parse,
                              const std::string& where) {
    if (!j.contains(key)) return fallback;
    std::vector<E> out;
    try {
        for (const auto& v : j.at(key)) out.push_back(parse(v.template get<std::string>()));
    } catch (const std::exception& e) {
        throw ConfigError(where + "." + key + ": " + e.what());
    }
    return out;
}

}  // namespace

void PipelineConfig::validate() const {
    auto fail = [](const std::string& m) { throw ConfigError(m); };
    if (extraction.n_bins < 2) fail("extraction.n_bins must be >= 2");
    if (extraction.filters.empty()) fail("extraction.filters is empty");
    if (extraction.families.empty()) fail("extraction.families is empty");
    for (double s : extraction.spacing)
        if (!(s > 0.0)) fail("extraction.spacing must be positive");
    const auto& s = selection;
    if (!(s.variance_threshold >= 0.0 && s.variance_threshold < 1.0)) fail("selection.variance_threshold must be in [0, 1)");
    if (!(s.correlation_threshold > 0.0 && s.correlation_threshold <= 1.0))
        fail("selection.correlation_threshold must be in (0, 1]");
    if (s.k_nonzero < 1) fail("selection.k_nonzero must be >= 1");
    if (s.top_per_iteration < 1 || s.top_per_iteration > s.k_nonzero)
        fail("selection.top_per_iteration must be in 1..k_nonzero");
    if (s.n_ranked < 1) fail("selection.n_ranked must be >= 1");
    if (criteria.empty()) fail("criteria is empty");
    if (folds < 2) fail("cv.folds must be >= 2");
    if (repeats < 1) fail("cv.repeats must be >= 1");
    if (evaluation.inner_folds < 2) fail("cv.inner_folds must be >= 2");
    if (evaluation.inner_repeats < 1) fail("cv.inner_repeats must be >= 1");
    if (evaluation.grid.n_folds < 2) fail("cv.grid_folds must be >= 2");
    if (!(evaluation.grid.solver.tolerance > 0.0)) fail("svr.tolerance must be > 0");
    if (evaluation.grid.solver.max_iterations < 1) fail("svr.max_iterations must be >= 1");
    for (const auto& [kind, g] : evaluation.grids) {
        try {
            g.validate(kind);
            g.expand(kind, 1);
        } catch (const std::exception& e) {
            fail("svr.grids." + to_string(kind) + ": " + e.what());
        }
    }
    if (scenarios.empty()) fail("scenarios is empty");
    if (kernels.empty()) fail("kernels is empty");
    if (n_features.empty()) fail("n_features is empty");
    for (int k : n_features)
        if (k < 1 || k > s.n_ranked) fail("n_features entries must be in 1..selection.n_ranked");
    for (double t : effect_size_thresholds)
        if (!std::isfinite(t)) fail("effect_size_thresholds must be finite");
    try {
        synthetic.validate();
    } catch (const std::exception& e) {
        fail(std::string("synthetic: ") + e.what());
    }
}

std::filesystem::path PipelineConfig::manifest_path() const {
    return manifest.empty() ? output_dir / "cohort" / "manifest.json" : manifest;
}

std::filesystem::path PipelineConfig::features_path() const {
    return features_dir.empty() ? output_dir / "features" : features_dir;
}

nlohmann::json PipelineConfig::to_json() const {
    json filters = json::array(), families = json::array(), crit = json::array(), scen = json::array(),
         kern = json::array(), grids = json::object();
    for (const auto& f : extraction.filters) filters.push_back(f.label());
    for (auto f : extraction.families) families.push_back(to_string(f));
    for (auto c : criteria) crit.push_back(to_string(c));
    for (auto sc : scenarios) scen.push_back(slug(sc));
    for (auto k : kernels) kern.push_back(to_string(k));
    for (const auto& [k, g] : evaluation.grids) grids[to_string(k)] = g.to_json();
    json j;
    j["seed"] = seed;
    if (!manifest.empty()) j["manifest"] = manifest.generic_string();
    if (!output_dir.empty()) j["output_dir"] = output_dir.generic_string();
    if (!features_dir.empty()) j["features_dir"] = features_dir.generic_string();
    j["extraction"] = {{"n_bins", extraction.n_bins},
                       {"filters", filters},
                       {"families", families},
                       {"spacing", {extraction.spacing[0], extraction.spacing[1], extraction.spacing[2]}}};
    j["selection"] = {{"variance_threshold", selection.variance_threshold},
                      {"correlation_threshold", selection.correlation_threshold},
                      {"k_nonzero", selection.k_nonzero},
                      {"top_per_iteration", selection.top_per_iteration},
                      {"n_ranked", selection.n_ranked},
                      {"lasso_tolerance", selection.lasso.tolerance},
                      {"lasso_max_sweeps", selection.lasso.max_sweeps}};
    j["criteria"] = crit;
    j["cv"] = {{"folds", folds},
               {"repeats", repeats},
               {"inner_folds", evaluation.inner_folds},
               {"inner_repeats", evaluation.inner_repeats},
               {"grid_folds", evaluation.grid.n_folds},
               {"group_by_patient", group_by_patient}};
    j["svr"] = {{"tolerance", evaluation.grid.solver.tolerance},
                {"max_iterations", evaluation.grid.solver.max_iterations},
                {"grids", grids}};
    j["scenarios"] = scen;
    j["kernels"] = kern;
    j["n_features"] = n_features;
    j["rrmse_denominator"] = evaluation.rrmse_denominator == RrmseDenominator::sum ? "sum" : "mean";
    j["effect_size_thresholds"] = effect_size_thresholds;
    j["threads"] = threads;
    j["synthetic"] = synthetic.to_json();
    return j;
}

namespace {
PipelineConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base);
}

PipelineConfig PipelineConfig::from_json(const nlohmann::json& j, const std::filesystem::path& base) {
    try {
        return parse_config(j, base);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

namespace {

PipelineConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base) {
    check_keys(j, "config",
               {"seed", "manifest", "output_dir", "features_dir", "extraction", "selection", "criteria", "cv", "svr",
                "scenarios", "kernels", "n_features", "rrmse_denominator", "effect_size_thresholds", "threads",
                "synthetic"});
    PipelineConfig c;
    if (!j.contains("seed")) throw ConfigError("config: \"seed\" is required");
    if (!j.at("seed").is_number_unsigned() && !(j.at("seed").is_number_integer() && j.at("seed").get<long long>() >= 0))
        throw ConfigError("config.seed must be a nonnegative integer");
    c.seed = j.at("seed").get<std::uint64_t>();

    if (j.contains("manifest")) c.manifest = resolve(base, j.at("manifest").get<std::string>());
    if (j.contains("output_dir")) c.output_dir = resolve(base, j.at("output_dir").get<std::string>());
    if (j.contains("features_dir")) c.features_dir = resolve(base, j.at("features_dir").get<std::string>());

    if (j.contains("extraction")) {
        const auto& e = j.at("extraction");
        check_keys(e, "extraction", {"n_bins", "filters", "families", "spacing"});
        read(e, "n_bins", c.extraction.n_bins, "extraction");
        if (e.contains("filters")) {
            c.extraction.filters.clear();
            try {
                for (const auto& f : e.at("filters")) c.extraction.filters.push_back(FilterSpec::parse(f.get<std::string>()));
            } catch (const std::exception& ex) {
                throw ConfigError(std::string("extraction.filters: ") + ex.what());
            }
        }
        c.extraction.families = read_enum_list(e, "families", c.extraction.families,
                                               [](const std::string& s) { return parse_family(s); }, "extraction");
        if (e.contains("spacing")) {
            const auto v = e.at("spacing").get<std::vector<double>>();
            if (v.size() != 3) throw ConfigError("extraction.spacing needs 3 values");
            c.extraction.spacing = {v[0], v[1], v[2]};
        }
    }
    if (j.contains("selection")) {
        const auto& s = j.at("selection");
        check_keys(s, "selection",
                   {"variance_threshold", "correlation_threshold", "k_nonzero", "top_per_iteration", "n_ranked",
                    "lasso_tolerance", "lasso_max_sweeps"});
        read(s, "variance_threshold", c.selection.variance_threshold, "selection");
        read(s, "correlation_threshold", c.selection.correlation_threshold, "selection");
        read(s, "k_nonzero", c.selection.k_nonzero, "selection");
        read(s, "top_per_iteration", c.selection.top_per_iteration, "selection");
        read(s, "n_ranked", c.selection.n_ranked, "selection");
        read(s, "lasso_tolerance", c.selection.lasso.tolerance, "selection");
        read(s, "lasso_max_sweeps", c.selection.lasso.max_sweeps, "selection");
    }
    c.criteria = read_enum_list(j, "criteria", c.criteria, [](const std::string& s) { return parse_criterion(s); }, "config");
    if (j.contains("cv")) {
        const auto& v = j.at("cv");
        check_keys(v, "cv", {"folds", "repeats", "inner_folds", "inner_repeats", "grid_folds", "group_by_patient"});
        read(v, "folds", c.folds, "cv");
        read(v, "repeats", c.repeats, "cv");
        read(v, "inner_folds", c.evaluation.inner_folds, "cv");
        read(v, "inner_repeats", c.evaluation.inner_repeats, "cv");
        read(v, "grid_folds", c.evaluation.grid.n_folds, "cv");
        read(v, "group_by_patient", c.group_by_patient, "cv");
    }
    if (j.contains("svr")) {
        const auto& v = j.at("svr");
        check_keys(v, "svr", {"tolerance", "max_iterations", "grids"});
        read(v, "tolerance", c.evaluation.grid.solver.tolerance, "svr");
        read(v, "max_iterations", c.evaluation.grid.solver.max_iterations, "svr");
        if (v.contains("grids")) {
            for (const auto& [name, g] : v.at("grids").items()) {
                try {
                    check_keys(g, "svr.grids." + name, {"C", "epsilon", "gamma", "degree", "coef0"});
                    c.evaluation.grids[parse_kernel(name)] = GridSpec::from_json(g);
                } catch (const ConfigError&) {
                    throw;
                } catch (const std::exception& e) {
                    throw ConfigError("svr.grids." + name + ": " + e.what());
                }
            }
        }
    }
    c.scenarios = read_enum_list(j, "scenarios", c.scenarios, [](const std::string& s) { return parse_scenario(s); }, "config");
    c.kernels = read_enum_list(j, "kernels", c.kernels, [](const std::string& s) { return parse_kernel(s); }, "config");
    read(j, "n_features", c.n_features, "config");
    if (j.contains("rrmse_denominator")) {
        const auto d = j.at("rrmse_denominator").get<std::string>();
        if (d == "sum") c.evaluation.rrmse_denominator = RrmseDenominator::sum;
        else if (d == "mean") c.evaluation.rrmse_denominator = RrmseDenominator::mean;
        else throw ConfigError("rrmse_denominator must be \"sum\" or \"mean\"");
    }
    read(j, "effect_size_thresholds", c.effect_size_thresholds, "config");
    read(j, "threads", c.threads, "config");
    c.selection.threads = c.threads;
    c.evaluation.selection = c.selection;
    c.evaluation.threads = c.threads;
    if (j.contains("synthetic")) {
        try {
            c.synthetic = SyntheticSpec::from_json(j.at("synthetic"));
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            throw ConfigError(std::string("synthetic: ") + e.what());
        }
    }
    if (!(j.contains("synthetic") && j.at("synthetic").contains("seed"))) c.synthetic.seed = c.seed;
    c.validate();
    return c;
}

}  // namespace

PipelineConfig load_config(const std::filesystem::path& path) {
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const std::exception& e) {
        throw ConfigError("cannot read config " + path.string() + ": " + e.what());
    }
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
    }
    return PipelineConfig::from_json(j, path.parent_path());
}

}  // namespace omics
