#include "omics/report.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>
#include <tuple>

#include "omics/error.hpp"
#include "omics/extraction.hpp"
#include "omics/io_util.hpp"

namespace omics {

namespace {

std::size_t scenario_rank(const std::string& s) {
    try {
        const Scenario sc = parse_scenario(s);
        return static_cast<std::size_t>(std::find(kAllScenarios.begin(), kAllScenarios.end(), sc) - kAllScenarios.begin());
    } catch (const std::exception&) {
        return kAllScenarios.size();
    }
}

}  // namespace

std::string format_ci(double mean, const Interval& ci, int decimals) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%.*f (%.*f-%.*f)", decimals, mean, decimals, ci.lo, decimals, ci.hi);
    return buf;
}

Summary summarize(const std::vector<EvaluationReport>& reports) {
    if (reports.empty()) throw DataError("no evaluation reports to summarize");
    using Key = std::tuple<std::size_t, std::string, Criterion, KernelKind>;
    std::map<Key, std::vector<const EvaluationReport*>> series;
    for (const auto& r : reports) series[{scenario_rank(r.scenario), r.scenario, r.criterion, r.kernel}].push_back(&r);

    Summary s;
    for (auto& [key, list] : series) {
        std::sort(list.begin(), list.end(), [](auto* a, auto* b) { return a->n_features < b->n_features; });
        const EvaluationReport* br = list.front();
        const EvaluationReport* bq = list.front();
        for (auto* r : list) {
            if (r->mean_r2 > br->mean_r2) br = r;
            if (r->mean_rrmse < bq->mean_rrmse) bq = r;
        }
        SummaryRow row;
        row.scenario = std::get<1>(key);
        row.criterion = std::get<2>(key);
        row.kernel = std::get<3>(key);
        row.n_features_r2 = br->n_features;
        row.mean_r2 = br->mean_r2;
        row.ci_r2 = br->ci95_r2;
        row.n_features_rrmse = bq->n_features;
        row.mean_rrmse = bq->mean_rrmse;
        row.ci_rrmse = bq->ci95_rrmse;
        s.rows.push_back(row);
    }
    // Flag the best kernel within each (scenario, criterion) group.
    for (std::size_t i = 0; i < s.rows.size();) {
        std::size_t j = i;
        while (j < s.rows.size() && s.rows[j].scenario == s.rows[i].scenario && s.rows[j].criterion == s.rows[i].criterion) ++j;
        std::size_t br = i, bq = i;
        for (std::size_t k = i; k < j; ++k) {
            if (s.rows[k].mean_r2 > s.rows[br].mean_r2) br = k;
            if (s.rows[k].mean_rrmse < s.rows[bq].mean_rrmse) bq = k;
        }
        s.rows[br].best_r2 = true;
        s.rows[bq].best_rrmse = true;
        i = j;
    }
    return s;
}

nlohmann::json Summary::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows)
        arr.push_back({{"scenario", r.scenario},
                       {"criterion", to_string(r.criterion)},
                       {"kernel", to_string(r.kernel)},
                       {"n_features_r2", r.n_features_r2},
                       {"mean_r2", r.mean_r2},
                       {"ci95_r2", {r.ci_r2.lo, r.ci_r2.hi}},
                       {"r2_text", format_ci(r.mean_r2, r.ci_r2)},
                       {"n_features_rrmse", r.n_features_rrmse},
                       {"mean_rrmse", r.mean_rrmse},
                       {"ci95_rrmse", {r.ci_rrmse.lo, r.ci_rrmse.hi}},
                       {"rrmse_text", format_ci(r.mean_rrmse, r.ci_rrmse)},
                       {"best_r2", r.best_r2},
                       {"best_rrmse", r.best_rrmse}});
    return {{"rows", arr}};
}

std::string Summary::markdown() const {
    std::ostringstream os;
    os << "| Scenario | Criterion | Kernel | Features (R²) | R² (95% CI) | Features (RRMSE) | RRMSE (95% CI) |\n";
    os << "|---|---|---|---|---|---|---|\n";
    for (const auto& r : rows) {
        const std::string r2 = format_ci(r.mean_r2, r.ci_r2);
        const std::string rr = format_ci(r.mean_rrmse, r.ci_rrmse);
        os << "| " << r.scenario << " | " << to_string(r.criterion) << " | " << to_string(r.kernel) << " | "
           << r.n_features_r2 << " | " << (r.best_r2 ? "**" + r2 + "**" : r2) << " | " << r.n_features_rrmse << " | "
           << (r.best_rrmse ? "**" + rr + "**" : rr) << " |\n";
    }
    return os.str();
}

std::vector<EvaluationReport> load_reports(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) throw DataError("no evaluation results: " + dir.string() + " is not a directory");
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::recursive_directory_iterator(dir)) {
        const auto name = e.path().filename().string();
        if (e.is_regular_file() && name.rfind("report_n", 0) == 0 && e.path().extension() == ".json") files.push_back(e.path());
    }
    if (files.empty()) throw DataError("no evaluation reports found under " + dir.string());
    std::sort(files.begin(), files.end());
    std::vector<EvaluationReport> out;
    for (const auto& f : files) {
        try {
            out.push_back(EvaluationReport::from_json(nlohmann::json::parse(read_text_file(f))));
        } catch (const nlohmann::json::exception& e) {
            throw DataError(f.string() + ": " + e.what());
        } catch (...) {
            rethrow_with_context(f.string());
        }
    }
    return out;
}

}  // namespace omics
