#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "omics/evaluation.hpp"

namespace omics {

/// "0.743 (0.710-0.775)"
std::string format_ci(double mean, const Interval& ci, int decimals = 3);

/// Best sweep point of one (scenario, criterion, kernel) series.
struct SummaryRow {
    std::string scenario;
    Criterion criterion = Criterion::X_cnt;
    KernelKind kernel = KernelKind::linear;
    int n_features_r2 = 0;
    double mean_r2 = 0.0;
    Interval ci_r2;
    int n_features_rrmse = 0;
    double mean_rrmse = 0.0;
    Interval ci_rrmse;
    bool best_r2 = false;     // best kernel for this scenario and criterion
    bool best_rrmse = false;
};

struct Summary {
    std::vector<SummaryRow> rows;

    nlohmann::json to_json() const;
    /// Table with R^2 and RRMSE columns; the best kernel per scenario and
    /// criterion is bold.
    std::string markdown() const;
};

Summary summarize(const std::vector<EvaluationReport>& reports);

/// Every report_n*.json below `dir`, in path order. Throws DataError when none.
std::vector<EvaluationReport> load_reports(const std::filesystem::path& dir);

}  // namespace omics
