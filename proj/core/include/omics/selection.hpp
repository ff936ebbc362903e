#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "omics/feature_matrix.hpp"
#include "omics/fold_plan.hpp"
#include "omics/lasso.hpp"

namespace omics {

/// X_abs ranks by mean |Lasso coefficient| over all iterations;
/// X_cnt ranks by how many iterations kept the feature.
enum class Criterion { X_abs, X_cnt };

std::string to_string(Criterion c);
Criterion parse_criterion(std::string_view s);

struct SelectionConfig {
    double variance_threshold = 0.001;
    double correlation_threshold = 0.95;
    int k_nonzero = 20;
    int top_per_iteration = 15;
    int n_ranked = 15;
    LassoOptions lasso;
    unsigned threads = 1;
};

/// Keep columns whose min-max normalized population variance is >= threshold.
/// Constant columns are always dropped.
std::vector<std::size_t> variance_filter(const Eigen::MatrixXd& X, double threshold = 0.001);

struct PruneResult {
    std::vector<std::size_t> retained;
    std::vector<std::string> warnings;
};

/// Left-to-right scan: drop column j when |r(j, k)| > threshold for some
/// already retained k < j. Zero-variance columns count as uncorrelated,
/// are retained, and produce a warning.
PruneResult correlation_prune(const Eigen::MatrixXd& X, double threshold = 0.95);

/// Variance filter followed by correlation pruning, on named columns.
FeatureMatrix prefilter(const FeatureMatrix& X, const SelectionConfig& cfg, std::vector<std::string>* warnings = nullptr);

struct RetainedFeature {
    std::size_t column = 0;
    double abs_coef = 0.0;
};

/// Top features of one (repeat, fold) Lasso fit on the training rows.
struct IterationRecord {
    std::size_t repeat = 0;
    std::size_t fold = 0;
    double lambda = 0.0;
    int n_nonzero = 0;
    bool fallback = false;
    std::vector<RetainedFeature> retained;  // descending |coef|
};

struct RankedFeature {
    std::size_t column = 0;
    ColumnName name;
    double score = 0.0;     // mean |coef| (X_abs) or iteration count (X_cnt)
    int count = 0;          // iterations that kept the feature
    double mean_abs = 0.0;  // summed |coef| / number of iterations
};

struct SelectionResult {
    Criterion criterion = Criterion::X_cnt;
    std::vector<RankedFeature> ranked;  // at most n_ranked, scores nonincreasing
    std::vector<IterationRecord> iterations;
    std::vector<ColumnName> columns;  // column names of the input matrix

    /// Input column indices of the top `n` ranked features.
    std::vector<std::size_t> top_columns(std::size_t n) const;
    nlohmann::json to_json() const;
};

/// Run the Lasso on every (repeat, fold) training split of the plan.
/// Each split is standardized on its own rows and y is centered.
std::vector<IterationRecord> lasso_iterations(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                              const FoldPlan& plan, const SelectionConfig& cfg);

/// Aggregate iteration records under a criterion. Ties: X_cnt falls back to
/// the X_abs score, then to column order; X_abs falls back to column order.
SelectionResult rank_features(const std::vector<IterationRecord>& iterations, const std::vector<ColumnName>& columns,
                              Criterion criterion, const SelectionConfig& cfg);

/// lasso_iterations + rank_features. Throws InvalidArgument when X has
/// fewer than k_nonzero columns.
SelectionResult select_features(const FeatureMatrix& X, const Eigen::VectorXd& y, Criterion criterion,
                                const FoldPlan& plan, const SelectionConfig& cfg = {});

}  // namespace omics
