#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "omics/feature_matrix.hpp"
#include "omics/fold_plan.hpp"
#include "omics/grid_search.hpp"
#include "omics/metrics.hpp"
#include "omics/selection.hpp"
#include "omics/statistics.hpp"

namespace omics {

struct MetricSample {
    std::size_t repeat = 0;
    std::size_t fold = 0;
    double r2 = 0.0;
    double rrmse = 0.0;
    std::size_t n_test = 0;
    SVRHyperparams hyperparams;         // grid-search winner for this cell
    std::vector<std::string> features;  // columns used, rank order
};

struct PredictionRecord {
    std::string sample_id;
    double actual = 0.0;
    double predicted = 0.0;
    std::size_t repeat = 0;
    std::size_t fold = 0;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

/// mean +- 1.96 * s / sqrt(n), s the sample sd. Needs n >= 2.
Interval ci95(const std::vector<double>& values, double* mean_out = nullptr);

struct EvaluationReport {
    std::string scenario;
    Criterion criterion = Criterion::X_cnt;
    KernelKind kernel = KernelKind::linear;
    int n_features = 0;
    std::vector<MetricSample> samples;  // repeat-major
    double mean_r2 = 0.0;
    double mean_rrmse = 0.0;
    Interval ci95_r2;
    Interval ci95_rrmse;
    std::vector<PredictionRecord> predictions;

    nlohmann::json to_json() const;
    static EvaluationReport from_json(const nlohmann::json& j);
};

struct EvaluationConfig {
    SelectionConfig selection;
    /// Plan used for selection inside each outer training split.
    std::size_t inner_folds = 5;
    std::size_t inner_repeats = 10;
    std::map<KernelKind, GridSpec> grids;  // missing kinds use GridSpec{}
    GridSearchOptions grid;
    RrmseDenominator rrmse_denominator = RrmseDenominator::sum;
    unsigned threads = 1;

    const GridSpec& grid_for(KernelKind k) const;
};

/// Lasso iteration records of every outer (repeat, fold) training split,
/// indexed repeat * n_folds + fold. They do not depend on criterion, kernel
/// or n_features, so one computation serves a whole sweep.
struct OuterSelections {
    std::vector<std::vector<IterationRecord>> per_cell;
};

OuterSelections outer_selections(const FeatureMatrix& X, const Eigen::VectorXd& y, const FoldPlan& plan,
                                 const EvaluationConfig& cfg);

EvaluationReport evaluate_with_selections(const FeatureMatrix& X, const Eigen::VectorXd& y, const FoldPlan& plan,
                                          const OuterSelections& sel, Criterion criterion, KernelKind kernel,
                                          int n_features, const EvaluationConfig& cfg);

/// For every outer cell: select on the training rows, keep the top
/// n_features (or every ranked feature if fewer were ranked), grid-search and fit the SVR there, score the held-out fold.
EvaluationReport repeated_cv_evaluate(const FeatureMatrix& X, const Eigen::VectorXd& y, Criterion criterion,
                                      KernelKind kernel, int n_features, const FoldPlan& plan,
                                      const EvaluationConfig& cfg);

/// One report per requested n_features, sharing the selection work.
std::vector<EvaluationReport> sweep_evaluate(const FeatureMatrix& X, const Eigen::VectorXd& y, Criterion criterion,
                                             KernelKind kernel, const std::vector<int>& n_features,
                                             const FoldPlan& plan, const EvaluationConfig& cfg,
                                             const OuterSelections* cached = nullptr);

struct BestOf {
    std::size_t best_r2 = 0;     // index maximizing mean R^2
    std::size_t best_rrmse = 0;  // index minimizing mean RRMSE
};
BestOf best_of(const std::vector<EvaluationReport>& reports);

std::string sweep_csv(const std::vector<EvaluationReport>& reports);
std::string scatter_csv(const EvaluationReport& report);
std::string heatmap_csv(const std::vector<std::string>& names, const CorrelationHeatmap& h);
std::string effect_size_csv(const EffectSizeTable& t);

}  // namespace omics
