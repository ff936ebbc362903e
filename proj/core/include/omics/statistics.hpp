#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

namespace omics {

struct MeanSd {
    double mean = 0.0;
    double sd = 0.0;  // population sd
};

MeanSd mean_sd(const std::vector<double>& values);

/// "0.150 ± 0.125"
std::string format_mean_sd(const MeanSd& m, int decimals = 3);

struct CorrelationSummary {
    std::vector<double> r;  // per feature
    MeanSd abs_r;           // over |r|
};

/// Pearson r of every column against y.
CorrelationSummary feature_label_correlations(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

struct VifResult {
    std::vector<double> vif;
    std::vector<std::string> warnings;
};

constexpr double kVifCap = 1e12;

/// VIF_j = 1 / (1 - R^2_j), regressing column j on the others with an
/// intercept. Perfectly collinear columns are capped at kVifCap with a warning.
VifResult vif(const Eigen::MatrixXd& X);

/// (mean_a - mean_b) / pooled sample sd.
double cohens_d(const std::vector<double>& a, const std::vector<double>& b);

enum class EffectBucket { small, medium, large, very_large };

/// <0.2, [0.2, 0.5), [0.5, 0.8), >=0.8 on |d|.
EffectBucket effect_bucket(double d);
std::string to_string(EffectBucket b);

struct EffectSizeRow {
    std::string feature;
    double cohens_d = 0.0;
    EffectBucket bucket = EffectBucket::small;
    std::size_t n_low = 0;   // y < threshold
    std::size_t n_high = 0;  // y >= threshold
};

struct EffectSizeTable {
    double threshold = 0.0;
    std::vector<EffectSizeRow> rows;
    double mean_abs_d = 0.0;
};

/// Cohen's d per column between the y < threshold group (a) and the
/// y >= threshold group (b).
EffectSizeTable effect_size_table(const Eigen::MatrixXd& X, const std::vector<std::string>& names,
                                  const Eigen::VectorXd& y, double threshold);

struct CorrelationHeatmap {
    Eigen::MatrixXd r;  // symmetric, unit diagonal
    MeanSd abs_offdiag;
};

CorrelationHeatmap pairwise_correlation_heatmap(const Eigen::MatrixXd& X);

}  // namespace omics
