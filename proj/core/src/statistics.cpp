#include "omics/statistics.hpp"

#include <cmath>
#include <cstdio>

#include <Eigen/QR>

#include "omics/error.hpp"
#include "omics/metrics.hpp"

namespace omics {

MeanSd mean_sd(const std::vector<double>& values) {
    if (values.empty()) throw InvalidArgument("mean_sd: empty input");
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return {mean, std::sqrt(ss / static_cast<double>(values.size()))};
}

std::string format_mean_sd(const MeanSd& m, int decimals) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.*f ± %.*f", decimals, m.mean, decimals, m.sd);
    return buf;
}

CorrelationSummary feature_label_correlations(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    if (X.rows() != y.size()) throw InvalidArgument("feature_label_correlations: row count mismatch");
    if (X.cols() == 0) throw InvalidArgument("feature_label_correlations: no features");
    CorrelationSummary s;
    std::vector<double> abs_r;
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
        const double r = pearson_r(X.col(j), y);
        s.r.push_back(r);
        abs_r.push_back(std::abs(r));
    }
    s.abs_r = mean_sd(abs_r);
    return s;
}

VifResult vif(const Eigen::MatrixXd& X) {
    const Eigen::Index n = X.rows(), p = X.cols();
    if (p < 2) throw InvalidArgument("vif: need at least 2 features");
    if (n <= p) throw InvalidArgument("vif: need more samples than features");
    VifResult res;
    for (Eigen::Index j = 0; j < p; ++j) {
        Eigen::MatrixXd A(n, p);
        A.col(0).setOnes();
        for (Eigen::Index k = 0, c = 1; k < p; ++k)
            if (k != j) A.col(c++) = X.col(k);
        const Eigen::VectorXd t = X.col(j);
        const double ss_tot = (t.array() - t.mean()).square().sum();
        double v = kVifCap;
        if (ss_tot > 0.0) {
            const Eigen::VectorXd beta = A.colPivHouseholderQr().solve(t);
            const double ss_res = (t - A * beta).squaredNorm();
            const double one_minus = ss_res / ss_tot;
            if (one_minus > 1.0 / kVifCap) v = 1.0 / one_minus;
        }
        if (v >= kVifCap) {
            v = kVifCap;
            res.warnings.push_back("feature " + std::to_string(j) + " is perfectly collinear; VIF capped at 1e12");
        }
        res.vif.push_back(v);
    }
    return res;
}

double cohens_d(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() < 2 || b.size() < 2)
        throw InvalidArgument("cohens_d: both groups need >= 2 samples (got " + std::to_string(a.size()) + " and " +
                              std::to_string(b.size()) + ")");
    auto stats = [](const std::vector<double>& g) {
        double m = 0.0;
        for (double v : g) m += v;
        m /= static_cast<double>(g.size());
        double ss = 0.0;
        for (double v : g) ss += (v - m) * (v - m);
        return std::pair{m, ss};
    };
    const auto [ma, ssa] = stats(a);
    const auto [mb, ssb] = stats(b);
    const double pooled = std::sqrt((ssa + ssb) / static_cast<double>(a.size() + b.size() - 2));
    if (pooled == 0.0) throw NumericalError("cohens_d: pooled standard deviation is zero");
    return (ma - mb) / pooled;
}

EffectBucket effect_bucket(double d) {
    const double a = std::abs(d);
    if (a < 0.2) return EffectBucket::small;
    if (a < 0.5) return EffectBucket::medium;
    if (a < 0.8) return EffectBucket::large;
    return EffectBucket::very_large;
}

std::string to_string(EffectBucket b) {
    switch (b) {
        case EffectBucket::small: return "<0.2";
        case EffectBucket::medium: return "[0.2, 0.5)";
        case EffectBucket::large: return "[0.5, 0.8)";
        case EffectBucket::very_large: return "≥0.8";
    }
    return "?";
}

EffectSizeTable effect_size_table(const Eigen::MatrixXd& X, const std::vector<std::string>& names,
                                  const Eigen::VectorXd& y, double threshold) {
    if (X.rows() != y.size()) throw InvalidArgument("effect_size_table: row count mismatch");
    if (static_cast<Eigen::Index>(names.size()) != X.cols()) throw InvalidArgument("effect_size_table: name count mismatch");
    std::vector<Eigen::Index> low, high;
    for (Eigen::Index i = 0; i < y.size(); ++i) (y[i] < threshold ? low : high).push_back(i);
    if (low.size() < 2 || high.size() < 2)
        throw NumericalError("effect_size_table: degenerate split at threshold " + std::to_string(threshold) +
                             " (low group " + std::to_string(low.size()) + ", high group " +
                             std::to_string(high.size()) + ")");
    EffectSizeTable t;
    t.threshold = threshold;
    double sum_abs = 0.0;
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
        std::vector<double> a, b;
        for (auto i : low) a.push_back(X(i, j));
        for (auto i : high) b.push_back(X(i, j));
        const double d = cohens_d(a, b);
        t.rows.push_back({names[static_cast<std::size_t>(j)], d, effect_bucket(d), low.size(), high.size()});
        sum_abs += std::abs(d);
    }
    t.mean_abs_d = X.cols() > 0 ? sum_abs / static_cast<double>(X.cols()) : 0.0;
    return t;
}

CorrelationHeatmap pairwise_correlation_heatmap(const Eigen::MatrixXd& X) {
    const Eigen::Index p = X.cols();
    if (p < 2) throw InvalidArgument("pairwise_correlation_heatmap: need at least 2 features");
    CorrelationHeatmap h;
    h.r = Eigen::MatrixXd::Identity(p, p);
    std::vector<double> upper;
    for (Eigen::Index i = 0; i < p; ++i)
        for (Eigen::Index j = i + 1; j < p; ++j) {
            const double r = pearson_r(X.col(i), X.col(j));
            h.r(i, j) = h.r(j, i) = r;
            upper.push_back(std::abs(r));
        }
    h.abs_offdiag = mean_sd(upper);
    return h;
}

}  // namespace omics
