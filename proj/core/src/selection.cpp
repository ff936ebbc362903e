#include "omics/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "omics/error.hpp"
#include "omics/parallel.hpp"

namespace omics {

std::string to_string(Criterion c) { return c == Criterion::X_abs ? "X_abs" : "X_cnt"; }

Criterion parse_criterion(std::string_view s) {
    if (s == "X_abs" || s == "X-abs" || s == "abs") return Criterion::X_abs;
    if (s == "X_cnt" || s == "X-cnt" || s == "cnt") return Criterion::X_cnt;
    throw InvalidArgument("unknown criterion '" + std::string(s) + "'");
}

std::vector<std::size_t> variance_filter(const Eigen::MatrixXd& X, double threshold) {
    std::vector<std::size_t> keep;
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
        const auto col = X.col(j);
        const double lo = col.minCoeff(), hi = col.maxCoeff();
        if (!(hi > lo)) continue;
        const Eigen::ArrayXd z = (col.array() - lo) / (hi - lo);
        const double var = (z - z.mean()).square().mean();
        if (var >= threshold) keep.push_back(static_cast<std::size_t>(j));
    }
    return keep;
}

PruneResult correlation_prune(const Eigen::MatrixXd& X, double threshold) {
    PruneResult out;
    // Unit-norm centered columns; zero-variance columns stay all-zero.
    Eigen::MatrixXd Z = X.rowwise() - X.colwise().mean();
    std::vector<bool> flat(static_cast<std::size_t>(X.cols()), false);
    for (Eigen::Index j = 0; j < Z.cols(); ++j) {
        const double norm = Z.col(j).norm();
        if (norm <= 1e-12 * (1.0 + X.col(j).cwiseAbs().maxCoeff())) {
            Z.col(j).setZero();
            flat[static_cast<std::size_t>(j)] = true;
        } else {
            Z.col(j) /= norm;
        }
    }
    for (Eigen::Index j = 0; j < Z.cols(); ++j) {
        if (flat[static_cast<std::size_t>(j)]) {
            out.warnings.push_back("column " + std::to_string(j) +
                                   " has zero variance; treated as uncorrelated and retained");
            out.retained.push_back(static_cast<std::size_t>(j));
            continue;
        }
        bool redundant = false;
        for (std::size_t k : out.retained)
            if (std::abs(Z.col(j).dot(Z.col(static_cast<Eigen::Index>(k)))) > threshold) {
                redundant = true;
                break;
            }
        if (!redundant) out.retained.push_back(static_cast<std::size_t>(j));
    }
    return out;
}

FeatureMatrix prefilter(const FeatureMatrix& X, const SelectionConfig& cfg, std::vector<std::string>* warnings) {
    const auto var_keep = variance_filter(X.values, cfg.variance_threshold);
    const FeatureMatrix after_var = X.select_columns(var_keep);
    const auto pruned = correlation_prune(after_var.values, cfg.correlation_threshold);
    if (warnings)
        for (const auto& w : pruned.warnings) warnings->push_back(w);
    return after_var.select_columns(pruned.retained);
}

std::vector<std::size_t> SelectionResult::top_columns(std::size_t n) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < std::min(n, ranked.size()); ++i) out.push_back(ranked[i].column);
    return out;
}

nlohmann::json SelectionResult::to_json() const {
    nlohmann::json j;
    j["criterion"] = to_string(criterion);
    j["ranked"] = nlohmann::json::array();
    for (const auto& r : ranked) j["ranked"].push_back({{"name", r.name.str()}, {"score", r.score}});
    j["iterations"] = nlohmann::json::array();
    for (const auto& it : iterations) {
        nlohmann::json kept = nlohmann::json::array();
        for (const auto& f : it.retained) kept.push_back({{"name", columns.at(f.column).str()}, {"abs_coef", f.abs_coef}});
        j["iterations"].push_back({{"repeat", it.repeat},
                                   {"fold", it.fold},
                                   {"lambda", it.lambda},
                                   {"fallback", it.fallback},
                                   {"retained", std::move(kept)}});
    }
    return j;
}

std::vector<IterationRecord> lasso_iterations(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                              const FoldPlan& plan, const SelectionConfig& cfg) {
    if (X.rows() != y.size()) throw InvalidArgument("selection: X and y row counts differ");
    if (static_cast<std::size_t>(X.rows()) != plan.n_samples)
        throw InvalidArgument("selection: fold plan was made for a different sample count");
    if (X.cols() < cfg.k_nonzero)
        throw InvalidArgument("selection needs at least " + std::to_string(cfg.k_nonzero) + " columns, only " +
                              std::to_string(X.cols()) + " survive filtering (short by " +
                              std::to_string(cfg.k_nonzero - X.cols()) + ")");
    if (cfg.top_per_iteration > cfg.k_nonzero) throw InvalidArgument("top_per_iteration exceeds k_nonzero");

    std::vector<IterationRecord> records(plan.n_iterations());
    parallel_for(records.size(), cfg.threads, [&](std::size_t it) {
        const std::size_t repeat = it / plan.n_folds, fold = it % plan.n_folds;
        const auto rows = plan.train_rows(repeat, fold);
        Eigen::MatrixXd Xt(static_cast<Eigen::Index>(rows.size()), X.cols());
        Eigen::VectorXd yt(static_cast<Eigen::Index>(rows.size()));
        for (std::size_t r = 0; r < rows.size(); ++r) {
            Xt.row(static_cast<Eigen::Index>(r)) = X.row(static_cast<Eigen::Index>(rows[r]));
            yt[static_cast<Eigen::Index>(r)] = y[static_cast<Eigen::Index>(rows[r])];
        }
        const Eigen::MatrixXd Xs = Standardizer::fit(Xt).apply(Xt);
        const Eigen::VectorXd yc = yt.array() - yt.mean();
        const LassoFit fit = lasso_k_nonzero(Xs, yc, cfg.k_nonzero, cfg.lasso);

        IterationRecord rec{repeat, fold, fit.lambda, fit.n_nonzero, fit.fallback, {}};
        for (Eigen::Index j = 0; j < fit.coefficients.size(); ++j)
            if (fit.coefficients[j] != 0.0)
                rec.retained.push_back({static_cast<std::size_t>(j), std::abs(fit.coefficients[j])});
        std::stable_sort(rec.retained.begin(), rec.retained.end(),
                         [](const auto& a, const auto& b) { return a.abs_coef > b.abs_coef; });
        if (rec.retained.size() > static_cast<std::size_t>(cfg.top_per_iteration))
            rec.retained.resize(static_cast<std::size_t>(cfg.top_per_iteration));
        records[it] = std::move(rec);
    });
    return records;
}

SelectionResult rank_features(const std::vector<IterationRecord>& iterations, const std::vector<ColumnName>& columns,
                              Criterion criterion, const SelectionConfig& cfg) {
    if (iterations.empty()) throw InvalidArgument("ranking needs at least one iteration");
    const std::size_t p = columns.size();
    std::vector<double> abs_sum(p, 0.0);
    std::vector<int> count(p, 0);
    for (const auto& it : iterations)
        for (const auto& f : it.retained) {
            abs_sum.at(f.column) += f.abs_coef;
            count.at(f.column) += 1;
        }
    const double denom = static_cast<double>(iterations.size());

    std::vector<std::size_t> candidates;
    for (std::size_t j = 0; j < p; ++j)
        if (count[j] > 0) candidates.push_back(j);
    std::sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
        if (criterion == Criterion::X_cnt && count[a] != count[b]) return count[a] > count[b];
        if (abs_sum[a] != abs_sum[b]) return abs_sum[a] > abs_sum[b];
        return a < b;
    });
    if (candidates.size() > static_cast<std::size_t>(cfg.n_ranked)) candidates.resize(static_cast<std::size_t>(cfg.n_ranked));

    SelectionResult out;
    out.criterion = criterion;
    out.iterations = iterations;
    out.columns = columns;
    for (std::size_t j : candidates) {
        const double mean_abs = abs_sum[j] / denom;
        out.ranked.push_back(
            {j, columns[j], criterion == Criterion::X_cnt ? static_cast<double>(count[j]) : mean_abs, count[j], mean_abs});
    }
    return out;
}

SelectionResult select_features(const FeatureMatrix& X, const Eigen::VectorXd& y, Criterion criterion,
                                const FoldPlan& plan, const SelectionConfig& cfg) {
    return rank_features(lasso_iterations(X.values, y, plan, cfg), X.columns, criterion, cfg);
}

}  // namespace omics
