#include "omics/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "omics/error.hpp"
#include "omics/io_util.hpp"
#include "omics/parallel.hpp"
#include "omics/rng.hpp"

namespace omics {

namespace {

constexpr std::uint64_t kSelectionStream = 1;
constexpr std::uint64_t kGridStream = 2;

std::string cell_label(std::size_t repeat, std::size_t fold) {
    return "repeat " + std::to_string(repeat) + " fold " + std::to_string(fold);
}

Eigen::VectorXd take(const Eigen::VectorXd& y, const std::vector<std::size_t>& rows) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) out[static_cast<Eigen::Index>(i)] = y[static_cast<Eigen::Index>(rows[i])];
    return out;
}

void check_inputs(const FeatureMatrix& X, const Eigen::VectorXd& y, const FoldPlan& plan) {
    if (X.rows() != y.size()) throw InvalidArgument("evaluation: X and y row counts differ");
    if (static_cast<std::size_t>(X.rows()) != plan.n_samples)
        throw InvalidArgument("evaluation: fold plan was made for a different sample count");
}

}  // namespace

Interval ci95(const std::vector<double>& values, double* mean_out) {
    const std::size_t n = values.size();
    if (n < 2) throw InvalidArgument("ci95: need at least 2 values");
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double half = 1.96 * std::sqrt(ss / static_cast<double>(n - 1)) / std::sqrt(static_cast<double>(n));
    if (mean_out) *mean_out = mean;
    return {mean - half, mean + half};
}

const GridSpec& EvaluationConfig::grid_for(KernelKind k) const {
    static const GridSpec kDefault{};
    const auto it = grids.find(k);
    return it == grids.end() ? kDefault : it->second;
}

nlohmann::json EvaluationReport::to_json() const {
    nlohmann::json samples_j = nlohmann::json::array();
    for (const auto& s : samples)
        samples_j.push_back({{"repeat", s.repeat},
                             {"fold", s.fold},
                             {"r2", s.r2},
                             {"rrmse", s.rrmse},
                             {"n_test", s.n_test},
                             {"hyperparams", s.hyperparams.to_json()},
                             {"features", s.features}});
    nlohmann::json preds = nlohmann::json::array();
    for (const auto& p : predictions)
        preds.push_back({{"sample_id", p.sample_id},
                         {"actual", p.actual},
                         {"predicted", p.predicted},
                         {"repeat", p.repeat},
                         {"fold", p.fold}});
    return {{"scenario", scenario},
            {"criterion", to_string(criterion)},
            {"kernel", to_string(kernel)},
            {"n_features", n_features},
            {"mean_r2", mean_r2},
            {"mean_rrmse", mean_rrmse},
            {"ci95_r2", {ci95_r2.lo, ci95_r2.hi}},
            {"ci95_rrmse", {ci95_rrmse.lo, ci95_rrmse.hi}},
            {"samples", samples_j},
            {"predictions", preds}};
}

EvaluationReport EvaluationReport::from_json(const nlohmann::json& j) {
    EvaluationReport r;
    try {
        r.scenario = j.at("scenario").get<std::string>();
        r.criterion = parse_criterion(j.at("criterion").get<std::string>());
        r.kernel = parse_kernel(j.at("kernel").get<std::string>());
        r.n_features = j.at("n_features").get<int>();
        r.mean_r2 = j.at("mean_r2").get<double>();
        r.mean_rrmse = j.at("mean_rrmse").get<double>();
        r.ci95_r2 = {j.at("ci95_r2").at(0).get<double>(), j.at("ci95_r2").at(1).get<double>()};
        r.ci95_rrmse = {j.at("ci95_rrmse").at(0).get<double>(), j.at("ci95_rrmse").at(1).get<double>()};
        for (const auto& s : j.at("samples")) {
            MetricSample m;
            m.repeat = s.at("repeat").get<std::size_t>();
            m.fold = s.at("fold").get<std::size_t>();
            m.r2 = s.at("r2").get<double>();
            m.rrmse = s.at("rrmse").get<double>();
            m.n_test = s.at("n_test").get<std::size_t>();
            m.hyperparams = SVRHyperparams::from_json(s.at("hyperparams"));
            m.features = s.at("features").get<std::vector<std::string>>();
            r.samples.push_back(std::move(m));
        }
        if (j.contains("predictions"))
            for (const auto& p : j.at("predictions"))
                r.predictions.push_back({p.at("sample_id").get<std::string>(), p.at("actual").get<double>(),
                                         p.at("predicted").get<double>(), p.at("repeat").get<std::size_t>(),
                                         p.at("fold").get<std::size_t>()});
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("evaluation report: ") + e.what());
    }
    return r;
}

OuterSelections outer_selections(const FeatureMatrix& X, const Eigen::VectorXd& y, const FoldPlan& plan,
                                 const EvaluationConfig& cfg) {
    check_inputs(X, y, plan);
    OuterSelections out;
    out.per_cell.resize(plan.n_iterations());
    SelectionConfig inner = cfg.selection;
    inner.threads = 1;
    parallel_for(plan.n_iterations(), cfg.threads, [&](std::size_t cell) {
        const std::size_t r = cell / plan.n_folds, f = cell % plan.n_folds;
        try {
            const auto rows = plan.train_rows(r, f);
            const FoldPlan nested =
                make_fold_plan(rows.size(), cfg.inner_folds, cfg.inner_repeats, derive_seed(plan.seed, cell, kSelectionStream));
            out.per_cell[cell] = lasso_iterations(X.select_rows(rows).values, take(y, rows), nested, inner);
        } catch (...) {
            rethrow_with_context(cell_label(r, f) + ": selection");
        }
    });
    return out;
}

EvaluationReport evaluate_with_selections(const FeatureMatrix& X, const Eigen::VectorXd& y, const FoldPlan& plan,
                                          const OuterSelections& sel, Criterion criterion, KernelKind kernel,
                                          int n_features, const EvaluationConfig& cfg) {
    check_inputs(X, y, plan);
    if (n_features < 1 || n_features > cfg.selection.n_ranked)
        throw InvalidArgument("n_features must be in 1.." + std::to_string(cfg.selection.n_ranked));
    if (sel.per_cell.size() != plan.n_iterations()) throw InvalidArgument("evaluation: selection cache does not match plan");

    const std::size_t n_cells = plan.n_iterations();
    std::vector<MetricSample> samples(n_cells);
    std::vector<std::vector<PredictionRecord>> preds(n_cells);
    const GridSpec& grid = cfg.grid_for(kernel);
    GridSearchOptions gopts = cfg.grid;
    gopts.threads = 1;

    parallel_for(n_cells, cfg.threads, [&](std::size_t cell) {
        const std::size_t r = cell / plan.n_folds, f = cell % plan.n_folds;
        try {
            const SelectionResult ranked = rank_features(sel.per_cell[cell], X.columns, criterion, cfg.selection);
            // Fewer ranked features than requested happens when the Lasso
            // support stays small in every iteration; use all of them.
            if (ranked.ranked.empty()) throw InvalidArgument("no features were ranked");
            const auto cols = ranked.top_columns(std::min<std::size_t>(static_cast<std::size_t>(n_features), ranked.ranked.size()));
            const auto train = plan.train_rows(r, f);
            const auto& test = plan.test_rows(r, f);
            const FeatureMatrix Xs = X.select_columns(cols);
            const Eigen::MatrixXd Xtr = Xs.select_rows(train).values;
            const Eigen::MatrixXd Xte = Xs.select_rows(test).values;
            const Eigen::VectorXd ytr = take(y, train), yte = take(y, test);

            const GridSearchResult gs = grid_search(Xtr, ytr, kernel, grid, derive_seed(plan.seed, cell, kGridStream), gopts);
            const SVRModel model = svr_train(Xtr, ytr, gs.best, gopts.solver);
            const Eigen::VectorXd yhat = model.predict(Xte);

            MetricSample& s = samples[cell];
            s.repeat = r;
            s.fold = f;
            s.r2 = r_squared(yte, yhat);
            s.rrmse = rrmse(yte, yhat, cfg.rrmse_denominator);
            s.n_test = test.size();
            s.hyperparams = gs.best;
            for (auto c : cols) s.features.push_back(X.columns[c].str());
            for (std::size_t i = 0; i < test.size(); ++i)
                preds[cell].push_back({X.sample_ids[test[i]], yte[static_cast<Eigen::Index>(i)],
                                       yhat[static_cast<Eigen::Index>(i)], r, f});
        } catch (...) {
            rethrow_with_context(cell_label(r, f));
        }
    });

    EvaluationReport rep;
    rep.criterion = criterion;
    rep.kernel = kernel;
    rep.n_features = n_features;
    rep.samples = std::move(samples);
    for (auto& p : preds) rep.predictions.insert(rep.predictions.end(), p.begin(), p.end());
    std::vector<double> r2s, rr;
    for (const auto& s : rep.samples) {
        r2s.push_back(s.r2);
        rr.push_back(s.rrmse);
    }
    rep.ci95_r2 = ci95(r2s, &rep.mean_r2);
    rep.ci95_rrmse = ci95(rr, &rep.mean_rrmse);
    return rep;
}

EvaluationReport repeated_cv_evaluate(const FeatureMatrix& X, const Eigen::VectorXd& y, Criterion criterion,
                                      KernelKind kernel, int n_features, const FoldPlan& plan,
                                      const EvaluationConfig& cfg) {
    const OuterSelections sel = outer_selections(X, y, plan, cfg);
    return evaluate_with_selections(X, y, plan, sel, criterion, kernel, n_features, cfg);
}

std::vector<EvaluationReport> sweep_evaluate(const FeatureMatrix& X, const Eigen::VectorXd& y, Criterion criterion,
                                             KernelKind kernel, const std::vector<int>& n_features,
                                             const FoldPlan& plan, const EvaluationConfig& cfg,
                                             const OuterSelections* cached) {
    OuterSelections local;
    if (!cached) {
        local = outer_selections(X, y, plan, cfg);
        cached = &local;
    }
    std::vector<EvaluationReport> out;
    for (int k : n_features) out.push_back(evaluate_with_selections(X, y, plan, *cached, criterion, kernel, k, cfg));
    return out;
}

BestOf best_of(const std::vector<EvaluationReport>& reports) {
    if (reports.empty()) throw InvalidArgument("best_of: no reports");
    BestOf b;
    for (std::size_t i = 1; i < reports.size(); ++i) {
        if (reports[i].mean_r2 > reports[b.best_r2].mean_r2) b.best_r2 = i;
        if (reports[i].mean_rrmse < reports[b.best_rrmse].mean_rrmse) b.best_rrmse = i;
    }
    return b;
}

std::string sweep_csv(const std::vector<EvaluationReport>& reports) {
    std::ostringstream os;
    os << "n_features,mean_r2,r2_ci_lo,r2_ci_hi,mean_rrmse,rrmse_ci_lo,rrmse_ci_hi\n";
    for (const auto& r : reports)
        os << r.n_features << ',' << format_double(r.mean_r2) << ',' << format_double(r.ci95_r2.lo) << ','
           << format_double(r.ci95_r2.hi) << ',' << format_double(r.mean_rrmse) << ','
           << format_double(r.ci95_rrmse.lo) << ',' << format_double(r.ci95_rrmse.hi) << '\n';
    return os.str();
}

std::string scatter_csv(const EvaluationReport& report) {
    std::ostringstream os;
    os << "sample_id,actual,predicted,repeat,fold\n";
    for (const auto& p : report.predictions)
        os << p.sample_id << ',' << format_double(p.actual) << ',' << format_double(p.predicted) << ',' << p.repeat
           << ',' << p.fold << '\n';
    return os.str();
}

std::string heatmap_csv(const std::vector<std::string>& names, const CorrelationHeatmap& h) {
    if (static_cast<Eigen::Index>(names.size()) != h.r.rows()) throw InvalidArgument("heatmap_csv: name count mismatch");
    std::ostringstream os;
    os << "feature";
    for (const auto& n : names) os << ',' << n;
    os << '\n';
    for (Eigen::Index i = 0; i < h.r.rows(); ++i) {
        os << names[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < h.r.cols(); ++j) os << ',' << format_double(h.r(i, j));
        os << '\n';
    }
    return os.str();
}

std::string effect_size_csv(const EffectSizeTable& t) {
    std::ostringstream os;
    os << "feature,cohens_d,bucket,n_low,n_high\n";
    for (const auto& r : t.rows)
        os << r.feature << ',' << format_double(r.cohens_d) << ",\"" << to_string(r.bucket) << "\"," << r.n_low << ','
           << r.n_high << '\n';
    return os.str();
}

}  // namespace omics
