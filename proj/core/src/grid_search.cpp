#include "omics/grid_search.hpp"

#include <cmath>
#include <limits>

#include "omics/error.hpp"
#include "omics/fold_plan.hpp"
#include "omics/metrics.hpp"
#include "omics/parallel.hpp"

namespace omics {

namespace {

bool uses_gamma(KernelKind k) { return k != KernelKind::linear; }
bool uses_degree(KernelKind k) { return k == KernelKind::polynomial; }
bool uses_coef0(KernelKind k) { return k == KernelKind::polynomial || k == KernelKind::sigmoid; }

Eigen::MatrixXd take_rows(const Eigen::MatrixXd& X, const std::vector<std::size_t>& rows) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), X.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = X.row(static_cast<Eigen::Index>(rows[i]));
    return out;
}

Eigen::VectorXd take_rows(const Eigen::VectorXd& y, const std::vector<std::size_t>& rows) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) out[static_cast<Eigen::Index>(i)] = y[static_cast<Eigen::Index>(rows[i])];
    return out;
}

}  // namespace

void GridSpec::validate(KernelKind kind) const {
    if (C.empty() || epsilon.empty()) throw InvalidArgument("grid: C and epsilon lists must be nonempty");
    if (uses_gamma(kind) && gamma.empty()) throw InvalidArgument("grid: gamma list is empty for " + to_string(kind));
    if (uses_degree(kind) && degree.empty()) throw InvalidArgument("grid: degree list is empty");
    if (uses_coef0(kind) && coef0.empty()) throw InvalidArgument("grid: coef0 list is empty for " + to_string(kind));
}

std::vector<SVRHyperparams> GridSpec::expand(KernelKind kind, Eigen::Index n_features) const {
    validate(kind);
    const std::vector<GammaValue> gammas = uses_gamma(kind) ? gamma : std::vector<GammaValue>{{1.0, false}};
    const std::vector<int> degrees = uses_degree(kind) ? degree : std::vector<int>{3};
    const std::vector<double> coefs = uses_coef0(kind) ? coef0 : std::vector<double>{0.0};
    std::vector<SVRHyperparams> out;
    for (double c : C)
        for (double e : epsilon)
            for (const auto& g : gammas)
                for (int d : degrees)
                    for (double c0 : coefs) {
                        SVRHyperparams hp{c, e, KernelSpec{kind, g.resolve(n_features), d, c0}};
                        hp.validate();
                        out.push_back(hp);
                    }
    return out;
}

nlohmann::json GridSpec::to_json() const {
    nlohmann::json g = nlohmann::json::array();
    for (const auto& v : gamma) {
        if (v.inverse_dim) g.push_back("1/d");
        else g.push_back(v.value);
    }
    return {{"C", C}, {"epsilon", epsilon}, {"gamma", g}, {"degree", degree}, {"coef0", coef0}};
}

GridSpec GridSpec::from_json(const nlohmann::json& j) {
    GridSpec g;
    if (j.contains("C")) g.C = j.at("C").get<std::vector<double>>();
    if (j.contains("epsilon")) g.epsilon = j.at("epsilon").get<std::vector<double>>();
    if (j.contains("degree")) g.degree = j.at("degree").get<std::vector<int>>();
    if (j.contains("coef0")) g.coef0 = j.at("coef0").get<std::vector<double>>();
    if (j.contains("gamma")) {
        g.gamma.clear();
        for (const auto& v : j.at("gamma")) {
            if (v.is_string()) {
                if (v.get<std::string>() != "1/d") throw InvalidArgument("grid: gamma string must be \"1/d\"");
                g.gamma.push_back({0.0, true});
            } else {
                g.gamma.push_back({v.get<double>(), false});
            }
        }
    }
    return g;
}

GridSearchResult grid_search(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, KernelKind kind,
                             const GridSpec& grid, std::uint64_t seed, const GridSearchOptions& opts) {
    if (X.rows() != y.size()) throw InvalidArgument("grid_search: X and y row counts differ");
    const std::vector<SVRHyperparams> points = grid.expand(kind, X.cols());
    const FoldPlan plan = make_fold_plan(static_cast<std::size_t>(X.rows()), opts.n_folds, 1, seed);

    struct Split {
        Eigen::MatrixXd Xtr, Xte;
        Eigen::VectorXd ytr, yte;
    };
    std::vector<Split> splits;
    for (std::size_t f = 0; f < opts.n_folds; ++f) {
        const auto tr = plan.train_rows(0, f);
        const auto& te = plan.test_rows(0, f);
        splits.push_back({take_rows(X, tr), take_rows(X, te), take_rows(y, tr), take_rows(y, te)});
    }

    const std::size_t n_cells = points.size() * splits.size();
    std::vector<double> cell_r2(n_cells, 0.0);
    parallel_for(n_cells, opts.threads, [&](std::size_t cell) {
        const auto& hp = points[cell / splits.size()];
        const auto& s = splits[cell % splits.size()];
        double r2 = -std::numeric_limits<double>::infinity();
        try {
            const SVRModel m = svr_train(s.Xtr, s.ytr, hp, opts.solver);
            const double v = r_squared(s.yte, m.predict(s.Xte));
            if (std::isfinite(v)) r2 = v;
        } catch (const std::exception&) {
            // Failed point; scores -inf.
        }
        cell_r2[cell] = r2;
    });

    GridSearchResult res;
    res.scores.reserve(points.size());
    for (std::size_t p = 0; p < points.size(); ++p) {
        double sum = 0.0;
        for (std::size_t f = 0; f < splits.size(); ++f) sum += cell_r2[p * splits.size() + f];
        res.scores.push_back({points[p], sum / static_cast<double>(splits.size())});
    }

    std::size_t best = 0;
    for (std::size_t p = 1; p < res.scores.size(); ++p) {
        const auto& a = res.scores[p];
        const auto& b = res.scores[best];
        if (a.mean_r2 > b.mean_r2) {
            best = p;
        } else if (a.mean_r2 == b.mean_r2) {
            if (a.hyperparams.C < b.hyperparams.C ||
                (a.hyperparams.C == b.hyperparams.C && a.hyperparams.kernel.gamma < b.hyperparams.kernel.gamma))
                best = p;
        }
    }
    res.best = res.scores[best].hyperparams;
    res.best_score = res.scores[best].mean_r2;
    return res;
}

}  // namespace omics
