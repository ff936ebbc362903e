#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include <Eigen/QR>

#include "fixtures.hpp"
#include "omics/error.hpp"
#include "omics/fold_plan.hpp"
#include "omics/lasso.hpp"
#include "omics/rng.hpp"
#include "omics/selection.hpp"
#include "omics/standardizer.hpp"
#include "oracles.hpp"

using namespace omics;

namespace {

FeatureMatrix named(const Eigen::MatrixXd& X) {
    FeatureMatrix m;
    m.values = X;
    for (Eigen::Index i = 0; i < X.rows(); ++i) m.sample_ids.push_back("s" + std::to_string(i));
    for (Eigen::Index j = 0; j < X.cols(); ++j)
        m.columns.push_back({BlockTag::R_init, {"original", Family::firstorder, "f" + std::to_string(j)}});
    return m;
}

Eigen::VectorXd centered(Eigen::VectorXd y) {
    y.array() -= y.mean();
    return y;
}

}  // namespace

TEST_CASE("variance filter") {
    Eigen::MatrixXd X(4, 3);
    X << 5, 0, 1,  //
        5, 1, 2,   //
        5, 0, 3,   //
        5, 1, 4;
    CHECK(variance_filter(X) == std::vector<std::size_t>{1, 2});
    CHECK(variance_filter(X, 0.0) == std::vector<std::size_t>{1, 2});
    // {0,1,0,1} has variance 0.25; {1,2,3,4} normalizes to variance 5/36.
    CHECK(variance_filter(X, 0.25) == std::vector<std::size_t>{1});
    CHECK(variance_filter(X, 0.26).empty());
    CHECK(variance_filter(X, 5.0 / 36.0 - 1e-12) == std::vector<std::size_t>{1, 2});
}

TEST_CASE("correlation prune") {
    const Eigen::MatrixXd base = fixture::gaussian(40, 2, 3);
    Eigen::MatrixXd X(40, 4);
    X << base.col(0), base.col(0), -base.col(0), base.col(1);
    const PruneResult r = correlation_prune(X);
    CHECK(r.retained == std::vector<std::size_t>{0, 3});

    // Two independent columns with |r| about 0.3 both stay.
    Eigen::MatrixXd Y(40, 2);
    Y << base.col(0), 0.3 * base.col(0) + std::sqrt(1 - 0.09) * base.col(1);
    const Eigen::MatrixXd Z = fixture::standardized(Y);
    const double rho = Z.col(0).dot(Z.col(1)) / 40.0;
    CHECK(std::abs(rho) < 0.95);
    CHECK(correlation_prune(Y).retained.size() == 2);

    Eigen::MatrixXd C(40, 2);
    C << Eigen::VectorXd::Constant(40, 2.0), base.col(0);
    const PruneResult c = correlation_prune(C);
    CHECK(c.retained == std::vector<std::size_t>{0, 1});
    CHECK(c.warnings.size() == 1);
}

TEST_CASE("prefilter keeps names aligned") {
    Eigen::MatrixXd X = fixture::gaussian(30, 5, 9);
    X.col(1).setConstant(4.0);
    X.col(3) = 2.0 * X.col(0);
    const FeatureMatrix out = prefilter(named(X), SelectionConfig{});
    REQUIRE(out.cols() == 3);
    CHECK(out.columns[0].feature.feature == "f0");
    CHECK(out.columns[1].feature.feature == "f2");
    CHECK(out.columns[2].feature.feature == "f4");
    CHECK(out.values.col(2) == X.col(4));
}

TEST_CASE("standardizer") {
    Eigen::MatrixXd X = fixture::gaussian(20, 3, 1);
    X.col(2).setConstant(7.0);
    const Standardizer s = Standardizer::fit(X);
    const Eigen::MatrixXd Z = s.apply(X);
    CHECK(std::abs(Z.col(0).mean()) < 1e-12);
    CHECK(std::abs(Z.col(0).squaredNorm() / 20.0 - 1.0) < 1e-12);
    CHECK(Z.col(2).isZero(0.0));
    CHECK(s.constant[2]);
}

TEST_CASE("lasso closed forms") {
    const Eigen::MatrixXd X = fixture::standardized(fixture::gaussian(30, 6, 11));
    const Eigen::VectorXd y = centered(fixture::gaussian_vec(30, 12));
    const double lmax = lasso_lambda_max(X, y);
    const LassoFit zero = lasso_fit(X, y, lmax);
    CHECK(zero.n_nonzero == 0);
    CHECK(zero.coefficients.isZero(0.0));
    CHECK(lasso_fit(X, y, 2 * lmax).n_nonzero == 0);

    // Orthonormal design (X'X = n I): least squares is X'y / n.
    const Eigen::MatrixXd G = fixture::gaussian(30, 4, 5);
    const Eigen::MatrixXd Q = Eigen::HouseholderQR<Eigen::MatrixXd>(G).householderQ() * Eigen::MatrixXd::Identity(30, 4);
    const Eigen::MatrixXd O = Q * std::sqrt(30.0);
    const LassoFit ls = lasso_fit(O, y, 0.0);
    CHECK((ls.coefficients - O.transpose() * y / 30.0).cwiseAbs().maxCoeff() < 1e-9);

    // Univariate soft threshold.
    const Eigen::MatrixXd x1 = X.col(0);
    const double b = x1.col(0).dot(y) / 30.0;
    const double lam = std::abs(b) / 3.0;
    const LassoFit f1 = lasso_fit(x1, y, lam);
    CHECK(f1.coefficients[0] == doctest::Approx((b > 0 ? 1 : -1) * (std::abs(b) - lam)).epsilon(1e-12));

    CHECK_THROWS_AS(lasso_fit(X, y, -1.0), InvalidArgument);
    Eigen::MatrixXd bad = X;
    bad(0, 0) = std::nan("");
    CHECK_THROWS_AS(lasso_fit(bad, y, 0.1), InvalidArgument);
}

TEST_CASE("property: lasso objective is monotone and KKT holds") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const Eigen::Index n = 15 + static_cast<Eigen::Index>(seed % 20), p = 3 + static_cast<Eigen::Index>(seed % 30);
        const Eigen::MatrixXd X = fixture::standardized(fixture::gaussian(n, p, seed));
        const Eigen::VectorXd y = centered(X.leftCols(2) * Eigen::Vector2d(1.0, -0.5) + 0.5 * fixture::gaussian_vec(n, seed + 100));
        LassoOptions o;
        o.record_objective = true;
        o.tolerance = 1e-10;
        const double lam = lasso_lambda_max(X, y) * (0.05 + 0.1 * static_cast<double>(seed % 5));
        const LassoFit f = lasso_fit(X, y, lam, o);
        for (std::size_t i = 1; i < f.objective_trace.size(); ++i)
            CHECK(f.objective_trace[i] <= f.objective_trace[i - 1] + 1e-12);
        CHECK(f.converged);
        const Eigen::VectorXd g = X.transpose() * (y - X * f.coefficients) / static_cast<double>(n);
        for (Eigen::Index j = 0; j < p; ++j) {
            if (f.coefficients[j] == 0.0) CHECK(std::abs(g[j]) <= lam + 1e-5);
            else CHECK(std::abs(std::abs(g[j]) - lam) <= 1e-5);
        }
        CHECK(f.n_nonzero == static_cast<int>((f.coefficients.array() != 0.0).count()));
    }
}

TEST_CASE("property: lasso matches the projected-gradient oracle") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Eigen::Index n = 8 + static_cast<Eigen::Index>(seed % 13), p = 2 + static_cast<Eigen::Index>(seed % 11);
        const Eigen::MatrixXd X = oracle::standardize(fixture::gaussian(n, p, 500 + seed));
        const Eigen::VectorXd y = centered(fixture::gaussian_vec(n, 900 + seed));
        const double lam = lasso_lambda_max(X, y) * 0.2;
        LassoOptions o;
        o.tolerance = 1e-12;
        const LassoFit f = lasso_fit(X, y, lam, o);
        const Eigen::VectorXd ref = oracle::lasso(X, y, lam);
        CHECK(std::abs(lasso_objective(X, y, f.coefficients, lam) - oracle::lasso_objective(X, y, ref, lam)) < 1e-4);
    }
}

TEST_CASE("lasso_k_nonzero") {
    const Eigen::MatrixXd X = fixture::standardized(fixture::gaussian(60, 8, 21));
    const Eigen::VectorXd y = centered(X * Eigen::VectorXd::LinSpaced(8, 1.0, 0.2) + 0.1 * fixture::gaussian_vec(60, 22));
    for (int k = 1; k <= 8; ++k) {
        const LassoFit f = lasso_k_nonzero(X, y, k);
        CHECK(f.n_nonzero == k);
    }
    CHECK_THROWS_AS(lasso_k_nonzero(X, y, 0), InvalidArgument);

    // One predictive column among orthogonal noise survives at k = 1.
    Eigen::MatrixXd Z = fixture::standardized(fixture::gaussian(50, 6, 31));
    const Eigen::VectorXd target = Z.col(4);
    const LassoFit one = lasso_k_nonzero(Z, target, 1);
    CHECK(one.n_nonzero == 1);
    CHECK(one.coefficients[4] != 0.0);

    // 69 x 500 with k = 20.
    const Eigen::MatrixXd W = fixture::standardized(fixture::gaussian(69, 500, 41));
    const Eigen::VectorXd yw = centered(W.leftCols(5).rowwise().sum() + fixture::gaussian_vec(69, 42));
    const LassoFit f20 = lasso_k_nonzero(W, yw, 20);
    CHECK(f20.n_nonzero == 20);
}

TEST_CASE("fold plan") {
    for (std::size_t n : {5u, 11u, 69u}) {
        const FoldPlan a = make_fold_plan(n, 5, 10, 42);
        const FoldPlan b = make_fold_plan(n, 5, 10, 42);
        CHECK(a.assignments == b.assignments);
        CHECK(a.n_iterations() == 50);
        for (std::size_t r = 0; r < 10; ++r) {
            std::vector<std::size_t> all;
            std::size_t lo = n, hi = 0;
            for (std::size_t f = 0; f < 5; ++f) {
                const auto& t = a.test_rows(r, f);
                CHECK(std::is_sorted(t.begin(), t.end()));
                lo = std::min(lo, t.size());
                hi = std::max(hi, t.size());
                all.insert(all.end(), t.begin(), t.end());
                const auto tr = a.train_rows(r, f);
                CHECK(tr.size() + t.size() == n);
            }
            CHECK(hi - lo <= 1);
            std::sort(all.begin(), all.end());
            std::vector<std::size_t> want(n);
            for (std::size_t i = 0; i < n; ++i) want[i] = i;
            CHECK(all == want);
        }
    }
    CHECK(make_fold_plan(69, 5, 10, 1).assignments != make_fold_plan(69, 5, 10, 2).assignments);
    CHECK_THROWS(make_fold_plan(3, 5, 1, 0));
    CHECK_THROWS(make_fold_plan(10, 1, 1, 0));

    // Grouped plan keeps groups together.
    std::vector<std::size_t> groups;
    for (std::size_t i = 0; i < 30; ++i) groups.push_back(i / 2);
    const FoldPlan g = make_grouped_fold_plan(groups, 5, 3, 7);
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t f = 0; f < 5; ++f) {
            std::set<std::size_t> rows(g.test_rows(r, f).begin(), g.test_rows(r, f).end());
            for (std::size_t i : rows) CHECK(rows.count(i ^ 1u) == 1);
        }
}

TEST_CASE("rng and seed derivation are stable") {
    Rng a(5), b(5);
    for (int i = 0; i < 10; ++i) CHECK(a.next() == b.next());
    CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
    CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 2));
    Rng c(9);
    for (int i = 0; i < 1000; ++i) {
        const double u = c.uniform();
        CHECK((u >= 0.0 && u < 1.0));
        CHECK(c.below(7) < 7);
    }
}

TEST_CASE("select_features: exact predictor ranks first under both criteria") {
    const Eigen::MatrixXd X = fixture::gaussian(69, 50, 77);
    const Eigen::VectorXd y = X.col(13);
    const FoldPlan plan = make_fold_plan(69, 5, 10, 2024);
    for (Criterion c : {Criterion::X_cnt, Criterion::X_abs}) {
        const SelectionResult r = select_features(named(X), y, c, plan);
        REQUIRE(!r.ranked.empty());
        CHECK(r.ranked.size() <= 15);
        CHECK(r.ranked[0].column == 13);
        CHECK(r.ranked[0].count == 50);
        CHECK(r.iterations.size() == 50);
        for (std::size_t i = 1; i < r.ranked.size(); ++i) CHECK(r.ranked[i].score <= r.ranked[i - 1].score);
        // An exact predictor leaves nothing for other columns to explain,
        // so the path never reaches 20 and the fallback fit is used.
        for (const auto& it : r.iterations) {
            CHECK(it.retained.size() <= 15);
            CHECK((it.n_nonzero == 20 || it.fallback));
        }
        for (const auto& f : r.ranked) {
            if (c == Criterion::X_cnt) {
                CHECK(f.score == std::floor(f.score));
                CHECK((f.score >= 1 && f.score <= 50));
            } else {
                CHECK(f.score >= 0.0);
            }
        }
        const auto j = r.to_json();
        CHECK(j.at("iterations").size() == 50);
        CHECK(j.at("ranked")[0].at("name") == "R_init:original:firstorder:f13");
    }
    // Purity: repeated and multi-threaded runs agree.
    SelectionConfig par;
    par.threads = 4;
    const auto a = select_features(named(X), y, Criterion::X_abs, plan);
    const auto b = select_features(named(X), y, Criterion::X_abs, plan, par);
    CHECK(a.to_json() == b.to_json());

    CHECK_THROWS_AS(select_features(named(X.leftCols(10)), y, Criterion::X_cnt, plan), InvalidArgument);
}

TEST_CASE("select_features: noisy planted model fills every iteration") {
    const Eigen::MatrixXd X = fixture::gaussian(69, 60, 78);
    const Eigen::VectorXd y = X.col(2) + 0.8 * X.col(40) + 0.5 * fixture::gaussian_vec(69, 79);
    const SelectionResult r = select_features(named(X), y, Criterion::X_cnt, make_fold_plan(69, 5, 10, 3));
    for (const auto& it : r.iterations) {
        CHECK(it.retained.size() == 15);
        CHECK(it.n_nonzero == 20);
    }
    CHECK(r.ranked.size() == 15);
    CHECK(r.ranked[0].count == 50);
    CHECK(r.ranked[1].count == 50);
}

TEST_CASE("rank_features scoring and tie breaks") {
    std::vector<ColumnName> cols;
    for (int j = 0; j < 4; ++j) cols.push_back({BlockTag::D_init, {"original", Family::glcm, "c" + std::to_string(j)}});
    std::vector<IterationRecord> its(2);
    its[0].retained = {{2, 0.8}, {1, 0.5}, {0, 0.1}};
    its[1].retained = {{1, 0.4}, {0, 0.5}};
    SelectionConfig cfg;
    const SelectionResult cnt = rank_features(its, cols, Criterion::X_cnt, cfg);
    REQUIRE(cnt.ranked.size() == 3);
    // Columns 0 and 1 both appear twice; 1 has the larger |coef| sum.
    CHECK(cnt.ranked[0].column == 1);
    CHECK(cnt.ranked[1].column == 0);
    CHECK(cnt.ranked[2].column == 2);
    CHECK(cnt.ranked[0].score == 2.0);
    const SelectionResult abs = rank_features(its, cols, Criterion::X_abs, cfg);
    CHECK(abs.ranked[0].column == 1);
    CHECK(abs.ranked[0].score == doctest::Approx(0.45));
    CHECK(abs.ranked[1].column == 2);
    CHECK(abs.ranked[1].score == doctest::Approx(0.4));
    CHECK(abs.ranked[2].column == 0);
    CHECK(abs.ranked[2].score == doctest::Approx(0.3));
    // Never-retained column 3 is absent.
    for (const auto& f : abs.ranked) CHECK(f.column != 3);
}
