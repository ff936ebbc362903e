#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/QR>

#include "fixtures.hpp"
#include "omics/error.hpp"
#include "omics/evaluation.hpp"
#include "omics/metrics.hpp"
#include "omics/statistics.hpp"

using namespace omics;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out[i++] = x;
    return out;
}

FeatureMatrix named(const Eigen::MatrixXd& X) {
    FeatureMatrix m;
    m.values = X;
    for (Eigen::Index i = 0; i < X.rows(); ++i) m.sample_ids.push_back("s" + std::to_string(i));
    for (Eigen::Index j = 0; j < X.cols(); ++j)
        m.columns.push_back({BlockTag::D_delta, {"original", Family::gldm, "g" + std::to_string(j)}});
    return m;
}

EvaluationConfig fast_config() {
    EvaluationConfig cfg;
    cfg.inner_repeats = 1;
    GridSpec g;
    g.C = {10.0};
    g.epsilon = {0.01};
    cfg.grids[KernelKind::linear] = g;
    return cfg;
}

}  // namespace

TEST_CASE("r_squared fixtures") {
    const Eigen::VectorXd y = vec({1, 2, 3});
    CHECK(r_squared(y, y) == 1.0);
    CHECK(r_squared(y, Eigen::VectorXd::Constant(3, 2.0)) == 0.0);
    CHECK(std::abs(r_squared(y, vec({1, 2, 2})) - 0.5) < 1e-12);
    CHECK_THROWS_AS(r_squared(vec({1, 1}), vec({1, 2})), NumericalError);
    CHECK_THROWS_AS(r_squared(vec({1, 2}), vec({1, 2, 3})), InvalidArgument);
    // Joint permutation leaves R^2 unchanged.
    const Eigen::VectorXd a = fixture::gaussian_vec(30, 1), b = fixture::gaussian_vec(30, 2);
    const Eigen::VectorXd ra = a.reverse(), rb = b.reverse();
    CHECK(std::abs(r_squared(a, b) - r_squared(ra, rb)) < 1e-12);
}

TEST_CASE("rrmse fixtures") {
    CHECK(rrmse(vec({1, 2}), vec({1, 2})) == 0.0);
    CHECK(std::abs(rrmse(vec({1, 1}), vec({2, 2})) - std::sqrt(1.0 / 8.0)) < 1e-12);
    CHECK(std::abs(rrmse(vec({2, 2}), vec({1, 1})) - std::sqrt(1.0 / 2.0)) < 1e-12);
    CHECK(rrmse(vec({1, 1}), vec({2, 2})) != rrmse(vec({2, 2}), vec({1, 1})));
    CHECK_THROWS_AS(rrmse(vec({1, 2}), vec({0, 0})), NumericalError);
    CHECK(std::abs(rrmse(vec({1, 1}), vec({2, 2}), RrmseDenominator::mean) - 0.5) < 1e-12);
}

TEST_CASE("pearson fixtures") {
    const Eigen::VectorXd a = vec({1, 2, 3});
    CHECK(pearson_r(a, (2 * a).array() + 1) == doctest::Approx(1.0));
    CHECK(pearson_r(a, -a) == doctest::Approx(-1.0));
    CHECK(std::abs(pearson_r(a, vec({1, 3, 2})) - 0.5) < 1e-12);
    CHECK_THROWS_AS(pearson_r(a, vec({4, 4, 4})), NumericalError);
}

TEST_CASE("feature-label correlations and heatmap") {
    const Eigen::VectorXd y = fixture::gaussian_vec(40, 3);
    Eigen::MatrixXd X(40, 3);
    X << y, fixture::gaussian(40, 2, 4);
    const CorrelationSummary s = feature_label_correlations(X, y);
    CHECK(s.r[0] == doctest::Approx(1.0));
    double sum = 0;
    for (double r : s.r) sum += std::abs(r);
    CHECK(s.abs_r.mean == doctest::Approx(sum / 3));

    Eigen::MatrixXd D(40, 2);
    D << y, y;
    const CorrelationHeatmap h = pairwise_correlation_heatmap(D);
    CHECK(h.r(0, 1) == doctest::Approx(1.0));
    CHECK(h.abs_offdiag.mean == doctest::Approx(1.0));
    CHECK(format_mean_sd({0.15, 0.125}) == "0.150 ± 0.125");

    const Eigen::MatrixXd O = fixture::standardized(fixture::gaussian(40, 3, 5));
    // Centred orthogonal columns: project out the mean first.
    Eigen::MatrixXd C(40, 4);
    C << Eigen::VectorXd::Ones(40), O;
    const Eigen::MatrixXd QC = Eigen::HouseholderQR<Eigen::MatrixXd>(C).householderQ() * Eigen::MatrixXd::Identity(40, 4);
    const CorrelationHeatmap ho = pairwise_correlation_heatmap(QC.rightCols(3));
    CHECK(std::abs(ho.r(0, 1)) < 1e-12);
    CHECK(std::abs(ho.r(1, 2)) < 1e-12);
    CHECK(ho.r(2, 2) == 1.0);
}

TEST_CASE("vif") {
    // Centred orthogonal columns have VIF 1.
    Eigen::MatrixXd C(30, 4);
    C << Eigen::VectorXd::Ones(30), fixture::gaussian(30, 3, 8);
    const Eigen::MatrixXd Q = Eigen::HouseholderQR<Eigen::MatrixXd>(C).householderQ() * Eigen::MatrixXd::Identity(30, 4);
    const Eigen::MatrixXd O = Q.rightCols(3);
    for (double v : vif(O).vif) CHECK(v == doctest::Approx(1.0).epsilon(1e-9));

    // Bivariate fixture with sample correlation exactly 0.9.
    const Eigen::MatrixXd B = Q.middleCols(1, 2);
    Eigen::MatrixXd P(30, 2);
    P << B.col(0), 0.9 * B.col(0) + std::sqrt(1 - 0.81) * B.col(1);
    const VifResult r = vif(P);
    CHECK(std::abs(r.vif[0] - 1.0 / 0.19) < 1e-6);
    CHECK(std::abs(r.vif[1] - 1.0 / 0.19) < 1e-6);

    // Adding an orthogonal column changes nothing.
    Eigen::MatrixXd P3(30, 3);
    P3 << P, Q.col(3);
    const VifResult r3 = vif(P3);
    CHECK(std::abs(r3.vif[0] - r.vif[0]) < 1e-9);
    CHECK(std::abs(r3.vif[1] - r.vif[1]) < 1e-9);

    Eigen::MatrixXd dup(30, 2);
    dup << B.col(0), B.col(0);
    const VifResult d = vif(dup);
    CHECK(d.vif[0] == kVifCap);
    CHECK(!d.warnings.empty());
}

TEST_CASE("cohen's d and buckets") {
    const std::vector<double> a{1, 2, 3}, b{2, 3, 4};
    CHECK(cohens_d(a, a) == 0.0);
    CHECK(cohens_d(b, a) == doctest::Approx(1.0));
    for (std::uint64_t s = 0; s < 20; ++s) {
        const Eigen::VectorXd x = fixture::gaussian_vec(7, s), z = fixture::gaussian_vec(9, s + 100);
        const std::vector<double> xa(x.begin(), x.end()), za(z.begin(), z.end());
        CHECK(cohens_d(xa, za) == -cohens_d(za, xa));
    }
    CHECK_THROWS_AS(cohens_d({0, 0}, {0, 0}), NumericalError);
    CHECK(effect_bucket(0.1999) == EffectBucket::small);
    CHECK(effect_bucket(0.2) == EffectBucket::medium);
    CHECK(effect_bucket(-0.5) == EffectBucket::large);
    CHECK(effect_bucket(0.69) == EffectBucket::large);
    CHECK(effect_bucket(0.8) == EffectBucket::very_large);
    CHECK(to_string(EffectBucket::large) == "[0.5, 0.8)");
    CHECK(to_string(EffectBucket::small) == "<0.2");
}

TEST_CASE("effect size table") {
    Eigen::VectorXd y(8);
    y << 0.1, 0.2, 0.3, 0.4, 0.7, 0.8, 0.9, 1.0;
    // {-1.5c, -0.5c, 0.5c, 1.5c} has sample sd 1 when c = sqrt(3/5).
    const double c = std::sqrt(0.6);
    const double spread[4] = {-1.5 * c, -0.5 * c, 0.5 * c, 1.5 * c};
    Eigen::MatrixXd M(8, 2);
    for (int i = 0; i < 4; ++i) {
        M(i, 0) = i;
        M(i + 4, 0) = i;
        M(i, 1) = spread[i];
        M(i + 4, 1) = 2.0 + spread[i];
    }
    const EffectSizeTable t = effect_size_table(M, {"same", "shifted"}, y, 0.6);
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0].cohens_d == 0.0);
    CHECK(t.rows[0].bucket == EffectBucket::small);
    CHECK(t.rows[1].cohens_d == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(t.rows[1].bucket == EffectBucket::very_large);
    CHECK(t.rows[1].n_low == 4);
    CHECK(t.rows[1].n_high == 4);
    CHECK(t.mean_abs_d == doctest::Approx(1.0));
    CHECK_THROWS_AS(effect_size_table(M, {"a", "b"}, y, 0.95), NumericalError);
    CHECK(effect_size_csv(t).rfind("feature,cohens_d,bucket,n_low,n_high\n", 0) == 0);
}

TEST_CASE("confidence interval") {
    std::vector<double> v(50);
    for (std::size_t i = 0; i < 50; ++i) v[i] = std::sin(static_cast<double>(i));
    double mean = 0;
    const Interval ci = ci95(v, &mean);
    double m = 0, ss = 0;
    for (double x : v) m += x;
    m /= 50;
    for (double x : v) ss += (x - m) * (x - m);
    const double half = 1.96 * std::sqrt(ss / 49) / std::sqrt(50.0);
    CHECK(std::abs(mean - m) < 1e-12);
    CHECK(std::abs((ci.hi - ci.lo) / 2 - half) < 1e-12);
    CHECK(ci.lo <= mean);
    CHECK(ci.hi >= mean);
    CHECK_THROWS(ci95({1.0}));
}

TEST_CASE("repeated CV on a planted linear problem") {
    const Eigen::MatrixXd X = fixture::gaussian(40, 30, 13);
    const Eigen::VectorXd y = X.col(3) - 0.5 * X.col(17) + 0.01 * fixture::gaussian_vec(40, 14);
    const FoldPlan plan = make_fold_plan(40, 5, 2, 5);
    const EvaluationConfig cfg = fast_config();
    const auto reports = sweep_evaluate(named(X), y, Criterion::X_cnt, KernelKind::linear, {1, 2, 3}, plan, cfg);
    REQUIRE(reports.size() == 3);
    for (const auto& r : reports) {
        CHECK(r.samples.size() == 10);
        CHECK(r.predictions.size() == 80);
        for (const auto& s : r.samples) {
            CHECK(s.r2 <= 1.0);
            CHECK(s.rrmse >= 0.0);
            CHECK(s.n_test == 8);
        }
        CHECK(r.ci95_r2.lo <= r.mean_r2);
        CHECK(r.ci95_r2.hi >= r.mean_r2);
    }
    CHECK(reports[1].mean_r2 > 0.95);
    CHECK(reports[1].mean_r2 > reports[0].mean_r2);
    CHECK(best_of(reports).best_r2 != 0);

    const EvaluationReport single = repeated_cv_evaluate(named(X), y, Criterion::X_cnt, KernelKind::linear, 2, plan, cfg);
    CHECK(single.to_json() == reports[1].to_json());
    const EvaluationReport back = EvaluationReport::from_json(single.to_json());
    CHECK(back.to_json() == single.to_json());

    const std::string sweep = sweep_csv(reports);
    CHECK(sweep.rfind("n_features,mean_r2,r2_ci_lo,r2_ci_hi,mean_rrmse,rrmse_ci_lo,rrmse_ci_hi\n", 0) == 0);
    CHECK(std::count(sweep.begin(), sweep.end(), '\n') == 4);
    CHECK(scatter_csv(single).rfind("sample_id,actual,predicted,repeat,fold\n", 0) == 0);

    // Threads do not change the result.
    EvaluationConfig par = cfg;
    par.threads = 3;
    CHECK(repeated_cv_evaluate(named(X), y, Criterion::X_cnt, KernelKind::linear, 2, plan, par).to_json() ==
          single.to_json());
}

TEST_CASE("evaluation errors carry fold context") {
    const Eigen::MatrixXd X = fixture::gaussian(30, 10, 1);
    const Eigen::VectorXd y = fixture::gaussian_vec(30, 2);
    try {
        repeated_cv_evaluate(named(X), y, Criterion::X_abs, KernelKind::linear, 3, make_fold_plan(30, 5, 1, 0),
                             fast_config());
        FAIL("expected an error");
    } catch (const InvalidArgument& e) {
        CHECK(std::string(e.what()).find("fold") != std::string::npos);
    }
}
