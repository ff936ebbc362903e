// End-to-end acceptance checks. Prints one PASS/FAIL line per check and
// exits nonzero if any check fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <cstdlib>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/QR>

#include "omics/error.hpp"
#include "omics/evaluation.hpp"
#include "omics/extraction.hpp"
#include "omics/features.hpp"
#include "omics/filters.hpp"
#include "omics/fold_plan.hpp"
#include "omics/io_util.hpp"
#include "omics/lasso.hpp"
#include "omics/metrics.hpp"
#include "omics/pipeline.hpp"
#include "omics/report.hpp"
#include "omics/rng.hpp"
#include "omics/selection.hpp"
#include "omics/statistics.hpp"
#include "omics/svr.hpp"
#include "omics/synthetic.hpp"
#include "omics/texture.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace omics;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

Eigen::MatrixXd gaussian(Rng& rng, Eigen::Index n, Eigen::Index p) {
    Eigen::MatrixXd X(n, p);
    for (Eigen::Index j = 0; j < p; ++j)
        for (Eigen::Index i = 0; i < n; ++i) X(i, j) = rng.normal();
    return X;
}

Eigen::VectorXd vec(std::initializer_list<double> v) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out[i++] = x;
    return out;
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

// 1
void metric_identities(Outcome& o) {
    const Eigen::VectorXd y = vec({1, 2, 3});
    o.require(r_squared(y, y) == 1.0, "r2 perfect");
    o.require(r_squared(y, Eigen::VectorXd::Constant(3, 2.0)) == 0.0, "r2 mean predictor");
    o.require(close(r_squared(y, vec({1, 2, 2})), 0.5, 1e-12), "r2 [1,2,3] vs [1,2,2]");
    bool threw = false;
    try {
        r_squared(vec({4, 4}), vec({1, 2}));
    } catch (const NumericalError&) {
        threw = true;
    }
    o.require(threw, "r2 constant y");
    o.require(rrmse(vec({1, 2}), vec({1, 2})) == 0.0, "rrmse perfect");
    const double a = rrmse(vec({1, 1}), vec({2, 2})), b = rrmse(vec({2, 2}), vec({1, 1}));
    o.require(close(a, std::sqrt(1.0 / 8.0), 1e-12), "rrmse [1,1] vs [2,2]");
    o.require(a != b, "rrmse asymmetry");
    threw = false;
    try {
        rrmse(vec({1, 2}), vec({0, 0}));
    } catch (const NumericalError&) {
        threw = true;
    }
    o.require(threw, "rrmse zero predictions");
    o.detail << "rrmse(y=[1,1], yhat=[2,2]) = " << a << ", swapped = " << b;
}

// 2
void lasso_oracle(Outcome& o) {
    Rng rng(20240901);
    double worst_rel = 0.0, worst_kkt = 0.0;
    for (int t = 0; t < 50; ++t) {
        const Eigen::Index n = 6 + static_cast<Eigen::Index>(rng.below(15));
        const Eigen::Index p = 2 + static_cast<Eigen::Index>(rng.below(11));
        const Eigen::MatrixXd X = oracle::standardize(gaussian(rng, n, p));
        Eigen::VectorXd y = gaussian(rng, n, 1).col(0) + X.col(0);
        y.array() -= y.mean();
        const double lam = lasso_lambda_max(X, y) * rng.uniform(0.02, 0.9);
        const LassoFit f = lasso_fit(X, y, lam);
        const Eigen::VectorXd ref = oracle::lasso(X, y, lam);
        const double fo = oracle::lasso_objective(X, y, ref, lam);
        const double fl = lasso_objective(X, y, f.coefficients, lam);
        worst_rel = std::max(worst_rel, std::abs(fl - fo) / std::abs(fo));
        const Eigen::VectorXd g = X.transpose() * (y - X * f.coefficients) / static_cast<double>(n);
        for (Eigen::Index j = 0; j < p; ++j) {
            const double c = f.coefficients[j];
            const double r = c == 0.0 ? std::max(0.0, std::abs(g[j]) - lam) : std::abs(g[j] - lam * (c > 0 ? 1.0 : -1.0));
            worst_kkt = std::max(worst_kkt, r);
        }
    }
    o.require(worst_rel <= 1e-4, "objective within 1e-4 relative");
    o.require(worst_kkt < 1e-5, "KKT residual < 1e-5");
    o.detail << "50 designs, max relative objective gap " << worst_rel << ", max KKT residual " << worst_kkt;
}

// 3
void lasso_k20(Outcome& o) {
    Rng rng(777);
    int exact = 0, fallback = 0;
    for (int t = 0; t < 20; ++t) {
        Eigen::MatrixXd X = oracle::standardize(gaussian(rng, 69, 500));
        Eigen::VectorXd y = X.leftCols(10) * Eigen::VectorXd::LinSpaced(10, 1.0, 0.1) + 0.5 * gaussian(rng, 69, 1).col(0);
        y.array() -= y.mean();
        const LassoFit f = lasso_k_nonzero(X, y, 20);
        if (f.n_nonzero == 20 && !f.fallback) ++exact;
        else if (f.n_nonzero == 20 && f.fallback) ++fallback;
    }
    o.require(exact + fallback == 20, "20 nonzeros on every design");
    o.detail << "20 designs 69x500: " << exact << " exact, " << fallback << " via truncation fallback";
}

// 4
void svr_oracle(Outcome& o) {
    Rng rng(4242);
    double worst_rel = 0.0, worst_sum = 0.0;
    bool box = true;
    const std::vector<KernelSpec> kernels{KernelSpec::linear(), KernelSpec::rbf(0.5), KernelSpec::polynomial(0.5, 2, 1.0),
                                          KernelSpec::sigmoid(0.2, 0.0)};
    for (int t = 0; t < 30; ++t) {
        const Eigen::Index n = 3 + static_cast<Eigen::Index>(rng.below(8));
        const Eigen::Index d = 1 + static_cast<Eigen::Index>(rng.below(4));
        const Eigen::MatrixXd X = gaussian(rng, n, d);
        const Eigen::VectorXd y = gaussian(rng, n, 1).col(0);
        SVRHyperparams hp;
        hp.C = std::pow(10.0, static_cast<double>(rng.below(3)) - 1.0);
        hp.epsilon = rng.below(2) ? 0.01 : 0.1;
        hp.kernel = kernels[static_cast<std::size_t>(t % 4)];
        const SVRModel m = svr_train(X, y, hp);
        const Eigen::MatrixXd Z = oracle::standardize(X);
        const Eigen::MatrixXd K = gram_matrix(hp.kernel, Z, Z);
        const Eigen::VectorXd ref = oracle::svr_dual(K, y, hp.C, hp.epsilon);
        const double want = oracle::svr_dual_value(K, y, ref, hp.epsilon);
        worst_rel = std::max(worst_rel, std::abs(m.dual_objective - want) / std::max(std::abs(want), 1e-12));
        worst_sum = std::max(worst_sum, std::abs(m.dual_coefs.sum()) / hp.C);
        for (double b : m.dual_coefs) box = box && std::abs(b) <= hp.C;
    }
    o.require(worst_rel <= 1e-4, "dual objective within 1e-4 relative");
    o.require(worst_sum <= 1e-6, "sum of dual coefficients within 1e-6 C");
    o.require(box, "box constraints");
    o.detail << "30 problems, max relative dual gap " << worst_rel << ", max |sum(a - a*)|/C " << worst_sum;
}

struct SweepRun {
    std::vector<EvaluationReport> reports;
    std::vector<IterationRecord> whole_cohort;
    FeatureMatrix X;
    FoldPlan plan;
};

EvaluationConfig linear_eval() {
    EvaluationConfig cfg;
    return cfg;
}

std::vector<int> one_to_fifteen() {
    std::vector<int> v;
    for (int k = 1; k <= 15; ++k) v.push_back(k);
    return v;
}

SweepRun sweep_linear(const SyntheticFeatureCohort& cohort, Scenario scenario, std::uint64_t seed,
                      const std::vector<int>& n_features, bool whole_cohort) {
    SweepRun run;
    const ScenarioData d = scenario_matrix(cohort.features, scenario);
    const EvaluationConfig cfg = linear_eval();
    run.X = prefilter(d.X, cfg.selection);
    run.plan = make_fold_plan(static_cast<std::size_t>(run.X.rows()), 5, 10, seed);
    if (whole_cohort) run.whole_cohort = lasso_iterations(run.X.values, d.y.values, run.plan, cfg.selection);
    run.reports = sweep_evaluate(run.X, d.y.values, Criterion::X_cnt, KernelKind::linear, n_features, run.plan, cfg);
    return run;
}

std::string sweep_summary(const std::vector<EvaluationReport>& reports) {
    std::ostringstream s;
    const BestOf b = best_of(reports);
    s << "best mean R2 " << format_ci(reports[b.best_r2].mean_r2, reports[b.best_r2].ci95_r2) << " at n_features "
      << reports[b.best_r2].n_features;
    return s.str();
}

// 5
SweepRun noiseless_recovery(Outcome& o) {
    SyntheticSpec s;
    s.n_samples = 69;
    s.n_features_per_block = 50;
    s.n_informative = 5;
    s.noise_sd = 0.0;
    s.seed = 501;
    const SyntheticFeatureCohort cohort = generate_feature_cohort(s);
    SweepRun run = sweep_linear(cohort, Scenario::RD_all, 502, one_to_fifteen(), true);

    std::set<std::size_t> informative;
    for (const auto& f : cohort.informative)
        for (std::size_t j = 0; j < run.X.columns.size(); ++j)
            if (run.X.columns[j] == f.column) informative.insert(j);
    o.require(informative.size() == 5, "all informative columns survive prefiltering");
    int hits = 0;
    for (const auto& it : run.whole_cohort) {
        std::set<std::size_t> kept;
        for (const auto& r : it.retained) kept.insert(r.column);
        if (std::all_of(informative.begin(), informative.end(), [&](std::size_t j) { return kept.count(j) > 0; })) ++hits;
    }
    const BestOf b = best_of(run.reports);
    const double r2 = run.reports[b.best_r2].mean_r2;
    o.require(r2 >= 0.95, "mean outer-CV R2 >= 0.95");
    o.require(hits >= 45, "all 5 informative in top 15 in >= 45 of 50 iterations");
    o.detail << "300 features, noise 0: " << sweep_summary(run.reports) << " (n_features 5: "
             << run.reports[4].mean_r2 << "); all informative retained in " << hits << "/50 iterations";
    return run;
}

// 6
void null_model(Outcome& o) {
    SyntheticSpec s;
    s.n_samples = 69;
    s.n_features_per_block = 50;
    s.n_informative = 0;
    s.noise_sd = 1.0;
    s.seed = 601;
    const SyntheticFeatureCohort cohort = generate_feature_cohort(s);
    const SweepRun run = sweep_linear(cohort, Scenario::RD_all, 602, {1, 3, 5, 10, 15}, false);
    const BestOf b = best_of(run.reports);
    double worst = -1e300;
    for (const auto& r : run.reports) worst = std::max(worst, r.mean_r2);
    o.require(worst <= 0.15, "mean outer-CV R2 <= 0.15 at every n_features");
    std::ostringstream each;
    for (const auto& r : run.reports) each << ' ' << r.n_features << ':' << format_double(std::round(r.mean_r2 * 1000) / 1000);
    o.detail << "no planted signal, mean R2 by n_features" << each.str() << "; " << sweep_summary(run.reports)
             << " (index " << b.best_r2 << ")";
}

// 7
void structure(Outcome& o, const SweepRun& run) {
    const FoldPlan p = make_fold_plan(69, 5, 10, 1);
    std::vector<std::size_t> sizes;
    for (std::size_t f = 0; f < 5; ++f) sizes.push_back(p.test_rows(0, f).size());
    o.require(sizes == std::vector<std::size_t>{14, 14, 14, 14, 13}, "fold sizes 14,14,14,14,13");
    bool fifty = !run.reports.empty();
    for (const auto& r : run.reports) fifty = fifty && r.samples.size() == 50;
    o.require(fifty, "50 metric samples per report");
    const std::string csv = sweep_csv(run.reports);
    const auto rows = std::count(csv.begin(), csv.end(), '\n') - 1;
    o.require(rows == 15, "15 sweep rows per kernel");
    const std::string ci = format_ci(0.743, {0.710, 0.775});
    o.require(ci == "0.743 (0.710-0.775)", "CI formatting");
    o.detail << "fold sizes {14,14,14,14,13}, 50 samples per report, " << rows << " sweep rows, CI text \"" << ci << "\"";
}

// 8
void statistics_closed_forms(Outcome& o) {
    Rng rng(88);
    Eigen::MatrixXd C(40, 3);
    C << Eigen::VectorXd::Ones(40), gaussian(rng, 40, 2);
    const Eigen::MatrixXd Q = Eigen::HouseholderQR<Eigen::MatrixXd>(C).householderQ() * Eigen::MatrixXd::Identity(40, 3);
    Eigen::MatrixXd P(40, 2);
    P << Q.col(1), 0.9 * Q.col(1) + std::sqrt(1.0 - 0.81) * Q.col(2);
    const VifResult v = vif(P);
    o.require(close(v.vif[0], 5.263157894736842, 1e-6) && close(v.vif[1], 5.263157894736842, 1e-6), "bivariate VIF");
    const std::vector<double> a{1, 2, 3}, b{2, 3, 4};
    o.require(close(cohens_d(b, a), 1.0, 1e-12), "d = 1 fixture");
    bool anti = true;
    for (int t = 0; t < 20; ++t) {
        std::vector<double> x(6), z(9);
        for (auto& e : x) e = rng.normal();
        for (auto& e : z) e = rng.normal() + 0.3;
        anti = anti && cohens_d(x, z) == -cohens_d(z, x);
    }
    o.require(anti, "d antisymmetry");
    o.require(effect_bucket(0.1999999) == EffectBucket::small && effect_bucket(0.2) == EffectBucket::medium &&
                  effect_bucket(0.4999999) == EffectBucket::medium && effect_bucket(0.5) == EffectBucket::large &&
                  effect_bucket(0.69) == EffectBucket::large && effect_bucket(0.7999999) == EffectBucket::large &&
                  effect_bucket(0.8) == EffectBucket::very_large,
              "bucket edges 0.2 / 0.5 / 0.8");
    o.detail << "VIF at r = 0.9: " << v.vif[0] << ", d fixture " << cohens_d(b, a) << ", buckets at 0.2/0.5/0.8";
}

// 9
void texture(Outcome& o) {
    TextureParams x_only;
    x_only.directions = {Offset3{1, 0, 0}};
    auto line = [](std::vector<int> labels, int bins) {
        LabelVolume lv;
        lv.grid.dims = {labels.size(), 1, 1};
        lv.n_bins = bins;
        lv.labels = std::move(labels);
        return lv;
    };
    const TextureMatrix g = texture_matrix(TextureKind::glcm, line({1, 2, 3}, 3), x_only);
    bool glcm = true;
    for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 3; ++j) glcm = glcm && g(i, j) == (std::abs(i - j) == 1 ? 0.25 : 0.0);
    o.require(glcm, "GLCM [1,2,3]");
    o.require(texture_features(g).get(Family::glcm, "Autocorrelation") == 4.0, "GLCM autocorrelation 4");
    const TextureMatrix r = texture_matrix(TextureKind::glrlm, line({1, 1, 2, 2}, 2), x_only);
    o.require(r(1, 2) == 1.0 && r(2, 2) == 1.0 && r(1, 1) == 0.0 && r(2, 1) == 0.0, "GLRLM [1,1,2,2]");
    o.require(texture_features(r).get(Family::glrlm, "LongRunEmphasis") == 4.0, "GLRLM long run emphasis 4");

    Rng rng(909);
    double worst_sum = 0.0;
    bool symmetric = true;
    for (int t = 0; t < 100; ++t) {
        Grid grid;
        grid.dims = {2 + rng.below(5), 2 + rng.below(5), 1 + rng.below(4)};
        std::vector<double> vals(grid.size());
        std::vector<std::uint8_t> occ(grid.size());
        for (auto& x : vals) x = rng.uniform(0.0, 100.0);
        for (auto& m : occ) m = rng.uniform() < 0.7;
        occ[0] = 1;
        const LabelVolume lv = discretize(Volume3D(grid, vals), Mask3D(grid, occ), 2 + static_cast<int>(rng.below(8)));
        const TextureMatrix m = texture_matrix(TextureKind::glcm, lv);
        double total = 0.0;
        for (double c : m.cells) total += c;
        worst_sum = std::max(worst_sum, std::abs(total - 1.0));
        for (int i = 1; i <= m.n_levels; ++i)
            for (int j = 1; j <= m.n_levels; ++j) symmetric = symmetric && m(i, j) == m(j, i);
    }
    o.require(worst_sum <= 1e-12, "GLCM sums to 1");
    o.require(symmetric, "GLCM symmetric");

    double worst_parseval = 0.0;
    for (int t = 0; t < 20; ++t) {
        Grid grid;
        grid.dims = {2 * (1 + rng.below(6)), 2 * (1 + rng.below(6)), 2 * (1 + rng.below(6))};
        std::vector<double> vals(grid.size());
        double energy = 0.0;
        for (auto& x : vals) {
            x = rng.uniform(-50.0, 50.0);
            energy += x * x;
        }
        const HaarLevel h = haar_decompose(Volume3D(grid, vals));
        double bands = 0.0;
        for (const auto& b : h.bands)
            for (double x : b) bands += x * x;
        worst_parseval = std::max(worst_parseval, std::abs(bands - energy) / energy);
    }
    o.require(worst_parseval <= 1e-6, "Haar Parseval");
    o.detail << "hand fixtures exact; 100 random GLCMs max |sum - 1| " << worst_sum << "; Haar energy rel. error "
             << worst_parseval;
}

// 10
std::map<std::string, std::string> snapshot(const fs::path& root) {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(root))
        if (e.is_regular_file()) files[fs::relative(e.path(), root).generic_string()] = read_text_file(e.path());
    return files;
}

PipelineConfig determinism_config(const fs::path& out) {
    nlohmann::json j = {
        {"seed", 1001},
        {"output_dir", out.string()},
        {"extraction", {{"n_bins", 16}, {"filters", {"original", "square", "wavelet_HLH", "log_sigma_1mm"}}}},
        {"scenarios", {"R_init", "D_delta", "RD_all"}},
        {"kernels", {"linear", "rbf"}},
        {"n_features", {1, 3, 5, 8}},
        {"cv", {{"folds", 5}, {"repeats", 2}, {"inner_repeats", 2}}},
        {"svr", {{"grids", {{"linear", {{"C", {1.0, 10.0}}, {"epsilon", {0.01}}}},
                            {"rbf", {{"C", {1.0, 10.0}}, {"epsilon", {0.01}}, {"gamma", {"1/d", 0.1}}}}}}}},
        {"synthetic", {{"n_samples", 30}, {"volume_mode", true}, {"volume_size", 16}, {"n_informative", 3}}}};
    return PipelineConfig::from_json(j);
}

void determinism(Outcome& o) {
    const fs::path root = fs::temp_directory_path() / "omics_acceptance_determinism";
    fs::remove_all(root);
    std::ostringstream log;
    run_all(determinism_config(root / "a"), log);
    run_all(determinism_config(root / "b"), log);
    const auto a = snapshot(root / "a"), b = snapshot(root / "b");
    std::size_t differing = 0, bytes = 0;
    for (const auto& [name, content] : a) {
        bytes += content.size();
        const auto it = b.find(name);
        if (it == b.end() || it->second != content) ++differing;
    }
    o.require(a.size() == b.size(), "same file set");
    o.require(differing == 0, "identical file contents");
    o.require(a.size() > 20, "non-trivial output tree");
    o.detail << "volume-mode run (extraction, selection, evaluation, report) twice: " << a.size() << " files, " << bytes
             << " bytes, " << differing << " differing";
    fs::remove_all(root);
}

// 11
void multi_block_ordering(Outcome& o) {
    SyntheticSpec s;
    s.n_samples = 69;
    s.n_features_per_block = 50;
    s.n_informative = 6;
    s.noise_sd = 0.1;
    s.seed = 1101;
    const SyntheticFeatureCohort cohort = generate_feature_cohort(s);
    const std::vector<int> nf{1, 2, 3, 4, 5, 6, 8, 10, 12, 15};
    std::map<Scenario, double> best;
    for (Scenario sc : {Scenario::RD_all, Scenario::R_init, Scenario::R_intra, Scenario::R_delta, Scenario::D_init,
                        Scenario::D_intra, Scenario::D_delta}) {
        const SweepRun run = sweep_linear(cohort, sc, 1102, nf, false);
        best[sc] = run.reports[best_of(run.reports).best_r2].mean_r2;
    }
    const double all = best[Scenario::RD_all];
    std::ostringstream singles;
    for (const auto& [sc, r2] : best) {
        if (sc == Scenario::RD_all) continue;
        o.require(all >= r2 - 0.05, "six-block >= " + to_string(sc) + " - 0.05");
        singles << ' ' << slug(sc) << '=' << format_double(std::round(r2 * 1000) / 1000);
    }
    o.detail << "signal in all six blocks: RD_all best R2 " << all << " vs single blocks" << singles.str();
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> only;
    for (int a = 1; a < argc; ++a) only.insert(std::atoi(argv[a]));
    int failed = 0;
    auto check = [&](int id, const std::string& name, const std::function<void(Outcome&)>& body) {
        if (!only.empty() && only.count(id) == 0) return;
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            body(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << " [exception: " << e.what() << "]";
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!o.pass) ++failed;
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.1f s", secs);
        std::cout << (o.pass ? "PASS" : "FAIL") << " [" << id << "] " << name << ": " << o.detail.str() << " (" << buf
                  << ")" << std::endl;
    };

    SweepRun recovered;
    check(1, "metric identities", metric_identities);
    check(2, "lasso matches oracle", lasso_oracle);
    check(3, "lasso hits k = 20", lasso_k20);
    check(4, "svr matches oracle", svr_oracle);
    check(5, "noiseless recovery", [&](Outcome& o) { recovered = noiseless_recovery(o); });
    check(6, "null model", null_model);
    check(7, "structural counts", [&](Outcome& o) {
        if (recovered.reports.empty()) {
            Outcome scratch;
            recovered = noiseless_recovery(scratch);
        }
        structure(o, recovered);
    });
    check(8, "statistics closed forms", statistics_closed_forms);
    check(9, "texture fixtures", texture);
    check(10, "determinism", determinism);
    check(11, "multi-block ordering", multi_block_ordering);
    std::cout << (failed == 0 ? "all checks passed" : std::to_string(failed) + " check(s) failed") << std::endl;
    return failed == 0 ? 0 : 1;
}
