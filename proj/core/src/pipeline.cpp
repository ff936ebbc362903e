#include "omics/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

#include "omics/error.hpp"
#include "omics/io_util.hpp"
#include "omics/manifest.hpp"
#include "omics/rng.hpp"
#include "omics/statistics.hpp"

namespace omics {

namespace {

std::string json_text(const nlohmann::json& j) { return j.dump(2) + "\n"; }

std::string report_file(int n) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "report_n%02d.json", n);
    return buf;
}

void write_patients_csv(const std::filesystem::path& path, const std::vector<std::string>& ids,
                        const std::vector<std::string>& patients) {
    std::ostringstream os;
    os << "sample_id,patient_id\n";
    for (std::size_t i = 0; i < ids.size(); ++i) os << ids[i] << ',' << patients[i] << '\n';
    write_file_atomic(path, os.str());
}

/// sample id -> patient id, in the order of `ids`.
std::vector<std::size_t> patient_groups(const std::filesystem::path& path, const std::vector<std::string>& ids) {
    std::istringstream in(read_text_file(path));
    std::string line;
    std::getline(in, line);
    std::map<std::string, std::string> patient_of;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw DataError(path.string() + ": malformed line '" + line + "'");
        patient_of[line.substr(0, comma)] = line.substr(comma + 1);
    }
    std::map<std::string, std::size_t> index;
    std::vector<std::size_t> groups;
    for (const auto& id : ids) {
        const auto it = patient_of.find(id);
        if (it == patient_of.end()) throw DataError(path.string() + ": no patient for sample " + id);
        groups.push_back(index.try_emplace(it->second, index.size()).first->second);
    }
    return groups;
}

FoldPlan outer_plan(const PipelineConfig& cfg, const std::vector<std::string>& ids) {
    if (cfg.group_by_patient)
        return make_grouped_fold_plan(patient_groups(cfg.features_path() / "patients.csv", ids), cfg.folds, cfg.repeats,
                                      cfg.seed);
    return make_fold_plan(ids.size(), cfg.folds, cfg.repeats, cfg.seed);
}

void write_features(const std::filesystem::path& dir, const CohortFeatures& cf, const std::vector<std::string>& patients) {
    for (auto tag : kAllBlocks) write_feature_csv(dir / (to_string(tag) + ".csv"), cf.block(tag));
    write_labels_csv(dir / "labels.csv", cf.labels);
    write_patients_csv(dir / "patients.csv", cf.labels.sample_ids, patients);
}

ScenarioData prepared_scenario(const PipelineConfig& cfg, const CohortFeatures& cf, Scenario s, std::ostream& log) {
    ScenarioData d = scenario_matrix(cf, s);
    std::vector<std::string> warnings;
    const auto before = d.X.cols();
    d.X = prefilter(d.X, cfg.selection, &warnings);
    log << slug(s) << ": " << before << " columns, " << d.X.cols() << " after variance/correlation filtering\n";
    for (const auto& w : warnings) log << "warning: " << slug(s) << ": " << w << '\n';
    return d;
}

void write_analysis(const PipelineConfig& cfg, const std::filesystem::path& dir, const FeatureMatrix& X,
                    const Eigen::VectorXd& y, const SelectionResult& sel, std::ostream& log) {
    const int n_max = *std::max_element(cfg.n_features.begin(), cfg.n_features.end());
    const auto cols = sel.top_columns(static_cast<std::size_t>(n_max));
    const FeatureMatrix Xs = X.select_columns(cols);
    std::vector<std::string> names;
    for (const auto& c : Xs.columns) names.push_back(c.str());

    nlohmann::json a;
    a["features"] = names;
    try {
        const auto corr = feature_label_correlations(Xs.values, y);
        std::ostringstream os;
        os << "feature,r\n";
        for (std::size_t i = 0; i < names.size(); ++i) os << names[i] << ',' << format_double(corr.r[i]) << '\n';
        write_file_atomic(dir / "label_correlations.csv", os.str());
        a["label_correlation"] = {{"mean_abs_r", corr.abs_r.mean}, {"sd", corr.abs_r.sd}, {"text", format_mean_sd(corr.abs_r)}};
    } catch (const NumericalError& e) {
        log << "warning: label correlations skipped: " << e.what() << '\n';
    }
    if (Xs.cols() >= 2) {
        try {
            const auto h = pairwise_correlation_heatmap(Xs.values);
            write_file_atomic(dir / "heatmap.csv", heatmap_csv(names, h));
            a["pairwise_correlation"] = {{"mean_abs_r", h.abs_offdiag.mean},
                                         {"sd", h.abs_offdiag.sd},
                                         {"text", format_mean_sd(h.abs_offdiag)}};
        } catch (const NumericalError& e) {
            log << "warning: heatmap skipped: " << e.what() << '\n';
        }
        if (Xs.rows() > Xs.cols()) {
            const auto v = vif(Xs.values);
            std::ostringstream os;
            os << "feature,vif\n";
            for (std::size_t i = 0; i < names.size(); ++i) os << names[i] << ',' << format_double(v.vif[i]) << '\n';
            write_file_atomic(dir / "vif.csv", os.str());
            a["vif_max"] = *std::max_element(v.vif.begin(), v.vif.end());
            for (const auto& w : v.warnings) log << "warning: " << w << '\n';
        }
    }
    nlohmann::json eff = nlohmann::json::array();
    for (double t : cfg.effect_size_thresholds) {
        try {
            const auto tab = effect_size_table(Xs.values, names, y, t);
            write_file_atomic(dir / ("effect_size_t" + format_double(t) + ".csv"), effect_size_csv(tab));
            eff.push_back({{"threshold", t}, {"mean_abs_d", tab.mean_abs_d}});
        } catch (const NumericalError& e) {
            log << "warning: effect sizes at threshold " << format_double(t) << " skipped: " << e.what() << '\n';
        }
    }
    a["effect_size"] = eff;
    write_file_atomic(dir / "analysis.json", json_text(a));
}

}  // namespace

void run_synth(const PipelineConfig& cfg, std::ostream& log) {
    const SyntheticSpec& spec = cfg.synthetic;
    if (spec.volume_mode) {
        const auto cohort = generate_volume_cohort(spec);
        const auto manifest = write_volume_cohort(cfg.output_dir / "cohort", cohort);
        write_file_atomic(cfg.output_dir / "ground_truth.json", json_text(cohort.ground_truth()));
        log << "wrote " << cohort.lesions.size() << " synthetic lesions, manifest " << manifest.string() << '\n';
    } else {
        const auto cohort = generate_feature_cohort(spec);
        write_features(cfg.features_path(), cohort.features, cohort.patient_ids);
        write_file_atomic(cfg.output_dir / "ground_truth.json", json_text(cohort.ground_truth()));
        log << "wrote synthetic feature blocks for " << spec.n_samples << " samples to " << cfg.features_path().string()
            << '\n';
    }
}

void run_extract(const PipelineConfig& cfg, std::ostream& log) {
    const CohortManifest manifest = load_manifest(cfg.manifest_path());
    const auto cohort = load_cohort(manifest);
    ExtractionConfig ec = cfg.extraction;
    ec.threads = cfg.threads;
    const CohortFeatures cf = extract_cohort(cohort, ec);
    std::vector<std::string> patients;
    for (const auto& l : cohort) patients.push_back(l.patient_id);
    write_features(cfg.features_path(), cf, patients);
    log << "extracted " << cf.block(BlockTag::R_init).cols() << " features per block for " << cohort.size()
        << " lesions\n";
}

CohortFeatures load_features(const std::filesystem::path& dir) {
    CohortFeatures cf;
    for (auto tag : kAllBlocks) cf.blocks[static_cast<std::size_t>(tag)] = read_feature_csv(dir / (to_string(tag) + ".csv"));
    cf.labels = read_labels_csv(dir / "labels.csv");
    std::vector<std::string> offenders;
    const auto& want = cf.labels.sample_ids;
    for (auto tag : kAllBlocks) {
        const auto& got = cf.block(tag).sample_ids;
        if (got == want) continue;
        std::string o = to_string(tag) + ".csv";
        if (got.size() != want.size()) {
            o += " (" + std::to_string(got.size()) + " rows, labels have " + std::to_string(want.size()) + ")";
        } else {
            for (std::size_t i = 0; i < got.size(); ++i)
                if (got[i] != want[i]) {
                    o += " (row " + std::to_string(i + 1) + ": '" + got[i] + "', labels have '" + want[i] + "')";
                    break;
                }
        }
        offenders.push_back(o);
    }
    if (!offenders.empty()) {
        std::string msg = "sample ids differ from labels.csv in:";
        for (const auto& o : offenders) msg += " " + o;
        throw DataError(msg);
    }
    return cf;
}

SelectionResult run_select(const PipelineConfig& cfg, Scenario scenario, Criterion criterion, std::ostream& log) {
    const CohortFeatures cf = load_features(cfg.features_path());
    const ScenarioData d = prepared_scenario(cfg, cf, scenario, log);
    const FoldPlan plan = outer_plan(cfg, d.y.sample_ids);
    const SelectionResult sel = select_features(d.X, d.y.values, criterion, plan, cfg.selection);
    write_file_atomic(cfg.output_dir / "selection" / (slug(scenario) + "__" + to_string(criterion) + ".json"),
                      json_text(sel.to_json()));
    return sel;
}

void run_evaluate(const PipelineConfig& cfg, const std::vector<Scenario>& scenarios,
                  const std::vector<Criterion>& criteria, const std::vector<KernelKind>& kernels, std::ostream& log) {
    const CohortFeatures cf = load_features(cfg.features_path());
    const std::size_t n = cf.labels.sample_ids.size();
    for (int k : cfg.n_features)
        if (static_cast<std::size_t>(k) > n / 4)
            log << "warning: n_features = " << k << " exceeds floor(n_samples / 4) = " << n / 4
                << " (1:4 feature-to-sample ratio rule)\n";

    for (Scenario sc : scenarios) {
        const ScenarioData d = prepared_scenario(cfg, cf, sc, log);
        const FoldPlan plan = outer_plan(cfg, d.y.sample_ids);
        const OuterSelections sel = outer_selections(d.X, d.y.values, plan, cfg.evaluation);
        const auto scen_dir = cfg.output_dir / "evaluation" / slug(sc);
        for (Criterion cr : criteria) {
            const auto crit_dir = scen_dir / to_string(cr);
            for (KernelKind kk : kernels) {
                auto reports = sweep_evaluate(d.X, d.y.values, cr, kk, cfg.n_features, plan, cfg.evaluation, &sel);
                const auto dir = crit_dir / to_string(kk);
                for (auto& r : reports) {
                    r.scenario = slug(sc);
                    write_file_atomic(dir / report_file(r.n_features), json_text(r.to_json()));
                }
                write_file_atomic(dir / "sweep.csv", sweep_csv(reports));
                const BestOf b = best_of(reports);
                write_file_atomic(dir / "scatter_best.csv", scatter_csv(reports[b.best_r2]));
                log << slug(sc) << ' ' << to_string(cr) << ' ' << to_string(kk) << ": best mean R2 "
                    << format_ci(reports[b.best_r2].mean_r2, reports[b.best_r2].ci95_r2) << " at "
                    << reports[b.best_r2].n_features << " features\n";
            }
            const SelectionResult whole = select_features(d.X, d.y.values, cr, plan, cfg.selection);
            write_file_atomic(cfg.output_dir / "selection" / (slug(sc) + "__" + to_string(cr) + ".json"),
                              json_text(whole.to_json()));
            write_analysis(cfg, crit_dir / "analysis", d.X, d.y.values, whole, log);
        }
    }
}

Summary run_report(const std::filesystem::path& output_dir, std::ostream& log) {
    const Summary s = summarize(load_reports(output_dir / "evaluation"));
    write_file_atomic(output_dir / "report" / "summary.json", json_text(s.to_json()));
    write_file_atomic(output_dir / "report" / "summary.md", s.markdown());
    log << "summarized " << s.rows.size() << " result series\n";
    return s;
}

void run_all(const PipelineConfig& cfg, std::ostream& log) {
    run_synth(cfg, log);
    if (cfg.synthetic.volume_mode) run_extract(cfg, log);
    run_evaluate(cfg, cfg.scenarios, cfg.criteria, cfg.kernels, log);
    run_report(cfg.output_dir, log);
}

}  // namespace omics
