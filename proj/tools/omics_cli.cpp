// omics: command-line driver for extraction, selection, evaluation and reporting.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "omics/error.hpp"
#include "omics/io_util.hpp"
#include "omics/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

constexpr const char* kOutEnv = "OMICS_OUT_DIR";

struct Options {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string scenario;
    std::string criterion;
    std::string kernel;
};

omics::PipelineConfig make_config(const Options& o) {
    nlohmann::json j = nlohmann::json::object();
    std::filesystem::path base;
    if (!o.config.empty()) {
        try {
            j = nlohmann::json::parse(omics::read_text_file(o.config));
        } catch (const nlohmann::json::exception& e) {
            throw omics::ConfigError("config " + o.config + " is not valid JSON: " + e.what());
        } catch (const std::exception& e) {
            throw omics::ConfigError("cannot read config " + o.config + ": " + e.what());
        }
        base = std::filesystem::path(o.config).parent_path();
    }
    if (o.seed) j["seed"] = *o.seed;
    omics::PipelineConfig cfg = omics::PipelineConfig::from_json(j, base);
    if (!o.out.empty()) {
        cfg.output_dir = o.out;
    } else if (const char* env = std::getenv(kOutEnv); env && *env) {
        cfg.output_dir = env;
    }
    if (cfg.output_dir.empty())
        throw omics::ConfigError(std::string("no output directory: pass --out, set ") + kOutEnv + " or output_dir");
    return cfg;
}

template <typename T, typename Parse>
std::vector<T> pick(const std::string& flag, const std::vector<T>& configured, Parse parse, std::vector<T> all) {
    if (flag.empty()) return configured;
    if (flag == "all") return all;
    std::vector<T> out;
    std::stringstream ss(flag);
    for (std::string item; std::getline(ss, item, ',');) {
        try {
            out.push_back(parse(item));
        } catch (const std::exception& e) {
            throw omics::ConfigError(e.what());
        }
    }
    return out;
}

std::vector<omics::Scenario> scenarios(const Options& o, const omics::PipelineConfig& c) {
    return pick<omics::Scenario>(o.scenario, c.scenarios, [](const std::string& s) { return omics::parse_scenario(s); },
                                 {omics::kAllScenarios.begin(), omics::kAllScenarios.end()});
}

std::vector<omics::Criterion> criteria(const Options& o, const omics::PipelineConfig& c) {
    return pick<omics::Criterion>(o.criterion, c.criteria, [](const std::string& s) { return omics::parse_criterion(s); },
                                  {omics::Criterion::X_abs, omics::Criterion::X_cnt});
}

std::vector<omics::KernelKind> kernels(const Options& o, const omics::PipelineConfig& c) {
    using omics::KernelKind;
    return pick<KernelKind>(o.kernel, c.kernels, [](const std::string& s) { return omics::parse_kernel(s); },
                            {KernelKind::linear, KernelKind::rbf, KernelKind::polynomial, KernelKind::sigmoid});
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Radiomic/dosiomic feature pipeline with Lasso selection and SVR evaluation"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config, "Pipeline configuration (JSON)");
        sub->add_option("--seed", o.seed, "Override the configured seed");
        sub->add_option("--out", o.out, std::string("Output directory (default: $") + kOutEnv + " or config output_dir)");
    };
    auto* synth = app.add_subcommand("synth", "Generate a synthetic cohort (feature CSVs or VOL1 volumes)");
    auto* extract = app.add_subcommand("extract", "Extract feature blocks from a cohort manifest");
    auto* select = app.add_subcommand("select", "Rank features for a scenario and criterion");
    auto* evaluate = app.add_subcommand("evaluate", "Repeated-CV SVR evaluation over the n_features sweep");
    auto* report = app.add_subcommand("report", "Summarize evaluation results");
    auto* run = app.add_subcommand("run", "synth, extract (volume mode), evaluate and report in one go");
    for (auto* s : {synth, extract, select, evaluate, report, run}) common(s);
    for (auto* s : {select, evaluate}) {
        s->add_option("--scenario", o.scenario, "Scenario(s), comma separated, or 'all'");
        s->add_option("--criterion", o.criterion, "X_abs, X_cnt or 'all'");
    }
    evaluate->add_option("--kernel", o.kernel, "linear, rbf, polynomial, sigmoid (comma separated) or 'all'");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (report->parsed() && o.config.empty() && !o.seed) {
            std::filesystem::path out = o.out;
            if (out.empty())
                if (const char* env = std::getenv(kOutEnv)) out = env;
            if (out.empty()) throw omics::ConfigError("report needs --out or " + std::string(kOutEnv));
            omics::run_report(out, std::cerr);
            return kExitOk;
        }
        const omics::PipelineConfig cfg = make_config(o);
        if (synth->parsed()) {
            omics::run_synth(cfg, std::cerr);
        } else if (extract->parsed()) {
            omics::run_extract(cfg, std::cerr);
        } else if (select->parsed()) {
            for (auto sc : scenarios(o, cfg))
                for (auto cr : criteria(o, cfg)) omics::run_select(cfg, sc, cr, std::cerr);
        } else if (evaluate->parsed()) {
            omics::run_evaluate(cfg, scenarios(o, cfg), criteria(o, cfg), kernels(o, cfg), std::cerr);
        } else if (report->parsed()) {
            omics::run_report(cfg.output_dir, std::cerr);
        } else if (run->parsed()) {
            omics::run_all(cfg, std::cerr);
        }
    } catch (const omics::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const omics::DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const omics::InvalidArgument& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitOk;
}
