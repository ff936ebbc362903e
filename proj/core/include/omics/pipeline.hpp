#pragma once

#include <filesystem>
#include <ostream>
#include <vector>

#include "omics/config.hpp"
#include "omics/report.hpp"

namespace omics {

/// Output tree under PipelineConfig::output_dir:
///   cohort/                     synthetic volumes + manifest.json (volume mode)
///   features/                   <block>.csv, labels.csv, patients.csv
///   ground_truth.json           synthetic planted model
///   selection/<scenario>__<criterion>.json
///   evaluation/<scenario>/<criterion>/<kernel>/report_nNN.json, sweep.csv, scatter_best.csv
///   evaluation/<scenario>/<criterion>/analysis/...
///   report/summary.json, report/summary.md

/// Feature mode writes features/ directly; volume mode writes cohort/.
void run_synth(const PipelineConfig& cfg, std::ostream& log);

/// Manifest -> features/.
void run_extract(const PipelineConfig& cfg, std::ostream& log);

/// Read features/ and check that every CSV lists the same samples in the
/// same order. Throws DataError listing the offenders.
CohortFeatures load_features(const std::filesystem::path& dir);

/// Whole-cohort ranking for one scenario and criterion, after prefiltering.
SelectionResult run_select(const PipelineConfig& cfg, Scenario scenario, Criterion criterion, std::ostream& log);

/// n_features sweep for every (scenario, criterion, kernel) combination.
void run_evaluate(const PipelineConfig& cfg, const std::vector<Scenario>& scenarios,
                  const std::vector<Criterion>& criteria, const std::vector<KernelKind>& kernels, std::ostream& log);

/// Consolidate evaluation/ into report/.
Summary run_report(const std::filesystem::path& output_dir, std::ostream& log);

/// synth (+ extract in volume mode), evaluate and report with the config lists.
void run_all(const PipelineConfig& cfg, std::ostream& log);

}  // namespace omics
