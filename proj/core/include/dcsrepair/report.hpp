#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dcsrepair/backend.hpp"
#include "dcsrepair/bench.hpp"
#include "dcsrepair/evaluator.hpp"
#include "dcsrepair/repair.hpp"

namespace dcsrepair {

// Counts averaged over repetitions (so they may be fractional).
struct RatioCounts {
  Ratio tp;
  Ratio fp;
  Ratio fn;
  Ratio tn;

  RatioCounts& accumulate(const Counts& c);
  RatioCounts averaged(int k) const;
  RatioCounts pooled_with(const RatioCounts& other) const;
  Metrics metrics() const;
};

struct ErrorTypeEval {
  std::string error_type;  // "Spelling" | "Grammar"
  int n_errors = 0;
  RatioCounts identification;
  RatioCounts correction;
};

struct UsageStats {
  double tt_seconds = 0;
  double cycles = 0;
  double input_tokens = 0;
  double output_tokens = 0;
  double cost_usd = 0;
};

struct InstanceResult {
  std::string id;
  std::vector<ErrorTypeEval> rows;  // Spelling row then Grammar row
  UsageStats usage;
  double success_rate = 0;
  int repetitions = 1;
};

// k independent pipeline runs on one benchmark instance, scored per error
// type in both modes and averaged cell-wise.
InstanceResult run_repetitions(const BenchmarkInstance& instance, RepairBackend& backend,
                               int repetitions, const RepairLimits& limits);

struct VariantReport {
  std::string variant;  // "zero-shot" | "knowledge"
  std::vector<InstanceResult> instances;
};

struct EvalReport {
  std::string backend;
  int repetitions = 1;
  std::vector<VariantReport> variants;
};

struct EvalOptions {
  std::vector<PromptVariant> variants = {PromptVariant::KnowledgeInformed};
  int repetitions = 3;
  int jobs = 1;
  RepairLimits limits;
};

// Runs the whole benchmark; instances execute with bounded parallelism when
// jobs > 1 (sessions are independent).
EvalReport evaluate_benchmark(const std::vector<BenchmarkInstance>& instances,
                              RepairBackend& backend, const EvalOptions& options);

// Summed raw counts across instances for one error type (micro-averaging);
// the Sum row's metrics come from these pooled counts.
ErrorTypeEval sum_row(const VariantReport& report, const std::string& error_type);
UsageStats average_usage(const VariantReport& report);

// Rendering. Metric tables carry Model / Error Type / N / Acc / Pre / Recall
// / F1 columns, the usage table TT (s) / Cycle / Input Token / Output Token /
// Cost (USD), matching the reporting layout the tool is compared against.
std::string metrics_csv(const EvalReport& report, ScoringMode mode);
std::string usage_csv(const EvalReport& report);
std::string report_to_json_text(const EvalReport& report);
EvalReport report_from_json_text(const std::string& json_text);

// Writes report.json, report_identification.csv, report_correction.csv and
// usage.csv into `dir`.
void write_report_files(const std::string& dir, const EvalReport& report);

}  // namespace dcsrepair
