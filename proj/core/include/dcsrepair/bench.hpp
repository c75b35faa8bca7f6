#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dcsrepair/ast.hpp"
#include "dcsrepair/diagnostic.hpp"
#include "dcsrepair/injector.hpp"
#include "dcsrepair/mutation.hpp"
#include "dcsrepair/source.hpp"

namespace dcsrepair {

class ParseFailedError : public std::runtime_error {
 public:
  ParseFailedError(const std::string& message, std::vector<Diagnostic> diagnostics)
      : std::runtime_error(message), diagnostics_(std::move(diagnostics)) {}
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

// The four DES feature classes the bundled base models are expected to
// exercise.
struct FeatureReport {
  bool parallel_composition = false;
  bool nondeterministic_choice = false;
  bool guarded_transitions = false;
  bool indexed_processes = false;

  bool all() const {
    return parallel_composition && nondeterministic_choice && guarded_transitions &&
           indexed_processes;
  }
  std::vector<std::string> missing() const;
};

FeatureReport detect_features(const Ast& ast);

struct LoadResult {
  SourceModel model;
  FeatureReport features;
  std::vector<std::string> warnings;  // one per absent feature class
};

// Loads and checks a model file, reporting which feature classes it
// exhibits. Throws ParseFailedError when the model does not compile.
LoadResult load_base_model(const std::string& path);

struct InstanceConfig {
  std::string id;      // e.g. "CM(2,2)"
  std::string base;    // bundled base model name: at, bw, cm, am
  int param_a = 2;
  int param_b = 2;
  InjectionPlan plan;
  std::uint64_t seed = 0;
};

struct BenchmarkConfig {
  std::vector<InstanceConfig> instances;
  static BenchmarkConfig defaults();
  static BenchmarkConfig from_json(const std::string& json_text);
};

struct BenchmarkInstance {
  InstanceConfig config;
  SourceModel clean;
  SourceModel broken;
  std::vector<MutationRecord> records;
};

std::vector<std::string> bundled_model_names();

// Base model text with the instance parameters substituted into its two
// scaling constants, loaded from the bundled data directory (or `data_dir`).
SourceModel materialize_instance(const InstanceConfig& config, const std::string& data_dir = "");

// Builds every configured instance: materialize, check, inject, verify.
// Configs where the plan injects nothing are rejected up front — every
// benchmark instance must contain at least one error.
std::vector<BenchmarkInstance> build_benchmark(const BenchmarkConfig& config,
                                               const std::string& data_dir = "");

// bench/<id>/{clean.lts,broken.lts,manifest.json} plus bench/index.json.
void write_benchmark(const std::string& dir, const std::vector<BenchmarkInstance>& instances);
std::string benchmark_index_json(const std::vector<BenchmarkInstance>& instances);

// Reads a directory previously produced by write_benchmark.
std::vector<BenchmarkInstance> read_benchmark(const std::string& dir);

}  // namespace dcsrepair
