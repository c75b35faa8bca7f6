// dcsrepair command-line tool: check FSP/FLTL models, inject benchmark
// errors, run the repair pipeline, and score the results.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dcsrepair/bench.hpp"
#include "dcsrepair/check.hpp"
#include "dcsrepair/heuristic_backend.hpp"
#include "dcsrepair/knowledge.hpp"
#include "dcsrepair/llm_backend.hpp"
#include "dcsrepair/paths.hpp"
#include "dcsrepair/repair.hpp"
#include "dcsrepair/report.hpp"

namespace fs = std::filesystem;
using namespace dcsrepair;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBackend = 3;

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct BackendOptions {
  std::string backend = "heuristic";
  std::string prompt = "knowledge";
  std::string config_file;
  std::string endpoint;
  std::string model_name;
  std::string prices_file;
  int max_grammar_attempts = 4;
  std::string data_dir;
};

void add_backend_flags(CLI::App* cmd, BackendOptions& opts) {
  cmd->add_option("--backend", opts.backend, "Repair backend: heuristic or llm")
      ->check(CLI::IsMember({"heuristic", "llm"}));
  cmd->add_option("--prompt", opts.prompt, "Prompt variant: knowledge, zero-shot or both")
      ->check(CLI::IsMember({"knowledge", "zero-shot", "both"}));
  cmd->add_option("--config", opts.config_file, "JSON config file (flags override it)");
  cmd->add_option("--endpoint", opts.endpoint, "Chat-completions endpoint URL");
  cmd->add_option("--model", opts.model_name, "Provider model name");
  cmd->add_option("--prices", opts.prices_file, "Price table JSON for cost accounting");
  cmd->add_option("--max-grammar-attempts", opts.max_grammar_attempts,
                  "Grammar correction attempt cap");
  cmd->add_option("--data-dir", opts.data_dir, "Knowledge/model data directory");
}

PriceTable load_prices(const std::string& explicit_path, const std::string& data_dir) {
  std::string path = explicit_path;
  if (path.empty()) {
    std::string fallback = join_path(data_dir.empty() ? default_data_dir() : data_dir,
                                     "prices.json");
    if (fs::exists(fallback)) path = fallback;
  }
  PriceTable prices;
  if (path.empty()) return prices;
  nlohmann::json j = nlohmann::json::parse(read_file(path));
  prices.input_per_million = j.value("input_per_million", 0.0);
  prices.output_per_million = j.value("output_per_million", 0.0);
  return prices;
}

// Precedence for backend settings: flags > environment > config file >
// defaults.
LlmBackendConfig resolve_llm_config(const BackendOptions& opts) {
  LlmBackendConfig config;
  if (!opts.config_file.empty()) {
    nlohmann::json j = nlohmann::json::parse(read_file(opts.config_file));
    config.endpoint_url = j.value("endpoint", config.endpoint_url);
    config.model_name = j.value("model", config.model_name);
    config.temperature = j.value("temperature", config.temperature);
    config.max_retries = j.value("max_retries", config.max_retries);
  }
  LlmBackendConfig env = LlmBackendConfig::from_env();
  if (!env.endpoint_url.empty()) config.endpoint_url = env.endpoint_url;
  if (!env.api_key.empty()) config.api_key = env.api_key;
  if (env.model_name != LlmBackendConfig{}.model_name) config.model_name = env.model_name;
  if (!opts.endpoint.empty()) config.endpoint_url = opts.endpoint;
  if (!opts.model_name.empty()) config.model_name = opts.model_name;
  return config;
}

std::unique_ptr<RepairBackend> make_backend(const BackendOptions& opts,
                                            const PriceTable& prices) {
  if (opts.backend == "heuristic") return std::make_unique<HeuristicBackend>();
  LlmBackendConfig config = resolve_llm_config(opts);
  config.price_in_per_million = prices.input_per_million;
  config.price_out_per_million = prices.output_per_million;
  return std::make_unique<LlmBackend>(std::move(config));
}

int cmd_check(const std::string& file, bool as_json) {
  SourceModel model = SourceModel::from_file(file);
  ParseResult result = check(model);
  if (as_json) {
    for (const Diagnostic& d : result.diagnostics) std::cout << to_json_line(d) << "\n";
  } else {
    for (const Diagnostic& d : result.diagnostics)
      std::cout << severity_name(d.severity) << " " << format_diagnostic(d) << " ["
                << diagnostic_code_name(d.code) << "]\n";
  }
  if (result.ok) {
    if (!as_json) std::cout << "ok\n";
    return kExitOk;
  }
  return kExitCheckFailed;
}

int cmd_inject(const std::string& file, int spelling, int grammar, std::uint64_t seed,
               const std::string& out_dir) {
  SourceModel model = SourceModel::from_file(file);
  ParseResult checked = check(model);
  if (!checked.ok) {
    std::cerr << "input model does not pass check; fix it before injecting\n";
    for (const Diagnostic& d : checked.diagnostics)
      std::cerr << "  " << format_diagnostic(d) << "\n";
    return kExitCheckFailed;
  }
  auto [broken, records] = inject(model, InjectionPlan{spelling, grammar}, seed);

  fs::path stem = fs::path(file).stem();
  fs::path dir = out_dir.empty() ? fs::path(file).parent_path() : fs::path(out_dir);
  fs::path broken_path = dir / (stem.string() + ".broken.lts");
  fs::path manifest_path = dir / (stem.string() + ".manifest.json");
  write_file(broken_path, broken.text());
  write_file(manifest_path, records_to_manifest(stem.string(), seed, records));
  std::cout << "wrote " << broken_path.string() << " (" << records.size() << " errors)\n";
  std::cout << "wrote " << manifest_path.string() << "\n";
  return kExitOk;
}

int cmd_bench_build(const std::string& out_dir, const std::string& config_file,
                    const std::string& data_dir) {
  BenchmarkConfig config = config_file.empty()
                               ? BenchmarkConfig::defaults()
                               : BenchmarkConfig::from_json(read_file(config_file));
  std::vector<BenchmarkInstance> instances = build_benchmark(config, data_dir);
  write_benchmark(out_dir, instances);
  int spelling = 0;
  int grammar = 0;
  for (const BenchmarkInstance& inst : instances) {
    spelling += inst.config.plan.spelling;
    grammar += inst.config.plan.grammar;
    std::cout << inst.config.id << ": " << inst.config.plan.spelling << " spelling + "
              << inst.config.plan.grammar << " grammar errors\n";
  }
  std::cout << "benchmark written to " << out_dir << " (" << instances.size() << " instances, "
            << spelling << " spelling + " << grammar << " grammar = " << spelling + grammar
            << " errors)\n";
  return kExitOk;
}

int cmd_repair(const std::string& file, const BackendOptions& opts, const std::string& out_dir) {
  SourceModel model = SourceModel::from_file(file);
  PriceTable prices = load_prices(opts.prices_file, opts.data_dir);
  std::unique_ptr<RepairBackend> backend = make_backend(opts, prices);

  RepairLimits limits;
  limits.max_grammar_attempts = opts.max_grammar_attempts;
  limits.prices = prices;
  KnowledgeBase kb;
  if (opts.prompt != "zero-shot") {
    kb = KnowledgeBase::load(opts.data_dir);
    limits.knowledge = &kb;
    limits.variant = PromptVariant::KnowledgeInformed;
  } else {
    limits.variant = PromptVariant::ZeroShot;
  }

  RepairSession session = run_pipeline(model, *backend, limits);

  fs::path stem = fs::path(file).stem();
  fs::path dir = out_dir.empty() ? fs::path(file).parent_path() : fs::path(out_dir);
  write_file(dir / (stem.string() + ".repaired.lts"), session.final_model.text());
  write_file(dir / (stem.string() + ".session.json"), session_to_json_text(session));

  std::cout << "outcome: " << repair_outcome_name(session.outcome) << " ("
            << session.usage.cycles << " backend calls, " << session.grammar_attempts()
            << " grammar attempts)\n";
  if (session.outcome == RepairOutcome::BackendError) {
    std::cerr << "backend error: " << session.error_message << "\n";
    return kExitBackend;
  }
  return session.outcome == RepairOutcome::Success ? kExitOk : kExitCheckFailed;
}

int cmd_eval(const std::string& bench_dir, const BackendOptions& opts, int repeat, int jobs,
             const std::string& out_dir) {
  std::vector<BenchmarkInstance> instances = read_benchmark(bench_dir);
  PriceTable prices = load_prices(opts.prices_file, opts.data_dir);
  std::unique_ptr<RepairBackend> backend = make_backend(opts, prices);

  EvalOptions options;
  options.repetitions = repeat;
  options.jobs = jobs;
  options.limits.max_grammar_attempts = opts.max_grammar_attempts;
  options.limits.prices = prices;
  KnowledgeBase kb = KnowledgeBase::load(opts.data_dir);
  options.limits.knowledge = &kb;
  if (opts.prompt == "knowledge") options.variants = {PromptVariant::KnowledgeInformed};
  else if (opts.prompt == "zero-shot") options.variants = {PromptVariant::ZeroShot};
  else options.variants = {PromptVariant::ZeroShot, PromptVariant::KnowledgeInformed};

  EvalReport report = evaluate_benchmark(instances, *backend, options);
  std::string dir = out_dir.empty() ? "eval-out" : out_dir;
  write_report_files(dir, report);

  std::cout << metrics_csv(report, ScoringMode::Identification);
  std::cout << "\nreports written to " << dir << "\n";
  return kExitOk;
}

int cmd_report(const std::string& dir) {
  EvalReport report =
      report_from_json_text(read_file((fs::path(dir) / "report.json").string()));
  write_report_files(dir, report);
  std::cout << "== identification ==\n" << metrics_csv(report, ScoringMode::Identification);
  std::cout << "\n== correction ==\n" << metrics_csv(report, ScoringMode::Correction);
  std::cout << "\n== usage ==\n" << usage_csv(report);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"FSP/FLTL model checking, error injection, repair and evaluation"};
  app.require_subcommand(1);

  // check
  std::string check_file;
  bool check_json = false;
  CLI::App* check_cmd = app.add_subcommand("check", "Compile-check a model file");
  check_cmd->add_option("file", check_file, "Model file (.lts)")->required();
  check_cmd->add_flag("--json", check_json, "Emit diagnostics as JSON lines");

  // inject
  std::string inject_file, inject_out;
  int inject_spelling = 1, inject_grammar = 1;
  std::uint64_t inject_seed = 1;
  CLI::App* inject_cmd = app.add_subcommand("inject", "Inject syntax errors into a clean model");
  inject_cmd->add_option("file", inject_file, "Model file (.lts)")->required();
  inject_cmd->add_option("--spelling", inject_spelling, "Spelling error count")->required();
  inject_cmd->add_option("--grammar", inject_grammar, "Grammar error count")->required();
  inject_cmd->add_option("--seed", inject_seed, "Generator seed")->required();
  inject_cmd->add_option("-o,--out", inject_out, "Output directory");

  // bench build
  std::string bench_out = "bench", bench_config, bench_data_dir;
  CLI::App* bench_cmd = app.add_subcommand("bench", "Benchmark corpus operations");
  CLI::App* bench_build = bench_cmd->add_subcommand("build", "Materialize the benchmark");
  bench_build->add_option("-o,--out", bench_out, "Benchmark directory");
  bench_build->add_option("--config", bench_config, "Instance config JSON");
  bench_build->add_option("--data-dir", bench_data_dir, "Base model data directory");

  // repair
  std::string repair_file, repair_out;
  BackendOptions repair_opts;
  CLI::App* repair_cmd = app.add_subcommand("repair", "Run the repair pipeline on a model");
  repair_cmd->add_option("file", repair_file, "Model file (.lts)")->required();
  repair_cmd->add_option("-o,--out", repair_out, "Output directory");
  add_backend_flags(repair_cmd, repair_opts);

  // eval
  std::string eval_dir, eval_out;
  int eval_repeat = 3, eval_jobs = 1;
  BackendOptions eval_opts;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Score the pipeline over a benchmark");
  eval_cmd->add_option("bench-dir", eval_dir, "Benchmark directory")->required();
  eval_cmd->add_option("--repeat", eval_repeat, "Repetitions per instance");
  eval_cmd->add_option("--jobs", eval_jobs, "Parallel instances");
  eval_cmd->add_option("-o,--out", eval_out, "Report output directory");
  add_backend_flags(eval_cmd, eval_opts);

  // report
  std::string report_dir;
  CLI::App* report_cmd = app.add_subcommand("report", "Re-render reports from report.json");
  report_cmd->add_option("dir", report_dir, "Directory with report.json")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (check_cmd->parsed()) return cmd_check(check_file, check_json);
    if (inject_cmd->parsed())
      return cmd_inject(inject_file, inject_spelling, inject_grammar, inject_seed, inject_out);
    if (bench_cmd->parsed() && bench_build->parsed())
      return cmd_bench_build(bench_out, bench_config, bench_data_dir);
    if (repair_cmd->parsed()) return cmd_repair(repair_file, repair_opts, repair_out);
    if (eval_cmd->parsed()) return cmd_eval(eval_dir, eval_opts, eval_repeat, eval_jobs, eval_out);
    if (report_cmd->parsed()) return cmd_report(report_dir);
    std::cerr << "no subcommand\n";
    return kExitUsage;
  } catch (const BackendError& e) {
    std::cerr << "backend error: " << e.what() << "\n";
    return kExitBackend;
  } catch (const InjectionError& e) {
    std::cerr << "injection error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseFailedError& e) {
    std::cerr << e.what() << "\n";
    for (const Diagnostic& d : e.diagnostics())
      std::cerr << "  " << format_diagnostic(d) << "\n";
    return kExitCheckFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
