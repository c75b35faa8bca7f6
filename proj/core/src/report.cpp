#include "dcsrepair/report.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

namespace dcsrepair {

RatioCounts& RatioCounts::accumulate(const Counts& c) {
  tp = tp + Ratio::of(c.tp, 1);
  fp = fp + Ratio::of(c.fp, 1);
  fn = fn + Ratio::of(c.fn, 1);
  tn = tn + Ratio::of(c.tn, 1);
  return *this;
}

RatioCounts RatioCounts::averaged(int k) const {
  if (k <= 1) return *this;
  return RatioCounts{tp / k, fp / k, fn / k, tn / k};
}

RatioCounts RatioCounts::pooled_with(const RatioCounts& other) const {
  return RatioCounts{tp + other.tp, fp + other.fp, fn + other.fn, tn + other.tn};
}

namespace {

MetricValue ratio_metric(const Ratio& num, const Ratio& den) {
  // num/den with exact rationals; undefined when the denominator is zero.
  if (den.num == 0) return std::nullopt;
  return Ratio::of(num.num * den.den, num.den * den.num);
}

}  // namespace

Metrics RatioCounts::metrics() const {
  Metrics m;
  Ratio total = tp + fp + fn + tn;
  m.accuracy = ratio_metric(tp + tn, total);
  m.precision = ratio_metric(tp, tp + fp);
  m.recall = ratio_metric(tp, tp + fn);
  if (m.precision && m.recall && (m.precision->num != 0 || m.recall->num != 0)) {
    Ratio tp2 = tp + tp;
    m.f1 = ratio_metric(tp2, tp2 + fp + fn);
  }
  return m;
}

InstanceResult run_repetitions(const BenchmarkInstance& instance, RepairBackend& backend,
                               int repetitions, const RepairLimits& limits) {
  if (repetitions < 1) repetitions = 1;

  std::vector<MutationRecord> spelling_records;
  std::vector<MutationRecord> grammar_records;
  for (const MutationRecord& r : instance.records) {
    (mutation_class(r.kind) == MutationClass::Spelling ? spelling_records : grammar_records)
        .push_back(r);
  }

  InstanceResult result;
  result.id = instance.config.id;
  result.repetitions = repetitions;
  ErrorTypeEval spelling_row{"Spelling", static_cast<int>(spelling_records.size()), {}, {}};
  ErrorTypeEval grammar_row{"Grammar", static_cast<int>(grammar_records.size()), {}, {}};

  int successes = 0;
  for (int rep = 0; rep < repetitions; ++rep) {
    RepairSession session = run_pipeline(instance.broken, backend, limits);
    if (session.outcome == RepairOutcome::Success) ++successes;

    SourceModel after_spelling(session.after_spelling());
    // The spelling stage is scored between the broken input and its own
    // output; the grammar loop between that output and the final model.
    // Record coordinates stay valid as long as the backend does not reflow
    // lines; if it does, the grammar rows fall back to the broken input.
    SourceModel grammar_base = after_spelling.line_count() == instance.broken.line_count()
                                   ? after_spelling
                                   : instance.broken;

    spelling_row.identification.accumulate(
        classify(instance.broken, after_spelling, spelling_records, instance.clean,
                 ScoringMode::Identification)
            .counts);
    spelling_row.correction.accumulate(
        classify(instance.broken, after_spelling, spelling_records, instance.clean,
                 ScoringMode::Correction)
            .counts);
    grammar_row.identification.accumulate(
        classify(grammar_base, session.final_model, grammar_records, instance.clean,
                 ScoringMode::Identification)
            .counts);
    grammar_row.correction.accumulate(
        classify(grammar_base, session.final_model, grammar_records, instance.clean,
                 ScoringMode::Correction)
            .counts);

    result.usage.tt_seconds += session.usage.wall_seconds;
    result.usage.cycles += session.usage.cycles;
    result.usage.input_tokens += static_cast<double>(session.usage.input_tokens);
    result.usage.output_tokens += static_cast<double>(session.usage.output_tokens);
    result.usage.cost_usd += session.usage.cost_usd;
  }

  spelling_row.identification = spelling_row.identification.averaged(repetitions);
  spelling_row.correction = spelling_row.correction.averaged(repetitions);
  grammar_row.identification = grammar_row.identification.averaged(repetitions);
  grammar_row.correction = grammar_row.correction.averaged(repetitions);
  result.usage.tt_seconds /= repetitions;
  result.usage.cycles /= repetitions;
  result.usage.input_tokens /= repetitions;
  result.usage.output_tokens /= repetitions;
  result.usage.cost_usd /= repetitions;
  result.success_rate = static_cast<double>(successes) / repetitions;

  result.rows.push_back(std::move(spelling_row));
  result.rows.push_back(std::move(grammar_row));
  return result;
}

EvalReport evaluate_benchmark(const std::vector<BenchmarkInstance>& instances,
                              RepairBackend& backend, const EvalOptions& options) {
  EvalReport report;
  report.backend = backend.descriptor().name;
  report.repetitions = options.repetitions;

  for (PromptVariant variant : options.variants) {
    VariantReport vr;
    vr.variant = prompt_variant_name(variant);
    vr.instances.resize(instances.size());

    RepairLimits limits = options.limits;
    limits.variant = variant;

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= instances.size()) return;
        vr.instances[i] = run_repetitions(instances[i], backend, options.repetitions, limits);
      }
    };
    int jobs = std::max(1, options.jobs);
    if (jobs == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
      for (std::thread& t : pool) t.join();
    }
    report.variants.push_back(std::move(vr));
  }
  return report;
}

ErrorTypeEval sum_row(const VariantReport& report, const std::string& error_type) {
  ErrorTypeEval sum{error_type, 0, {}, {}};
  for (const InstanceResult& inst : report.instances) {
    for (const ErrorTypeEval& row : inst.rows) {
      if (row.error_type != error_type) continue;
      sum.n_errors += row.n_errors;
      sum.identification = sum.identification.pooled_with(row.identification);
      sum.correction = sum.correction.pooled_with(row.correction);
    }
  }
  return sum;
}

UsageStats average_usage(const VariantReport& report) {
  UsageStats avg;
  if (report.instances.empty()) return avg;
  for (const InstanceResult& inst : report.instances) {
    avg.tt_seconds += inst.usage.tt_seconds;
    avg.cycles += inst.usage.cycles;
    avg.input_tokens += inst.usage.input_tokens;
    avg.output_tokens += inst.usage.output_tokens;
    avg.cost_usd += inst.usage.cost_usd;
  }
  double n = static_cast<double>(report.instances.size());
  avg.tt_seconds /= n;
  avg.cycles /= n;
  avg.input_tokens /= n;
  avg.output_tokens /= n;
  avg.cost_usd /= n;
  return avg;
}

namespace {

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

void metric_cells(std::ostringstream& out, const RatioCounts& counts) {
  Metrics m = counts.metrics();
  out << "," << render_percent(m.accuracy) << "," << render_percent(m.precision) << ","
      << render_percent(m.recall) << "," << render_fraction(m.f1);
}

std::string format_double(double v, int digits) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(digits);
  out << v;
  return out.str();
}

}  // namespace

std::string metrics_csv(const EvalReport& report, ScoringMode mode) {
  std::ostringstream out;
  bool multi = report.variants.size() > 1;
  out << "Model,Error Type,N";
  for (const VariantReport& vr : report.variants) {
    std::string prefix = multi ? vr.variant + " " : "";
    out << "," << prefix << "Acc," << prefix << "Pre," << prefix << "Recall," << prefix << "F1";
  }
  out << "\n";

  if (report.variants.empty()) return out.str();
  const VariantReport& first = report.variants.front();
  for (std::size_t i = 0; i < first.instances.size(); ++i) {
    for (std::size_t row = 0; row < first.instances[i].rows.size(); ++row) {
      const ErrorTypeEval& lead = first.instances[i].rows[row];
      out << csv_escape(first.instances[i].id) << "," << lead.error_type << "," << lead.n_errors;
      for (const VariantReport& vr : report.variants) {
        const ErrorTypeEval& cell = vr.instances[i].rows[row];
        metric_cells(out, mode == ScoringMode::Identification ? cell.identification
                                                              : cell.correction);
      }
      out << "\n";
    }
  }
  for (const std::string& error_type : {std::string("Spelling"), std::string("Grammar")}) {
    ErrorTypeEval lead = sum_row(first, error_type);
    out << "Sum," << error_type << "," << lead.n_errors;
    for (const VariantReport& vr : report.variants) {
      ErrorTypeEval cell = sum_row(vr, error_type);
      metric_cells(out, mode == ScoringMode::Identification ? cell.identification
                                                            : cell.correction);
    }
    out << "\n";
  }
  return out.str();
}

std::string usage_csv(const EvalReport& report) {
  std::ostringstream out;
  bool multi = report.variants.size() > 1;
  out << "Model";
  if (multi) out << ",Variant";
  out << ",TT (s),Cycle,Input Token,Output Token,Cost (USD)\n";
  for (const VariantReport& vr : report.variants) {
    for (const InstanceResult& inst : vr.instances) {
      out << csv_escape(inst.id);
      if (multi) out << "," << vr.variant;
      out << "," << format_double(inst.usage.tt_seconds, 3) << ","
          << format_double(inst.usage.cycles, 1) << ","
          << format_double(inst.usage.input_tokens, 0) << ","
          << format_double(inst.usage.output_tokens, 0) << ","
          << format_double(inst.usage.cost_usd, 4) << "\n";
    }
    UsageStats avg = average_usage(vr);
    out << "Average";
    if (multi) out << "," << vr.variant;
    out << "," << format_double(avg.tt_seconds, 3) << "," << format_double(avg.cycles, 1) << ","
        << format_double(avg.input_tokens, 0) << "," << format_double(avg.output_tokens, 0)
        << "," << format_double(avg.cost_usd, 4) << "\n";
  }
  return out.str();
}

namespace {

nlohmann::ordered_json ratio_json(const Ratio& r) {
  return nlohmann::ordered_json{{"num", r.num}, {"den", r.den}};
}

Ratio ratio_from_json(const nlohmann::json& j) {
  return Ratio::of(j.at("num").get<long long>(), j.at("den").get<long long>());
}

nlohmann::ordered_json counts_json(const RatioCounts& c) {
  return nlohmann::ordered_json{
      {"tp", ratio_json(c.tp)}, {"fp", ratio_json(c.fp)}, {"fn", ratio_json(c.fn)},
      {"tn", ratio_json(c.tn)}};
}

RatioCounts counts_from_json(const nlohmann::json& j) {
  return RatioCounts{ratio_from_json(j.at("tp")), ratio_from_json(j.at("fp")),
                     ratio_from_json(j.at("fn")), ratio_from_json(j.at("tn"))};
}

}  // namespace

std::string report_to_json_text(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["schema"] = "dcsrepair-report/1";
  j["backend"] = report.backend;
  j["repetitions"] = report.repetitions;
  j["variants"] = nlohmann::ordered_json::array();
  for (const VariantReport& vr : report.variants) {
    nlohmann::ordered_json jv;
    jv["variant"] = vr.variant;
    jv["instances"] = nlohmann::ordered_json::array();
    for (const InstanceResult& inst : vr.instances) {
      nlohmann::ordered_json ji;
      ji["id"] = inst.id;
      ji["repetitions"] = inst.repetitions;
      ji["success_rate"] = inst.success_rate;
      ji["usage"] = {{"tt_seconds", inst.usage.tt_seconds},
                     {"cycles", inst.usage.cycles},
                     {"input_tokens", inst.usage.input_tokens},
                     {"output_tokens", inst.usage.output_tokens},
                     {"cost_usd", inst.usage.cost_usd}};
      ji["rows"] = nlohmann::ordered_json::array();
      for (const ErrorTypeEval& row : inst.rows) {
        ji["rows"].push_back({{"error_type", row.error_type},
                              {"n", row.n_errors},
                              {"identification", counts_json(row.identification)},
                              {"correction", counts_json(row.correction)}});
      }
      jv["instances"].push_back(std::move(ji));
    }
    j["variants"].push_back(std::move(jv));
  }
  return j.dump(2) + "\n";
}

EvalReport report_from_json_text(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  EvalReport report;
  report.backend = j.at("backend").get<std::string>();
  report.repetitions = j.at("repetitions").get<int>();
  for (const auto& jv : j.at("variants")) {
    VariantReport vr;
    vr.variant = jv.at("variant").get<std::string>();
    for (const auto& ji : jv.at("instances")) {
      InstanceResult inst;
      inst.id = ji.at("id").get<std::string>();
      inst.repetitions = ji.at("repetitions").get<int>();
      inst.success_rate = ji.at("success_rate").get<double>();
      inst.usage.tt_seconds = ji.at("usage").at("tt_seconds").get<double>();
      inst.usage.cycles = ji.at("usage").at("cycles").get<double>();
      inst.usage.input_tokens = ji.at("usage").at("input_tokens").get<double>();
      inst.usage.output_tokens = ji.at("usage").at("output_tokens").get<double>();
      inst.usage.cost_usd = ji.at("usage").at("cost_usd").get<double>();
      for (const auto& jr : ji.at("rows")) {
        ErrorTypeEval row;
        row.error_type = jr.at("error_type").get<std::string>();
        row.n_errors = jr.at("n").get<int>();
        row.identification = counts_from_json(jr.at("identification"));
        row.correction = counts_from_json(jr.at("correction"));
        inst.rows.push_back(std::move(row));
      }
      vr.instances.push_back(std::move(inst));
    }
    report.variants.push_back(std::move(vr));
  }
  return report;
}

void write_report_files(const std::string& dir, const EvalReport& report) {
  std::filesystem::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& content) {
    std::ofstream out(std::filesystem::path(dir) / name, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write report file: " + name);
    out << content;
  };
  write("report.json", report_to_json_text(report));
  write("report_identification.csv", metrics_csv(report, ScoringMode::Identification));
  write("report_correction.csv", metrics_csv(report, ScoringMode::Correction));
  write("usage.csv", usage_csv(report));
}

}  // namespace dcsrepair
