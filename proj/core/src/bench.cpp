#include "dcsrepair/bench.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "dcsrepair/check.hpp"
#include "dcsrepair/paths.hpp"

namespace dcsrepair {

namespace {

namespace fs = std::filesystem;

void walk_choices(const Choice& choice, bool& nondet, bool& guarded, bool& indexed);

void walk_target_features(const Target& t, bool& nondet, bool& guarded, bool& indexed) {
  if (t.kind == Target::Kind::Ref && !t.indices.empty()) indexed = true;
  if (t.kind == Target::Kind::Group && t.group) walk_choices(*t.group, nondet, guarded, indexed);
}

void walk_choices(const Choice& choice, bool& nondet, bool& guarded, bool& indexed) {
  std::set<std::string> heads;
  for (const Alternative& alt : choice.alternatives) {
    if (alt.guard) guarded = true;
    if (!alt.actions.empty()) {
      const std::string& head = alt.actions.front().head.name;
      if (!head.empty() && !heads.insert(head).second) nondet = true;
    }
    for (const ActionLabel& a : alt.actions)
      for (const LabelPart& p : a.parts)
        if (p.kind == LabelPart::Kind::Index || p.kind == LabelPart::Kind::Binder) indexed = true;
    walk_target_features(alt.target, nondet, guarded, indexed);
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return text;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

// The two constants an instance's (k, n) parameters scale, per base model.
const std::map<std::string, std::pair<std::string, std::string>>& scaling_consts() {
  static const std::map<std::string, std::pair<std::string, std::string>> table = {
      {"at", {"Aircraft", "Holding"}},
      {"bw", {"TeamCount", "RoundLimit"}},
      {"cm", {"Mice", "Depth"}},
      {"am", {"Subscribers", "Channels"}},
  };
  return table;
}

SourceModel set_const_value(const SourceModel& model, const std::string& name, int value) {
  LexResult lexed = tokenize(model.text());
  const auto& toks = lexed.stream.tokens;
  for (std::size_t i = 0; i + 3 < toks.size(); ++i) {
    if (toks[i].is_kw("const") && toks[i + 1].lexeme == name && toks[i + 2].is_op("=") &&
        toks[i + 3].kind == TokenKind::Integer) {
      return model.with_replacement(toks[i + 3].span, std::to_string(value));
    }
  }
  throw std::runtime_error("base model has no scaling constant '" + name + "'");
}

}  // namespace

std::vector<std::string> FeatureReport::missing() const {
  std::vector<std::string> out;
  if (!parallel_composition) out.push_back("parallel composition");
  if (!nondeterministic_choice) out.push_back("non-deterministic choice");
  if (!guarded_transitions) out.push_back("guarded transitions");
  if (!indexed_processes) out.push_back("indexed processes");
  return out;
}

FeatureReport detect_features(const Ast& ast) {
  FeatureReport report;
  for (const Definition& def : ast.definitions) {
    std::visit(
        [&](const auto& body) {
          using T = std::decay_t<decltype(body)>;
          if constexpr (std::is_same_v<T, CompositeDef>) {
            report.parallel_composition = true;
            for (const CompositeElem& e : body.body.elements)
              if (e.label)
                for (const LabelPart& p : e.label->parts)
                  if (p.kind == LabelPart::Kind::Binder) report.indexed_processes = true;
          } else if constexpr (std::is_same_v<T, ProcessDef>) {
            walk_choices(body.body, report.nondeterministic_choice, report.guarded_transitions,
                         report.indexed_processes);
            for (const LocalDef& local : body.locals) {
              for (const IndexDecl& d : local.indices)
                if (d.var) report.indexed_processes = true;
              walk_choices(local.body, report.nondeterministic_choice,
                           report.guarded_transitions, report.indexed_processes);
            }
          }
        },
        def.body);
  }
  return report;
}

LoadResult load_base_model(const std::string& path) {
  SourceModel model = SourceModel::from_file(path);
  ParseResult checked = check(model);
  if (!checked.ok)
    throw ParseFailedError("model does not compile: " + path, checked.diagnostics);
  LoadResult result{std::move(model), detect_features(checked.ast), {}};
  for (const std::string& feature : result.features.missing())
    result.warnings.push_back("feature class absent: " + feature);
  return result;
}

BenchmarkConfig BenchmarkConfig::defaults() {
  // Per-instance error budgets: 32 spelling + 39 grammar across 8 instances.
  BenchmarkConfig config;
  config.instances = {
      {"CM(2,2)", "cm", 2, 2, {3, 2}, 101},
      {"CM(3,3)", "cm", 3, 3, {6, 4}, 102},
      {"BW(2,2)", "bw", 2, 2, {4, 4}, 201},
      {"BW(5,2)", "bw", 5, 2, {4, 7}, 202},
      {"AM(2,5)", "am", 2, 5, {5, 4}, 301},
      {"AM(3,5)", "am", 3, 5, {5, 12}, 302},
      {"AT(2,2)", "at", 2, 2, {3, 2}, 401},
      {"AT(4,4)", "at", 4, 4, {2, 4}, 402},
  };
  return config;
}

BenchmarkConfig BenchmarkConfig::from_json(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  BenchmarkConfig config;
  for (const auto& ji : j.at("instances")) {
    InstanceConfig c;
    c.id = ji.at("id").get<std::string>();
    c.base = ji.at("base").get<std::string>();
    c.param_a = ji.at("params").at(0).get<int>();
    c.param_b = ji.at("params").at(1).get<int>();
    c.plan.spelling = ji.at("spelling").get<int>();
    c.plan.grammar = ji.at("grammar").get<int>();
    c.seed = ji.at("seed").get<std::uint64_t>();
    config.instances.push_back(std::move(c));
  }
  return config;
}

std::vector<std::string> bundled_model_names() { return {"at", "bw", "cm", "am"}; }

SourceModel materialize_instance(const InstanceConfig& config, const std::string& data_dir) {
  std::string dir = data_dir.empty() ? default_data_dir() : data_dir;
  std::string path = join_path(dir, "models/" + config.base + ".lts");
  SourceModel model = SourceModel::from_file(path);
  auto it = scaling_consts().find(config.base);
  if (it == scaling_consts().end())
    throw std::runtime_error("unknown base model '" + config.base + "'");
  model = set_const_value(model, it->second.first, config.param_a);
  model = set_const_value(model, it->second.second, config.param_b);
  return model;
}

std::vector<BenchmarkInstance> build_benchmark(const BenchmarkConfig& config,
                                               const std::string& data_dir) {
  std::vector<BenchmarkInstance> instances;
  for (const InstanceConfig& c : config.instances) {
    if (c.plan.total() < 1)
      throw std::invalid_argument("instance '" + c.id +
                                  "' must include at least one syntax error");
    BenchmarkInstance instance;
    instance.config = c;
    instance.clean = materialize_instance(c, data_dir);
    ParseResult checked = check(instance.clean);
    if (!checked.ok)
      throw ParseFailedError("clean model for '" + c.id + "' does not compile",
                             checked.diagnostics);
    auto [broken, records] = inject(instance.clean, c.plan, c.seed);
    instance.broken = std::move(broken);
    instance.records = std::move(records);
    VerifyReport verified = verify_injection_report(instance.broken, instance.records);
    if (!verified.ok) {
      std::string message = "injection verification failed for '" + c.id + "':";
      for (const std::string& f : verified.failures) message += "\n  " + f;
      throw std::runtime_error(message);
    }
    instances.push_back(std::move(instance));
  }
  return instances;
}

std::string benchmark_index_json(const std::vector<BenchmarkInstance>& instances) {
  nlohmann::ordered_json j;
  j["instances"] = nlohmann::ordered_json::array();
  int spelling = 0;
  int grammar = 0;
  for (const BenchmarkInstance& inst : instances) {
    nlohmann::ordered_json ji;
    ji["id"] = inst.config.id;
    ji["base"] = inst.config.base;
    ji["params"] = {inst.config.param_a, inst.config.param_b};
    ji["spelling"] = inst.config.plan.spelling;
    ji["grammar"] = inst.config.plan.grammar;
    ji["seed"] = inst.config.seed;
    ji["lines"] = inst.clean.line_count();
    j["instances"].push_back(std::move(ji));
    spelling += inst.config.plan.spelling;
    grammar += inst.config.plan.grammar;
  }
  j["totals"] = {{"instances", instances.size()},
                 {"spelling", spelling},
                 {"grammar", grammar},
                 {"total", spelling + grammar}};
  return j.dump(2) + "\n";
}

void write_benchmark(const std::string& dir, const std::vector<BenchmarkInstance>& instances) {
  fs::create_directories(dir);
  for (const BenchmarkInstance& inst : instances) {
    fs::path inst_dir = fs::path(dir) / inst.config.id;
    fs::create_directories(inst_dir);
    write_file((inst_dir / "clean.lts").string(), inst.clean.text());
    write_file((inst_dir / "broken.lts").string(), inst.broken.text());
    write_file((inst_dir / "manifest.json").string(),
               records_to_manifest(inst.config.id, inst.config.seed, inst.records));
  }
  write_file((fs::path(dir) / "index.json").string(), benchmark_index_json(instances));
}

std::vector<BenchmarkInstance> read_benchmark(const std::string& dir) {
  std::string index_text = read_file((fs::path(dir) / "index.json").string());
  nlohmann::json index = nlohmann::json::parse(index_text);
  std::vector<BenchmarkInstance> instances;
  for (const auto& ji : index.at("instances")) {
    BenchmarkInstance inst;
    inst.config.id = ji.at("id").get<std::string>();
    inst.config.base = ji.at("base").get<std::string>();
    inst.config.param_a = ji.at("params").at(0).get<int>();
    inst.config.param_b = ji.at("params").at(1).get<int>();
    inst.config.plan.spelling = ji.at("spelling").get<int>();
    inst.config.plan.grammar = ji.at("grammar").get<int>();
    inst.config.seed = ji.at("seed").get<std::uint64_t>();
    fs::path inst_dir = fs::path(dir) / inst.config.id;
    inst.clean = SourceModel::from_file((inst_dir / "clean.lts").string());
    inst.broken = SourceModel::from_file((inst_dir / "broken.lts").string());
    Manifest manifest = manifest_from_json(read_file((inst_dir / "manifest.json").string()));
    inst.records = std::move(manifest.records);
    instances.push_back(std::move(inst));
  }
  return instances;
}

}  // namespace dcsrepair
