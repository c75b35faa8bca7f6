#include "dcsrepair/repair.hpp"

#include <chrono>

#include "dcsrepair/check.hpp"
#include "dcsrepair/lexer.hpp"

namespace dcsrepair {

const char* repair_outcome_name(RepairOutcome outcome) {
  switch (outcome) {
    case RepairOutcome::Success: return "success";
    case RepairOutcome::Failed: return "failed";
    case RepairOutcome::BackendError: return "backend-error";
  }
  return "failed";
}

namespace {

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string current;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  if (!current.empty()) lines.push_back(current);
  return lines;
}

bool is_blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

// A line "looks like model text" when it is a comment or carries one of the
// structural tokens every definition needs; prose sentences carry neither.
bool looks_like_model_line(const std::string& line) {
  std::size_t at = line.find_first_not_of(" \t\r");
  if (at == std::string::npos) return false;
  if (line.compare(at, 2, "//") == 0 || line.compare(at, 2, "/*") == 0 ||
      line.compare(at, 1, "*") == 0)
    return true;
  if (line.find_first_of("=(){}[]|\\~") != std::string::npos) return true;
  if (line.find("->") != std::string::npos) return true;
  static const char* keywords[] = {"set ",        "range ",          "const ",  "fluent ",
                                   "controller ", "controllerSpec ", "assert ", "ltl_property "};
  for (const char* kw : keywords)
    if (line.compare(at, std::char_traits<char>::length(kw), kw) == 0) return true;
  return false;
}

std::string strip_prose(const std::string& text) {
  std::vector<std::string> lines = split_lines(text);
  std::size_t first = 0;
  std::size_t last = lines.size();
  while (first < last && (is_blank(lines[first]) || !looks_like_model_line(lines[first])))
    ++first;
  while (last > first && (is_blank(lines[last - 1]) || !looks_like_model_line(lines[last - 1])))
    --last;
  if (first >= last) return "";
  if (first == 0 && last == lines.size()) return text;  // untouched: keep byte-identical
  std::string out;
  for (std::size_t i = first; i < last; ++i) {
    out += lines[i];
    out += '\n';
  }
  return out;
}

}  // namespace

SourceModel extract_model(const std::string& response_text) {
  std::vector<std::string> lines = split_lines(response_text);

  // Fenced blocks first; when several appear, the longest is the model.
  std::vector<std::string> blocks;
  std::string current;
  bool in_block = false;
  for (const std::string& line : lines) {
    std::size_t at = line.find_first_not_of(" \t");
    bool fence = at != std::string::npos && line.compare(at, 3, "```") == 0;
    if (fence) {
      if (in_block) blocks.push_back(current);
      current.clear();
      in_block = !in_block;
      continue;
    }
    if (in_block) {
      current += line;
      current += '\n';
    }
  }

  std::string candidate;
  if (!blocks.empty()) {
    for (const std::string& block : blocks)
      if (block.size() > candidate.size()) candidate = block;
    candidate = strip_prose(candidate);
  } else {
    candidate = strip_prose(response_text);
  }
  if (candidate.empty()) throw NoModelFound();
  return SourceModel(std::move(candidate));
}

namespace {

PromptDocument make_prompt(RepairTask task, const SourceModel& model,
                           const std::optional<std::string>& message,
                           const RepairLimits& limits) {
  if (limits.variant == PromptVariant::ZeroShot)
    return build_zero_shot_prompt(task, model, message);
  if (!limits.knowledge)
    throw std::invalid_argument("knowledge-informed repair requires a knowledge base");
  return build_prompt(task, model, message, *limits.knowledge);
}

}  // namespace

RepairSession run_pipeline(const SourceModel& model, RepairBackend& backend,
                           const RepairLimits& limits) {
  auto started = std::chrono::steady_clock::now();
  RepairSession session;
  session.input = model;
  session.final_model = model;
  session.backend_name = backend.descriptor().name;
  session.variant = limits.variant;

  auto finish = [&](RepairOutcome outcome) {
    session.outcome = outcome;
    session.usage.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    session.usage.cost_usd =
        session.usage.input_tokens * limits.prices.input_per_million / 1e6 +
        session.usage.output_tokens * limits.prices.output_per_million / 1e6;
    return session;
  };

  SourceModel current = model;
  if (check(current).ok) return finish(RepairOutcome::Success);

  auto run_attempt = [&](RepairTask task, const std::optional<std::string>& message) {
    Attempt attempt;
    attempt.stage = task;
    attempt.compiler_message = message;
    attempt.prompt = make_prompt(task, current, message, limits);
    CompletionResult completion = backend.complete(attempt.prompt);
    session.usage.cycles += 1;
    session.usage.input_tokens += completion.tokens.input;
    session.usage.output_tokens += completion.tokens.output;
    attempt.backend_response = completion.text;
    try {
      SourceModel extracted = extract_model(completion.text);
      attempt.extracted_model = extracted.text();
      current = std::move(extracted);
    } catch (const NoModelFound&) {
      // A garbage response still consumes the attempt; the model is kept.
      attempt.extraction_ok = false;
      attempt.extracted_model = current.text();
    }
    attempt.post_check = check(current).diagnostics;
    session.attempts.push_back(std::move(attempt));
  };

  try {
    run_attempt(RepairTask::Spelling, std::nullopt);
    int grammar_attempts = 0;
    while (grammar_attempts < limits.max_grammar_attempts) {
      ParseResult checked = check(current);
      if (checked.ok) break;
      const Diagnostic* diag = first_error(checked.diagnostics);
      std::string message = diag ? format_diagnostic(*diag) : "model does not compile";
      run_attempt(RepairTask::Grammar, message);
      ++grammar_attempts;
    }
  } catch (const BackendError& e) {
    session.error_message = e.what();
    session.final_model = current;
    return finish(RepairOutcome::BackendError);
  }

  session.final_model = current;
  return finish(check(current).ok ? RepairOutcome::Success : RepairOutcome::Failed);
}

nlohmann::ordered_json session_to_json(const RepairSession& session) {
  nlohmann::ordered_json j;
  j["schema"] = "dcsrepair-session/1";
  j["backend"] = session.backend_name;
  j["variant"] = prompt_variant_name(session.variant);
  j["outcome"] = repair_outcome_name(session.outcome);
  j["input"] = session.input.text();
  j["final_model"] = session.final_model.text();
  j["usage"] = {{"input_tokens", session.usage.input_tokens},
                {"output_tokens", session.usage.output_tokens},
                {"wall_seconds", session.usage.wall_seconds},
                {"cycles", session.usage.cycles},
                {"cost_usd", session.usage.cost_usd}};
  j["attempts"] = nlohmann::ordered_json::array();
  for (const Attempt& a : session.attempts) {
    nlohmann::ordered_json ja;
    ja["stage"] = repair_task_name(a.stage);
    if (a.compiler_message) ja["compiler_message"] = *a.compiler_message;
    else ja["compiler_message"] = nullptr;
    ja["prompt"] = to_json(a.prompt);
    ja["backend_response"] = a.backend_response;
    ja["extracted_model"] = a.extracted_model;
    ja["extraction_ok"] = a.extraction_ok;
    ja["post_check_diagnostics"] = nlohmann::ordered_json::array();
    for (const Diagnostic& d : a.post_check)
      ja["post_check_diagnostics"].push_back(nlohmann::ordered_json::parse(to_json_line(d)));
    j["attempts"].push_back(std::move(ja));
  }
  if (!session.error_message.empty()) j["error"] = session.error_message;
  return j;
}

std::string session_to_json_text(const RepairSession& session) {
  return session_to_json(session).dump(2) + "\n";
}

namespace {

void require(bool cond, const std::string& message, bool& ok, std::vector<std::string>* errors) {
  if (cond) return;
  ok = false;
  if (errors) errors->push_back(message);
}

}  // namespace

bool validate_session_json(const nlohmann::json& j, std::vector<std::string>* errors) {
  bool ok = true;
  require(j.is_object(), "session must be an object", ok, errors);
  if (!ok) return false;

  require(j.value("schema", "") == "dcsrepair-session/1", "unknown schema", ok, errors);
  for (const char* key : {"backend", "variant", "outcome", "input", "final_model"})
    require(j.contains(key) && j[key].is_string(), std::string(key) + " must be a string", ok,
            errors);
  std::string outcome = j.value("outcome", "");
  require(outcome == "success" || outcome == "failed" || outcome == "backend-error",
          "outcome out of range", ok, errors);

  require(j.contains("usage") && j["usage"].is_object(), "usage must be an object", ok, errors);
  if (j.contains("usage") && j["usage"].is_object()) {
    const auto& usage = j["usage"];
    for (const char* key : {"input_tokens", "output_tokens", "wall_seconds", "cycles", "cost_usd"})
      require(usage.contains(key) && usage[key].is_number(),
              std::string("usage.") + key + " must be a number", ok, errors);
    require(usage.value("cycles", 0) >= 0, "usage.cycles must be non-negative", ok, errors);
  }

  require(j.contains("attempts") && j["attempts"].is_array(), "attempts must be an array", ok,
          errors);
  if (j.contains("attempts") && j["attempts"].is_array()) {
    int grammar = 0;
    for (const auto& a : j["attempts"]) {
      require(a.is_object(), "attempt must be an object", ok, errors);
      std::string stage = a.value("stage", "");
      require(stage == "spelling" || stage == "grammar", "attempt stage out of range", ok,
              errors);
      if (stage == "grammar") {
        ++grammar;
        require(a.contains("compiler_message") && a["compiler_message"].is_string(),
                "grammar attempts carry a compiler message", ok, errors);
      } else {
        require(!a.contains("compiler_message") || a["compiler_message"].is_null(),
                "spelling attempts carry no compiler message", ok, errors);
      }
      for (const char* key : {"backend_response", "extracted_model"})
        require(a.contains(key) && a[key].is_string(), std::string("attempt.") + key, ok,
                errors);
      require(a.contains("prompt") && a["prompt"].is_object() && a["prompt"].contains("task"),
              "attempt.prompt must carry a task section", ok, errors);
      require(a.contains("post_check_diagnostics") && a["post_check_diagnostics"].is_array(),
              "attempt.post_check_diagnostics must be an array", ok, errors);
    }
    (void)grammar;
  }
  return ok;
}

}  // namespace dcsrepair
