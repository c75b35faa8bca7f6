#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dcsrepair/backend.hpp"
#include "dcsrepair/diagnostic.hpp"
#include "dcsrepair/knowledge.hpp"
#include "dcsrepair/prompt.hpp"
#include "dcsrepair/source.hpp"

namespace dcsrepair {

enum class RepairOutcome { Success, Failed, BackendError };
const char* repair_outcome_name(RepairOutcome outcome);

struct PriceTable {
  double input_per_million = 0.0;
  double output_per_million = 0.0;
};

struct UsageCounters {
  long input_tokens = 0;
  long output_tokens = 0;
  double wall_seconds = 0.0;
  int cycles = 0;  // backend invocations
  double cost_usd = 0.0;
};

struct Attempt {
  RepairTask stage = RepairTask::Spelling;
  PromptDocument prompt;
  std::optional<std::string> compiler_message;  // grammar attempts only
  std::string backend_response;
  std::string extracted_model;
  bool extraction_ok = true;
  std::vector<Diagnostic> post_check;
};

struct RepairSession {
  SourceModel input;
  RepairOutcome outcome = RepairOutcome::Failed;
  SourceModel final_model;
  UsageCounters usage;
  std::vector<Attempt> attempts;
  std::string backend_name;
  PromptVariant variant = PromptVariant::KnowledgeInformed;
  std::string error_message;

  int grammar_attempts() const {
    int n = 0;
    for (const Attempt& a : attempts)
      if (a.stage == RepairTask::Grammar) ++n;
    return n;
  }
  // Model text after the spelling stage (the grammar loop's starting point).
  std::string after_spelling() const {
    for (const Attempt& a : attempts)
      if (a.stage == RepairTask::Spelling) return a.extracted_model;
    return input.text();
  }
};

struct RepairLimits {
  int max_grammar_attempts = 4;
  PromptVariant variant = PromptVariant::KnowledgeInformed;
  const KnowledgeBase* knowledge = nullptr;  // required for the knowledge-informed variant
  PriceTable prices;
};

class NoModelFound : public std::runtime_error {
 public:
  NoModelFound() : std::runtime_error("response contains no model text") {}
};

// Pulls the model out of a backend response: the longest fenced code block
// if any, otherwise the whole response; leading and trailing prose lines are
// stripped. Throws NoModelFound when nothing model-shaped remains.
SourceModel extract_model(const std::string& response_text);

// One spelling attempt, then grammar attempts against the first compiler
// error until the model compiles or the attempt cap is spent. An input that
// already compiles succeeds with zero attempts.
RepairSession run_pipeline(const SourceModel& model, RepairBackend& backend,
                           const RepairLimits& limits);

nlohmann::ordered_json session_to_json(const RepairSession& session);
std::string session_to_json_text(const RepairSession& session);

// Structural validation of a serialized session trace.
bool validate_session_json(const nlohmann::json& j, std::vector<std::string>* errors = nullptr);

}  // namespace dcsrepair
