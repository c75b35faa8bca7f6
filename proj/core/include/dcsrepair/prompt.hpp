#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "dcsrepair/knowledge.hpp"
#include "dcsrepair/source.hpp"

namespace dcsrepair {

enum class RepairTask { Spelling, Grammar };
enum class PromptVariant { KnowledgeInformed, ZeroShot };

const char* repair_task_name(RepairTask task);
const char* prompt_variant_name(PromptVariant variant);

class MissingCompilerMessage : public std::invalid_argument {
 public:
  MissingCompilerMessage() : std::invalid_argument("grammar task requires a compiler message") {}
};

// Structured prompt document. The knowledge-informed variant carries four
// sections (domain knowledge, reference model, error examples, task); the
// zero-shot baseline carries only the task section.
struct PromptDocument {
  PromptVariant variant = PromptVariant::KnowledgeInformed;
  RepairTask task = RepairTask::Spelling;
  std::string instruction;
  std::optional<std::string> compiler_message;
  std::string model_text;

  std::string knowledge_version;
  std::string overview;
  std::vector<GrammarRule> rules;
  std::string reference_model;
  std::vector<ErrorExample> error_examples;
};

PromptDocument build_prompt(RepairTask task, const SourceModel& model,
                            const std::optional<std::string>& compiler_message,
                            const KnowledgeBase& knowledge);

PromptDocument build_zero_shot_prompt(RepairTask task, const SourceModel& model,
                                      const std::optional<std::string>& compiler_message);

// Serialized form: {"domain_knowledge": ..., "reference_model": ...,
// "error_examples": ..., "task": ...}; zero-shot documents contain only
// "task".
nlohmann::ordered_json to_json(const PromptDocument& prompt);
std::string to_json_text(const PromptDocument& prompt);

// Chat-completions split: sections 1-3 form the system message, the task
// section forms the user message.
std::string system_message(const PromptDocument& prompt);
std::string user_message(const PromptDocument& prompt);

}  // namespace dcsrepair
