#include "dcsrepair/prompt.hpp"

namespace dcsrepair {

const char* repair_task_name(RepairTask task) {
  return task == RepairTask::Spelling ? "spelling" : "grammar";
}

const char* prompt_variant_name(PromptVariant variant) {
  return variant == PromptVariant::KnowledgeInformed ? "knowledge" : "zero-shot";
}

namespace {

std::string instruction_for(RepairTask task) {
  if (task == RepairTask::Spelling) {
    return "Task: spelling correction. Review the FSP/FLTL model below and fix likely "
           "misspelled identifiers: typos, letter-case slips, and names that drift from "
           "their spelling elsewhere in the model. Do not restructure the model. Reply "
           "with the complete corrected model text.";
  }
  return "Task: grammar correction. The compiler rejected the model below with the error "
         "message given. Fix the grammar violation the message points at and reply with "
         "the complete corrected model text.";
}

}  // namespace

PromptDocument build_prompt(RepairTask task, const SourceModel& model,
                            const std::optional<std::string>& compiler_message,
                            const KnowledgeBase& knowledge) {
  if (task == RepairTask::Grammar && !compiler_message) throw MissingCompilerMessage();
  PromptDocument doc;
  doc.variant = PromptVariant::KnowledgeInformed;
  doc.task = task;
  doc.instruction = instruction_for(task);
  if (task == RepairTask::Grammar) doc.compiler_message = compiler_message;
  doc.model_text = model.text();
  doc.knowledge_version = knowledge.version;
  doc.overview = knowledge.overview;
  doc.rules = knowledge.rules;
  doc.reference_model = knowledge.reference_model;
  doc.error_examples = knowledge.error_examples;
  return doc;
}

PromptDocument build_zero_shot_prompt(RepairTask task, const SourceModel& model,
                                      const std::optional<std::string>& compiler_message) {
  if (task == RepairTask::Grammar && !compiler_message) throw MissingCompilerMessage();
  PromptDocument doc;
  doc.variant = PromptVariant::ZeroShot;
  doc.task = task;
  doc.instruction = instruction_for(task);
  if (task == RepairTask::Grammar) doc.compiler_message = compiler_message;
  doc.model_text = model.text();
  return doc;
}

nlohmann::ordered_json to_json(const PromptDocument& prompt) {
  nlohmann::ordered_json j;
  if (prompt.variant == PromptVariant::KnowledgeInformed) {
    nlohmann::ordered_json dk;
    dk["version"] = prompt.knowledge_version;
    dk["overview"] = prompt.overview;
    dk["grammar_rules"] = nlohmann::ordered_json::array();
    for (const GrammarRule& r : prompt.rules)
      dk["grammar_rules"].push_back({{"id", r.id}, {"name", r.name}, {"rule", r.rule}});
    j["domain_knowledge"] = std::move(dk);
    j["reference_model"] = prompt.reference_model;
    j["error_examples"] = nlohmann::ordered_json::array();
    for (const ErrorExample& e : prompt.error_examples) {
      j["error_examples"].push_back({{"id", e.id},
                                     {"category", e.category},
                                     {"pattern", e.pattern},
                                     {"description", e.description},
                                     {"before", e.before},
                                     {"after", e.after}});
    }
  }
  nlohmann::ordered_json task;
  task["type"] = repair_task_name(prompt.task);
  task["instruction"] = prompt.instruction;
  if (prompt.compiler_message) task["compiler_message"] = *prompt.compiler_message;
  task["model"] = prompt.model_text;
  j["task"] = std::move(task);
  return j;
}

std::string to_json_text(const PromptDocument& prompt) { return to_json(prompt).dump(2); }

std::string system_message(const PromptDocument& prompt) {
  if (prompt.variant == PromptVariant::ZeroShot) {
    return "You repair syntax errors in FSP/FLTL models.";
  }
  nlohmann::ordered_json full = to_json(prompt);
  nlohmann::ordered_json sections;
  sections["domain_knowledge"] = full["domain_knowledge"];
  sections["reference_model"] = full["reference_model"];
  sections["error_examples"] = full["error_examples"];
  return sections.dump(2);
}

std::string user_message(const PromptDocument& prompt) {
  nlohmann::ordered_json full = to_json(prompt);
  return full["task"].dump(2);
}

}  // namespace dcsrepair
