#pragma once

#include <string>
#include <vector>

namespace dcsrepair {

struct GrammarRule {
  std::string id;    // unique, e.g. "R07"
  std::string name;
  std::string rule;
};

struct ErrorExample {
  std::string id;
  std::string category;  // "spelling" | "grammar"
  std::string pattern;
  std::string description;
  std::string before;
  std::string after;
};

// Prompt ingredients shipped as versioned data files so they can evolve
// without code changes: a DCS overview, identified grammar rules, the
// art-gallery reference model, and curated error-correction examples.
struct KnowledgeBase {
  std::string version;
  std::string overview;
  std::vector<GrammarRule> rules;
  std::string reference_model;
  std::vector<ErrorExample> error_examples;

  static KnowledgeBase load(const std::string& data_dir = "");
};

}  // namespace dcsrepair
