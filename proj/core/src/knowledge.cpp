#include "dcsrepair/knowledge.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "dcsrepair/paths.hpp"

namespace dcsrepair {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open knowledge file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

KnowledgeBase KnowledgeBase::load(const std::string& data_dir) {
  std::string dir = data_dir.empty() ? default_data_dir() : data_dir;
  KnowledgeBase kb;

  nlohmann::json dk =
      nlohmann::json::parse(read_file(join_path(dir, "knowledge/domain_knowledge.json")));
  kb.version = dk.value("version", "1");
  kb.overview = dk.at("overview").get<std::string>();
  std::set<std::string> seen_ids;
  for (const auto& jr : dk.at("grammar_rules")) {
    GrammarRule rule;
    rule.id = jr.at("id").get<std::string>();
    rule.name = jr.at("name").get<std::string>();
    rule.rule = jr.at("rule").get<std::string>();
    if (!seen_ids.insert(rule.id).second)
      throw std::runtime_error("duplicate grammar rule id: " + rule.id);
    kb.rules.push_back(std::move(rule));
  }

  kb.reference_model = read_file(join_path(dir, "knowledge/reference_model.lts"));

  nlohmann::json ex =
      nlohmann::json::parse(read_file(join_path(dir, "knowledge/error_examples.json")));
  for (const auto& je : ex.at("examples")) {
    ErrorExample example;
    example.id = je.at("id").get<std::string>();
    example.category = je.at("category").get<std::string>();
    example.pattern = je.at("pattern").get<std::string>();
    example.description = je.at("description").get<std::string>();
    example.before = je.at("before").get<std::string>();
    example.after = je.at("after").get<std::string>();
    kb.error_examples.push_back(std::move(example));
  }
  return kb;
}

}  // namespace dcsrepair
