#include "dcsrepair/mutation.hpp"

#include <stdexcept>

#include <nlohmann/json.hpp>

namespace dcsrepair {

std::array<MutationKind, kMutationKindCount> all_mutation_kinds() {
  return {MutationKind::AdjacentKeySubstitute, MutationKind::DuplicateChar,
          MutationKind::OmitChar,              MutationKind::PartialRename,
          MutationKind::DeleteTerminator,      MutationKind::DeleteComma,
          MutationKind::DeleteChoiceBar,       MutationKind::SwapAssign,
          MutationKind::SwapBrackets,          MutationKind::BreakParallel,
          MutationKind::RangeDotMutation,      MutationKind::IndexNotationSwap,
          MutationKind::MalformGuard};
}

MutationClass mutation_class(MutationKind kind) {
  switch (kind) {
    case MutationKind::AdjacentKeySubstitute:
    case MutationKind::DuplicateChar:
    case MutationKind::OmitChar:
    case MutationKind::PartialRename:
      return MutationClass::Spelling;
    default:
      return MutationClass::Grammar;
  }
}

const char* mutation_kind_name(MutationKind kind) {
  switch (kind) {
    case MutationKind::AdjacentKeySubstitute: return "adjacent_key_substitute";
    case MutationKind::DuplicateChar: return "duplicate_char";
    case MutationKind::OmitChar: return "omit_char";
    case MutationKind::PartialRename: return "partial_rename";
    case MutationKind::DeleteTerminator: return "delete_terminator";
    case MutationKind::DeleteComma: return "delete_comma";
    case MutationKind::DeleteChoiceBar: return "delete_choice_bar";
    case MutationKind::SwapAssign: return "swap_assign";
    case MutationKind::SwapBrackets: return "swap_brackets";
    case MutationKind::BreakParallel: return "break_parallel";
    case MutationKind::RangeDotMutation: return "range_dot_mutation";
    case MutationKind::IndexNotationSwap: return "index_notation_swap";
    case MutationKind::MalformGuard: return "malform_guard";
  }
  return "delete_terminator";
}

const char* mutation_class_name(MutationClass cls) {
  return cls == MutationClass::Spelling ? "spelling" : "grammar";
}

std::optional<MutationKind> mutation_kind_from_name(const std::string& name) {
  for (MutationKind kind : all_mutation_kinds())
    if (name == mutation_kind_name(kind)) return kind;
  return std::nullopt;
}

namespace {

SourceModel replace_at(const SourceModel& model, int line, int col, const std::string& expect,
                       const std::string& replacement, const char* direction) {
  std::size_t offset = model.offset_of(line, col);
  if (offset + expect.size() > model.text().size() ||
      model.text().compare(offset, expect.size(), expect) != 0) {
    throw std::runtime_error(std::string("mutation record does not match model text (") +
                             direction + ", line " + std::to_string(line) + ")");
  }
  return model.with_replacement(offset, expect.size(), replacement);
}

}  // namespace

SourceModel apply_record(const SourceModel& clean, const MutationRecord& record) {
  return replace_at(clean, record.line, record.col_start, record.original, record.mutated,
                    "apply");
}

SourceModel revert_record(const SourceModel& broken, const MutationRecord& record) {
  return replace_at(broken, record.line, record.col_start, record.mutated, record.original,
                    "revert");
}

SourceModel apply_all(const SourceModel& clean, const std::vector<MutationRecord>& records) {
  SourceModel out = clean;
  for (const MutationRecord& r : records) out = apply_record(out, r);
  return out;
}

SourceModel revert_all(const SourceModel& broken, const std::vector<MutationRecord>& records) {
  SourceModel out = broken;
  for (const MutationRecord& r : records) out = revert_record(out, r);
  return out;
}

std::string records_to_manifest(const std::string& instance, std::uint64_t seed,
                                const std::vector<MutationRecord>& records) {
  nlohmann::ordered_json j;
  j["instance"] = instance;
  j["seed"] = seed;
  j["records"] = nlohmann::ordered_json::array();
  for (const MutationRecord& r : records) {
    nlohmann::ordered_json jr;
    jr["kind"] = mutation_kind_name(r.kind);
    jr["class"] = mutation_class_name(mutation_class(r.kind));
    jr["line"] = r.line;
    jr["colStart"] = r.col_start;
    jr["colEnd"] = r.col_end;
    jr["original"] = r.original;
    jr["mutated"] = r.mutated;
    j["records"].push_back(std::move(jr));
  }
  return j.dump(2) + "\n";
}

Manifest manifest_from_json(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  Manifest m;
  m.instance = j.at("instance").get<std::string>();
  m.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& jr : j.at("records")) {
    MutationRecord r;
    auto kind = mutation_kind_from_name(jr.at("kind").get<std::string>());
    if (!kind) throw std::runtime_error("unknown mutation kind in manifest");
    r.kind = *kind;
    r.line = jr.at("line").get<int>();
    r.col_start = jr.at("colStart").get<int>();
    r.col_end = jr.at("colEnd").get<int>();
    r.original = jr.at("original").get<std::string>();
    r.mutated = jr.at("mutated").get<std::string>();
    r.seed = m.seed;
    m.records.push_back(std::move(r));
  }
  return m;
}

}  // namespace dcsrepair
