#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dcsrepair/source.hpp"

namespace dcsrepair {

enum class MutationKind {
  // spelling class
  AdjacentKeySubstitute,
  DuplicateChar,
  OmitChar,
  PartialRename,
  // grammar class
  DeleteTerminator,
  DeleteComma,
  DeleteChoiceBar,
  SwapAssign,       // '=' <-> '-'
  SwapBrackets,     // '{...}' <-> '(...)'
  BreakParallel,    // '||' -> '|'
  RangeDotMutation, // '..' -> '.' or '...'
  IndexNotationSwap,  // 'a[i]' <-> 'a.i'
  MalformGuard,     // drop/duplicate a when-clause parenthesis
};

enum class MutationClass { Spelling, Grammar };

constexpr int kMutationKindCount = 13;

std::array<MutationKind, kMutationKindCount> all_mutation_kinds();
MutationClass mutation_class(MutationKind kind);
const char* mutation_kind_name(MutationKind kind);
const char* mutation_class_name(MutationClass cls);
std::optional<MutationKind> mutation_kind_from_name(const std::string& name);

// Ground truth for one injected error. Coordinates are 1-based and refer to
// the clean model; [col_start, col_end) is the byte range the original text
// occupied there. Replacing that range with `mutated` produces the erroneous
// line; in the erroneous model the same range holds `mutated` (records never
// share a line, so coordinates stay valid both ways).
struct MutationRecord {
  MutationKind kind = MutationKind::DeleteTerminator;
  int line = 1;
  int col_start = 1;
  int col_end = 1;
  std::string original;
  std::string mutated;
  std::string target_identifier;  // set for spelling kinds
  std::uint64_t seed = 0;
};

SourceModel apply_record(const SourceModel& clean, const MutationRecord& record);
SourceModel revert_record(const SourceModel& broken, const MutationRecord& record);
SourceModel apply_all(const SourceModel& clean, const std::vector<MutationRecord>& records);
SourceModel revert_all(const SourceModel& broken, const std::vector<MutationRecord>& records);

// Manifest schema: {instance, seed, records: [{kind, class, line, colStart,
// colEnd, original, mutated}]}.
std::string records_to_manifest(const std::string& instance, std::uint64_t seed,
                                const std::vector<MutationRecord>& records);
struct Manifest {
  std::string instance;
  std::uint64_t seed = 0;
  std::vector<MutationRecord> records;
};
Manifest manifest_from_json(const std::string& json_text);

}  // namespace dcsrepair
