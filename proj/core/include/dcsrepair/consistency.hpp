#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dcsrepair/diagnostic.hpp"
#include "dcsrepair/symbols.hpp"

namespace dcsrepair {

// Unit-cost Levenshtein distance.
int edit_distance(std::string_view a, std::string_view b);

enum class LexicalClass { UpperIdent, LowerIdent };

// A minority identifier whose spelling is suspiciously close to a
// strictly-more-frequent identifier of the same lexical class. The candidate
// vocabulary is the model's own identifiers, not an English dictionary: a
// valid word can still be a model-level misspelling.
struct NearMissFinding {
  std::string suspect;
  int suspect_count = 0;
  std::vector<Span> suspect_spans;
  std::string candidate;
  int candidate_count = 0;
  int edit_distance = 0;
  LexicalClass lexical_class = LexicalClass::LowerIdent;
  // Whether the suspect still names something that exists (actions always
  // do). Unresolvable suspects escalate the finding to an error.
  bool resolves = true;
};

constexpr int kDefaultNearMissDistance = 2;

std::vector<NearMissFinding> find_near_miss_identifiers(const SymbolTable& table,
                                                        int max_distance = kDefaultNearMissDistance);

Diagnostic to_diagnostic(const NearMissFinding& finding);

}  // namespace dcsrepair
