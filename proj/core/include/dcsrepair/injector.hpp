#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dcsrepair/mutation.hpp"
#include "dcsrepair/source.hpp"

namespace dcsrepair {

struct InjectionPlan {
  int spelling = 0;
  int grammar = 0;
  int total() const { return spelling + grammar; }
};

class InjectionError : public std::runtime_error {
 public:
  enum class Kind { NoApplicableSite, PlanInfeasible };
  InjectionError(Kind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Mutates exactly one site, chosen by the seeded generator among the
// applicable ones. A site only counts as applicable when the resulting model
// is detectably broken (check failure or a consistency finding); silently
// absorbed edits would be semantic changes, which the catalog excludes.
// Throws InjectionError{NoApplicableSite} when the kind has nowhere to land.
std::pair<SourceModel, MutationRecord> apply_mutation(const SourceModel& model,
                                                      MutationKind kind, std::uint64_t seed);

// Injects plan.spelling + plan.grammar mutations, kinds drawn round-robin
// over each class catalog (skipping kinds without applicable sites), at most
// one mutation per line, and—when counts permit—at least one mutation in
// every major model section. Throws InjectionError{PlanInfeasible} when the
// model cannot host the plan.
std::pair<SourceModel, std::vector<MutationRecord>> inject(const SourceModel& model,
                                                           InjectionPlan plan,
                                                           std::uint64_t seed);

struct VerifyReport {
  bool ok = true;
  std::vector<std::string> failures;
};

// True iff (a) each grammar record alone breaks the parse, (b) each spelling
// record alone triggers a parse failure or a consistency finding, and
// (c) reverting every record restores a model that passes check byte-exactly.
bool verify_injection(const SourceModel& mutated, const std::vector<MutationRecord>& records);
VerifyReport verify_injection_report(const SourceModel& mutated,
                                     const std::vector<MutationRecord>& records);

}  // namespace dcsrepair
