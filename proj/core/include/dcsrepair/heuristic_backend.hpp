#pragma once

#include "dcsrepair/backend.hpp"

namespace dcsrepair {

// Deterministic offline repairer. Spelling: apply every near-miss finding
// (suspect -> candidate) and rewrite unresolved references to the nearest
// defined identifier. Grammar: fix each current diagnostic in place —
// insert "X expected" tokens at the reported position, repair swapped or
// unbalanced bracket pairs, normalize range dots, and flip between [i] and
// .i index notation. Every edit anchors at a diagnostic or finding span, so
// lines the compiler has nothing to say about are never touched.
class HeuristicBackend : public RepairBackend {
 public:
  BackendDescriptor descriptor() const override { return {"heuristic", true}; }
  CompletionResult complete(const PromptDocument& prompt) override;
};

}  // namespace dcsrepair
