#pragma once

#include <vector>

#include "dcsrepair/ast.hpp"
#include "dcsrepair/diagnostic.hpp"
#include "dcsrepair/token.hpp"

namespace dcsrepair {

struct ParseResult {
  Ast ast;
  std::vector<Diagnostic> diagnostics;
  bool ok = false;  // true iff diagnostics carry no error severity
};

// Recursive-descent parse with per-definition error recovery: on a hard
// error the parser reports once and resynchronizes on '.' or a token that
// can start a new top-level definition, so independent errors in separate
// definitions all surface. Milder slips (missing '.', ',', '|', '=') are
// reported and parsing continues as if the token were present.
ParseResult parse(const TokenStream& stream);

}  // namespace dcsrepair
