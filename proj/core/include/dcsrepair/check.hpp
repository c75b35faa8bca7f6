#pragma once

#include <string_view>

#include "dcsrepair/consistency.hpp"
#include "dcsrepair/lexer.hpp"
#include "dcsrepair/parser.hpp"
#include "dcsrepair/source.hpp"
#include "dcsrepair/symbols.hpp"

namespace dcsrepair {

// Everything the toolchain knows about one model text. `diagnostics` is the
// merged, position-sorted view the compile check reports: lexer and parser
// findings always, consistency findings only once the model is syntactically
// clean (a half-parsed model would yield bogus unresolved references).
// Symbols and near-miss findings are computed unconditionally so spelling
// repair can work on broken models too.
struct ModelAnalysis {
  TokenStream stream;
  ParseResult parse;  // parser-level diagnostics only
  SymbolTable symbols;
  std::vector<NearMissFinding> findings;
  std::vector<Diagnostic> diagnostics;
  bool ok = false;
  bool syntax_ok = false;  // lexer + parser clean, before consistency
};

ModelAnalysis analyze(std::string_view source);
ModelAnalysis analyze(const SourceModel& model);

// The pipeline's single "compile" predicate: tokenize + parse + consistency.
// A model compiles iff the result carries no error-severity diagnostic.
ParseResult check(std::string_view source);
ParseResult check(const SourceModel& model);

}  // namespace dcsrepair
