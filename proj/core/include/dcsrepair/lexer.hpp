#pragma once

#include <string_view>
#include <vector>

#include "dcsrepair/diagnostic.hpp"
#include "dcsrepair/token.hpp"

namespace dcsrepair {

struct LexResult {
  TokenStream stream;
  std::vector<Diagnostic> diagnostics;
};

// Total function: every byte of input ends up either in a token lexeme or in
// the recorded inter-token whitespace, so the stream reconstructs the source
// exactly. Characters outside the language surface as UnexpectedToken
// diagnostics but still produce a token.
LexResult tokenize(std::string_view source);

bool is_keyword(std::string_view word);

}  // namespace dcsrepair
