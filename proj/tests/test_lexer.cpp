#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dcsrepair/lexer.hpp"

using namespace dcsrepair;

namespace {

std::vector<std::string> lexemes(const LexResult& result) {
  std::vector<std::string> out;
  for (const Token& t : result.stream.tokens) out.push_back(t.lexeme);
  return out;
}

}  // namespace

TEST_CASE("clock example tokenizes into the expected stream") {
  LexResult r = tokenize("CLOCK = (tick -> CLOCK).");
  REQUIRE(r.diagnostics.empty());
  CHECK(lexemes(r) ==
        std::vector<std::string>{"CLOCK", "=", "(", "tick", "->", "CLOCK", ")", "."});
  CHECK(r.stream.tokens[0].kind == TokenKind::UpperIdent);
  CHECK(r.stream.tokens[3].kind == TokenKind::LowerIdent);
  CHECK(r.stream.tokens[4].kind == TokenKind::Operator);
  CHECK(r.stream.tokens[7].kind == TokenKind::Punct);
}

TEST_CASE("empty input yields no tokens and no diagnostics") {
  LexResult r = tokenize("");
  CHECK(r.stream.tokens.empty());
  CHECK(r.diagnostics.empty());
  CHECK(r.stream.reconstruct() == "");
}

TEST_CASE("range dots use maximal munch") {
  LexResult r = tokenize("range N = 0..2");
  REQUIRE(r.diagnostics.empty());
  CHECK(lexemes(r) == std::vector<std::string>{"range", "N", "=", "0", "..", "2"});
  CHECK(r.stream.tokens[0].kind == TokenKind::Keyword);

  LexResult three = tokenize("0...2");
  CHECK(lexemes(three) == std::vector<std::string>{"0", "..", ".", "2"});
}

TEST_CASE("spans carry 1-based line and column") {
  LexResult r = tokenize("a\n  b -> c");
  REQUIRE(r.stream.tokens.size() == 4);
  CHECK(r.stream.tokens[0].span.line == 1);
  CHECK(r.stream.tokens[0].span.col == 1);
  CHECK(r.stream.tokens[1].span.line == 2);
  CHECK(r.stream.tokens[1].span.col == 3);
  CHECK(r.stream.tokens[2].span.col == 5);
}

TEST_CASE("comments are preserved as inter-token whitespace") {
  std::string source = "// header\nP = (a -> P). /* trailing */\n";
  LexResult r = tokenize(source);
  CHECK(r.diagnostics.empty());
  CHECK(r.stream.reconstruct() == source);
  CHECK(r.stream.tokens.front().lexeme == "P");
}

TEST_CASE("unknown characters produce diagnostics but never abort") {
  LexResult r = tokenize("P = (a -> P)@.");
  REQUIRE(r.diagnostics.size() == 1);
  CHECK(r.diagnostics[0].code == DiagnosticCode::UnexpectedToken);
  CHECK(r.diagnostics[0].span.col == 13);
  CHECK(r.stream.reconstruct() == "P = (a -> P)@.");
}

TEST_CASE("unterminated block comment is a diagnostic, not a crash") {
  LexResult r = tokenize("P = STOP. /* runs off");
  REQUIRE(r.diagnostics.size() == 1);
  CHECK(r.diagnostics[0].message == "unterminated block comment");
  CHECK(r.stream.reconstruct() == "P = STOP. /* runs off");
}

TEST_CASE("keywords are recognized case-sensitively") {
  CHECK(is_keyword("controllerSpec"));
  CHECK(is_keyword("ltl_property"));
  CHECK(is_keyword("STOP"));
  CHECK(!is_keyword("stop"));
  CHECK(!is_keyword("Controllerspec"));
  LexResult r = tokenize("set Set seta");
  CHECK(r.stream.tokens[0].kind == TokenKind::Keyword);
  CHECK(r.stream.tokens[1].kind == TokenKind::UpperIdent);
  CHECK(r.stream.tokens[2].kind == TokenKind::LowerIdent);
}

// Round-trip property: reconstruction is byte-exact on randomized soups of
// language fragments.
TEST_CASE("tokenize round-trips random sources byte-for-byte") {
  static const char* pieces[] = {
      "CLOCK",  "= ",    "(",    "tick", " -> ", ")",     ".",    "\n",  "  ", "||",
      "|",      "..",    ".",    "{",    "}",    "when ", "<",    ">",   "~",  "// note\n",
      "/* b */", "range", " 0 ", "a.b",  "[i:0..2]", ",",  "\\",  "&&",  "!",  "X U ",
  };
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    std::string source;
    int n = static_cast<int>(rng() % 40);
    for (int i = 0; i < n; ++i) source += pieces[rng() % std::size(pieces)];
    LexResult r = tokenize(source);
    CHECK(r.stream.reconstruct() == source);
  }
}
