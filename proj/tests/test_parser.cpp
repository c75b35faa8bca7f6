#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dcsrepair/check.hpp"
#include "dcsrepair/lexer.hpp"
#include "dcsrepair/parser.hpp"

using namespace dcsrepair;

namespace {

ParseResult parse_text(const std::string& source) {
  return parse(tokenize(source).stream);
}

int count_code(const std::vector<Diagnostic>& diags, DiagnosticCode code) {
  int n = 0;
  for (const Diagnostic& d : diags)
    if (d.code == code) ++n;
  return n;
}

const char* kControllerListing =
    "// Define the set of controllable actions\n"
    "set Controllable = {idle, cook, moveToBelt}.\n"
    "\n"
    "// Define controller goals\n"
    "controllerSpec G1 = {\n"
    "  safety = {NotOverHeated},\n"
    "  liveness = {MOVE_TO_BELT},\n"
    "  assumption = {NOT_COOKING},\n"
    "  controllable = {Controllable}\n"
    "}.\n"
    "\n"
    "// Synthesize the controller\n"
    "controller ||C = (CERAMIC)~{G1}.\n";

}  // namespace

TEST_CASE("controller listing parses into three clean definitions") {
  ParseResult r = parse_text(kControllerListing);
  CHECK(r.ok);
  CHECK(r.diagnostics.empty());
  REQUIRE(r.ast.definitions.size() == 3);
  CHECK(definition_name(r.ast.definitions[0]) == "Controllable");
  CHECK(definition_name(r.ast.definitions[1]) == "G1");
  CHECK(definition_name(r.ast.definitions[2]) == "C");
  CHECK(definition_section(r.ast.definitions[1]) == Section::ControllerSpecs);
}

TEST_CASE("basic process snippets parse with zero diagnostics") {
  const char* snippets[] = {
      "CLOCK = (tick -> CLOCK).",
      "CERAMIC = (idle -> CERAMIC | cook -> COOKING).",
      "||SYS = (PROCESS_A || PROCESS_B).",
      "||TWO_SWITCH = (a:SWITCH || b:SWITCH).",
      "||NET = (CLIENT/{call/request, reply/wait}).",
      "||HIDDEN = (CLIENT)\\{wait}.",
      "COUNTER = COUNT[0],\nCOUNT[i:0..2] = (when (i < 2) inc -> COUNT[i + 1]\n"
      "                | when (i > 0) dec -> COUNT[i - 1]).",
      "P = (a -> b.lift -> STOP | c -> END).",
      "fluent Busy = <{start}, {finish}> initially 1.",
      "assert Live = <>Busy.",
      "ltl_property Safe = [](Busy -> !Idle).",
      "",
  };
  for (const char* snippet : snippets) {
    CAPTURE(snippet);
    ParseResult r = parse_text(snippet);
    CHECK(r.ok);
    CHECK(r.diagnostics.empty());
  }
}

TEST_CASE("empty input is a valid empty model") {
  ParseResult r = parse_text("");
  CHECK(r.ok);
  CHECK(r.ast.definitions.empty());
}

TEST_CASE("missing terminator reports dot expected at end of line 1") {
  ParseResult r = parse_text("CLOCK = (tick -> CLOCK)");
  CHECK(!r.ok);
  REQUIRE(r.diagnostics.size() == 1);
  const Diagnostic& d = r.diagnostics[0];
  CHECK(d.code == DiagnosticCode::MissingTerminator);
  CHECK(d.message.find("dot expected") != std::string::npos);
  CHECK(d.span.line == 1);
  CHECK(d.span.col == 24);  // one past the closing parenthesis
}

TEST_CASE("undefined references are not the parser's business") {
  ParseResult r = parse_text("CERAMIC = (idle -> CERAMIC | cook -> COOKING).");
  CHECK(r.ok);
  CHECK(r.diagnostics.empty());
}

TEST_CASE("missing comma in a set definition") {
  ParseResult r = parse_text("set Moves = {lift, push drop}.");
  CHECK(!r.ok);
  REQUIRE(count_code(r.diagnostics, DiagnosticCode::MissingComma) == 1);
  CHECK(r.diagnostics[0].span.col == 25);  // at 'drop'
}

TEST_CASE("missing choice bar between alternatives") {
  ParseResult r = parse_text("GATE = (open -> GATE close -> GATE).");
  CHECK(!r.ok);
  CHECK(count_code(r.diagnostics, DiagnosticCode::MissingChoiceBar) == 1);
}

TEST_CASE("dash instead of equals reports = expected") {
  ParseResult r = parse_text("const Limit - 3.");
  CHECK(!r.ok);
  REQUIRE(count_code(r.diagnostics, DiagnosticCode::ExpectedEquals) == 1);
  CHECK(r.diagnostics[0].message.find("= expected") != std::string::npos);

  ParseResult p = parse_text("P - (a -> P).");
  CHECK(count_code(p.diagnostics, DiagnosticCode::ExpectedEquals) == 1);
}

TEST_CASE("process identifier expected after a dangling arrow") {
  ParseResult r = parse_text("P = (a -> | b -> P).");
  CHECK(!r.ok);
  REQUIRE(count_code(r.diagnostics, DiagnosticCode::ExpectedProcessIdentifier) >= 1);
  bool found = false;
  for (const Diagnostic& d : r.diagnostics)
    if (d.message.find("process identifier expected") != std::string::npos) found = true;
  CHECK(found);
}

TEST_CASE("swapped brackets are reported once per pair") {
  ParseResult set_swap = parse_text("set Alarm = (ring, flash).");
  CHECK(!set_swap.ok);
  CHECK(count_code(set_swap.diagnostics, DiagnosticCode::UnbalancedBracket) == 1);

  ParseResult body_swap = parse_text("P = {a -> P}.");
  CHECK(!body_swap.ok);
  CHECK(count_code(body_swap.diagnostics, DiagnosticCode::UnbalancedBracket) == 1);
}

TEST_CASE("range dot mutations are BadRangeDots") {
  ParseResult one = parse_text("range N = 0.2.");
  CHECK(count_code(one.diagnostics, DiagnosticCode::BadRangeDots) == 1);

  ParseResult three = parse_text("range N = 0...2.");
  CHECK(count_code(three.diagnostics, DiagnosticCode::BadRangeDots) == 1);

  ParseResult binder = parse_text("P = (go[i:0...2] -> P).");
  CHECK(count_code(binder.diagnostics, DiagnosticCode::BadRangeDots) == 1);
}

TEST_CASE("index notation confusion is BadIndexNotation") {
  // bound variable written with a label dot
  ParseResult dotted = parse_text("S[i:0..2] = (out.i -> S[i]).");
  CHECK(!dotted.ok);
  CHECK(count_code(dotted.diagnostics, DiagnosticCode::BadIndexNotation) == 1);

  // free name written with brackets
  ParseResult bracketed = parse_text("P = (cell[part] -> P).");
  CHECK(!bracketed.ok);
  CHECK(count_code(bracketed.diagnostics, DiagnosticCode::BadIndexNotation) == 1);

  // both legal forms side by side
  ParseResult fine = parse_text("S[i:0..2] = (out[i] -> cell.part -> S[i]).");
  CHECK(fine.ok);
}

TEST_CASE("malformed when clauses are BadGuard") {
  ParseResult missing_open = parse_text("P[i:0..2] = (when i < 2) go -> P[i + 1]).");
  CHECK(count_code(missing_open.diagnostics, DiagnosticCode::BadGuard) >= 1);

  ParseResult missing_close = parse_text("P[i:0..2] = (when (i < 2 go -> P[i + 1]).");
  CHECK(count_code(missing_close.diagnostics, DiagnosticCode::BadGuard) >= 1);

  ParseResult doubled = parse_text("P[i:0..2] = (when ((i < 2) go -> P[i + 1]).");
  CHECK(count_code(doubled.diagnostics, DiagnosticCode::BadGuard) >= 1);
}

TEST_CASE("single bar in a composite asks for parallel composition") {
  ParseResult r = parse_text("||SYS = (A | B).");
  CHECK(!r.ok);
  bool found = false;
  for (const Diagnostic& d : r.diagnostics)
    if (d.message.find("'||' expected") != std::string::npos) found = true;
  CHECK(found);
}

TEST_CASE("controllerSpec rejects unknown and duplicate fields") {
  ParseResult unknown = parse_text(
      "controllerSpec G = { safety = {A}, marking = {B} }.");
  CHECK(!unknown.ok);
  bool mentions_field = false;
  for (const Diagnostic& d : unknown.diagnostics)
    if (d.message.find("unknown controllerSpec field 'marking'") != std::string::npos)
      mentions_field = true;
  CHECK(mentions_field);

  ParseResult duplicate = parse_text(
      "controllerSpec G = { safety = {A}, safety = {B} }.");
  CHECK(!duplicate.ok);
}

TEST_CASE("fluent initiating and terminating sets must be disjoint") {
  ParseResult overlap = parse_text("fluent F = <{start, stop}, {stop}>.");
  CHECK(!overlap.ok);

  ParseResult fine = parse_text("fluent F = <{start}, {stop}> initially 0.");
  CHECK(fine.ok);
}

TEST_CASE("recovery isolates independent errors per definition") {
  std::string source =
      "P = (a -> P\n"            // missing ')' and '.'
      "range N = 0.2.\n"          // bad range dots
      "set S = {x y}.\n"          // missing comma
      "Q = (b -> Q)\n"            // missing dot
      "R = (c -> R).\n";          // clean
  ParseResult r = parse_text(source);
  CHECK(!r.ok);
  // at least one error for each of the four broken definitions
  CHECK(count_code(r.diagnostics, DiagnosticCode::BadRangeDots) >= 1);
  CHECK(count_code(r.diagnostics, DiagnosticCode::MissingComma) >= 1);
  CHECK(count_code(r.diagnostics, DiagnosticCode::MissingTerminator) >= 1);
  CHECK(r.ast.definitions.size() == 5);
}

TEST_CASE("parse is deterministic") {
  std::string source = "P = (a -> P | when (x) b -> Q).";
  ParseResult first = parse_text(source);
  ParseResult second = parse_text(source);
  REQUIRE(first.diagnostics.size() == second.diagnostics.size());
  for (std::size_t i = 0; i < first.diagnostics.size(); ++i) {
    CHECK(first.diagnostics[i].code == second.diagnostics[i].code);
    CHECK(first.diagnostics[i].message == second.diagnostics[i].message);
  }
}

TEST_CASE("check composes parse and consistency") {
  // valid, fully resolved model
  CHECK(check("CLOCK = (tick -> CLOCK).").ok);
  // parse fine, reference missing -> consistency error
  ParseResult undef = check("CERAMIC = (idle -> CERAMIC | cook -> COOKING).");
  CHECK(!undef.ok);
  CHECK(count_code(undef.diagnostics, DiagnosticCode::UnresolvedReference) == 1);
  // deleted comma -> at least one error
  CHECK(!check("set Moves = {lift push}.").ok);
}

TEST_CASE("bundled models parse without diagnostics") {
  for (const char* name : {"at", "bw", "cm", "am"}) {
    CAPTURE(name);
    SourceModel model = SourceModel::from_file(
        std::string(DCSREPAIR_TEST_DATA_DIR) + "/models/" + name + ".lts");
    ParseResult r = check(model);
    for (const Diagnostic& d : r.diagnostics) {
      CAPTURE(format_diagnostic(d));
      CHECK(false);
    }
    CHECK(r.ok);
  }
}
