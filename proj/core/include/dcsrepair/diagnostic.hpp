#pragma once

#include <string>
#include <vector>

#include "dcsrepair/source.hpp"

namespace dcsrepair {

enum class DiagnosticCode {
  MissingTerminator,
  MissingComma,
  MissingChoiceBar,
  ExpectedEquals,
  ExpectedProcessIdentifier,
  UnbalancedBracket,
  BadRangeDots,
  BadIndexNotation,
  BadGuard,
  UnexpectedToken,
  UnresolvedReference,
  NearMissIdentifier,
};

enum class Severity { Error, Warning };

struct Diagnostic {
  DiagnosticCode code = DiagnosticCode::UnexpectedToken;
  Severity severity = Severity::Error;
  Span span;
  std::string message;
};

const char* diagnostic_code_name(DiagnosticCode code);
const char* severity_name(Severity severity);

// One-line JSON rendering: {"code":...,"severity":...,"line":...,"column":...,
// "length":...,"message":...}. Stable key order for diffable output.
std::string to_json_line(const Diagnostic& diag);

// mtsa-style single line: "line L:C: message".
std::string format_diagnostic(const Diagnostic& diag);

bool has_errors(const std::vector<Diagnostic>& diags);
void sort_by_position(std::vector<Diagnostic>& diags);

// First error-severity diagnostic in position order, or nullptr.
const Diagnostic* first_error(const std::vector<Diagnostic>& diags);

}  // namespace dcsrepair
