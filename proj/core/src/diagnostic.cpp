#include "dcsrepair/diagnostic.hpp"

#include <algorithm>
#include <sstream>

#include <nlohmann/json.hpp>

namespace dcsrepair {

const char* diagnostic_code_name(DiagnosticCode code) {
  switch (code) {
    case DiagnosticCode::MissingTerminator: return "MissingTerminator";
    case DiagnosticCode::MissingComma: return "MissingComma";
    case DiagnosticCode::MissingChoiceBar: return "MissingChoiceBar";
    case DiagnosticCode::ExpectedEquals: return "ExpectedEquals";
    case DiagnosticCode::ExpectedProcessIdentifier: return "ExpectedProcessIdentifier";
    case DiagnosticCode::UnbalancedBracket: return "UnbalancedBracket";
    case DiagnosticCode::BadRangeDots: return "BadRangeDots";
    case DiagnosticCode::BadIndexNotation: return "BadIndexNotation";
    case DiagnosticCode::BadGuard: return "BadGuard";
    case DiagnosticCode::UnexpectedToken: return "UnexpectedToken";
    case DiagnosticCode::UnresolvedReference: return "UnresolvedReference";
    case DiagnosticCode::NearMissIdentifier: return "NearMissIdentifier";
  }
  return "UnexpectedToken";
}

const char* severity_name(Severity severity) {
  return severity == Severity::Error ? "error" : "warning";
}

std::string to_json_line(const Diagnostic& diag) {
  nlohmann::ordered_json j;
  j["code"] = diagnostic_code_name(diag.code);
  j["severity"] = severity_name(diag.severity);
  j["line"] = diag.span.line;
  j["column"] = diag.span.col;
  j["length"] = diag.span.len;
  j["message"] = diag.message;
  return j.dump();
}

std::string format_diagnostic(const Diagnostic& diag) {
  std::ostringstream out;
  out << "line " << diag.span.line << ":" << diag.span.col << ": " << diag.message;
  return out.str();
}

bool has_errors(const std::vector<Diagnostic>& diags) {
  return std::any_of(diags.begin(), diags.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

void sort_by_position(std::vector<Diagnostic>& diags) {
  std::stable_sort(diags.begin(), diags.end(), [](const Diagnostic& a, const Diagnostic& b) {
    if (a.span.line != b.span.line) return a.span.line < b.span.line;
    return a.span.col < b.span.col;
  });
}

const Diagnostic* first_error(const std::vector<Diagnostic>& diags) {
  const Diagnostic* best = nullptr;
  for (const Diagnostic& d : diags) {
    if (d.severity != Severity::Error) continue;
    if (!best || d.span.line < best->span.line ||
        (d.span.line == best->span.line && d.span.col < best->span.col)) {
      best = &d;
    }
  }
  return best;
}

}  // namespace dcsrepair
