#include "dcsrepair/check.hpp"

namespace dcsrepair {

ModelAnalysis analyze(std::string_view source) {
  ModelAnalysis out;
  LexResult lexed = tokenize(source);
  out.stream = std::move(lexed.stream);
  out.parse = parse(out.stream);

  out.diagnostics = lexed.diagnostics;
  out.diagnostics.insert(out.diagnostics.end(), out.parse.diagnostics.begin(),
                         out.parse.diagnostics.end());
  out.syntax_ok = !has_errors(out.diagnostics);

  out.symbols = collect_symbols(out.parse.ast);
  out.findings = find_near_miss_identifiers(out.symbols);

  if (out.syntax_ok) {
    std::vector<Diagnostic> unresolved = find_unresolved_references(out.parse.ast, out.symbols);
    out.diagnostics.insert(out.diagnostics.end(), unresolved.begin(), unresolved.end());
    for (const NearMissFinding& f : out.findings)
      out.diagnostics.push_back(to_diagnostic(f));
  }
  sort_by_position(out.diagnostics);
  out.ok = !has_errors(out.diagnostics);
  return out;
}

ModelAnalysis analyze(const SourceModel& model) { return analyze(model.text()); }

ParseResult check(std::string_view source) {
  ModelAnalysis a = analyze(source);
  ParseResult result;
  result.ast = std::move(a.parse.ast);
  result.diagnostics = std::move(a.diagnostics);
  result.ok = a.ok;
  return result;
}

ParseResult check(const SourceModel& model) { return check(model.text()); }

}  // namespace dcsrepair
