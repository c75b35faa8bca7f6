#include "dcsrepair/consistency.hpp"

#include <algorithm>

namespace dcsrepair {

int edit_distance(std::string_view a, std::string_view b) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  std::vector<int> prev(m + 1);
  std::vector<int> cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= m; ++j) {
      int subst = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, subst});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

namespace {

struct Entry {
  std::string name;
  int count;
  std::vector<Span> spans;
};

void scan_class(const std::map<std::string, std::vector<Span>>& uses, LexicalClass cls,
                int max_distance, const SymbolTable& table,
                std::vector<NearMissFinding>& out) {
  std::vector<Entry> entries;
  entries.reserve(uses.size());
  for (const auto& [name, spans] : uses)
    entries.push_back(Entry{name, static_cast<int>(spans.size()), spans});

  for (const Entry& suspect : entries) {
    const Entry* best = nullptr;
    int best_dist = max_distance + 1;
    for (const Entry& candidate : entries) {
      if (candidate.name == suspect.name) continue;
      if (candidate.count <= suspect.count) continue;  // minority form is the suspect
      int dist = edit_distance(suspect.name, candidate.name);
      if (dist < 1 || dist > max_distance) continue;
      if (!best || dist < best_dist ||
          (dist == best_dist && (candidate.count > best->count ||
                                 (candidate.count == best->count && candidate.name < best->name)))) {
        best = &candidate;
        best_dist = dist;
      }
    }
    if (!best) continue;
    NearMissFinding f;
    f.suspect = suspect.name;
    f.suspect_count = suspect.count;
    f.suspect_spans = suspect.spans;
    std::sort(f.suspect_spans.begin(), f.suspect_spans.end(), [](const Span& a, const Span& b) {
      return a.offset < b.offset;
    });
    f.candidate = best->name;
    f.candidate_count = best->count;
    f.edit_distance = best_dist;
    f.lexical_class = cls;
    f.resolves = cls == LexicalClass::LowerIdent || table.defined_upper(suspect.name);
    out.push_back(std::move(f));
  }
}

}  // namespace

std::vector<NearMissFinding> find_near_miss_identifiers(const SymbolTable& table,
                                                        int max_distance) {
  std::vector<NearMissFinding> out;
  scan_class(table.upper_uses, LexicalClass::UpperIdent, max_distance, table, out);
  scan_class(table.actions, LexicalClass::LowerIdent, max_distance, table, out);
  std::sort(out.begin(), out.end(), [](const NearMissFinding& a, const NearMissFinding& b) {
    const Span& sa = a.suspect_spans.empty() ? Span{} : a.suspect_spans.front();
    const Span& sb = b.suspect_spans.empty() ? Span{} : b.suspect_spans.front();
    if (sa.offset != sb.offset) return sa.offset < sb.offset;
    return a.suspect < b.suspect;
  });
  return out;
}

Diagnostic to_diagnostic(const NearMissFinding& finding) {
  Diagnostic d;
  d.code = DiagnosticCode::NearMissIdentifier;
  d.severity = finding.resolves ? Severity::Warning : Severity::Error;
  d.span = finding.suspect_spans.empty() ? Span{} : finding.suspect_spans.front();
  d.message = "identifier '" + finding.suspect + "' (" +
              std::to_string(finding.suspect_count) + " occurrence" +
              (finding.suspect_count == 1 ? "" : "s") + ") may be a misspelling of '" +
              finding.candidate + "' (" + std::to_string(finding.candidate_count) +
              " occurrences, edit distance " + std::to_string(finding.edit_distance) + ")";
  return d;
}

}  // namespace dcsrepair
