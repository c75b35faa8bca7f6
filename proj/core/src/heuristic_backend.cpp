#include "dcsrepair/heuristic_backend.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "dcsrepair/check.hpp"

namespace dcsrepair {

namespace {

struct Edit {
  std::size_t offset = 0;
  std::size_t len = 0;
  std::string replacement;
};

std::string apply_edits(const std::string& text, std::vector<Edit> edits) {
  std::sort(edits.begin(), edits.end(), [](const Edit& a, const Edit& b) {
    if (a.offset != b.offset) return a.offset > b.offset;
    return a.len > b.len;
  });
  std::string out = text;
  std::size_t last_start = std::string::npos;
  for (const Edit& e : edits) {
    if (e.offset + e.len > out.size()) continue;
    if (last_start != std::string::npos && e.offset + e.len > last_start) continue;  // overlap
    out.replace(e.offset, e.len, e.replacement);
    last_start = e.offset;
  }
  return out;
}

// "'X' expected ... (found 'Y')" -> {X, Y}
std::optional<std::string> quoted_after(const std::string& message, const std::string& marker) {
  std::size_t at = message.find(marker);
  if (at == std::string::npos) return std::nullopt;
  std::size_t open = message.find('\'', at + marker.size());
  if (open == std::string::npos) return std::nullopt;
  std::size_t close = message.find('\'', open + 1);
  if (close == std::string::npos) return std::nullopt;
  return message.substr(open + 1, close - open - 1);
}

std::optional<std::string> expected_lexeme(const std::string& message) {
  // messages use the shape "'X' expected ..."
  if (message.size() >= 2 && message[0] == '\'') {
    std::size_t close = message.find('\'', 1);
    if (close != std::string::npos && message.find("expected", close) != std::string::npos)
      return message.substr(1, close - 1);
  }
  return std::nullopt;
}

bool is_open_bracket(const std::string& s) { return s == "{" || s == "("; }

std::size_t match_forward(const std::string& text, std::size_t open_at) {
  char open = text[open_at];
  char close = open == '{' ? '}' : (open == '(' ? ')' : ']');
  int depth = 0;
  for (std::size_t i = open_at; i < text.size(); ++i) {
    if (text[i] == open) ++depth;
    else if (text[i] == close && --depth == 0) return i;
  }
  return std::string::npos;
}

// Insertion point for list separators: right after the previous
// non-whitespace byte, so "{a b}" becomes "{a, b}" rather than "{a ,b}".
std::size_t after_previous_token(const std::string& text, std::size_t offset) {
  std::size_t at = offset;
  while (at > 0 && std::isspace(static_cast<unsigned char>(text[at - 1]))) --at;
  return at;
}

std::string span_text(const std::string& text, const Span& span) {
  if (span.offset + static_cast<std::size_t>(span.len) > text.size()) return "";
  return text.substr(span.offset, static_cast<std::size_t>(span.len));
}

std::optional<std::string> nearest_defined(const SymbolTable& table, const std::string& name,
                                           int max_distance) {
  std::optional<std::string> best;
  int best_dist = max_distance + 1;
  auto consider_name = [&](const std::string& candidate) {
    if (candidate == name) return;
    int dist = edit_distance(name, candidate);
    if (dist > max_distance) return;
    if (!best || dist < best_dist || (dist == best_dist && candidate < *best)) {
      best = candidate;
      best_dist = dist;
    }
  };
  auto consider = [&](const std::map<std::string, Span>& defs) {
    for (const auto& [candidate, span] : defs) {
      (void)span;
      consider_name(candidate);
    }
  };
  consider(table.processes);
  consider(table.composites);
  consider(table.sets);
  consider(table.ranges);
  consider(table.consts);
  consider(table.fluents);
  consider(table.specs);
  consider(table.properties);
  for (const auto& [proc, locals] : table.locals_by_process) {
    (void)proc;
    for (const std::string& local : locals) consider_name(local);
  }
  return best;
}

int upper_count(const SymbolTable& table, const std::string& name) {
  auto it = table.upper_uses.find(name);
  return it == table.upper_uses.end() ? 0 : static_cast<int>(it->second.size());
}

// One unresolved name against its nearest defined neighbor: the minority
// spelling is the typo. When the defined form is the minority (a renamed
// definition), every one of its occurrences moves to the referenced name;
// otherwise this reference moves to the defined name.
void add_unresolved_fix(const ModelAnalysis& a, const std::string& text, const Span& span,
                        std::vector<Edit>& edits) {
  std::string name = span_text(text, span);
  if (name.empty()) return;
  for (const NearMissFinding& f : a.findings) {
    // This name is the healthy majority of a near-miss pair; repairing the
    // minority form resolves the reference without touching it.
    if (f.candidate == name) return;
  }
  std::optional<std::string> candidate =
      nearest_defined(a.symbols, name, kDefaultNearMissDistance);
  if (!candidate) return;
  for (const NearMissFinding& f : a.findings)
    if (f.suspect == *candidate) return;  // candidate itself is a flagged typo

  if (upper_count(a.symbols, *candidate) < upper_count(a.symbols, name)) {
    auto it = a.symbols.upper_uses.find(*candidate);
    if (it != a.symbols.upper_uses.end()) {
      for (const Span& occurrence : it->second)
        edits.push_back(
            Edit{occurrence.offset, static_cast<std::size_t>(occurrence.len), name});
    }
  } else {
    edits.push_back(Edit{span.offset, static_cast<std::size_t>(span.len), *candidate});
  }
}

void add_spelling_edits(const ModelAnalysis& a, const std::string& text,
                        std::vector<Edit>& edits) {
  for (const NearMissFinding& f : a.findings) {
    for (const Span& span : f.suspect_spans)
      edits.push_back(Edit{span.offset, static_cast<std::size_t>(span.len), f.candidate});
  }
  // Unresolved references are recomputed here so spelling repair also works
  // on models whose parse is still broken.
  for (const Diagnostic& d : find_unresolved_references(a.parse.ast, a.symbols))
    add_unresolved_fix(a, text, d.span, edits);
}

void collect_binders_choice(const Choice& c, std::set<std::string>& vars);

void collect_binders_label(const ActionLabel& label, std::set<std::string>& vars) {
  for (const LabelPart& p : label.parts)
    if (p.kind == LabelPart::Kind::Binder && !p.name.empty()) vars.insert(p.name);
}

void collect_binders_choice(const Choice& c, std::set<std::string>& vars) {
  for (const Alternative& alt : c.alternatives) {
    for (const ActionLabel& a : alt.actions) collect_binders_label(a, vars);
    if (alt.target.kind == Target::Kind::Group && alt.target.group)
      collect_binders_choice(*alt.target.group, vars);
  }
}

// Index variables bound anywhere inside the definition covering `line`.
std::set<std::string> binders_near_line(const Ast& ast, int line) {
  std::set<std::string> vars;
  for (const Definition& def : ast.definitions) {
    if (line < def.first_line || line > def.last_line) continue;
    if (const auto* proc = std::get_if<ProcessDef>(&def.body)) {
      for (const IndexDecl& d : proc->indices)
        if (d.var) vars.insert(*d.var);
      collect_binders_choice(proc->body, vars);
      for (const LocalDef& local : proc->locals) {
        for (const IndexDecl& d : local.indices)
          if (d.var) vars.insert(*d.var);
        collect_binders_choice(local.body, vars);
      }
    } else if (const auto* comp = std::get_if<CompositeDef>(&def.body)) {
      for (const CompositeElem& e : comp->body.elements)
        if (e.label) collect_binders_label(*e.label, vars);
    }
  }
  return vars;
}

void add_bracket_fix(const std::string& text, const Span& span, const std::string& expected,
                     const std::string& found, std::vector<Edit>& edits) {
  edits.push_back(Edit{span.offset, found.size(), expected});
  if (is_open_bracket(found) && is_open_bracket(expected)) {
    std::size_t close_at = match_forward(text, span.offset);
    if (close_at != std::string::npos) {
      std::string close(1, expected == "{" ? '}' : ')');
      edits.push_back(Edit{close_at, 1, close});
    }
  }
}

void add_grammar_edit(const Diagnostic& d, const std::string& text, const ModelAnalysis& a,
                      std::vector<Edit>& edits) {
  switch (d.code) {
    case DiagnosticCode::MissingTerminator:
      edits.push_back(Edit{d.span.offset, 0, "."});
      return;
    case DiagnosticCode::MissingComma:
      edits.push_back(Edit{after_previous_token(text, d.span.offset), 0, ","});
      return;
    case DiagnosticCode::MissingChoiceBar:
      edits.push_back(Edit{d.span.offset, 0, "| "});
      return;
    case DiagnosticCode::ExpectedEquals: {
      if (span_text(text, d.span) == "-")
        edits.push_back(Edit{d.span.offset, 1, "="});
      else
        edits.push_back(Edit{d.span.offset, 0, "= "});
      return;
    }
    case DiagnosticCode::BadRangeDots: {
      std::string found = span_text(text, d.span);
      if (found == "." && d.span.offset > 0 && text[d.span.offset - 1] == '.') {
        edits.push_back(Edit{d.span.offset, 1, ""});  // '...' -> '..'
      } else if (found == ".") {
        edits.push_back(Edit{d.span.offset, 1, ".."});
      } else {
        edits.push_back(Edit{d.span.offset, 0, ".."});
      }
      return;
    }
    case DiagnosticCode::BadIndexNotation: {
      std::string found = span_text(text, d.span);
      if (!found.empty() && found[0] == '.') {
        edits.push_back(
            Edit{d.span.offset, found.size(), "[" + found.substr(1) + "]"});  // .i -> [i]
        return;
      }
      // Unbound variable: a typo'd binder name very close to one that is in
      // scope gets renamed; otherwise brackets around a free name become a
      // label dot.
      std::set<std::string> binders = binders_near_line(a.parse.ast, d.span.line);
      std::string best;
      int best_dist = 2;
      for (const std::string& var : binders) {
        int dist = edit_distance(found, var);
        if (dist < best_dist || (dist == best_dist && (best.empty() || var < best))) {
          best = var;
          best_dist = dist;
        }
      }
      if (!best.empty()) {
        edits.push_back(Edit{d.span.offset, found.size(), best});
      } else if (d.span.offset > 0 && text[d.span.offset - 1] == '[' &&
                 d.span.end_offset() < text.size() && text[d.span.end_offset()] == ']') {
        edits.push_back(
            Edit{d.span.offset - 1, found.size() + 2, "." + found});  // [i] -> .i
      }
      return;
    }
    case DiagnosticCode::UnresolvedReference: {
      std::string name = span_text(text, d.span);
      if (auto candidate = nearest_defined(a.symbols, name, kDefaultNearMissDistance))
        edits.push_back(Edit{d.span.offset, name.size(), *candidate});
      return;
    }
    case DiagnosticCode::NearMissIdentifier: {
      for (const NearMissFinding& f : a.findings) {
        if (!f.suspect_spans.empty() && f.suspect_spans.front().offset == d.span.offset) {
          for (const Span& span : f.suspect_spans)
            edits.push_back(Edit{span.offset, static_cast<std::size_t>(span.len), f.candidate});
          return;
        }
      }
      return;
    }
    case DiagnosticCode::BadGuard:
    case DiagnosticCode::UnbalancedBracket:
    case DiagnosticCode::UnexpectedToken: {
      if (d.message.rfind("unexpected ')'", 0) == 0) {
        edits.push_back(Edit{d.span.offset, 1, ""});  // duplicated guard parenthesis
        return;
      }
      if (d.message.rfind("unknown controllerSpec field", 0) == 0) {
        // misspelled field word: snap to the closest legal field name
        std::string found = span_text(text, d.span);
        std::string best;
        int best_dist = kDefaultNearMissDistance + 1;
        for (const char* field : {"safety", "liveness", "assumption", "controllable"}) {
          int dist = edit_distance(found, field);
          if (dist < best_dist) {
            best = field;
            best_dist = dist;
          }
        }
        if (!best.empty()) edits.push_back(Edit{d.span.offset, found.size(), best});
        return;
      }
      std::optional<std::string> expected = expected_lexeme(d.message);
      if (!expected) return;
      std::optional<std::string> found = quoted_after(d.message, "found ");
      if (found && span_text(text, d.span) == *found) {
        add_bracket_fix(text, d.span, *expected, *found, edits);
      } else if (!found) {
        edits.push_back(Edit{d.span.offset, 0, *expected});
      }
      return;
    }
    case DiagnosticCode::ExpectedProcessIdentifier:
      return;  // cannot invent a name
  }
}

}  // namespace

CompletionResult HeuristicBackend::complete(const PromptDocument& prompt) {
  CompletionResult out;
  out.text = prompt.model_text;

  ModelAnalysis a = analyze(prompt.model_text);
  if (a.ok) return out;  // nothing to do: a compiling model is returned as-is

  std::vector<Edit> edits;
  if (prompt.task == RepairTask::Spelling) {
    add_spelling_edits(a, prompt.model_text, edits);
  } else {
    for (const Diagnostic& d : a.diagnostics) {
      if (d.severity != Severity::Error) continue;
      add_grammar_edit(d, prompt.model_text, a, edits);
    }
  }
  if (edits.empty()) return out;
  out.text = apply_edits(prompt.model_text, std::move(edits));
  return out;
}

}  // namespace dcsrepair
