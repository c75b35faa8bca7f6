#include "dcsrepair/injector.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <random>
#include <set>

#include "dcsrepair/check.hpp"

namespace dcsrepair {

namespace {

// Fixed QWERTY adjacency for the substitution pattern. Letters only; typos
// on digits or underscores read as something else entirely.
const std::map<char, std::string>& qwerty_neighbors() {
  static const std::map<char, std::string> table = {
      {'q', "wa"},     {'w', "qesa"},   {'e', "wrd"},   {'r', "etf"},    {'t', "ryg"},
      {'y', "tuh"},    {'u', "yij"},    {'i', "uok"},   {'o', "ipl"},    {'p', "ol"},
      {'a', "qsz"},    {'s', "awedxz"}, {'d', "serfcx"}, {'f', "drtgvc"}, {'g', "ftyhbv"},
      {'h', "gyujnb"}, {'j', "huikmn"}, {'k', "jiolm"}, {'l', "kop"},    {'z', "asx"},
      {'x', "zsdc"},   {'c', "xdfv"},   {'v', "cfgb"},  {'b', "vghn"},   {'n', "bhjm"},
      {'m', "njk"},
  };
  return table;
}

using Rng = std::mt19937_64;

// Portable uniform pick; uniform_int_distribution is not stable across
// standard library implementations.
std::size_t pick(Rng& rng, std::size_t n) { return n == 0 ? 0 : rng() % n; }

struct Site {
  int line = 0;
  Span span;
  std::string original;
  std::string mutated;
  std::string target;  // identifier, for spelling kinds
  Section section = Section::Processes;
};

struct ModelContext {
  const SourceModel& model;
  ModelAnalysis analysis;
  std::set<std::string> identifier_lexemes;
  std::map<int, Section> line_sections;
  std::set<Section> present_sections;

  explicit ModelContext(const SourceModel& m) : model(m), analysis(analyze(m)) {
    for (const Token& t : analysis.stream.tokens)
      if (t.is_ident()) identifier_lexemes.insert(t.lexeme);
    for (const Definition& def : analysis.parse.ast.definitions) {
      Section section = definition_section(def);
      present_sections.insert(section);
      for (int line = def.first_line; line <= def.last_line; ++line)
        line_sections.emplace(line, section);
    }
  }

  Section section_of_line(int line) const {
    auto it = line_sections.find(line);
    return it == line_sections.end() ? Section::Processes : it->second;
  }

  bool span_single_line(const Span& span) const {
    std::string_view covered(model.text().data() + span.offset,
                             static_cast<std::size_t>(span.len));
    return covered.find('\n') == std::string_view::npos;
  }

  std::string text_of(const Span& span) const {
    return model.text().substr(span.offset, static_cast<std::size_t>(span.len));
  }
};

bool valid_new_identifier(const ModelContext& ctx, const std::string& name) {
  if (name.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(name[0]))) return false;
  if (is_keyword(name)) return false;
  if (ctx.identifier_lexemes.count(name)) return false;
  return true;
}

// ---- typo generators ------------------------------------------------------

std::string typo_substitute(const std::string& word, Rng& rng) {
  std::vector<std::size_t> letter_positions;
  for (std::size_t i = 0; i < word.size(); ++i)
    if (std::isalpha(static_cast<unsigned char>(word[i]))) letter_positions.push_back(i);
  if (letter_positions.empty()) return word;
  std::size_t idx = letter_positions[pick(rng, letter_positions.size())];
  char c = word[idx];
  char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  auto it = qwerty_neighbors().find(lower);
  if (it == qwerty_neighbors().end() || it->second.empty()) return word;
  char repl = it->second[pick(rng, it->second.size())];
  if (std::isupper(static_cast<unsigned char>(c)))
    repl = static_cast<char>(std::toupper(static_cast<unsigned char>(repl)));
  std::string out = word;
  out[idx] = repl;
  return out;
}

std::string typo_duplicate(const std::string& word, Rng& rng) {
  std::size_t idx = pick(rng, word.size());
  std::string out = word;
  out.insert(out.begin() + static_cast<std::ptrdiff_t>(idx), word[idx]);
  return out;
}

std::string typo_omit(const std::string& word, Rng& rng) {
  if (word.size() < 2) return word;
  std::size_t idx = pick(rng, word.size());
  std::string out = word;
  out.erase(out.begin() + static_cast<std::ptrdiff_t>(idx));
  return out;
}

// Omit/substitute variant that keeps the identifier in its lexical class
// (used by partial_rename, where the mutation must stay a name, not become a
// parse error).
std::string typo_preserving_class(const std::string& word, Rng& rng) {
  for (int attempt = 0; attempt < 8; ++attempt) {
    std::string out;
    switch (pick(rng, 3)) {
      case 0: out = typo_substitute(word, rng); break;
      case 1: out = typo_duplicate(word, rng); break;
      default: out = typo_omit(word, rng); break;
    }
    if (out == word || out.empty()) continue;
    bool same_class = (std::isupper(static_cast<unsigned char>(out[0])) != 0) ==
                      (std::isupper(static_cast<unsigned char>(word[0])) != 0);
    if (std::isalpha(static_cast<unsigned char>(out[0])) && same_class) return out;
  }
  return word;
}

// ---- detectability --------------------------------------------------------

bool mutation_detectable(const SourceModel& clean, const MutationRecord& record) {
  SourceModel mutated = apply_record(clean, record);
  ModelAnalysis a = analyze(mutated);
  switch (mutation_class(record.kind)) {
    case MutationClass::Grammar:
      return !a.syntax_ok;
    case MutationClass::Spelling:
      break;
  }
  if (record.kind == MutationKind::PartialRename) {
    // A partial rename must stay parseable and surface through the
    // consistency pass, so a correct majority form survives to repair from.
    if (!a.syntax_ok) return false;
    for (const NearMissFinding& f : a.findings)
      if (f.suspect == record.mutated) return true;
    for (const Diagnostic& d : a.diagnostics)
      if (d.code == DiagnosticCode::UnresolvedReference) return true;
    return false;
  }
  if (!a.ok) return true;
  return !a.findings.empty();
}

// ---- site enumeration -------------------------------------------------------

Site token_site(const ModelContext& ctx, const Token& token, std::string mutated) {
  Site s;
  s.line = token.span.line;
  s.span = token.span;
  s.original = token.lexeme;
  s.mutated = std::move(mutated);
  s.section = ctx.section_of_line(token.span.line);
  return s;
}

void enumerate_token_swaps(const ModelContext& ctx, std::string_view from, std::string_view to,
                           std::vector<Site>& out) {
  for (const Token& t : ctx.analysis.stream.tokens)
    if (t.is_op(from)) out.push_back(token_site(ctx, t, std::string(to)));
}

std::vector<Site> enumerate_sites(const ModelContext& ctx, MutationKind kind, Rng& rng) {
  std::vector<Site> sites;
  const std::vector<Token>& tokens = ctx.analysis.stream.tokens;

  switch (kind) {
    case MutationKind::AdjacentKeySubstitute:
    case MutationKind::DuplicateChar:
    case MutationKind::OmitChar: {
      for (const Token& t : tokens) {
        if (!t.is_ident()) continue;
        if (kind == MutationKind::OmitChar && t.lexeme.size() < 2) continue;
        std::string mutated;
        for (int attempt = 0; attempt < 6 && mutated.empty(); ++attempt) {
          std::string candidate;
          if (kind == MutationKind::AdjacentKeySubstitute) candidate = typo_substitute(t.lexeme, rng);
          else if (kind == MutationKind::DuplicateChar) candidate = typo_duplicate(t.lexeme, rng);
          else candidate = typo_omit(t.lexeme, rng);
          if (candidate != t.lexeme && valid_new_identifier(ctx, candidate)) mutated = candidate;
        }
        if (mutated.empty()) continue;
        Site s = token_site(ctx, t, mutated);
        s.target = t.lexeme;
        sites.push_back(std::move(s));
      }
      break;
    }
    case MutationKind::PartialRename: {
      std::map<std::string, std::vector<const Token*>> by_name;
      for (const Token& t : tokens)
        if (t.is_ident()) by_name[t.lexeme].push_back(&t);
      for (const auto& [name, occurrences] : by_name) {
        if (occurrences.size() < 2) continue;  // a correct majority must survive
        std::string mutated = typo_preserving_class(name, rng);
        if (mutated == name || !valid_new_identifier(ctx, mutated)) continue;
        const Token* chosen = occurrences[pick(rng, occurrences.size())];
        Site s = token_site(ctx, *chosen, mutated);
        s.target = name;
        sites.push_back(std::move(s));
      }
      break;
    }
    case MutationKind::DeleteTerminator: {
      for (const Definition& def : ctx.analysis.parse.ast.definitions) {
        if (!def.complete || def.end_dot.len != 1) continue;
        Site s;
        s.line = def.end_dot.line;
        s.span = def.end_dot;
        s.original = ".";
        s.mutated = "";
        s.section = ctx.section_of_line(s.line);
        sites.push_back(std::move(s));
      }
      break;
    }
    case MutationKind::DeleteComma:
      enumerate_token_swaps(ctx, ",", "", sites);
      break;
    case MutationKind::DeleteChoiceBar:
      enumerate_token_swaps(ctx, "|", "", sites);
      break;
    case MutationKind::SwapAssign:
      enumerate_token_swaps(ctx, "=", "-", sites);
      enumerate_token_swaps(ctx, "-", "=", sites);
      break;
    case MutationKind::BreakParallel:
      enumerate_token_swaps(ctx, "||", "|", sites);
      break;
    case MutationKind::RangeDotMutation: {
      for (const Token& t : tokens) {
        if (!t.is_op("..")) continue;
        sites.push_back(token_site(ctx, t, pick(rng, 2) == 0 ? "." : "..."));
      }
      break;
    }
    case MutationKind::SwapBrackets: {
      std::vector<const Token*> stack;
      for (const Token& t : tokens) {
        if (t.is_op("{") || t.is_op("(")) {
          stack.push_back(&t);
          continue;
        }
        if (!t.is_op("}") && !t.is_op(")")) continue;
        if (stack.empty()) continue;
        const Token* open = stack.back();
        stack.pop_back();
        bool matches = (open->lexeme == "{" && t.lexeme == "}") ||
                       (open->lexeme == "(" && t.lexeme == ")");
        if (!matches || open->span.line != t.span.line) continue;
        Span region{open->span.line, open->span.col,
                    static_cast<int>(t.span.end_offset() - open->span.offset),
                    open->span.offset};
        std::string original = ctx.text_of(region);
        std::string mutated = original;
        bool curly = open->lexeme == "{";
        mutated.front() = curly ? '(' : '{';
        mutated.back() = curly ? ')' : '}';
        Site s;
        s.line = region.line;
        s.span = region;
        s.original = std::move(original);
        s.mutated = std::move(mutated);
        s.section = ctx.section_of_line(region.line);
        sites.push_back(std::move(s));
      }
      break;
    }
    case MutationKind::IndexNotationSwap: {
      for (const IndexNotationSite& site : ctx.analysis.parse.ast.index_sites) {
        if (!ctx.span_single_line(site.span)) continue;
        Site s;
        s.line = site.span.line;
        s.span = site.span;
        s.original = ctx.text_of(site.span);
        s.mutated = site.kind == IndexNotationSite::Kind::BracketBound
                        ? "." + site.var
                        : "[" + site.var + "]";
        s.section = ctx.section_of_line(s.line);
        sites.push_back(std::move(s));
      }
      break;
    }
    case MutationKind::MalformGuard: {
      for (const Span& guard : ctx.analysis.parse.ast.guard_spans) {
        if (!ctx.span_single_line(guard)) continue;
        std::string original = ctx.text_of(guard);
        std::string mutated = original;
        std::size_t open = original.find('(');
        std::size_t close = original.rfind(')');
        if (open == std::string::npos || close == std::string::npos) continue;
        switch (pick(rng, 3)) {
          case 0:  // drop the opening parenthesis
            mutated.erase(open, 1);
            break;
          case 1:  // drop the closing parenthesis
            mutated.erase(close, 1);
            break;
          default:  // duplicate the opening parenthesis
            mutated.insert(open, 1, '(');
            break;
        }
        Site s;
        s.line = guard.line;
        s.span = guard;
        s.original = std::move(original);
        s.mutated = std::move(mutated);
        s.section = ctx.section_of_line(s.line);
        sites.push_back(std::move(s));
      }
      break;
    }
  }

  std::sort(sites.begin(), sites.end(), [](const Site& a, const Site& b) {
    if (a.span.offset != b.span.offset) return a.span.offset < b.span.offset;
    return a.mutated < b.mutated;
  });
  return sites;
}

MutationRecord record_for(const Site& site, MutationKind kind, std::uint64_t seed) {
  MutationRecord r;
  r.kind = kind;
  r.line = site.span.line;
  r.col_start = site.span.col;
  r.col_end = site.span.col + site.span.len;
  r.original = site.original;
  r.mutated = site.mutated;
  r.target_identifier = site.target;
  r.seed = seed;
  return r;
}

// Pick a detectable site, starting from a uniformly chosen index.
std::optional<MutationRecord> choose_site(const ModelContext& ctx,
                                          const std::vector<Site>& sites, MutationKind kind,
                                          std::uint64_t seed, Rng& rng) {
  if (sites.empty()) return std::nullopt;
  std::size_t start = pick(rng, sites.size());
  for (std::size_t i = 0; i < sites.size(); ++i) {
    const Site& site = sites[(start + i) % sites.size()];
    MutationRecord record = record_for(site, kind, seed);
    if (mutation_detectable(ctx.model, record)) return record;
  }
  return std::nullopt;
}

std::vector<MutationKind> class_cycle(MutationClass cls) {
  std::vector<MutationKind> kinds;
  for (MutationKind k : all_mutation_kinds())
    if (mutation_class(k) == cls) kinds.push_back(k);
  return kinds;
}

}  // namespace

std::pair<SourceModel, MutationRecord> apply_mutation(const SourceModel& model,
                                                      MutationKind kind, std::uint64_t seed) {
  ModelContext ctx(model);
  Rng rng(seed);
  std::vector<Site> sites = enumerate_sites(ctx, kind, rng);
  std::optional<MutationRecord> record = choose_site(ctx, sites, kind, seed, rng);
  if (!record) {
    throw InjectionError(InjectionError::Kind::NoApplicableSite,
                         std::string("no applicable site for ") + mutation_kind_name(kind));
  }
  return {apply_record(model, *record), *record};
}

std::pair<SourceModel, std::vector<MutationRecord>> inject(const SourceModel& model,
                                                           InjectionPlan plan,
                                                           std::uint64_t seed) {
  ModelContext ctx(model);
  Rng rng(seed);

  int remaining_spelling = plan.spelling;
  int remaining_grammar = plan.grammar;
  std::vector<MutationRecord> records;
  std::set<int> used_lines;
  std::set<std::string> used_targets;  // one spelling mutation per identifier,
                                       // so the majority form always survives
  std::set<Section> covered;

  const std::vector<MutationKind> spelling_cycle = class_cycle(MutationClass::Spelling);
  const std::vector<MutationKind> grammar_cycle = class_cycle(MutationClass::Grammar);
  std::size_t spelling_idx = 0;
  std::size_t grammar_idx = 0;

  auto uncovered_sections = [&]() {
    std::vector<Section> out;
    for (Section s : ctx.present_sections)
      if (!covered.count(s)) out.push_back(s);
    return out;
  };

  auto try_kind = [&](MutationKind kind) -> bool {
    std::vector<Site> sites = enumerate_sites(ctx, kind, rng);
    sites.erase(std::remove_if(sites.begin(), sites.end(),
                               [&](const Site& s) {
                                 if (used_lines.count(s.line)) return true;
                                 return !s.target.empty() && used_targets.count(s.target) > 0;
                               }),
                sites.end());
    std::vector<Section> uncovered = uncovered_sections();
    if (!uncovered.empty()) {
      std::vector<Site> preferred;
      for (const Site& s : sites)
        if (std::find(uncovered.begin(), uncovered.end(), s.section) != uncovered.end())
          preferred.push_back(s);
      int remaining_total = remaining_spelling + remaining_grammar;
      if (!preferred.empty()) {
        sites = std::move(preferred);
      } else if (remaining_total <= static_cast<int>(uncovered.size())) {
        // Every remaining mutation is needed to reach an uncovered section.
        return false;
      }
    }
    std::optional<MutationRecord> record = choose_site(ctx, sites, kind, seed, rng);
    if (!record) return false;
    used_lines.insert(record->line);
    if (!record->target_identifier.empty()) used_targets.insert(record->target_identifier);
    covered.insert(ctx.section_of_line(record->line));
    records.push_back(std::move(*record));
    return true;
  };

  while (remaining_spelling + remaining_grammar > 0) {
    bool spelling_turn = remaining_spelling >= remaining_grammar ? remaining_spelling > 0
                                                                 : remaining_grammar == 0;
    const std::vector<MutationKind>& cycle = spelling_turn ? spelling_cycle : grammar_cycle;
    std::size_t& idx = spelling_turn ? spelling_idx : grammar_idx;

    bool placed = false;
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      MutationKind kind = cycle[(idx + i) % cycle.size()];
      if (try_kind(kind)) {
        idx = (idx + i + 1) % cycle.size();
        placed = true;
        break;
      }
    }
    if (!placed) {
      throw InjectionError(
          InjectionError::Kind::PlanInfeasible,
          "not enough distinct applicable lines: " + std::to_string(remaining_spelling) +
              " spelling + " + std::to_string(remaining_grammar) + " grammar left");
    }
    if (spelling_turn) --remaining_spelling;
    else --remaining_grammar;
  }

  std::sort(records.begin(), records.end(),
            [](const MutationRecord& a, const MutationRecord& b) { return a.line < b.line; });
  return {apply_all(model, records), records};
}

bool verify_injection(const SourceModel& mutated, const std::vector<MutationRecord>& records) {
  return verify_injection_report(mutated, records).ok;
}

VerifyReport verify_injection_report(const SourceModel& mutated,
                                     const std::vector<MutationRecord>& records) {
  VerifyReport report;
  if (records.empty()) {
    report.ok = false;
    report.failures.push_back("no records to verify");
    return report;
  }

  SourceModel clean = revert_all(mutated, records);
  ParseResult clean_check = check(clean);
  if (!clean_check.ok) {
    report.ok = false;
    report.failures.push_back("reverted model does not pass check");
  }
  if (apply_all(clean, records).text() != mutated.text()) {
    report.ok = false;
    report.failures.push_back("records do not reproduce the mutated model byte-exactly");
  }

  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!mutation_detectable(clean, records[i])) {
      report.ok = false;
      report.failures.push_back("record " + std::to_string(i) + " (" +
                                mutation_kind_name(records[i].kind) + ", line " +
                                std::to_string(records[i].line) + ") is not detectable alone");
    }
  }
  return report;
}

}  // namespace dcsrepair
