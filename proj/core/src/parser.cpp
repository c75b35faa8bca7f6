#include "dcsrepair/parser.hpp"

#include <set>
#include <string>
#include <utility>

namespace dcsrepair {

namespace {

bool is_top_level_keyword(const Token& t) {
  return t.kind == TokenKind::Keyword &&
         (t.lexeme == "const" || t.lexeme == "range" || t.lexeme == "set" ||
          t.lexeme == "fluent" || t.lexeme == "assert" || t.lexeme == "ltl_property" ||
          t.lexeme == "controllerSpec" || t.lexeme == "controller");
}

class Parser {
 public:
  explicit Parser(const TokenStream& stream) : toks_(stream.tokens) {}

  ParseResult run() {
    while (!at_end()) {
      std::size_t before = pos_;
      parse_definition();
      if (pos_ == before) advance();  // never stall on a token nothing claims
    }
    result_.ok = !has_errors(result_.diagnostics);
    sort_by_position(result_.diagnostics);
    return std::move(result_);
  }

 private:
  // ---- token access -------------------------------------------------------

  bool at_end() const { return pos_ >= toks_.size(); }
  const Token& peek(std::size_t ahead = 0) const {
    static const Token eof{};
    return pos_ + ahead < toks_.size() ? toks_[pos_ + ahead] : eof;
  }
  const Token& advance() {
    static const Token eof{};
    if (at_end()) return eof;
    return toks_[pos_++];
  }
  bool match_op(std::string_view text) {
    if (peek().is_op(text)) {
      advance();
      return true;
    }
    return false;
  }

  Span end_of_previous() const {
    if (pos_ == 0) return Span{1, 1, 0, 0};
    const Span& s = toks_[pos_ - 1].span;
    return Span{s.line, s.col + s.len, 0, s.end_offset()};
  }

  void diag(DiagnosticCode code, const Span& span, std::string message,
            Severity sev = Severity::Error) {
    result_.diagnostics.push_back(Diagnostic{code, sev, span, std::move(message)});
  }

  // ---- recovery -----------------------------------------------------------

  // Skip ahead to the next plausible definition boundary: a terminating '.'
  // (consumed), a top-level keyword, '||' + name + '=', or name + '='.
  void panic_sync() {
    if (!at_end()) advance();
    while (!at_end()) {
      const Token& t = peek();
      if (t.is_op(".")) {
        advance();
        return;
      }
      if (is_top_level_keyword(t)) return;
      if (t.is_op("||") && peek(1).kind == TokenKind::UpperIdent && peek(2).is_op("="))
        return;
      if (t.kind == TokenKind::UpperIdent && (peek(1).is_op("=") || peek(1).is_op("(")))
        return;
      advance();
    }
  }

  // ---- shared small pieces ------------------------------------------------

  void expect_terminator(Definition& def) {
    if (peek().is_op(".")) {
      def.end_dot = peek().span;
      def.last_line = peek().span.line;
      advance();
      return;
    }
    Span at = end_of_previous();
    diag(DiagnosticCode::MissingTerminator, at, "dot expected to terminate definition");
    def.end_dot = at;  // zero-length: the natural insertion point
    def.last_line = at.line;
    def.complete = false;
  }

  // '=' with tolerance for the common '-' slip, which mtsa reports as
  // "= expected".
  void expect_equals() {
    if (match_op("=")) return;
    if (peek().is_op("-")) {
      diag(DiagnosticCode::ExpectedEquals, peek().span, "= expected (found '-')");
      advance();
      return;
    }
    diag(DiagnosticCode::ExpectedEquals, peek().span, "= expected");
  }

  std::optional<NameRef> expect_upper(const char* what) {
    if (peek().kind == TokenKind::UpperIdent) {
      const Token& t = advance();
      return NameRef{t.lexeme, t.span};
    }
    diag(DiagnosticCode::UnexpectedToken, peek().span,
         std::string(what) + " expected" +
             (at_end() ? "" : " (found '" + peek().lexeme + "')"));
    return std::nullopt;
  }

  // Opening bracket with tolerance for the {} vs () confusion: when the
  // counterpart opener appears instead, report once and remember which
  // closer to accept silently.
  char expect_open(char wanted, DiagnosticCode code, const char* context) {
    char counterpart = wanted == '{' ? '(' : '{';
    char wanted_close = wanted == '{' ? '}' : ')';
    char counterpart_close = wanted == '{' ? ')' : '}';
    std::string w(1, wanted);
    std::string c(1, counterpart);
    if (match_op(w)) return wanted_close;
    if (peek().is_op(c)) {
      diag(code, peek().span,
           "'" + w + "' expected " + context + " (found '" + c + "')");
      advance();
      return counterpart_close;
    }
    diag(code, peek().span, "'" + w + "' expected " + context);
    return wanted_close;
  }

  void expect_close(char close, DiagnosticCode code) {
    std::string c(1, close);
    if (match_op(c)) return;
    diag(code, peek().span,
         at_end() ? "'" + c + "' expected"
                  : "'" + c + "' expected (found '" + peek().lexeme + "')");
    // Consume a mismatched closer so the pair error stays a single finding.
    if (peek().is_op(")") || peek().is_op("}") || peek().is_op("]")) advance();
  }

  // ---- scopes for index variables -----------------------------------------

  void push_scope() { scopes_.emplace_back(); }
  void pop_scope() { scopes_.pop_back(); }
  void bind_var(const std::string& name) {
    if (!scopes_.empty()) scopes_.back().insert(name);
  }
  bool is_bound(const std::string& name) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it)
      if (it->count(name)) return true;
    return false;
  }

  // ---- expressions ---------------------------------------------------------

  Expr parse_expr() { return parse_comparison(); }

  Expr parse_comparison() {
    Expr lhs = parse_additive();
    static const char* ops[] = {"<", ">", "<=", ">=", "==", "!="};
    for (const char* op : ops) {
      if (peek().is_op(op)) {
        advance();
        Expr node;
        node.kind = Expr::Kind::Binary;
        node.op = op;
        node.span = lhs.span;
        node.kids.push_back(std::move(lhs));
        node.kids.push_back(parse_additive());
        return node;
      }
    }
    return lhs;
  }

  Expr parse_additive() {
    Expr lhs = parse_multiplicative();
    while (peek().is_op("+") || peek().is_op("-")) {
      std::string op = advance().lexeme;
      Expr node;
      node.kind = Expr::Kind::Binary;
      node.op = op;
      node.span = lhs.span;
      node.kids.push_back(std::move(lhs));
      node.kids.push_back(parse_multiplicative());
      lhs = std::move(node);
    }
    return lhs;
  }

  Expr parse_multiplicative() {
    Expr lhs = parse_atom();
    while (peek().is_op("*") || peek().is_op("/") || peek().is_op("%")) {
      std::string op = advance().lexeme;
      Expr node;
      node.kind = Expr::Kind::Binary;
      node.op = op;
      node.span = lhs.span;
      node.kids.push_back(std::move(lhs));
      node.kids.push_back(parse_atom());
      lhs = std::move(node);
    }
    return lhs;
  }

  Expr parse_atom() {
    Expr node;
    const Token& t = peek();
    node.span = t.span;
    if (t.kind == TokenKind::Integer) {
      node.kind = Expr::Kind::Integer;
      node.value = std::stol(t.lexeme);
      advance();
      return node;
    }
    if (t.kind == TokenKind::UpperIdent) {
      node.kind = Expr::Kind::ConstRef;
      node.name = t.lexeme;
      advance();
      return node;
    }
    if (t.kind == TokenKind::LowerIdent) {
      node.kind = Expr::Kind::VarRef;
      node.name = t.lexeme;
      if (!is_bound(t.lexeme)) {
        diag(DiagnosticCode::BadIndexNotation, t.span,
             "unbound index variable '" + t.lexeme + "'");
      }
      advance();
      return node;
    }
    if (t.is_op("(")) {
      advance();
      node = parse_expr();
      expect_close(')', DiagnosticCode::UnbalancedBracket);
      return node;
    }
    diag(DiagnosticCode::UnexpectedToken, t.span,
         at_end() ? "expression expected" : "expression expected (found '" + t.lexeme + "')");
    return node;
  }

  // Whether an expression is exactly one bound variable reference; used to
  // record [i] <-> .i rewrite sites.
  static bool is_plain_var(const Expr& e) { return e.kind == Expr::Kind::VarRef; }

  // ---- ranges ---------------------------------------------------------------

  void expect_range_dots() {
    if (match_op("..")) {
      // `0...2` lexes as `..` then `.`; the stray dot surfaces when the
      // upper-bound expression is parsed. Catch it here for a cleaner span.
      if (peek().is_op(".") &&
          (peek(1).kind == TokenKind::Integer || peek(1).kind == TokenKind::UpperIdent ||
           peek(1).kind == TokenKind::LowerIdent)) {
        diag(DiagnosticCode::BadRangeDots, peek().span,
             "malformed range dots: '..' expected (found '...')");
        advance();
      }
      return;
    }
    if (peek().is_op(".")) {
      diag(DiagnosticCode::BadRangeDots, peek().span,
           "malformed range dots: '..' expected (found '.')");
      advance();
      return;
    }
    diag(DiagnosticCode::BadRangeDots, peek().span, "'..' expected in range");
  }

  RangeRef parse_range_ref() {
    RangeRef r;
    r.span = peek().span;
    if (peek().kind == TokenKind::UpperIdent && !peek(1).is_op("..") && !peek(1).is_op("-") &&
        !peek(1).is_op("+")) {
      const Token& t = advance();
      r.named = NameRef{t.lexeme, t.span};
      return r;
    }
    r.lo = parse_expr();
    expect_range_dots();
    r.hi = parse_expr();
    return r;
  }

  // ---- action labels ---------------------------------------------------------

  ActionLabel parse_action_label() {
    ActionLabel label;
    const Token& head = advance();  // caller guarantees LowerIdent
    label.head = NameRef{head.lexeme, head.span};
    label.span = head.span;
    for (;;) {
      if (peek().is_op(".") && peek(1).kind == TokenKind::LowerIdent) {
        Span dot = peek().span;
        advance();
        const Token& part = advance();
        LabelPart p;
        p.name = part.lexeme;
        p.span = Span{dot.line, dot.col, dot.len + part.span.len, dot.offset};
        if (is_bound(part.lexeme)) {
          p.kind = LabelPart::Kind::DottedName;
          diag(DiagnosticCode::BadIndexNotation, p.span,
               "index variable '" + part.lexeme + "' used with '.': write '[" +
                   part.lexeme + "]'");
        } else {
          p.kind = LabelPart::Kind::DottedName;
          index_sites_.push_back(
              IndexNotationSite{IndexNotationSite::Kind::DottedFree, part.lexeme, p.span});
        }
        label.parts.push_back(std::move(p));
        continue;
      }
      if (peek().is_op(".") && peek(1).kind == TokenKind::Integer) {
        Span dot = peek().span;
        advance();
        const Token& part = advance();
        LabelPart p;
        p.kind = LabelPart::Kind::DottedInt;
        p.value = std::stol(part.lexeme);
        p.span = Span{dot.line, dot.col, dot.len + part.span.len, dot.offset};
        label.parts.push_back(std::move(p));
        continue;
      }
      if (peek().is_op("[")) {
        Span open = peek().span;
        advance();
        LabelPart p;
        p.span = open;
        if (peek().kind == TokenKind::LowerIdent && peek(1).is_op(":")) {
          const Token& var = advance();
          advance();  // ':'
          p.kind = LabelPart::Kind::Binder;
          p.name = var.lexeme;
          p.range = parse_range_ref();
          bind_var(var.lexeme);
        } else {
          p.kind = LabelPart::Kind::Index;
          Expr e = parse_expr();
          if (is_plain_var(e) && is_bound(e.name) && peek().is_op("]")) {
            const Span& close = peek().span;
            index_sites_.push_back(IndexNotationSite{
                IndexNotationSite::Kind::BracketBound, e.name,
                Span{open.line, open.col, static_cast<int>(close.end_offset() - open.offset),
                     open.offset}});
          }
          p.index = std::move(e);
        }
        expect_close(']', DiagnosticCode::UnbalancedBracket);
        label.parts.push_back(std::move(p));
        continue;
      }
      break;
    }
    return label;
  }

  // ---- process bodies ----------------------------------------------------------

  bool at_target_start() const {
    const Token& t = peek();
    return t.is_kw("STOP") || t.is_kw("ERROR") || t.is_kw("END") ||
           t.kind == TokenKind::UpperIdent || t.is_op("(");
  }

  Target parse_target() {
    Target target;
    const Token& t = peek();
    target.span = t.span;
    if (t.is_kw("STOP")) {
      target.kind = Target::Kind::Stop;
      advance();
      return target;
    }
    if (t.is_kw("ERROR")) {
      target.kind = Target::Kind::Error;
      advance();
      return target;
    }
    if (t.is_kw("END")) {
      target.kind = Target::Kind::End;
      advance();
      return target;
    }
    if (t.is_op("(")) {
      advance();
      target.kind = Target::Kind::Group;
      target.group = std::make_shared<Choice>(parse_choice());
      expect_close(')', DiagnosticCode::UnbalancedBracket);
      return target;
    }
    if (t.kind == TokenKind::UpperIdent) {
      target.kind = Target::Kind::Ref;
      target.ref = NameRef{t.lexeme, t.span};
      advance();
      while (peek().is_op("[")) {
        advance();
        target.indices.push_back(parse_expr());
        expect_close(']', DiagnosticCode::UnbalancedBracket);
      }
      return target;
    }
    diag(DiagnosticCode::ExpectedProcessIdentifier, t.span,
         at_end() ? "process identifier expected"
                  : "process identifier expected (found '" + t.lexeme + "')");
    target.kind = Target::Kind::Stop;
    return target;
  }

  bool at_alternative_start() const {
    return peek().kind == TokenKind::LowerIdent || peek().is_kw("when");
  }

  Alternative parse_alternative() {
    Alternative alt;
    if (peek().is_kw("when")) {
      Span when_span = peek().span;
      advance();
      char close = ')';
      if (peek().is_op("(")) {
        advance();
      } else if (peek().is_op("{")) {
        diag(DiagnosticCode::BadGuard, peek().span, "'(' expected after when (found '{')");
        advance();
        close = '}';
      } else {
        diag(DiagnosticCode::BadGuard, peek().span, "'(' expected after when");
      }
      alt.guard = parse_expr();
      Span guard_end = end_of_previous();
      if (peek().is_op(std::string(1, close))) {
        guard_end = peek().span;
        advance();
      } else {
        diag(DiagnosticCode::BadGuard, peek().span,
             std::string("'") + close + "' expected after guard condition");
      }
      alt.guard_span =
          Span{when_span.line, when_span.col,
               static_cast<int>(guard_end.end_offset() - when_span.offset), when_span.offset};
      guard_spans_.push_back(alt.guard_span);
      // A duplicated ')' after the guard is a classic malformed-guard shape.
      if (peek().is_op(")") && !at_alternative_start()) {
        const Token& stray = peek();
        // Only treat it as a stray when an action clearly follows.
        if (peek(1).kind == TokenKind::LowerIdent) {
          diag(DiagnosticCode::BadGuard, stray.span, "unexpected ')' after guard condition");
          advance();
        }
      }
    }
    if (peek().kind != TokenKind::LowerIdent) {
      diag(DiagnosticCode::UnexpectedToken, peek().span,
           at_end() ? "action expected" : "action expected (found '" + peek().lexeme + "')");
      alt.target.kind = Target::Kind::Stop;
      return alt;
    }
    for (;;) {
      alt.actions.push_back(parse_action_label());
      if (peek().is_op("->")) {
        advance();
        if (peek().kind == TokenKind::LowerIdent && !peek(1).is_op(":")) continue;
        if (peek().is_kw("when")) {
          // `a -> when (...) b -> P` guarded continuation
          Alternative tail = parse_alternative();
          Target group;
          group.kind = Target::Kind::Group;
          group.group = std::make_shared<Choice>();
          group.group->alternatives.push_back(std::move(tail));
          alt.target = std::move(group);
          return alt;
        }
        if (at_target_start()) {
          alt.target = parse_target();
          return alt;
        }
        diag(DiagnosticCode::ExpectedProcessIdentifier, peek().span,
             at_end() ? "process identifier expected"
                      : "process identifier expected (found '" + peek().lexeme + "')");
        alt.target.kind = Target::Kind::Stop;
        return alt;
      }
      diag(DiagnosticCode::UnexpectedToken, peek().span,
           at_end() ? "'->' expected" : "'->' expected (found '" + peek().lexeme + "')");
      alt.target.kind = Target::Kind::Stop;
      return alt;
    }
  }

  Choice parse_choice() {
    Choice choice;
    choice.parenthesized = true;
    choice.alternatives.push_back(parse_alternative());
    for (;;) {
      if (peek().is_op("|")) {
        advance();
        choice.alternatives.push_back(parse_alternative());
        continue;
      }
      if (peek().is_op("||")) {
        diag(DiagnosticCode::UnexpectedToken, peek().span, "'|' expected (found '||')");
        advance();
        choice.alternatives.push_back(parse_alternative());
        continue;
      }
      if (at_alternative_start()) {
        diag(DiagnosticCode::MissingChoiceBar, peek().span,
             "'|' expected between alternatives");
        choice.alternatives.push_back(parse_alternative());
        continue;
      }
      break;
    }
    return choice;
  }

  Choice parse_body() {
    if (peek().is_op("(") || peek().is_op("{")) {
      char close = expect_open('(', DiagnosticCode::UnbalancedBracket, "to open process body");
      Choice c = parse_choice();
      expect_close(close, DiagnosticCode::UnbalancedBracket);
      return c;
    }
    if (at_target_start()) {
      Choice c;
      Alternative alt;
      alt.target = parse_target();
      c.alternatives.push_back(std::move(alt));
      return c;
    }
    diag(DiagnosticCode::UnexpectedToken, peek().span,
         at_end() ? "process body expected"
                  : "process body expected (found '" + peek().lexeme + "')");
    Choice c;
    Alternative alt;
    alt.target.kind = Target::Kind::Stop;
    c.alternatives.push_back(std::move(alt));
    return c;
  }

  std::vector<Param> parse_params() {
    std::vector<Param> params;
    if (!peek().is_op("(")) return params;
    advance();
    for (;;) {
      auto name = expect_upper("parameter name");
      if (!name) break;
      expect_equals();
      Param p;
      p.name = *name;
      if (peek().kind == TokenKind::Integer) {
        p.value = std::stol(peek().lexeme);
        advance();
      } else {
        diag(DiagnosticCode::UnexpectedToken, peek().span, "integer parameter value expected");
      }
      params.push_back(std::move(p));
      if (match_op(",")) continue;
      if (peek().kind == TokenKind::UpperIdent) {
        diag(DiagnosticCode::MissingComma, peek().span, "',' expected between parameters");
        continue;
      }
      break;
    }
    expect_close(')', DiagnosticCode::UnbalancedBracket);
    return params;
  }

  PostOps parse_post_ops() {
    PostOps ops;
    for (;;) {
      if (peek().is_op("/") && peek(1).is_op("{")) {
        advance();
        advance();
        for (;;) {
          if (peek().kind != TokenKind::LowerIdent) break;
          RelabelPair pair;
          pair.fresh = parse_action_label();
          if (!match_op("/"))
            diag(DiagnosticCode::UnexpectedToken, peek().span,
                 "'/' expected between new and old labels");
          if (peek().kind == TokenKind::LowerIdent) pair.old = parse_action_label();
          ops.relabels.push_back(std::move(pair));
          if (match_op(",")) continue;
          if (peek().kind == TokenKind::LowerIdent) {
            diag(DiagnosticCode::MissingComma, peek().span,
                 "',' expected between relabeling pairs");
            continue;
          }
          break;
        }
        expect_close('}', DiagnosticCode::UnbalancedBracket);
        continue;
      }
      if (peek().is_op("\\") && peek(1).is_op("{")) {
        advance();
        advance();
        for (;;) {
          if (peek().kind == TokenKind::LowerIdent) {
            ops.hidden.push_back(parse_action_label());
          } else if (peek().kind == TokenKind::UpperIdent) {
            // allow hiding a set reference: \{SetName}
            ActionLabel l;
            l.head = NameRef{peek().lexeme, peek().span};
            l.span = peek().span;
            advance();
            ops.hidden.push_back(std::move(l));
          } else {
            break;
          }
          if (match_op(",")) continue;
          if (peek().is_ident()) {
            diag(DiagnosticCode::MissingComma, peek().span, "',' expected between labels");
            continue;
          }
          break;
        }
        expect_close('}', DiagnosticCode::UnbalancedBracket);
        continue;
      }
      break;
    }
    return ops;
  }

  // ---- definitions ----------------------------------------------------------

  void parse_definition() {
    const Token& t = peek();
    Definition def;
    def.first_line = t.span.line;

    if (t.is_kw("const")) {
      def.body = parse_const_def();
    } else if (t.is_kw("range")) {
      def.body = parse_range_def();
    } else if (t.is_kw("set")) {
      def.body = parse_set_def();
    } else if (t.is_kw("fluent")) {
      def.body = parse_fluent_def();
    } else if (t.is_kw("assert") || t.is_kw("ltl_property")) {
      def.body = parse_fltl_def();
    } else if (t.is_kw("controllerSpec")) {
      def.body = parse_controller_spec_def();
    } else if (t.is_kw("controller")) {
      def.body = parse_controller_def();
    } else if (t.is_op("||")) {
      def.body = parse_composite_def();
    } else if (t.is_op("|") && peek(1).kind == TokenKind::UpperIdent && peek(2).is_op("=")) {
      diag(DiagnosticCode::UnexpectedToken, t.span,
           "'||' expected to open a composite definition (found '|')");
      advance();
      def.body = parse_composite_after_marker();
    } else if (t.kind == TokenKind::UpperIdent) {
      def.body = parse_process_def();
    } else {
      diag(DiagnosticCode::UnexpectedToken, t.span,
           "definition expected (found '" + t.lexeme + "')");
      panic_sync();
      return;
    }

    expect_terminator(def);
    if (def.last_line < def.first_line) def.last_line = def.first_line;
    result_.ast.definitions.push_back(std::move(def));
  }

  ConstDef parse_const_def() {
    advance();  // const
    ConstDef d;
    if (auto name = expect_upper("constant name")) d.name = *name;
    expect_equals();
    if (peek().kind == TokenKind::Integer) {
      d.value = std::stol(peek().lexeme);
      advance();
    } else {
      diag(DiagnosticCode::UnexpectedToken, peek().span, "integer constant expected");
    }
    return d;
  }

  RangeDef parse_range_def() {
    advance();  // range
    RangeDef d;
    if (auto name = expect_upper("range name")) d.name = *name;
    expect_equals();
    d.lo = parse_expr();
    expect_range_dots();
    d.hi = parse_expr();
    return d;
  }

  std::vector<SetElem> parse_set_elements(char close) {
    std::vector<SetElem> elems;
    for (;;) {
      SetElem e;
      e.span = peek().span;
      if (peek().kind == TokenKind::LowerIdent) {
        e.action = parse_action_label();
        e.span = e.action->span;
      } else if (peek().kind == TokenKind::UpperIdent) {
        e.set_ref = NameRef{peek().lexeme, peek().span};
        advance();
      } else {
        break;
      }
      elems.push_back(std::move(e));
      if (match_op(",")) continue;
      if (peek().is_ident()) {
        diag(DiagnosticCode::MissingComma, peek().span, "',' expected between set elements");
        continue;
      }
      break;
    }
    expect_close(close, DiagnosticCode::UnbalancedBracket);
    return elems;
  }

  SetDef parse_set_def() {
    advance();  // set
    SetDef d;
    if (auto name = expect_upper("set name")) d.name = *name;
    expect_equals();
    char close = expect_open('{', DiagnosticCode::UnbalancedBracket, "to open set");
    d.elements = parse_set_elements(close);
    return d;
  }

  std::vector<SetElem> parse_fluent_action_set() {
    if (peek().is_op("{") || peek().is_op("(")) {
      char close = expect_open('{', DiagnosticCode::UnbalancedBracket, "to open action set");
      return parse_set_elements(close);
    }
    std::vector<SetElem> elems;
    SetElem e;
    e.span = peek().span;
    if (peek().kind == TokenKind::LowerIdent) {
      e.action = parse_action_label();
      e.span = e.action->span;
      elems.push_back(std::move(e));
    } else if (peek().kind == TokenKind::UpperIdent) {
      e.set_ref = NameRef{peek().lexeme, peek().span};
      advance();
      elems.push_back(std::move(e));
    } else {
      diag(DiagnosticCode::UnexpectedToken, peek().span, "action set expected");
    }
    return elems;
  }

  static std::string set_elem_key(const SetElem& e) {
    if (e.set_ref) return "@" + e.set_ref->name;
    if (!e.action) return "";
    std::string key = e.action->head.name;
    for (const LabelPart& p : e.action->parts) {
      if (p.kind == LabelPart::Kind::DottedName) key += "." + p.name;
      if (p.kind == LabelPart::Kind::DottedInt) key += "." + std::to_string(p.value);
    }
    return key;
  }

  FluentDef parse_fluent_def() {
    advance();  // fluent
    FluentDef d;
    if (auto name = expect_upper("fluent name")) d.name = *name;
    expect_equals();
    if (!match_op("<"))
      diag(DiagnosticCode::UnexpectedToken, peek().span, "'<' expected to open fluent sets");
    d.initiating = parse_fluent_action_set();
    if (!match_op(",")) {
      if (peek().is_op("{") || peek().is_ident()) {
        diag(DiagnosticCode::MissingComma, peek().span,
             "',' expected between initiating and terminating sets");
      } else {
        diag(DiagnosticCode::UnexpectedToken, peek().span, "',' expected in fluent definition");
      }
    }
    d.terminating = parse_fluent_action_set();
    if (!match_op(">"))
      diag(DiagnosticCode::UnexpectedToken, peek().span, "'>' expected to close fluent sets");
    if (peek().is_kw("initially")) {
      advance();
      const Token& v = peek();
      if (v.kind == TokenKind::Integer && (v.lexeme == "0" || v.lexeme == "1")) {
        d.initially_true = v.lexeme == "1";
        advance();
      } else if (v.kind == TokenKind::UpperIdent && (v.lexeme == "True" || v.lexeme == "False")) {
        d.initially_true = v.lexeme == "True";
        advance();
      } else {
        diag(DiagnosticCode::UnexpectedToken, v.span,
             "initial fluent value expected (0, 1, True or False)");
      }
    }
    // Definition 1 requires the initiating and terminating sets disjoint.
    std::set<std::string> initiating;
    for (const SetElem& e : d.initiating) initiating.insert(set_elem_key(e));
    for (const SetElem& e : d.terminating) {
      if (initiating.count(set_elem_key(e))) {
        diag(DiagnosticCode::UnexpectedToken, e.span,
             "'" + set_elem_key(e) + "' appears in both initiating and terminating sets of fluent '" +
                 d.name.name + "'");
      }
    }
    return d;
  }

  // ---- FLTL -----------------------------------------------------------------

  Formula parse_formula() { return parse_implies(); }

  Formula parse_implies() {
    Formula lhs = parse_until();
    if (peek().is_op("->")) {
      advance();
      Formula node;
      node.kind = Formula::Kind::Implies;
      node.span = lhs.span;
      node.kids.push_back(std::move(lhs));
      node.kids.push_back(parse_implies());
      return node;
    }
    return lhs;
  }

  Formula parse_until() {
    Formula lhs = parse_or();
    while (peek().kind == TokenKind::UpperIdent && peek().lexeme == "U") {
      advance();
      Formula node;
      node.kind = Formula::Kind::Until;
      node.span = lhs.span;
      node.kids.push_back(std::move(lhs));
      node.kids.push_back(parse_or());
      lhs = std::move(node);
    }
    return lhs;
  }

  Formula parse_or() {
    Formula lhs = parse_and();
    while (peek().is_op("||")) {
      advance();
      Formula node;
      node.kind = Formula::Kind::Or;
      node.span = lhs.span;
      node.kids.push_back(std::move(lhs));
      node.kids.push_back(parse_and());
      lhs = std::move(node);
    }
    return lhs;
  }

  Formula parse_and() {
    Formula lhs = parse_formula_unary();
    while (peek().is_op("&&")) {
      advance();
      Formula node;
      node.kind = Formula::Kind::And;
      node.span = lhs.span;
      node.kids.push_back(std::move(lhs));
      node.kids.push_back(parse_formula_unary());
      lhs = std::move(node);
    }
    return lhs;
  }

  Formula parse_formula_unary() {
    Formula node;
    node.span = peek().span;
    if (peek().is_op("!")) {
      advance();
      node.kind = Formula::Kind::Not;
      node.kids.push_back(parse_formula_unary());
      return node;
    }
    if (peek().kind == TokenKind::UpperIdent && peek().lexeme == "X") {
      advance();
      node.kind = Formula::Kind::Next;
      node.kids.push_back(parse_formula_unary());
      return node;
    }
    if (peek().is_op("[") && peek(1).is_op("]")) {
      advance();
      advance();
      node.kind = Formula::Kind::Always;
      node.kids.push_back(parse_formula_unary());
      return node;
    }
    if (peek().is_op("<") && peek(1).is_op(">")) {
      advance();
      advance();
      node.kind = Formula::Kind::Eventually;
      node.kids.push_back(parse_formula_unary());
      return node;
    }
    return parse_formula_primary();
  }

  Formula parse_formula_primary() {
    Formula node;
    node.span = peek().span;
    if (peek().is_op("(")) {
      advance();
      node = parse_formula();
      expect_close(')', DiagnosticCode::UnbalancedBracket);
      return node;
    }
    if (peek().kind == TokenKind::UpperIdent) {
      node.kind = Formula::Kind::FluentRef;
      node.ref = NameRef{peek().lexeme, peek().span};
      advance();
      return node;
    }
    diag(DiagnosticCode::UnexpectedToken, peek().span,
         at_end() ? "formula expected" : "formula expected (found '" + peek().lexeme + "')");
    return node;
  }

  FltlDef parse_fltl_def() {
    FltlDef d;
    d.is_assert = peek().is_kw("assert");
    advance();
    if (auto name = expect_upper("property name")) d.name = *name;
    expect_equals();
    d.formula = parse_formula();
    return d;
  }

  // ---- controller constructs ---------------------------------------------------

  std::vector<NameRef> parse_name_set() {
    std::vector<NameRef> names;
    char close = expect_open('{', DiagnosticCode::UnbalancedBracket, "to open name set");
    for (;;) {
      if (peek().kind == TokenKind::UpperIdent) {
        names.push_back(NameRef{peek().lexeme, peek().span});
        advance();
      } else {
        break;
      }
      if (match_op(",")) continue;
      if (peek().kind == TokenKind::UpperIdent) {
        diag(DiagnosticCode::MissingComma, peek().span, "',' expected between names");
        continue;
      }
      break;
    }
    expect_close(close, DiagnosticCode::UnbalancedBracket);
    return names;
  }

  ControllerSpecDef parse_controller_spec_def() {
    advance();  // controllerSpec
    ControllerSpecDef d;
    if (auto name = expect_upper("controllerSpec name")) d.name = *name;
    expect_equals();
    char close = expect_open('{', DiagnosticCode::UnbalancedBracket,
                             "to open controllerSpec body");
    std::set<std::string> seen;
    while (peek().kind == TokenKind::LowerIdent) {
      std::string field = peek().lexeme;
      Span field_span = peek().span;
      bool known = field == "safety" || field == "liveness" || field == "assumption" ||
                   field == "controllable";
      if (!known) {
        diag(DiagnosticCode::UnexpectedToken, field_span,
             "unknown controllerSpec field '" + field +
                 "' (expected safety, liveness, assumption or controllable)");
      } else if (!seen.insert(field).second) {
        diag(DiagnosticCode::UnexpectedToken, field_span,
             "duplicate controllerSpec field '" + field + "'");
      }
      advance();
      expect_equals();
      std::vector<NameRef> names = parse_name_set();
      if (field == "safety") d.safety = std::move(names);
      else if (field == "liveness") d.liveness = std::move(names);
      else if (field == "assumption") d.assumption = std::move(names);
      else if (field == "controllable") d.controllable = std::move(names);
      if (match_op(",")) continue;
      if (peek().kind == TokenKind::LowerIdent) {
        diag(DiagnosticCode::MissingComma, peek().span,
             "',' expected between controllerSpec fields");
        continue;
      }
      break;
    }
    expect_close(close, DiagnosticCode::UnbalancedBracket);
    return d;
  }

  ControllerDef parse_controller_def() {
    advance();  // controller
    ControllerDef d;
    if (match_op("||")) {
      // fine
    } else if (peek().is_op("|")) {
      diag(DiagnosticCode::UnexpectedToken, peek().span, "'||' expected (found '|')");
      advance();
    } else {
      diag(DiagnosticCode::UnexpectedToken, peek().span,
           "'||' expected before controller name");
    }
    if (auto name = expect_upper("controller name")) d.name = *name;
    expect_equals();
    char close = expect_open('(', DiagnosticCode::UnbalancedBracket,
                             "to open controlled environment");
    if (peek().kind == TokenKind::UpperIdent) {
      d.environment = NameRef{peek().lexeme, peek().span};
      advance();
    } else {
      diag(DiagnosticCode::ExpectedProcessIdentifier, peek().span,
           "process identifier expected for controlled environment");
    }
    expect_close(close, DiagnosticCode::UnbalancedBracket);
    if (!match_op("~"))
      diag(DiagnosticCode::UnexpectedToken, peek().span, "'~' expected before goal set");
    char gclose = expect_open('{', DiagnosticCode::UnbalancedBracket, "to open goal set");
    if (peek().kind == TokenKind::UpperIdent) {
      d.goal = NameRef{peek().lexeme, peek().span};
      advance();
    } else {
      diag(DiagnosticCode::UnexpectedToken, peek().span, "goal name expected");
    }
    expect_close(gclose, DiagnosticCode::UnbalancedBracket);
    return d;
  }

  // ---- process and composite definitions ----------------------------------------

  std::vector<IndexDecl> parse_index_decls() {
    std::vector<IndexDecl> decls;
    while (peek().is_op("[")) {
      advance();
      IndexDecl decl;
      decl.span = peek().span;
      if (peek().kind == TokenKind::LowerIdent && peek(1).is_op(":")) {
        decl.var = peek().lexeme;
        bind_var(peek().lexeme);
        advance();
        advance();  // ':'
        decl.range = parse_range_ref();
      } else {
        decl.expr = parse_expr();
      }
      expect_close(']', DiagnosticCode::UnbalancedBracket);
      decls.push_back(std::move(decl));
    }
    return decls;
  }

  ProcessDef parse_process_def() {
    ProcessDef d;
    const Token& name = advance();
    d.name = NameRef{name.lexeme, name.span};
    push_scope();
    d.indices = parse_index_decls();
    if (peek().is_op("(") && peek(1).kind == TokenKind::UpperIdent && peek(2).is_op("="))
      d.params = parse_params();
    expect_equals();
    d.body = parse_body();
    // Local process definitions: `, NAME[binders] = body`. A missing comma
    // before an indexed local is recoverable; a following `NAME =` is a new
    // top-level definition, so the dot check catches it instead.
    for (;;) {
      if (peek().is_op(",")) {
        advance();
        d.locals.push_back(parse_local_def());
        continue;
      }
      if (peek().kind == TokenKind::UpperIdent && peek(1).is_op("[")) {
        diag(DiagnosticCode::MissingComma, peek().span,
             "',' expected before local process definition");
        d.locals.push_back(parse_local_def());
        continue;
      }
      break;
    }
    d.ops = parse_post_ops();
    pop_scope();
    return d;
  }

  LocalDef parse_local_def() {
    LocalDef local;
    push_scope();
    if (auto name = expect_upper("local process name")) local.name = *name;
    local.indices = parse_index_decls();
    expect_equals();
    local.body = parse_body();
    pop_scope();
    return local;
  }

  CompositeDef parse_composite_def() {
    advance();  // ||
    return parse_composite_after_marker();
  }

  CompositeDef parse_composite_after_marker() {
    CompositeDef d;
    push_scope();
    if (peek().kind == TokenKind::UpperIdent) {
      d.name = NameRef{peek().lexeme, peek().span};
      advance();
    } else {
      diag(DiagnosticCode::ExpectedProcessIdentifier, peek().span,
           "process identifier expected after '||'");
    }
    if (peek().is_op("(") && peek(1).kind == TokenKind::UpperIdent && peek(2).is_op("="))
      d.params = parse_params();
    expect_equals();
    d.body = parse_composite_expr();
    d.ops = parse_post_ops();
    pop_scope();
    return d;
  }

  CompositeExpr parse_composite_expr() {
    CompositeExpr body;
    char close = expect_open('(', DiagnosticCode::UnbalancedBracket,
                             "to open parallel composition");
    for (;;) {
      body.elements.push_back(parse_composite_elem());
      if (match_op("||")) continue;
      if (peek().is_op("|")) {
        diag(DiagnosticCode::UnexpectedToken, peek().span,
             "'||' expected between parallel components (found '|')");
        advance();
        continue;
      }
      break;
    }
    expect_close(close, DiagnosticCode::UnbalancedBracket);
    return body;
  }

  CompositeElem parse_composite_elem() {
    CompositeElem elem;
    if (peek().kind == TokenKind::LowerIdent) {
      elem.label = parse_action_label();
      if (!match_op(":"))
        diag(DiagnosticCode::UnexpectedToken, peek().span,
             "':' expected after instance label");
    }
    if (peek().is_op("(")) {
      elem.nested = std::make_shared<CompositeExpr>(parse_composite_expr());
    } else if (peek().kind == TokenKind::UpperIdent) {
      elem.ref = NameRef{peek().lexeme, peek().span};
      advance();
      if (peek().is_op("(")) {
        advance();
        for (;;) {
          elem.args.push_back(parse_expr());
          if (match_op(",")) continue;
          if (peek().kind == TokenKind::Integer || peek().is_ident()) {
            diag(DiagnosticCode::MissingComma, peek().span,
                 "',' expected between arguments");
            continue;
          }
          break;
        }
        expect_close(')', DiagnosticCode::UnbalancedBracket);
      }
    } else {
      diag(DiagnosticCode::ExpectedProcessIdentifier, peek().span,
           at_end() ? "process identifier expected"
                    : "process identifier expected (found '" + peek().lexeme + "')");
      return elem;
    }
    if ((peek().is_op("/") && peek(1).is_op("{")) || (peek().is_op("\\") && peek(1).is_op("{")))
      elem.ops = std::make_shared<PostOps>(parse_post_ops());
    return elem;
  }

  // ---- state ----------------------------------------------------------------

  const std::vector<Token>& toks_;
  std::size_t pos_ = 0;
  ParseResult result_;
  std::vector<std::set<std::string>> scopes_;
  std::vector<Span> guard_spans_;
  std::vector<IndexNotationSite> index_sites_;

 public:
  std::vector<Span> take_guard_spans() { return std::move(guard_spans_); }
  std::vector<IndexNotationSite> take_index_sites() { return std::move(index_sites_); }
};

}  // namespace

Section definition_section(const Definition& def) {
  return std::visit(
      [](const auto& body) -> Section {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, FluentDef> || std::is_same_v<T, FltlDef>)
          return Section::Requirements;
        else if constexpr (std::is_same_v<T, ControllerSpecDef> ||
                           std::is_same_v<T, ControllerDef>)
          return Section::ControllerSpecs;
        else
          return Section::Processes;
      },
      def.body);
}

std::string definition_name(const Definition& def) {
  return std::visit([](const auto& body) -> std::string { return body.name.name; }, def.body);
}

ParseResult parse(const TokenStream& stream) {
  Parser parser(stream);
  ParseResult result = parser.run();
  result.ast.guard_spans = parser.take_guard_spans();
  result.ast.index_sites = parser.take_index_sites();
  return result;
}

}  // namespace dcsrepair
