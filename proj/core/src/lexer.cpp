#include "dcsrepair/lexer.hpp"

#include <array>
#include <cctype>
#include <string>

namespace dcsrepair {

namespace {

constexpr std::array<std::string_view, 13> kKeywords = {
    "set",        "range",          "const",  "fluent", "when",
    "controller", "controllerSpec", "assert", "ltl_property",
    "initially",  "STOP",           "ERROR",  "END",
};

// Longest match first within each leading character.
constexpr std::array<std::string_view, 8> kTwoCharOps = {
    "->", "||", "..", "==", "!=", "<=", ">=", "&&",
};

constexpr std::string_view kOneCharOps = "|=~/\\+-*%!";
constexpr std::string_view kPunct = ".,:{}()[]<>";

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)); }
bool ident_part(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

}  // namespace

bool is_keyword(std::string_view word) {
  for (std::string_view kw : kKeywords)
    if (kw == word) return true;
  return false;
}

LexResult tokenize(std::string_view source) {
  LexResult result;
  std::size_t pos = 0;
  int line = 1;
  int col = 1;
  std::string pending;  // whitespace/comments accumulated since last token

  auto advance = [&](std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      if (source[pos + i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    pos += n;
  };

  auto emit = [&](TokenKind kind, std::size_t len) {
    Token t;
    t.kind = kind;
    t.lexeme = std::string(source.substr(pos, len));
    t.span = Span{line, col, static_cast<int>(len), pos};
    t.leading = std::move(pending);
    pending.clear();
    result.stream.tokens.push_back(std::move(t));
    advance(len);
  };

  while (pos < source.size()) {
    char c = source[pos];

    if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v') {
      pending += c;
      advance(1);
      continue;
    }
    if (c == '/' && pos + 1 < source.size() && source[pos + 1] == '/') {
      std::size_t end = source.find('\n', pos);
      if (end == std::string_view::npos) end = source.size();
      pending += source.substr(pos, end - pos);
      advance(end - pos);
      continue;
    }
    if (c == '/' && pos + 1 < source.size() && source[pos + 1] == '*') {
      std::size_t end = source.find("*/", pos + 2);
      if (end == std::string_view::npos) {
        result.diagnostics.push_back(Diagnostic{
            DiagnosticCode::UnexpectedToken, Severity::Error,
            Span{line, col, 2, pos}, "unterminated block comment"});
        end = source.size();
      } else {
        end += 2;
      }
      pending += source.substr(pos, end - pos);
      advance(end - pos);
      continue;
    }

    if (ident_start(c)) {
      std::size_t len = 1;
      while (pos + len < source.size() && ident_part(source[pos + len])) ++len;
      std::string_view word = source.substr(pos, len);
      if (is_keyword(word)) {
        emit(TokenKind::Keyword, len);
      } else if (std::isupper(static_cast<unsigned char>(c))) {
        emit(TokenKind::UpperIdent, len);
      } else {
        emit(TokenKind::LowerIdent, len);
      }
      continue;
    }

    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t len = 1;
      while (pos + len < source.size() &&
             std::isdigit(static_cast<unsigned char>(source[pos + len])))
        ++len;
      emit(TokenKind::Integer, len);
      continue;
    }

    std::string_view rest = source.substr(pos);
    bool matched = false;
    for (std::string_view op : kTwoCharOps) {
      if (rest.substr(0, op.size()) == op) {
        emit(TokenKind::Operator, op.size());
        matched = true;
        break;
      }
    }
    if (matched) continue;

    if (kOneCharOps.find(c) != std::string_view::npos) {
      emit(TokenKind::Operator, 1);
      continue;
    }
    if (kPunct.find(c) != std::string_view::npos) {
      emit(TokenKind::Punct, 1);
      continue;
    }

    // Not part of the language. Keep lexing; the parser never sees clean
    // input anyway, and the span lets tooling point at the byte.
    result.diagnostics.push_back(Diagnostic{
        DiagnosticCode::UnexpectedToken, Severity::Error, Span{line, col, 1, pos},
        std::string("unexpected character '") + c + "'"});
    emit(TokenKind::Punct, 1);
  }

  result.stream.trailing = std::move(pending);
  return result;
}

const char* token_kind_name(TokenKind kind) {
  switch (kind) {
    case TokenKind::Keyword: return "keyword";
    case TokenKind::UpperIdent: return "upper-identifier";
    case TokenKind::LowerIdent: return "lower-identifier";
    case TokenKind::Integer: return "integer";
    case TokenKind::Operator: return "operator";
    case TokenKind::Punct: return "punctuation";
  }
  return "punctuation";
}

}  // namespace dcsrepair
