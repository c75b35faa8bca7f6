#pragma once

#include <string>
#include <vector>

#include "dcsrepair/source.hpp"

namespace dcsrepair {

enum class TokenKind {
  Keyword,
  UpperIdent,  // process/set/range/const/fluent/spec names: uppercase first letter
  LowerIdent,  // action labels and index variables: lowercase first letter
  Integer,
  Operator,
  Punct,
};

struct Token {
  TokenKind kind = TokenKind::Punct;
  std::string lexeme;
  Span span;
  // Whitespace and comments between the previous token and this one.
  // Keeping it makes the stream lossless: leading + lexeme concatenation
  // reproduces the input byte-for-byte.
  std::string leading;

  bool is(TokenKind k) const { return kind == k; }
  bool is_op(std::string_view text) const {
    return (kind == TokenKind::Operator || kind == TokenKind::Punct) && lexeme == text;
  }
  bool is_kw(std::string_view text) const { return kind == TokenKind::Keyword && lexeme == text; }
  bool is_ident() const { return kind == TokenKind::UpperIdent || kind == TokenKind::LowerIdent; }
};

struct TokenStream {
  std::vector<Token> tokens;
  // Whitespace and comments after the last token (the whole file when there
  // are no tokens at all).
  std::string trailing;

  std::string reconstruct() const {
    std::string out;
    for (const Token& t : tokens) {
      out += t.leading;
      out += t.lexeme;
    }
    out += trailing;
    return out;
  }
};

const char* token_kind_name(TokenKind kind);

}  // namespace dcsrepair
