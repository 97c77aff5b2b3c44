#pragma once

// Tokenizer shared by rule files and translation pattern files.

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "semunits/error.hpp"
#include "semunits/semantics.hpp"
#include "semunits/store.hpp"

namespace su::detail {

struct Token {
  enum class Type { Ident, Var, Iri, String, Punct, End };
  Type type = Type::End;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

class LogicLexer {
 public:
  LogicLexer(std::string_view text, std::size_t line = 1) : text_(text), line_(line) {}

  const Token& peek() {
    if (!has_) {
      tok_ = next_token();
      has_ = true;
    }
    return tok_;
  }
  Token take() {
    peek();
    has_ = false;
    return tok_;
  }
  bool accept(std::string_view punct) {
    const Token& t = peek();
    if (t.type == Token::Type::Punct && t.text == punct) {
      has_ = false;
      return true;
    }
    return false;
  }
  void expect(std::string_view punct) {
    if (!accept(punct)) fail("expected '" + std::string(punct) + "'");
  }
  [[noreturn]] void fail(const std::string& msg) {
    const Token& t = peek();
    std::string found = t.type == Token::Type::End ? "end of input" : "'" + t.text + "'";
    throw SyntaxError(msg + ", found " + found, t.line, t.column);
  }
  bool at_end() { return peek().type == Token::Type::End; }

 private:
  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == ':' ||
           c == '-' || c == '/' || c == '#';
  }

  char cur() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  char at(std::size_t k) const { return pos_ + k < text_.size() ? text_[pos_ + k] : '\0'; }
  void bump() {
    if (cur() == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  Token next_token() {
    for (;;) {
      while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(cur()))) bump();
      if (cur() == '%') {
        while (pos_ < text_.size() && cur() != '\n') bump();
        continue;
      }
      break;
    }
    Token t;
    t.line = line_;
    t.column = col_;
    if (pos_ >= text_.size()) return t;
    char c = cur();
    if (c == ':' && at(1) == '-') {
      bump();
      bump();
      t.type = Token::Type::Punct;
      t.text = ":-";
      return t;
    }
    if (c == '(' || c == ')' || c == ',' || c == '.' || c == '-' || c == '{' || c == '}') {
      bump();
      t.type = Token::Type::Punct;
      t.text = std::string(1, c);
      return t;
    }
    if (c == '?') {
      bump();
      t.type = Token::Type::Var;
      t.text = "?";
      while (std::isalnum(static_cast<unsigned char>(cur())) || cur() == '_') {
        t.text += cur();
        bump();
      }
      if (t.text.size() == 1) throw SyntaxError("empty variable name", t.line, t.column);
      return t;
    }
    if (c == '<') {
      bump();
      t.type = Token::Type::Iri;
      while (pos_ < text_.size() && cur() != '>') {
        if (std::isspace(static_cast<unsigned char>(cur())))
          throw SyntaxError("whitespace in IRI", line_, col_);
        t.text += cur();
        bump();
      }
      if (cur() != '>') throw SyntaxError("unterminated IRI", t.line, t.column);
      bump();
      if (!is_absolute_iri(t.text))
        throw Error(ErrorCode::InvalidIri, "not an absolute IRI: <" + t.text + ">");
      return t;
    }
    if (c == '"') {
      bump();
      t.type = Token::Type::String;
      while (pos_ < text_.size() && cur() != '"') {
        if (cur() == '\\') {
          bump();
          char e = cur();
          t.text += e == 'n' ? '\n' : e == 't' ? '\t' : e;
        } else {
          t.text += cur();
        }
        bump();
      }
      if (cur() != '"') throw SyntaxError("unterminated string", t.line, t.column);
      bump();
      return t;
    }
    if (ident_char(c)) {
      t.type = Token::Type::Ident;
      while (pos_ < text_.size()) {
        char d = cur();
        if (d == ':' && at(1) == '-') break;
        // A dot belongs to the identifier only when more identifier follows.
        if (ident_char(d) || (d == '.' && std::isalnum(static_cast<unsigned char>(at(1))))) {
          t.text += d;
          bump();
        } else {
          break;
        }
      }
      return t;
    }
    throw SyntaxError(std::string("unexpected character '") + c + "'", t.line, t.column);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_;
  std::size_t col_ = 1;
  Token tok_;
  bool has_ = false;
};

// Constant or variable from one token. Identifiers expand through prefixes
// when possible and otherwise stay bare symbols.
inline std::string resolve_term(const Token& t, const PrefixMap& prefixes) {
  switch (t.type) {
    case Token::Type::Var:
    case Token::Type::String:
    case Token::Type::Iri:
      return t.text;
    case Token::Type::Ident: {
      std::string iri = prefixes.expand(t.text);
      return iri.empty() ? t.text : iri;
    }
    default:
      return {};
  }
}

inline bool is_term_token(const Token& t) {
  return t.type == Token::Type::Ident || t.type == Token::Type::Var ||
         t.type == Token::Type::Iri || t.type == Token::Type::String;
}

// [-]pred[(term, ...)]
inline Atom parse_atom(LogicLexer& lx, const PrefixMap& prefixes) {
  Atom a;
  if (lx.accept("-")) a.negated = true;
  const Token& head = lx.peek();
  if (head.type != Token::Type::Ident && head.type != Token::Type::Iri)
    lx.fail("expected predicate");
  a.predicate = resolve_term(lx.take(), prefixes);
  if (lx.accept("(")) {
    if (!lx.accept(")")) {
      for (;;) {
        if (!is_term_token(lx.peek())) lx.fail("expected term");
        a.args.push_back(resolve_term(lx.take(), prefixes));
        if (lx.accept(")")) break;
        lx.expect(",");
      }
    }
  }
  return a;
}

std::string format_term(const std::string& term, const PrefixMap* prefixes);

// Reads `@prefix name: <iri> .` lines into `prefixes` and blanks them out.
std::string strip_prefix_lines(std::string_view text, PrefixMap& prefixes);

}  // namespace su::detail
