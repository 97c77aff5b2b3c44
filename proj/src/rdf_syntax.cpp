// N-Quads and TriG reading/writing.
#include <cctype>
#include <map>
#include <sstream>

#include "semunits/store.hpp"

namespace su {
namespace {

const char* const kRdfType = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

void append_utf8(std::string& out, unsigned long cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

class Reader {
 public:
  Reader(std::string_view text, Syntax syntax, std::string default_graph)
      : text_(text), syntax_(syntax), default_graph_(std::move(default_graph)) {}

  QuadDataset run() {
    if (syntax_ == Syntax::NQuads)
      nquads();
    else
      trig();
    return std::move(out_);
  }

 private:
  // ------------------------------------------------------------ cursor
  bool eof() const { return pos_ >= text_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }
  char get() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }
  [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(msg, line_, col_); }
  [[noreturn]] void fail_blank() const {
    throw Error(ErrorCode::BlankNode, "blank nodes are not allowed (line " +
                                          std::to_string(line_) + ", column " +
                                          std::to_string(col_) + ")");
  }

  // Skips whitespace and comments; with `stop_at_newline` newlines are kept.
  void skip_ws(bool stop_at_newline = false) {
    while (!eof()) {
      char c = peek();
      if (c == '#') {
        while (!eof() && peek() != '\n') get();
      } else if (c == '\n' && stop_at_newline) {
        return;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        get();
      } else {
        return;
      }
    }
  }

  void expect(char c) {
    if (eof() || peek() != c) fail(std::string("expected '") + c + "'");
    get();
  }

  bool starts_with_keyword(std::string_view kw) const {
    if (text_.size() - pos_ < kw.size()) return false;
    for (std::size_t i = 0; i < kw.size(); ++i)
      if (std::toupper(static_cast<unsigned char>(text_[pos_ + i])) != kw[i]) return false;
    char after = peek(kw.size());
    return !(std::isalnum(static_cast<unsigned char>(after)) || after == '_' || after == ':');
  }

  // ------------------------------------------------------------ lexemes
  unsigned long hex_escape(int digits) {
    unsigned long cp = 0;
    for (int i = 0; i < digits; ++i) {
      if (eof() || !std::isxdigit(static_cast<unsigned char>(peek()))) fail("bad unicode escape");
      char c = get();
      cp = cp * 16 + static_cast<unsigned long>(std::isdigit(static_cast<unsigned char>(c))
                                                    ? c - '0'
                                                    : std::tolower(c) - 'a' + 10);
    }
    return cp;
  }

  std::string iriref() {
    expect('<');
    std::string v;
    while (true) {
      if (eof()) fail("unterminated IRI");
      char c = get();
      if (c == '>') break;
      if (c == '\\') {
        if (eof()) fail("unterminated IRI");
        char e = get();
        if (e == 'u')
          append_utf8(v, hex_escape(4));
        else if (e == 'U')
          append_utf8(v, hex_escape(8));
        else
          fail("bad escape in IRI");
        continue;
      }
      if (c == '\n' || c == ' ') fail("illegal character in IRI");
      v += c;
    }
    if (!is_absolute_iri(v)) {
      if (!base_.empty() && !v.empty() && v.find(':') == std::string::npos) return base_ + v;
      if (!base_.empty() && v.empty()) return base_;
      fail("relative or malformed IRI <" + v + ">");
    }
    return v;
  }

  static bool pn_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.' ||
           c == '%' || static_cast<unsigned char>(c) >= 0x80;
  }

  std::string pname() {
    std::string prefix;
    while (!eof() && peek() != ':' && pn_char(peek())) prefix += get();
    if (eof() || peek() != ':') fail("expected prefixed name");
    get();
    std::string local;
    while (!eof()) {
      char c = peek();
      if (pn_char(c) || c == ':') {
        local += get();
      } else if (c == '\\' && pos_ + 1 < text_.size()) {
        get();
        local += get();
      } else {
        break;
      }
    }
    while (!local.empty() && local.back() == '.') {
      local.pop_back();
      --pos_;
      --col_;
    }
    auto it = prefixes_.find(prefix);
    if (it == prefixes_.end()) fail("undeclared prefix '" + prefix + ":'");
    return it->second + local;
  }

  std::string iri_or_pname() {
    if (peek() == '<') return iriref();
    if (peek() == '_' && peek(1) == ':') fail_blank();
    if (peek() == '[' || peek() == '(') fail_blank();
    return pname();
  }

  std::string string_body() {
    char q = get();
    bool longq = peek() == q && peek(1) == q;
    if (longq) {
      get();
      get();
    }
    std::string v;
    while (true) {
      if (eof()) fail("unterminated string literal");
      char c = peek();
      if (longq) {
        if (c == q && peek(1) == q && peek(2) == q) {
          get();
          get();
          get();
          break;
        }
      } else {
        if (c == q) {
          get();
          break;
        }
        if (c == '\n') fail("newline in string literal");
      }
      get();
      if (c == '\\') {
        if (eof()) fail("unterminated escape");
        char e = get();
        switch (e) {
          case 't': v += '\t'; break;
          case 'b': v += '\b'; break;
          case 'n': v += '\n'; break;
          case 'r': v += '\r'; break;
          case 'f': v += '\f'; break;
          case '"': v += '"'; break;
          case '\'': v += '\''; break;
          case '\\': v += '\\'; break;
          case 'u': append_utf8(v, hex_escape(4)); break;
          case 'U': append_utf8(v, hex_escape(8)); break;
          default: fail(std::string("bad escape \\") + e);
        }
        continue;
      }
      v += c;
    }
    return v;
  }

  Term literal() {
    if (syntax_ == Syntax::NQuads && peek() != '"') fail("expected string literal");
    std::string lex = string_body();
    if (peek() == '@') {
      get();
      std::string lang;
      while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '-'))
        lang += get();
      if (lang.empty()) fail("empty language tag");
      return Term::literal(lex, "", lang);
    }
    if (peek() == '^' && peek(1) == '^') {
      get();
      get();
      std::string dt = syntax_ == Syntax::NQuads ? iriref() : iri_or_pname();
      return Term::literal(lex, dt);
    }
    return Term::literal(lex);
  }

  Term number() {
    std::string v;
    if (peek() == '+' || peek() == '-') v += get();
    bool dot = false, exp = false;
    while (!eof()) {
      char c = peek();
      if (std::isdigit(static_cast<unsigned char>(c))) {
        v += get();
      } else if (c == '.' && !dot && !exp && std::isdigit(static_cast<unsigned char>(peek(1)))) {
        dot = true;
        v += get();
      } else if ((c == 'e' || c == 'E') && !exp) {
        exp = true;
        v += get();
        if (peek() == '+' || peek() == '-') v += get();
      } else {
        break;
      }
    }
    if (v.empty() || v == "+" || v == "-") fail("malformed number");
    return Term::literal(v, exp ? xsd::kDouble : dot ? xsd::kDecimal : xsd::kInteger);
  }

  Term object_term() {
    char c = peek();
    if (c == '<') return Term::iri(iriref());
    if (c == '"' || c == '\'') return literal();
    if (c == '_' && peek(1) == ':') fail_blank();
    if (c == '[' || c == '(') fail_blank();
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '+' || c == '-' ||
        (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))))
      return number();
    if (starts_with_keyword("TRUE") && text_.compare(pos_, 4, "true") == 0) {
      for (int i = 0; i < 4; ++i) get();
      return Term::literal("true", xsd::kBoolean);
    }
    if (starts_with_keyword("FALSE") && text_.compare(pos_, 5, "false") == 0) {
      for (int i = 0; i < 5; ++i) get();
      return Term::literal("false", xsd::kBoolean);
    }
    return Term::iri(pname());
  }

  void emit(const std::string& s, const std::string& p, const Term& o, const std::string& g) {
    try {
      out_.add(s, p, o, g);
    } catch (const SyntaxError&) {
      throw;
    } catch (const Error& e) {
      if (e.code() == ErrorCode::BlankNode) throw;
      fail(e.what());
    }
  }

  // ------------------------------------------------------------ N-Quads
  void nquads() {
    while (true) {
      skip_ws();
      if (eof()) break;
      if (peek() == '_' && peek(1) == ':') fail_blank();
      std::string s = iriref();
      skip_ws(true);
      std::string p = iriref();
      skip_ws(true);
      Term o;
      if (peek() == '<') {
        o = Term::iri(iriref());
      } else if (peek() == '"') {
        o = literal();
      } else if (peek() == '_' && peek(1) == ':') {
        fail_blank();
      } else {
        fail("expected object");
      }
      skip_ws(true);
      std::string g = default_graph_;
      if (peek() == '<') {
        g = iriref();
        skip_ws(true);
      } else if (peek() == '_' && peek(1) == ':') {
        fail_blank();
      }
      expect('.');
      skip_ws(true);
      if (!eof() && peek() != '\n') fail("trailing content after quad");
      emit(s, p, o, g);
    }
  }

  // ------------------------------------------------------------ TriG
  void directive() {
    bool sparql_style = peek() != '@';
    if (!sparql_style) get();
    if (starts_with_keyword("PREFIX")) {
      for (int i = 0; i < 6; ++i) get();
      skip_ws();
      std::string prefix;
      while (!eof() && peek() != ':' && pn_char(peek())) prefix += get();
      expect(':');
      skip_ws();
      std::string iri = iriref();
      prefixes_[prefix] = iri;
    } else if (starts_with_keyword("BASE")) {
      for (int i = 0; i < 4; ++i) get();
      skip_ws();
      base_ = iriref();
    } else {
      fail("unknown directive");
    }
    if (!sparql_style) {
      skip_ws();
      expect('.');
    }
  }

  void predicate_object_list(const std::string& subject, const std::string& graph) {
    while (true) {
      skip_ws();
      std::string pred;
      if (peek() == 'a' && !pn_char(peek(1)) && peek(1) != ':') {
        get();
        pred = kRdfType;
      } else {
        pred = iri_or_pname();
      }
      while (true) {
        skip_ws();
        Term o = object_term();
        emit(subject, pred, o, graph);
        skip_ws();
        if (peek() == ',') {
          get();
          continue;
        }
        break;
      }
      if (peek() == ';') {
        while (peek() == ';') {
          get();
          skip_ws();
        }
        if (peek() == '.' || peek() == '}' || peek() == ']') return;
        continue;
      }
      return;
    }
  }

  void triples_block(const std::string& graph) {
    while (true) {
      skip_ws();
      if (eof()) fail("unterminated graph block");
      if (peek() == '}') {
        get();
        return;
      }
      std::string s = iri_or_pname();
      predicate_object_list(s, graph);
      skip_ws();
      if (peek() == '.') {
        get();
      } else if (peek() != '}') {
        fail("expected '.' or '}'");
      }
    }
  }

  void trig() {
    while (true) {
      skip_ws();
      if (eof()) break;
      if (peek() == '@' || starts_with_keyword("PREFIX") || starts_with_keyword("BASE")) {
        directive();
        continue;
      }
      if (peek() == '{') {
        get();
        triples_block(default_graph_);
        continue;
      }
      if (starts_with_keyword("GRAPH")) {
        for (int i = 0; i < 5; ++i) get();
        skip_ws();
        std::string g = iri_or_pname();
        skip_ws();
        expect('{');
        triples_block(g);
        continue;
      }
      std::string first = iri_or_pname();
      skip_ws();
      if (peek() == '{') {
        get();
        triples_block(first);
        continue;
      }
      predicate_object_list(first, default_graph_);
      skip_ws();
      expect('.');
    }
  }

  std::string_view text_;
  Syntax syntax_;
  std::string default_graph_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
  std::map<std::string, std::string> prefixes_;
  std::string base_;
  QuadDataset out_;
};

std::string escape_string(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

std::string trig_iri(const std::string& iri, const PrefixMap* prefixes) {
  if (prefixes) {
    auto c = prefixes->compact_turtle(iri);
    if (!c.empty()) return c;
  }
  return "<" + iri + ">";
}

std::string trig_term(const Term& t, const PrefixMap* prefixes) {
  if (t.is_iri()) return trig_iri(t.value, prefixes);
  std::string out = "\"" + escape_string(t.value) + "\"";
  if (!t.lang.empty()) return out + "@" + t.lang;
  if (!t.datatype.empty()) return out + "^^" + trig_iri(t.datatype, prefixes);
  return out;
}

}  // namespace

std::string term_to_nquads(const Term& t) {
  if (t.is_iri()) return "<" + t.value + ">";
  std::string out = "\"" + escape_string(t.value) + "\"";
  if (!t.lang.empty()) return out + "@" + t.lang;
  if (!t.datatype.empty()) return out + "^^<" + t.datatype + ">";
  return out;
}

QuadDataset parse_quads(std::string_view text, Syntax syntax, const std::string& default_graph) {
  return Reader(text, syntax, default_graph).run();
}

std::string serialize_quads(const QuadDataset& ds, Syntax syntax, const PrefixMap* prefixes) {
  std::ostringstream out;
  if (syntax == Syntax::NQuads) {
    for (const auto& q : ds) {
      out << '<' << q.subject << "> <" << q.predicate << "> " << term_to_nquads(q.object);
      if (q.graph != kDefaultGraph) out << " <" << q.graph << '>';
      out << " .\n";
    }
    return out.str();
  }
  if (ds.empty()) return "";
  if (prefixes) {
    for (const auto& [name, iri] : prefixes->entries())
      out << "@prefix " << name << ": <" << iri << "> .\n";
    if (!prefixes->empty()) out << '\n';
  }
  std::string current;
  bool open = false;
  for (const auto& q : ds) {
    if (!open || q.graph != current) {
      if (open) out << "}\n\n";
      current = q.graph;
      open = true;
      if (q.graph == kDefaultGraph)
        out << "{\n";
      else
        out << trig_iri(q.graph, prefixes) << " {\n";
    }
    out << "  " << trig_iri(q.subject, prefixes) << ' ' << trig_iri(q.predicate, prefixes) << ' '
        << trig_term(q.object, prefixes) << " .\n";
  }
  if (open) out << "}\n";
  return out.str();
}

}  // namespace su
