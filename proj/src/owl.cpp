#include <algorithm>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <set>

#include "logic_lexer.hpp"
#include "semunits/mint.hpp"
#include "semunits/semantics.hpp"

namespace su {

namespace {

using Kind = OwlExpr::Kind;

const std::map<std::string, Kind>& constructors() {
  static const std::map<std::string, Kind> m = {
      {"ClassAssertion", Kind::ClassAssertion},
      {"ObjectPropertyAssertion", Kind::ObjectPropertyAssertion},
      {"SubClassOf", Kind::SubClassOf},
      {"SomeValuesFrom", Kind::SomeValuesFrom},
      {"AllValuesFrom", Kind::AllValuesFrom},
      {"ComplementOf", Kind::ComplementOf},
      {"IntersectionOf", Kind::IntersectionOf},
      {"OneOf", Kind::OneOf},
      {"QualifiedCardinality", Kind::QualifiedCardinality},
      {"CollectionMembership", Kind::CollectionMembership},
  };
  return m;
}

// Fixed arity per constructor; 0 means one or more.
std::size_t arity(Kind k) {
  switch (k) {
    case Kind::ClassAssertion:
    case Kind::SubClassOf:
    case Kind::SomeValuesFrom:
    case Kind::AllValuesFrom:
    case Kind::CollectionMembership:
      return 2;
    case Kind::ObjectPropertyAssertion:
    case Kind::QualifiedCardinality:
      return 3;
    case Kind::ComplementOf:
      return 1;
    default:
      return 0;
  }
}

OwlExpr parse_expr(detail::LogicLexer& lx, const PrefixMap& pm) {
  const detail::Token& t = lx.peek();
  if (t.type == detail::Token::Type::Ident) {
    auto it = constructors().find(t.text);
    if (it != constructors().end()) {
      detail::Token name = lx.take();
      OwlExpr e;
      e.kind = it->second;
      lx.expect("(");
      bool braces = e.kind == Kind::OneOf && lx.accept("{");
      for (;;) {
        e.args.push_back(parse_expr(lx, pm));
        if (!lx.accept(",")) break;
      }
      if (braces) lx.expect("}");
      lx.expect(")");
      std::size_t n = arity(e.kind);
      if (n && e.args.size() != n)
        throw SyntaxError(name.text + " takes " + std::to_string(n) + " arguments", name.line,
                          name.column);
      return e;
    }
  }
  if (!detail::is_term_token(t)) lx.fail("expected class expression or term");
  return OwlExpr::leaf(detail::resolve_term(lx.take(), pm));
}

void expr_vars(const OwlExpr& e, std::set<std::string>& out) {
  if (e.kind == Kind::Name) {
    if (is_variable(e.name)) out.insert(e.name);
    return;
  }
  for (const auto& a : e.args) expr_vars(a, out);
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

OwlExpr OwlExpr::leaf(std::string n) {
  OwlExpr e;
  e.name = std::move(n);
  return e;
}

std::strong_ordering OwlExpr::operator<=>(const OwlExpr& o) const {
  if (auto c = kind <=> o.kind; c != 0) return c;
  if (auto c = name <=> o.name; c != 0) return c;
  return std::lexicographical_compare_three_way(args.begin(), args.end(), o.args.begin(),
                                                o.args.end());
}

std::string to_functional(const OwlExpr& e, const PrefixMap* prefixes) {
  auto f = [&](std::size_t i) { return to_functional(e.args.at(i), prefixes); };
  auto list = [&](std::size_t from) {
    std::string out;
    for (std::size_t i = from; i < e.args.size(); ++i) {
      if (i > from) out += ", ";
      out += f(i);
    }
    return out;
  };
  switch (e.kind) {
    case Kind::Name: return detail::format_term(e.name, prefixes);
    case Kind::ClassAssertion: return "rdf:type(" + f(1) + ", " + f(0) + ")";
    case Kind::ObjectPropertyAssertion: return f(0) + "(" + f(1) + ", " + f(2) + ")";
    case Kind::SubClassOf: return "owl:SubClassOf(" + list(0) + ")";
    case Kind::SomeValuesFrom: return "owl:SomeValuesFrom(" + list(0) + ")";
    case Kind::AllValuesFrom: return "owl:AllValuesFrom(" + list(0) + ")";
    case Kind::ComplementOf: return "owl:complementOf(" + list(0) + ")";
    case Kind::IntersectionOf: return "owl:intersectionOf(" + list(0) + ")";
    case Kind::OneOf: return "owl:oneOf({" + list(0) + "})";
    case Kind::QualifiedCardinality: return "owl:cardinality(" + list(0) + ")";
    case Kind::CollectionMembership: return "member-of(" + list(0) + ")";
  }
  return {};
}

OwlExpr parse_owl_expr(std::string_view text, const PrefixMap* prefixes) {
  PrefixMap pm = prefixes ? *prefixes : PrefixMap{};
  detail::LogicLexer lx(text);
  OwlExpr e = parse_expr(lx, pm);
  if (!lx.at_end()) lx.fail("trailing input after expression");
  return e;
}

std::vector<TranslationPattern> parse_patterns(std::string_view text, const PrefixMap* prefixes) {
  PrefixMap pm = prefixes ? *prefixes : PrefixMap{};
  std::string body = detail::strip_prefix_lines(text, pm);
  std::vector<TranslationPattern> out;
  std::set<std::string> ids;
  std::optional<TranslationPattern> cur;
  std::size_t cur_line = 0;
  std::size_t lineno = 0;
  std::size_t start = 0;

  auto finish = [&]() {
    const TranslationPattern& p = *cur;
    if (p.outputs.empty())
      throw SyntaxError("pattern " + p.id + " has no emit line", cur_line, 1);
    std::set<std::string> bound;
    for (const auto& a : p.guard)
      for (const auto& t : a.args)
        if (is_variable(t)) bound.insert(t);
    for (const auto& v : p.fresh) {
      if (bound.count(v))
        throw SyntaxError("fresh variable " + v + " also occurs in the guard of pattern " + p.id,
                          cur_line, 1);
    }
    for (const auto& a : p.guard_not)
      for (const auto& t : a.args)
        if (is_variable(t) && !bound.count(t))
          throw Error(ErrorCode::UnboundPatternVariable,
                      "variable " + t + " in a negated guard of pattern " + p.id +
                          " is not bound by its positive guard");
    std::set<std::string> allowed = bound;
    allowed.insert(p.fresh.begin(), p.fresh.end());
    for (const auto& o : p.outputs) {
      std::set<std::string> vs;
      expr_vars(o, vs);
      for (const auto& v : vs)
        if (!allowed.count(v))
          throw Error(ErrorCode::UnboundPatternVariable,
                      "variable " + v + " in pattern " + p.id + " is bound by neither guard nor fresh");
    }
    out.push_back(std::move(*cur));
    cur.reset();
  };

  while (start <= body.size()) {
    auto nl = body.find('\n', start);
    std::string line = trim(std::string_view(body).substr(
        start, nl == std::string::npos ? body.size() - start : nl - start));
    ++lineno;
    start = nl == std::string::npos ? body.size() + 1 : nl + 1;
    if (line.empty() || line[0] == '%' || line[0] == '#') continue;
    auto sp = line.find_first_of(" \t");
    std::string word = line.substr(0, sp);
    std::string rest = sp == std::string::npos ? "" : trim(std::string_view(line).substr(sp));
    if (word == "pattern") {
      if (cur) throw SyntaxError("pattern " + cur->id + " is missing 'end'", lineno, 1);
      if (rest.empty() || rest.find_first_of(" \t") != std::string::npos)
        throw SyntaxError("pattern needs a single identifier", lineno, 1);
      if (!ids.insert(rest).second)
        throw SyntaxError("duplicate pattern " + rest, lineno, 1);
      cur.emplace();
      cur->id = rest;
      cur_line = lineno;
      continue;
    }
    if (!cur) throw SyntaxError("'" + word + "' outside a pattern block", lineno, 1);
    if (word == "end") {
      finish();
    } else if (word == "if") {
      detail::LogicLexer lx(rest, lineno);
      for (;;) {
        const auto& t = lx.peek();
        if (t.type == detail::Token::Type::Ident && t.text == "not") {
          lx.take();
          cur->guard_not.push_back(detail::parse_atom(lx, pm));
        } else {
          cur->guard.push_back(detail::parse_atom(lx, pm));
        }
        if (!lx.accept(",")) break;
      }
      if (!lx.at_end()) lx.fail("expected ','");
    } else if (word == "emit") {
      detail::LogicLexer lx(rest, lineno);
      cur->outputs.push_back(parse_expr(lx, pm));
      if (!lx.at_end()) lx.fail("trailing input after expression");
    } else if (word == "fresh") {
      detail::LogicLexer lx(rest, lineno);
      while (!lx.at_end()) {
        detail::Token t = lx.take();
        if (t.type != detail::Token::Type::Var)
          throw SyntaxError("fresh takes variables", t.line, t.column);
        cur->fresh.push_back(t.text);
        lx.accept(",");
      }
    } else {
      throw SyntaxError("unknown directive '" + word + "'", lineno, 1);
    }
  }
  if (cur) throw SyntaxError("pattern " + cur->id + " is missing 'end'", cur_line, 1);
  return out;
}

std::string skolem_name(const std::string& pattern_id,
                        const std::vector<std::pair<std::string, std::string>>& substitution) {
  std::string key;
  for (const auto& [v, t] : substitution) key += v + "=" + t + "\x1f";
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a64(key)));
  return "sk:" + pattern_id + ":" + hex;
}

namespace {

using Subst = std::map<std::string, std::string>;

Atom substitute(const Atom& a, const Subst& s) {
  Atom out = a;
  for (auto& t : out.args) {
    auto it = s.find(t);
    if (it != s.end()) t = it->second;
  }
  return out;
}

OwlExpr substitute(const OwlExpr& e, const Subst& s, const std::string& pattern_id) {
  if (e.kind == Kind::Name) {
    if (!is_variable(e.name)) return e;
    auto it = s.find(e.name);
    if (it == s.end())
      throw Error(ErrorCode::UnboundPatternVariable,
                  "variable " + e.name + " is unbound in pattern " + pattern_id);
    return OwlExpr::leaf(it->second);
  }
  OwlExpr out;
  out.kind = e.kind;
  for (const auto& a : e.args) out.args.push_back(substitute(a, s, pattern_id));
  return out;
}

bool match(const Atom& pattern, const Atom& ground, Subst& s) {
  if (pattern.args.size() != ground.args.size()) return false;
  for (std::size_t i = 0; i < pattern.args.size(); ++i) {
    const std::string& t = pattern.args[i];
    if (is_variable(t)) {
      auto [it, fresh] = s.emplace(t, ground.args[i]);
      if (!fresh && it->second != ground.args[i]) return false;
    } else if (t != ground.args[i]) {
      return false;
    }
  }
  return true;
}

}  // namespace

std::vector<OwlAxiom> translate_to_owl(const std::set<Atom>& model,
                                       const std::vector<TranslationPattern>& patterns) {
  std::map<std::pair<std::string, bool>, std::vector<const Atom*>> index;
  for (const auto& a : model) index[{a.predicate, a.negated}].push_back(&a);

  std::vector<OwlAxiom> out;
  std::set<OwlAxiom> seen;
  for (const auto& p : patterns) {
    std::function<void(std::size_t, const Subst&)> step = [&](std::size_t i, const Subst& s) {
      if (i < p.guard.size()) {
        auto it = index.find({p.guard[i].predicate, p.guard[i].negated});
        if (it == index.end()) return;
        for (const Atom* g : it->second) {
          Subst next = s;
          if (match(p.guard[i], *g, next)) step(i + 1, next);
        }
        return;
      }
      for (const auto& n : p.guard_not) {
        Atom a = substitute(n, s);
        if (!a.is_ground())
          throw Error(ErrorCode::UnboundPatternVariable,
                      "negated guard " + a.to_string() + " is not ground in pattern " + p.id);
        if (model.count(a)) return;
      }
      Subst full = s;
      for (const auto& v : p.fresh) {
        std::vector<std::pair<std::string, std::string>> key(s.begin(), s.end());
        key.emplace_back("fresh", v);
        full[v] = skolem_name(p.id, key);
      }
      for (const auto& o : p.outputs) {
        OwlAxiom ax = substitute(o, full, p.id);
        if (seen.insert(ax).second) out.push_back(std::move(ax));
      }
    };
    step(0, {});
  }
  return out;
}

}  // namespace su
