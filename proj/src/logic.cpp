#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <set>

#include "logic_lexer.hpp"
#include "semunits/semantics.hpp"

namespace su {

namespace detail {

std::string format_term(const std::string& term, const PrefixMap* prefixes) {
  if (is_variable(term)) return term;
  if (term.rfind("sk:", 0) == 0) return term;
  if (is_absolute_iri(term)) {
    if (prefixes) {
      std::string c = prefixes->compact(term);
      if (c != term) return c;
    }
    return "<" + term + ">";
  }
  bool bare = !term.empty() && term.front() != '-';
  for (std::size_t i = 0; bare && i < term.size(); ++i) {
    char c = term[i];
    bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == ':' ||
              c == '-' || c == '/' || c == '#' ||
              (c == '.' && i + 1 < term.size() &&
               std::isalnum(static_cast<unsigned char>(term[i + 1])));
    if (!ok) bare = false;
  }
  if (term.find(":-") != std::string::npos || term == "not") bare = false;
  if (bare) return term;
  std::string out = "\"";
  for (char c : term) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + "\"";
}

// Blanks out `@prefix` lines so that line numbers stay intact.
std::string strip_prefix_lines(std::string_view text, PrefixMap& prefixes) {
  std::string out;
  std::size_t lineno = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto nl = text.find('\n', start);
    std::string_view line = text.substr(start, nl == std::string_view::npos ? text.size() - start : nl - start);
    ++lineno;
    auto first = line.find_first_not_of(" \t");
    if (first != std::string_view::npos && line.substr(first, 7) == "@prefix") {
      std::string_view rest = line.substr(first + 7);
      auto colon = rest.find(':');
      auto lt = rest.find('<');
      auto gt = rest.find('>');
      if (colon == std::string_view::npos || lt == std::string_view::npos ||
          gt == std::string_view::npos || colon > lt || gt < lt)
        throw SyntaxError("malformed @prefix directive", lineno, first + 1);
      std::string name(rest.substr(0, colon));
      name.erase(0, name.find_first_not_of(" \t"));
      std::string iri(rest.substr(lt + 1, gt - lt - 1));
      if (!is_absolute_iri(iri))
        throw Error(ErrorCode::InvalidIri, "not an absolute IRI: <" + iri + ">");
      prefixes.add(name, iri);
    } else {
      out += line;
    }
    if (nl == std::string_view::npos) break;
    out += '\n';
    start = nl + 1;
  }
  return out;
}

}  // namespace detail

bool is_variable(const std::string& term) { return term.size() > 1 && term.front() == '?'; }

bool Atom::is_ground() const {
  return std::none_of(args.begin(), args.end(), [](const auto& a) { return is_variable(a); });
}

std::string Atom::to_string(const PrefixMap* prefixes) const {
  std::string out = negated ? "-" : "";
  out += detail::format_term(predicate, prefixes);
  if (!args.empty()) {
    out += "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (i) out += ", ";
      out += detail::format_term(args[i], prefixes);
    }
    out += ")";
  }
  return out;
}

std::string Rule::to_string(const PrefixMap* prefixes) const {
  std::string out = head.to_string(prefixes);
  if (!is_fact()) {
    out += " :- ";
    bool first = true;
    for (const auto& a : positive) {
      if (!first) out += ", ";
      first = false;
      out += a.to_string(prefixes);
    }
    for (const auto& a : negative) {
      if (!first) out += ", ";
      first = false;
      out += "not " + a.to_string(prefixes);
    }
  }
  return out + ".";
}

std::string LogicProgram::to_string(const PrefixMap* prefixes) const {
  std::string out;
  for (const auto& r : rules) out += r.to_string(prefixes) + "\n";
  return out;
}

namespace {

void collect_vars(const Atom& a, std::set<std::string>& out) {
  for (const auto& t : a.args)
    if (is_variable(t)) out.insert(t);
}

void check_safety(const Rule& r, std::size_t line) {
  std::set<std::string> pos;
  for (const auto& a : r.positive) collect_vars(a, pos);
  std::set<std::string> need;
  collect_vars(r.head, need);
  for (const auto& a : r.negative) collect_vars(a, need);
  for (const auto& v : need) {
    if (!pos.count(v)) {
      std::string where = line ? " (line " + std::to_string(line) + ")" : "";
      throw Error(ErrorCode::UnsafeRule,
                  "variable " + v + " does not occur in a positive body atom of rule " +
                      r.to_string() + where);
    }
  }
}

}  // namespace

LogicProgram parse_program(std::string_view text, const PrefixMap* prefixes) {
  PrefixMap pm = prefixes ? *prefixes : PrefixMap{};
  std::string body = detail::strip_prefix_lines(text, pm);
  detail::LogicLexer lx(body);
  LogicProgram prog;
  while (!lx.at_end()) {
    std::size_t line = lx.peek().line;
    Rule r;
    r.head = detail::parse_atom(lx, pm);
    if (lx.accept(":-")) {
      for (;;) {
        const auto& t = lx.peek();
        if (t.type == detail::Token::Type::Ident && t.text == "not") {
          lx.take();
          r.negative.push_back(detail::parse_atom(lx, pm));
        } else {
          r.positive.push_back(detail::parse_atom(lx, pm));
        }
        if (lx.accept(",")) continue;
        break;
      }
    }
    lx.expect(".");
    check_safety(r, line);
    prog.rules.push_back(std::move(r));
  }
  return prog;
}

// ------------------------------------------------------------------ facts

std::vector<Atom> facts_from_units(const PartitionResult& p, const VocabularyCatalog& catalog,
                                   const CompoundResult* compounds) {
  std::set<Atom> out;
  const std::string& subj = catalog.get("hasSemanticUnitSubject");
  const std::string& stmt = catalog.get("statement");
  const std::string& lit = catalog.get("literal");
  for (const auto& u : p.units) {
    for (const auto& c : u.classes) out.insert(Atom{c, {u.upri}});
    out.insert(Atom{subj, {u.upri, u.subject}});
    for (const auto& q : u.data) {
      out.insert(Atom{q.predicate, {q.subject, q.object.value}});
      out.insert(Atom{stmt, {u.upri, q.subject, q.predicate, q.object.value}});
      if (q.object.is_literal()) out.insert(Atom{lit, {q.object.value}});
    }
  }
  if (compounds) {
    const std::string& assoc = catalog.get("hasAssociatedSemanticUnit");
    for (const CompoundUnit* c : compounds->all()) {
      out.insert(Atom{catalog.get(c->kind_class_key()), {c->upri}});
      if (c->subject) out.insert(Atom{subj, {c->upri, *c->subject}});
      for (const auto& a : c->associated) out.insert(Atom{assoc, {c->upri, a}});
    }
  }
  return {out.begin(), out.end()};
}

// -------------------------------------------------------------- grounding

namespace {

using Subst = std::map<std::string, std::string>;

Atom instantiate(const Atom& a, const Subst& s) {
  Atom out = a;
  for (auto& t : out.args) {
    if (!is_variable(t)) continue;
    auto it = s.find(t);
    if (it != s.end()) t = it->second;
  }
  return out;
}

Rule instantiate(const Rule& r, const Subst& s) {
  Rule out;
  out.head = instantiate(r.head, s);
  for (const auto& a : r.positive) out.positive.push_back(instantiate(a, s));
  for (const auto& a : r.negative) out.negative.push_back(instantiate(a, s));
  return out;
}

class AtomIndex {
 public:
  bool insert(const Atom& a) {
    if (!all_.insert(a).second) return false;
    by_pred_[{a.predicate, a.negated}].push_back(a);
    return true;
  }
  const std::vector<Atom>& candidates(const Atom& pattern) const {
    static const std::vector<Atom> none;
    auto it = by_pred_.find({pattern.predicate, pattern.negated});
    return it == by_pred_.end() ? none : it->second;
  }
  std::size_t size() const { return all_.size(); }

 private:
  std::set<Atom> all_;
  std::map<std::pair<std::string, bool>, std::vector<Atom>> by_pred_;
};

bool unify(const Atom& pattern, const Atom& ground, Subst& s) {
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

// Calls `f` for each substitution satisfying every positive atom in `body`.
// A snapshot is taken per atom so insertions during `f` stay safe.
void join(const std::vector<Atom>& body, std::size_t i, Subst& s, const AtomIndex& idx,
          const std::function<void(const Subst&)>& f) {
  if (i == body.size()) {
    f(s);
    return;
  }
  std::vector<Atom> cands = idx.candidates(body[i]);
  for (const auto& g : cands) {
    Subst next = s;
    if (unify(body[i], g, next)) join(body, i + 1, next, idx, f);
  }
}

}  // namespace

LogicProgram ground_program(const LogicProgram& program, const std::vector<Atom>& facts,
                            GroundingMode mode, std::size_t max_rules) {
  for (const auto& r : program.rules) check_safety(r, 0);
  for (const auto& f : facts)
    if (!f.is_ground()) throw Error(ErrorCode::UnsafeRule, "fact is not ground: " + f.to_string());

  std::set<Rule> out;
  auto emit = [&](Rule r) {
    out.insert(std::move(r));
    if (out.size() > max_rules)
      throw Error(ErrorCode::BoundExceeded,
                  "grounding exceeds " + std::to_string(max_rules) + " rules");
  };
  for (const auto& f : facts) emit(Rule{f, {}, {}});

  if (mode == GroundingMode::Full) {
    std::set<std::string> universe = program.universe;
    auto add_consts = [&](const Atom& a) {
      for (const auto& t : a.args)
        if (!is_variable(t)) universe.insert(t);
    };
    for (const auto& f : facts) add_consts(f);
    for (const auto& r : program.rules) {
      add_consts(r.head);
      for (const auto& a : r.positive) add_consts(a);
      for (const auto& a : r.negative) add_consts(a);
    }
    std::vector<std::string> consts(universe.begin(), universe.end());
    for (const auto& r : program.rules) {
      std::set<std::string> vs;
      collect_vars(r.head, vs);
      for (const auto& a : r.positive) collect_vars(a, vs);
      for (const auto& a : r.negative) collect_vars(a, vs);
      std::vector<std::string> vars(vs.begin(), vs.end());
      if (vars.empty()) {
        emit(r);
        continue;
      }
      if (consts.empty()) continue;
      // Reject before enumerating when |U|^k is already too large.
      double total = 1;
      for (std::size_t i = 0; i < vars.size(); ++i) total *= static_cast<double>(consts.size());
      if (total + static_cast<double>(out.size()) > static_cast<double>(max_rules))
        throw Error(ErrorCode::BoundExceeded,
                    "full grounding of " + r.to_string() + " needs more than " +
                        std::to_string(max_rules) + " rules");
      std::vector<std::size_t> digit(vars.size(), 0);
      for (;;) {
        Subst s;
        for (std::size_t i = 0; i < vars.size(); ++i) s[vars[i]] = consts[digit[i]];
        emit(instantiate(r, s));
        std::size_t k = 0;
        while (k < digit.size() && ++digit[k] == consts.size()) digit[k++] = 0;
        if (k == digit.size()) break;
      }
    }
  } else {
    AtomIndex derivable;
    for (const auto& f : facts) derivable.insert(f);
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& r : program.rules) {
        Subst s;
        join(r.positive, 0, s, derivable, [&](const Subst& m) {
          if (derivable.insert(instantiate(r.head, m))) changed = true;
        });
      }
    }
    for (const auto& r : program.rules) {
      Subst s;
      join(r.positive, 0, s, derivable, [&](const Subst& m) { emit(instantiate(r, m)); });
    }
  }

  LogicProgram g;
  g.rules.assign(out.begin(), out.end());
  g.universe = program.universe;
  return g;
}

// ---------------------------------------------------------- stable models

std::vector<std::set<Atom>> stable_models(const LogicProgram& ground, std::size_t bound) {
  std::map<Atom, int> ids;
  std::vector<Atom> atoms;
  auto id_of = [&](const Atom& a) {
    if (!a.is_ground()) throw Error(ErrorCode::UnsafeRule, "rule is not ground: " + a.to_string());
    auto [it, fresh] = ids.emplace(a, static_cast<int>(atoms.size()));
    if (fresh) atoms.push_back(a);
    return it->second;
  };
  struct R {
    int head;
    std::vector<int> pos, neg;
  };
  std::vector<R> rules;
  std::set<int> heads;
  for (const auto& r : ground.rules) {
    R x{id_of(r.head), {}, {}};
    for (const auto& a : r.positive) x.pos.push_back(id_of(a));
    for (const auto& a : r.negative) x.neg.push_back(id_of(a));
    heads.insert(x.head);
    rules.push_back(std::move(x));
  }
  // `not a` for an atom that heads no rule is always true.
  std::vector<int> branching;
  {
    std::set<int> naf;
    for (auto& r : rules) {
      std::vector<int> kept;
      for (int a : r.neg)
        if (heads.count(a)) kept.push_back(a);
      r.neg = std::move(kept);
      naf.insert(r.neg.begin(), r.neg.end());
    }
    branching.assign(naf.begin(), naf.end());
  }
  if (branching.size() > bound)
    throw Error(ErrorCode::BoundExceeded,
                std::to_string(branching.size()) + " default-negated atoms exceed the bound of " +
                    std::to_string(bound));

  const std::size_t n = atoms.size();
  std::vector<std::vector<int>> watch(n);
  for (std::size_t ri = 0; ri < rules.size(); ++ri)
    for (int a : rules[ri].pos) watch[a].push_back(static_cast<int>(ri));
  std::vector<int> complement(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    Atom c = atoms[i];
    c.negated = !c.negated;
    auto it = ids.find(c);
    if (it != ids.end()) complement[i] = it->second;
  }

  std::set<std::set<Atom>> models;
  std::vector<char> guess(n, 0), in_model(n, 0);
  std::vector<int> missing(rules.size());
  const std::uint64_t total = std::uint64_t{1} << branching.size();
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    std::fill(guess.begin(), guess.end(), 0);
    for (std::size_t b = 0; b < branching.size(); ++b)
      if (mask >> b & 1) guess[branching[b]] = 1;
    std::fill(in_model.begin(), in_model.end(), 0);
    std::vector<int> queue;
    for (std::size_t ri = 0; ri < rules.size(); ++ri) {
      const R& r = rules[ri];
      bool blocked = std::any_of(r.neg.begin(), r.neg.end(), [&](int a) { return guess[a]; });
      missing[ri] = blocked ? -1 : static_cast<int>(r.pos.size());
      if (missing[ri] == 0 && !in_model[r.head]) {
        in_model[r.head] = 1;
        queue.push_back(r.head);
      }
    }
    while (!queue.empty()) {
      int a = queue.back();
      queue.pop_back();
      for (int ri : watch[a]) {
        if (missing[ri] <= 0) continue;
        if (--missing[ri] == 0 && !in_model[rules[ri].head]) {
          in_model[rules[ri].head] = 1;
          queue.push_back(rules[ri].head);
        }
      }
    }
    bool stable = std::all_of(branching.begin(), branching.end(),
                              [&](int a) { return bool(in_model[a]) == bool(guess[a]); });
    if (!stable) continue;
    bool consistent = true;
    for (std::size_t i = 0; i < n && consistent; ++i)
      if (in_model[i] && complement[i] >= 0 && in_model[complement[i]]) consistent = false;
    if (!consistent) continue;
    std::set<Atom> m;
    for (std::size_t i = 0; i < n; ++i)
      if (in_model[i]) m.insert(atoms[i]);
    models.insert(std::move(m));
  }
  return {models.begin(), models.end()};
}

// -------------------------------------------------------------- conflicts

ConflictReport check_conflicts(const std::set<Atom>& atoms, const VocabularyCatalog& catalog) {
  ConflictReport out;
  for (const auto& a : atoms) {
    if (!a.negated) continue;
    Atom pos = a;
    pos.negated = false;
    if (atoms.count(pos)) out.classical.emplace_back(pos, a);
  }
  const std::string& disagreement = catalog.get("DisagreementUnit");
  const std::string& stmt = catalog.get("statement");
  const std::string& type = catalog.type();
  const std::string& negation = catalog.get("NegationUnit");
  for (const auto& a : atoms) {
    if (a.negated || a.predicate != stmt || a.args.size() != 4) continue;
    if (a.args[2] != type || a.args[3] != negation) continue;
    if (!atoms.count(Atom{disagreement, {a.args[0]}})) continue;
    out.disputes.push_back({a.args[0], a.args[1]});
  }
  return out;
}

}  // namespace su
