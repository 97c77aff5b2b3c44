#include "semunits/units.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <tuple>

namespace su {

const char* to_string(Relation r) {
  return r == Relation::Qualitative ? "qualitative" : "quantitative";
}

const char* to_string(SubjectCategory c) {
  switch (c) {
    case SubjectCategory::Assertional: return "assertional";
    case SubjectCategory::Contingent: return "contingent";
    case SubjectCategory::Universal: return "universal";
  }
  return "?";
}

bool StatementSchema::is_adjunct_template(std::size_t i) const {
  const auto& t = templates[i];
  auto adj = [&](const Slot& s) {
    return s.is_var && std::find(adjuncts.begin(), adjuncts.end(), s.var) != adjuncts.end();
  };
  return adj(t.subject) || adj(t.object);
}

std::string StatementUnit::class_key() const {
  if (!schema_class.empty()) return schema_class;
  if (!fallback_predicate.empty()) return "untyped:" + fallback_predicate;
  switch (identification) {
    case IdentificationKind::NamedIndividual: return "identification:named-individual";
    case IdentificationKind::SomeInstance: return "identification:some-instance";
    case IdentificationKind::EveryInstance: return "identification:every-instance";
    case IdentificationKind::None: break;
  }
  std::string key;
  for (const auto& c : classes) key += (key.empty() ? "" : "|") + c;
  return key;
}

const StatementUnit* PartitionResult::find(const std::string& upri) const {
  for (const auto& u : units)
    if (u.upri == upri) return &u;
  return nullptr;
}

QuadDataset PartitionResult::to_dataset() const {
  QuadDataset out = semantic_layer;
  for (const auto& u : units) out.merge(u.data);
  return out;
}

// ---------------------------------------------------------------- schemas

namespace {

struct Token {
  enum class Kind { Iri, String, Var, Word };
  Kind kind;
  std::string text;
  std::size_t column;
};

std::vector<Token> tokenize_line(const std::string& line, std::size_t line_no) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '#') break;
    std::size_t col = i + 1;
    if (c == '<') {
      auto end = line.find('>', i);
      if (end == std::string::npos) throw SyntaxError("unterminated IRI", line_no, col);
      out.push_back({Token::Kind::Iri, line.substr(i + 1, end - i - 1), col});
      i = end + 1;
    } else if (c == '"') {
      std::string v;
      ++i;
      bool closed = false;
      while (i < line.size()) {
        char d = line[i++];
        if (d == '\\' && i < line.size()) {
          char e = line[i++];
          v += e == 'n' ? '\n' : e == 't' ? '\t' : e;
        } else if (d == '"') {
          closed = true;
          break;
        } else {
          v += d;
        }
      }
      if (!closed) throw SyntaxError("unterminated string", line_no, col);
      out.push_back({Token::Kind::String, v, col});
    } else if (c == '?') {
      std::size_t j = i + 1;
      while (j < line.size() &&
             (std::isalnum(static_cast<unsigned char>(line[j])) || line[j] == '_'))
        ++j;
      if (j == i + 1) throw SyntaxError("empty variable name", line_no, col);
      out.push_back({Token::Kind::Var, line.substr(i + 1, j - i - 1), col});
      i = j;
    } else {
      std::size_t j = i;
      while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
      out.push_back({Token::Kind::Word, line.substr(i, j - i), col});
      i = j;
    }
  }
  return out;
}

std::string resolve_iri(const Token& t, const PrefixMap* prefixes, std::size_t line_no) {
  if (t.kind == Token::Kind::Iri) {
    if (!is_absolute_iri(t.text)) throw SyntaxError("not an absolute IRI", line_no, t.column);
    return t.text;
  }
  if (t.kind == Token::Kind::Word && prefixes && t.text.find(':') != std::string::npos) {
    auto iri = prefixes->expand(t.text);
    if (!iri.empty()) return iri;
  }
  throw SyntaxError("expected an IRI, got '" + t.text + "'", line_no, t.column);
}

Slot make_slot(const Token& t, const PrefixMap* prefixes, std::size_t line_no, bool allow_literal) {
  Slot s;
  if (t.kind == Token::Kind::Var) {
    s.is_var = true;
    s.var = t.text;
  } else if (t.kind == Token::Kind::String) {
    if (!allow_literal) throw SyntaxError("literal not allowed here", line_no, t.column);
    s.constant = Term::literal(t.text);
  } else {
    s.constant = Term::iri(resolve_iri(t, prefixes, line_no));
  }
  return s;
}

void validate_schema(StatementSchema& s, std::size_t line_no) {
  auto fail = [&](const std::string& m) {
    throw Error(ErrorCode::Schema,
                "schema " + s.unit_class + " (ending line " + std::to_string(line_no) + "): " + m);
  };
  if (s.templates.empty()) fail("no templates");
  bool found = false;
  for (std::size_t i = 0; i < s.templates.size(); ++i) {
    if (s.templates[i].predicate == s.anchor_predicate) {
      s.anchor_index = i;
      found = true;
      break;
    }
  }
  if (!found) fail("no template uses the anchor predicate");
  const auto& anchor = s.templates[s.anchor_index];
  if (s.subject_var.empty()) {
    if (!anchor.subject.is_var) fail("anchor template needs a subject variable");
    s.subject_var = anchor.subject.var;
  }
  std::set<std::string> vars;
  std::set<std::string> literal_slots;
  for (const auto& t : s.templates) {
    if (t.subject.is_var) vars.insert(t.subject.var);
    if (t.object.is_var) vars.insert(t.object.var);
  }
  if (!vars.count(s.subject_var)) fail("subject variable ?" + s.subject_var + " occurs in no template");
  for (const auto& a : s.args)
    if (!vars.count(a)) fail("argument ?" + a + " occurs in no template");
  for (const auto& a : s.adjuncts) {
    if (!vars.count(a)) fail("adjunct ?" + a + " occurs in no template");
    if (std::find(s.args.begin(), s.args.end(), a) != s.args.end())
      fail("?" + a + " is both argument and adjunct");
  }
  if (s.is_adjunct_template(s.anchor_index)) fail("anchor template cannot hold an adjunct");
  for (const auto& n : s.numeric_args)
    if (std::find(s.args.begin(), s.args.end(), n) == s.args.end())
      fail("numeric slot ?" + n + " is not an argument");
  if (s.relation == Relation::Quantitative && s.numeric_args.empty())
    fail("quantitative schema declares no numeric argument");
  if (s.relation == Relation::Qualitative && !s.numeric_args.empty())
    fail("qualitative schema binds a numeric argument");
}

}  // namespace

std::vector<StatementSchema> compile_schema(std::string_view text, const PrefixMap* prefixes) {
  std::vector<StatementSchema> out;
  std::optional<StatementSchema> cur;
  std::size_t cur_end = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  auto finish = [&]() {
    if (cur) {
      validate_schema(*cur, cur_end);
      out.push_back(std::move(*cur));
      cur.reset();
    }
  };
  while (std::getline(in, line)) {
    ++line_no;
    auto toks = tokenize_line(line, line_no);
    if (toks.empty()) continue;
    const auto& kw = toks[0];
    if (kw.kind != Token::Kind::Word) throw SyntaxError("expected a directive", line_no, kw.column);
    auto need = [&](std::size_t n) {
      if (toks.size() != n)
        throw SyntaxError("directive '" + kw.text + "' takes " + std::to_string(n - 1) +
                              " operand(s)",
                          line_no, kw.column);
    };
    if (kw.text == "unit") {
      finish();
      need(4);
      if (toks[2].kind != Token::Kind::Word || toks[2].text != "anchor")
        throw SyntaxError("expected 'anchor'", line_no, toks[2].column);
      cur.emplace();
      cur->unit_class = resolve_iri(toks[1], prefixes, line_no);
      cur->anchor_predicate = resolve_iri(toks[3], prefixes, line_no);
      cur_end = line_no;
      continue;
    }
    if (!cur) throw SyntaxError("directive outside a 'unit' block", line_no, kw.column);
    cur_end = line_no;
    if (kw.text == "template") {
      need(4);
      TripleTemplate t;
      t.subject = make_slot(toks[1], prefixes, line_no, false);
      t.predicate = resolve_iri(toks[2], prefixes, line_no);
      t.object = make_slot(toks[3], prefixes, line_no, true);
      cur->templates.push_back(std::move(t));
    } else if (kw.text == "subject") {
      need(2);
      if (toks[1].kind != Token::Kind::Var)
        throw SyntaxError("expected a variable", line_no, toks[1].column);
      cur->subject_var = toks[1].text;
    } else if (kw.text == "arg") {
      if (toks.size() < 2 || toks.size() > 3 || toks[1].kind != Token::Kind::Var)
        throw SyntaxError("usage: arg ?var [numeric]", line_no, kw.column);
      cur->args.push_back(toks[1].text);
      if (toks.size() == 3) {
        if (toks[2].text != "numeric")
          throw SyntaxError("expected 'numeric'", line_no, toks[2].column);
        cur->numeric_args.insert(toks[1].text);
      }
    } else if (kw.text == "adjunct") {
      need(2);
      if (toks[1].kind != Token::Kind::Var)
        throw SyntaxError("expected a variable", line_no, toks[1].column);
      cur->adjuncts.push_back(toks[1].text);
    } else if (kw.text == "relation") {
      need(2);
      if (toks[1].text == "qualitative")
        cur->relation = Relation::Qualitative;
      else if (toks[1].text == "quantitative")
        cur->relation = Relation::Quantitative;
      else
        throw SyntaxError("relation must be qualitative or quantitative", line_no, toks[1].column);
    } else if (kw.text == "label") {
      need(2);
      if (toks[1].kind != Token::Kind::String)
        throw SyntaxError("label takes a quoted string", line_no, toks[1].column);
      cur->label_template = toks[1].text;
    } else {
      throw SyntaxError("unknown directive '" + kw.text + "'", line_no, kw.column);
    }
  }
  finish();
  return out;
}

// ---------------------------------------------------------------- partition

namespace {

using Binding = std::map<std::string, Term>;

class QuadIndex {
 public:
  void add(const Quad& q) {
    by_pred_[q.predicate].push_back(q);
    by_pred_subj_[{q.predicate, q.subject}].push_back(q);
  }
  const std::vector<Quad>& with_predicate(const std::string& p) const {
    auto it = by_pred_.find(p);
    return it == by_pred_.end() ? empty_ : it->second;
  }
  const std::vector<Quad>& with(const std::string& p, const std::string& s) const {
    auto it = by_pred_subj_.find({p, s});
    return it == by_pred_subj_.end() ? empty_ : it->second;
  }

 private:
  std::map<std::string, std::vector<Quad>> by_pred_;
  std::map<std::pair<std::string, std::string>, std::vector<Quad>> by_pred_subj_;
  std::vector<Quad> empty_;
};

bool unify_slot(const Slot& slot, const Term& value, Binding& b) {
  if (!slot.is_var) return slot.constant == value;
  auto it = b.find(slot.var);
  if (it != b.end()) return it->second == value;
  b.emplace(slot.var, value);
  return true;
}

bool unify(const TripleTemplate& t, const Quad& q, Binding& b) {
  if (t.predicate != q.predicate) return false;
  Binding trial = b;
  if (!unify_slot(t.subject, Term::iri(q.subject), trial)) return false;
  if (!unify_slot(t.object, q.object, trial)) return false;
  b = std::move(trial);
  return true;
}

std::optional<std::string> bound_subject(const TripleTemplate& t, const Binding& b) {
  if (!t.subject.is_var) return t.subject.constant.value;
  auto it = b.find(t.subject.var);
  if (it != b.end() && it->second.is_iri()) return it->second.value;
  return std::nullopt;
}

// Depth-first search over required templates; candidates are tried in quad
// order so the first complete binding is deterministic.
bool match_required(const StatementSchema& s, const std::vector<std::size_t>& order,
                    std::size_t k, const QuadIndex& idx, const std::set<Quad>& taken, Binding& b,
                    std::vector<Quad>& used) {
  if (k == order.size()) return true;
  const auto& t = s.templates[order[k]];
  auto subj = bound_subject(t, b);
  const auto& pool = subj ? idx.with(t.predicate, *subj) : idx.with_predicate(t.predicate);
  for (const auto& q : pool) {
    if (taken.count(q) || std::find(used.begin(), used.end(), q) != used.end()) continue;
    Binding trial = b;
    if (!unify(t, q, trial)) continue;
    used.push_back(q);
    if (match_required(s, order, k + 1, idx, taken, trial, used)) {
      b = std::move(trial);
      return true;
    }
    used.pop_back();
  }
  return false;
}

struct Candidate {
  std::size_t schema = 0;
  Quad anchor;
  std::vector<Quad> required;  // includes the anchor
  std::vector<Quad> adjunct_quads;
  std::size_t templates_matched = 0;
  std::size_t unbound_adjuncts = 0;
  Binding binding;
};

struct Rank {
  std::size_t templates_matched;
  std::size_t unbound_adjuncts;
  std::string unit_class;
  bool better_than(const Rank& o) const {
    if (templates_matched != o.templates_matched) return templates_matched > o.templates_matched;
    if (unbound_adjuncts != o.unbound_adjuncts) return unbound_adjuncts < o.unbound_adjuncts;
    return unit_class < o.unit_class;
  }
  bool operator==(const Rank& o) const {
    return templates_matched == o.templates_matched && unbound_adjuncts == o.unbound_adjuncts &&
           unit_class == o.unit_class;
  }
};

std::vector<Candidate> schema_candidates(const std::vector<StatementSchema>& schemas,
                                         const QuadIndex& idx, const std::set<Quad>& taken) {
  std::vector<Candidate> out;
  for (std::size_t si = 0; si < schemas.size(); ++si) {
    const auto& s = schemas[si];
    std::vector<std::size_t> required, adjunct;
    for (std::size_t i = 0; i < s.templates.size(); ++i) {
      if (i == s.anchor_index) continue;
      (s.is_adjunct_template(i) ? adjunct : required).push_back(i);
    }
    const auto& anchor_t = s.templates[s.anchor_index];
    for (const auto& q : idx.with_predicate(s.anchor_predicate)) {
      if (taken.count(q)) continue;
      Binding b;
      if (!unify(anchor_t, q, b)) continue;
      std::vector<Quad> used{q};
      if (!match_required(s, required, 0, idx, taken, b, used)) continue;
      Candidate c;
      c.schema = si;
      c.anchor = q;
      c.required = used;
      c.templates_matched = 1 + required.size();
      for (auto ti : adjunct) {
        const auto& t = s.templates[ti];
        auto subj = bound_subject(t, b);
        const auto& pool = subj ? idx.with(t.predicate, *subj) : idx.with_predicate(t.predicate);
        bool hit = false;
        for (const auto& aq : pool) {
          if (taken.count(aq) || std::find(used.begin(), used.end(), aq) != used.end()) continue;
          Binding trial = b;
          if (!unify(t, aq, trial)) continue;
          b = std::move(trial);
          c.adjunct_quads.push_back(aq);
          used.push_back(aq);
          hit = true;
          break;
        }
        if (hit) ++c.templates_matched;
      }
      for (const auto& a : s.adjuncts)
        if (!b.count(a)) ++c.unbound_adjuncts;
      // A numeric slot must actually hold a number.
      bool numeric_ok = true;
      for (const auto& n : s.numeric_args) {
        auto it = b.find(n);
        if (it == b.end() || !it->second.is_numeric()) numeric_ok = false;
      }
      if (s.relation == Relation::Qualitative) {
        for (const auto& a : s.args) {
          auto it = b.find(a);
          if (it != b.end() && it->second.is_literal() && it->second.is_numeric())
            numeric_ok = false;
        }
      }
      if (!numeric_ok) continue;
      c.binding = std::move(b);
      out.push_back(std::move(c));
    }
  }
  return out;
}

std::string default_label(const StatementSchema& s) {
  std::string out = "{" + s.subject_var + "} " + local_name(s.anchor_predicate);
  for (const auto& a : s.args)
    if (a != s.subject_var) out += " {" + a + "}";
  return out;
}

void fill_schema_unit(StatementUnit& u, const StatementSchema& s, const Binding& b) {
  u.schema_class = s.unit_class;
  u.classes.insert(s.unit_class);
  u.relation = s.relation;
  u.binding = b;
  u.label_template = s.label_template.empty() ? default_label(s) : s.label_template;
  auto sit = b.find(s.subject_var);
  if (sit != b.end()) u.subject = sit->second.value;
  for (const auto& a : s.args) {
    if (a == s.subject_var) continue;
    auto it = b.find(a);
    if (it != b.end()) u.objects.push_back({it->second, UnitObject::Role::Argument, a});
  }
  for (const auto& a : s.adjuncts) {
    auto it = b.find(a);
    if (it != b.end()) {
      u.objects.push_back({it->second, UnitObject::Role::Adjunct, a});
      u.adjuncts_present = true;
    }
  }
}

const char* ident_label(IdentificationKind k) {
  switch (k) {
    case IdentificationKind::NamedIndividual: return "{s} is an instance of {class}";
    case IdentificationKind::SomeInstance: return "{s} is some instance of {class}";
    case IdentificationKind::EveryInstance: return "{s} is every instance of {class}";
    case IdentificationKind::None: break;
  }
  return "{s}";
}

const char* ident_class_key(IdentificationKind k) {
  switch (k) {
    case IdentificationKind::NamedIndividual: return "NamedIndividualIdentificationUnit";
    case IdentificationKind::SomeInstance: return "SomeInstanceIdentificationUnit";
    case IdentificationKind::EveryInstance: return "EveryInstanceIdentificationUnit";
    case IdentificationKind::None: break;
  }
  return "";
}

void add_marker_classes(StatementUnit& u, const VocabularyCatalog& catalog) {
  const auto& is_about = catalog.get("isAbout");
  const auto& card = catalog.get("qualifiedCardinality");
  for (const auto& q : u.data) {
    if (q.predicate == is_about && q.subject == u.subject)
      u.classes.insert(catalog.get("IsAboutStatementUnit"));
    if (q.predicate == card && u.identification == IdentificationKind::SomeInstance)
      u.classes.insert(catalog.get("CardinalityRestrictionUnit"));
  }
}

}  // namespace

PartitionResult partition(const QuadDataset& ds, const std::vector<StatementSchema>& schemas,
                          const VocabularyCatalog& catalog, UpriMinter& minter) {
  PartitionResult res;
  LayerIndex layers(ds, catalog);
  const auto& type = catalog.type();
  const auto& label = catalog.label();
  const auto& some = catalog.get("someInstanceOf");
  const auto& every = catalog.get("everyInstanceOf");
  const auto& card = catalog.get("qualifiedCardinality");
  const auto& subj_p = catalog.get("hasSemanticUnitSubject");

  std::map<std::string, std::vector<Quad>> existing;  // unit graph -> quads
  std::set<Quad> free;
  for (const auto& q : ds) {
    if (layers.layer(q) == Layer::SemanticUnits) {
      res.semantic_layer.add(q);
    } else if (layers.is_unit_graph(q.graph)) {
      existing[q.graph].push_back(q);
    } else {
      free.insert(q);
    }
  }

  // Units already present in the input.
  std::map<std::string, std::set<std::string>> declared_classes;
  for (const auto& q : res.semantic_layer)
    if (q.predicate == type && q.object.is_iri()) declared_classes[q.subject].insert(q.object.value);
  std::map<std::string, const StatementSchema*> schema_by_class;
  for (const auto& s : schemas) schema_by_class.emplace(s.unit_class, &s);

  for (auto& [g, quads] : existing) {
    StatementUnit u;
    u.upri = g;
    u.origin = UnitOrigin::Existing;
    u.subject = layers.unit_subjects().at(g);
    u.classes = declared_classes[g];
    for (const auto& q : quads) {
      u.data.add(q);
      res.triple_map[q] = g;
    }
    for (auto k : {IdentificationKind::NamedIndividual, IdentificationKind::SomeInstance,
                   IdentificationKind::EveryInstance}) {
      if (u.classes.count(catalog.get(ident_class_key(k)))) u.identification = k;
    }
    const StatementSchema* schema = nullptr;
    for (const auto& c : u.classes) {
      auto it = schema_by_class.find(c);
      if (it != schema_by_class.end()) {
        schema = it->second;
        break;
      }
    }
    bool bound = false;
    if (schema) {
      QuadIndex idx;
      for (const auto& q : quads) idx.add(q);
      auto cands = schema_candidates({*schema}, idx, {});
      for (const auto& c : cands) {
        if (c.required.size() + c.adjunct_quads.size() == quads.size()) {
          fill_schema_unit(u, *schema, c.binding);
          bound = true;
          break;
        }
      }
      if (!bound) {
        u.schema_class = schema->unit_class;
        u.relation = schema->relation;
        u.label_template = schema->label_template.empty() ? default_label(*schema)
                                                         : schema->label_template;
      }
    }
    if (!bound) {
      u.binding["s"] = Term::iri(u.subject);
      std::size_t n = 0;
      for (const auto& q : quads) {
        if (q.subject != u.subject) continue;
        if (u.is_identification() && (q.predicate == type || q.predicate == some ||
                                      q.predicate == every)) {
          u.binding["class"] = q.object;
          u.objects.push_back({q.object, UnitObject::Role::Argument, "class"});
          continue;
        }
        std::string var = "o" + std::to_string(n++);
        u.binding[var] = q.object;
        u.objects.push_back({q.object, UnitObject::Role::Argument, var});
        if (q.object.is_numeric() && !schema) u.relation = Relation::Quantitative;
      }
      if (u.is_identification()) {
        u.label_template = ident_label(u.identification);
      } else if (u.classes.count(catalog.get("UntypedStatementUnit")) && !quads.empty()) {
        u.fallback_predicate = quads.front().predicate;
        u.binding["p"] = Term::iri(u.fallback_predicate);
        if (!u.objects.empty()) u.binding["o"] = u.objects.front().term;
        if (u.label_template.empty()) u.label_template = "{s} {p} {o}";
      } else if (u.label_template.empty()) {
        u.label_template = "{s}";
        for (std::size_t i = 0; i < n; ++i) u.label_template += " {o" + std::to_string(i) + "}";
      }
    }
    res.units.push_back(std::move(u));
  }

  // Identification units, one per (resource, kind).
  std::map<std::pair<std::string, IdentificationKind>, std::vector<Quad>> idents;
  for (const auto& q : free) {
    IdentificationKind k = IdentificationKind::None;
    if (q.predicate == type) k = IdentificationKind::NamedIndividual;
    if (q.predicate == some) k = IdentificationKind::SomeInstance;
    if (q.predicate == every) k = IdentificationKind::EveryInstance;
    if (k == IdentificationKind::None || !q.object.is_iri()) continue;
    idents[{q.subject, k}].push_back(q);
  }
  std::set<Quad> taken;
  for (auto& [key, quads] : idents)
    for (const auto& q : quads) taken.insert(q);
  std::set<std::string> labelled;
  std::vector<StatementUnit> fresh;
  for (auto& [key, quads] : idents) {
    const auto& [resource, kind] = key;
    StatementUnit u;
    u.origin = UnitOrigin::Identification;
    u.identification = kind;
    u.subject = resource;
    u.classes.insert(catalog.get(ident_class_key(kind)));
    u.label_template = ident_label(kind);
    u.binding["s"] = Term::iri(resource);
    std::vector<Quad> members = quads;
    if (labelled.insert(resource).second) {
      for (const auto& q : free)
        if (q.subject == resource && q.predicate == label && !taken.count(q)) members.push_back(q);
    }
    if (kind == IdentificationKind::SomeInstance) {
      for (const auto& q : free)
        if (q.subject == resource && q.predicate == card && !taken.count(q)) members.push_back(q);
    }
    for (const auto& q : members) {
      taken.insert(q);
      if (q.predicate == label) {
        u.objects.push_back({q.object, UnitObject::Role::Adjunct, "label"});
      } else if (q.predicate == card) {
        u.objects.push_back({q.object, UnitObject::Role::Adjunct, "cardinality"});
        u.binding["cardinality"] = q.object;
      } else {
        u.objects.push_back({q.object, UnitObject::Role::Argument, "class"});
        u.binding.emplace("class", q.object);
      }
      u.data.add(q);  // re-homed below
    }
    fresh.push_back(std::move(u));
  }

  // Schema matches.
  QuadIndex idx;
  for (const auto& q : free)
    if (!taken.count(q)) idx.add(q);
  auto cands = schema_candidates(schemas, idx, taken);
  auto rank_of = [&](const Candidate& c) {
    return Rank{c.templates_matched, c.unbound_adjuncts, schemas[c.schema].unit_class};
  };
  std::stable_sort(cands.begin(), cands.end(), [&](const Candidate& a, const Candidate& b) {
    Rank ra = rank_of(a), rb = rank_of(b);
    if (ra.better_than(rb)) return true;
    if (rb.better_than(ra)) return false;
    return a.anchor < b.anchor;
  });
  std::map<Quad, std::size_t> claimed;  // quad -> accepted candidate index
  std::vector<std::size_t> accepted;
  for (std::size_t ci = 0; ci < cands.size(); ++ci) {
    auto& c = cands[ci];
    bool blocked = false;
    std::vector<Quad> lost_adjuncts;
    auto check = [&](const Quad& q, bool required) {
      auto it = claimed.find(q);
      if (it == claimed.end()) return;
      const auto& other = cands[it->second];
      if (rank_of(other) == rank_of(c)) {
        throw Error(ErrorCode::OverlapConflict,
                    "two " + schemas[c.schema].unit_class + " matches claim the triple <" +
                        q.subject + "> <" + q.predicate + "> " + term_to_nquads(q.object));
      }
      if (required)
        blocked = true;
      else
        lost_adjuncts.push_back(q);
    };
    for (const auto& q : c.required) check(q, true);
    for (const auto& q : c.adjunct_quads) check(q, false);
    if (blocked) continue;
    if (!lost_adjuncts.empty()) {
      // Re-bind without the adjuncts that a better match already owns.
      const auto& s = schemas[c.schema];
      std::vector<Quad> keep;
      for (const auto& q : c.adjunct_quads)
        if (std::find(lost_adjuncts.begin(), lost_adjuncts.end(), q) == lost_adjuncts.end())
          keep.push_back(q);
      c.adjunct_quads = keep;
      Binding b;
      for (const auto& q : c.required) {
        for (std::size_t ti = 0; ti < s.templates.size(); ++ti) {
          if (s.is_adjunct_template(ti)) continue;
          Binding trial = b;
          if (unify(s.templates[ti], q, trial)) {
            b = trial;
            break;
          }
        }
      }
      for (const auto& q : keep) {
        for (std::size_t ti = 0; ti < s.templates.size(); ++ti) {
          if (!s.is_adjunct_template(ti)) continue;
          Binding trial = b;
          if (unify(s.templates[ti], q, trial)) {
            b = trial;
            break;
          }
        }
      }
      c.binding = b;
    }
    for (const auto& q : c.required) claimed[q] = ci;
    for (const auto& q : c.adjunct_quads) claimed[q] = ci;
    accepted.push_back(ci);
  }
  std::sort(accepted.begin(), accepted.end(),
            [&](std::size_t a, std::size_t b) { return cands[a].anchor < cands[b].anchor; });
  for (auto ci : accepted) {
    const auto& c = cands[ci];
    StatementUnit u;
    u.origin = UnitOrigin::Schema;
    fill_schema_unit(u, schemas[c.schema], c.binding);
    for (const auto& q : c.required) u.data.add(q);
    for (const auto& q : c.adjunct_quads) u.data.add(q);
    for (const auto& q : u.data) taken.insert(q);
    fresh.push_back(std::move(u));
  }

  // Everything left becomes a single-triple fallback unit.
  for (const auto& q : free) {
    if (taken.count(q)) continue;
    StatementUnit u;
    u.origin = UnitOrigin::Fallback;
    u.subject = q.subject;
    u.fallback_predicate = q.predicate;
    u.classes.insert(catalog.get("UntypedStatementUnit"));
    u.relation = q.object.is_numeric() ? Relation::Quantitative : Relation::Qualitative;
    u.objects.push_back({q.object, UnitObject::Role::Argument, "o"});
    u.binding = {{"s", Term::iri(q.subject)}, {"p", Term::iri(q.predicate)}, {"o", q.object}};
    u.label_template = "{s} {p} {o}";
    u.data.add(q);
    fresh.push_back(std::move(u));
  }

  // Mint, re-home and describe the new units.
  for (auto& u : fresh) {
    u.upri = minter.mint();
    QuadDataset homed;
    for (const auto& q : u.data) {
      homed.add(q.subject, q.predicate, q.object, u.upri);
      res.triple_map[q] = u.upri;
    }
    u.data = std::move(homed);
    add_marker_classes(u, catalog);
    if (u.origin == UnitOrigin::Fallback) res.fallback_units.push_back(u.upri);
    res.units.push_back(std::move(u));
  }
  for (auto& u : res.units) {
    if (u.origin == UnitOrigin::Existing) continue;
    res.semantic_layer.add(u.upri, subj_p, Term::iri(u.subject), meta_graph(u.upri));
  }

  // Subject category needs the whole organized dataset.
  KindIndex kinds(res.to_dataset(), catalog);
  const std::string cat_classes[] = {catalog.get("AssertionalStatementUnit"),
                                     catalog.get("ContingentStatementUnit"),
                                     catalog.get("UniversalStatementUnit")};
  for (auto& u : res.units) {
    bool has_category = false;
    for (const auto& c : cat_classes) has_category = has_category || u.classes.count(c);
    if (!has_category) {
      try {
        switch (kinds.kind(u.subject)) {
          case ResourceKind::NamedIndividual:
          case ResourceKind::SemanticUnitResource:
            u.classes.insert(cat_classes[0]);
            break;
          case ResourceKind::SomeInstance: u.classes.insert(cat_classes[1]); break;
          case ResourceKind::EveryInstance: u.classes.insert(cat_classes[2]); break;
          default:
            res.warnings.push_back("no subject category for unit " + u.upri);
        }
      } catch (const Error& e) {
        res.warnings.push_back("no subject category for unit " + u.upri + ": " + e.what());
      }
    }
    for (const auto& c : u.classes)
      res.semantic_layer.add(u.upri, type, Term::iri(c), meta_graph(u.upri));
  }
  return res;
}

// ---------------------------------------------------------------- classify

Classification classify_unit(const StatementUnit& unit, const QuadDataset& ds,
                             const VocabularyCatalog& catalog) {
  Classification out;
  out.relation = unit.relation;
  KindIndex kinds(ds, catalog);
  ResourceKind k;
  try {
    k = kinds.kind(unit.subject);
  } catch (const Error& e) {
    throw Error(ErrorCode::UnresolvedSubject,
                "cannot resolve subject kind of unit " + unit.upri + ": " + e.what());
  }
  switch (k) {
    case ResourceKind::NamedIndividual:
    case ResourceKind::SemanticUnitResource:
      out.category = SubjectCategory::Assertional;
      break;
    case ResourceKind::SomeInstance: out.category = SubjectCategory::Contingent; break;
    case ResourceKind::EveryInstance: out.category = SubjectCategory::Universal; break;
    default:
      throw Error(ErrorCode::UnresolvedSubject,
                  "subject of unit " + unit.upri + " is a " + to_string(k));
  }
  std::set<std::string> classes = unit.classes;
  for (const auto& q : ds)
    if (q.subject == unit.upri && q.predicate == catalog.type() && q.object.is_iri() &&
        kinds.layers().layer(q) == Layer::SemanticUnits)
      classes.insert(q.object.value);
  if (classes.count(catalog.get("NegationUnit"))) out.markers.insert("negation");
  if (classes.count(catalog.get("CardinalityRestrictionUnit"))) out.markers.insert("cardinality");
  if (classes.count(catalog.get("DisagreementUnit"))) out.markers.insert("disagreement");
  if (classes.count(catalog.get("IsAboutStatementUnit"))) out.markers.insert("is-about");
  return out;
}

}  // namespace su
