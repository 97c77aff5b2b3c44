#include "semunits/store.hpp"

#include <algorithm>
#include <cctype>

namespace su {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Syntax: return "syntax";
    case ErrorCode::BlankNode: return "blank-node";
    case ErrorCode::InvalidIri: return "invalid-iri";
    case ErrorCode::Catalog: return "catalog";
    case ErrorCode::AmbiguousKind: return "ambiguous-kind";
    case ErrorCode::UnknownResource: return "unknown-resource";
    case ErrorCode::Schema: return "schema";
    case ErrorCode::OverlapConflict: return "overlap-conflict";
    case ErrorCode::UnresolvedSubject: return "unresolved-subject";
    case ErrorCode::UnboundPlaceholder: return "unbound-placeholder";
    case ErrorCode::DuplicateMember: return "duplicate-member";
    case ErrorCode::UnresolvableMember: return "unresolvable-member";
    case ErrorCode::UnsafeRule: return "unsafe-rule";
    case ErrorCode::BoundExceeded: return "bound-exceeded";
    case ErrorCode::UnboundPatternVariable: return "unbound-pattern-variable";
    case ErrorCode::MissingProvenance: return "missing-provenance";
    case ErrorCode::FutureDate: return "future-date";
    case ErrorCode::MissingGraph: return "missing-graph";
    case ErrorCode::DanglingReference: return "dangling-reference";
    case ErrorCode::AssertionMismatch: return "assertion-mismatch";
    case ErrorCode::MalformedNamespace: return "malformed-namespace";
    case ErrorCode::Policy: return "policy";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

const char* to_string(ResourceKind k) {
  switch (k) {
    case ResourceKind::NamedIndividual: return "NamedIndividual";
    case ResourceKind::SomeInstance: return "SomeInstance";
    case ResourceKind::EveryInstance: return "EveryInstance";
    case ResourceKind::OntologyClass: return "OntologyClass";
    case ResourceKind::PropertyResource: return "PropertyResource";
    case ResourceKind::SemanticUnitResource: return "SemanticUnitResource";
  }
  return "?";
}

bool is_absolute_iri(std::string_view s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  std::size_t i = 1;
  while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '+' ||
                          s[i] == '-' || s[i] == '.'))
    ++i;
  if (i >= s.size() || s[i] != ':') return false;
  if (i + 1 >= s.size()) return false;
  for (char c : s) {
    auto u = static_cast<unsigned char>(c);
    if (u <= 0x20 || c == '<' || c == '>' || c == '"' || c == '{' || c == '}' || c == '|' ||
        c == '^' || c == '`' || c == '\\')
      return false;
  }
  return true;
}

std::string local_name(std::string_view iri) {
  auto pos = iri.find_last_of("#/:");
  if (pos == std::string_view::npos || pos + 1 >= iri.size()) return std::string(iri);
  return std::string(iri.substr(pos + 1));
}

Term Term::iri(std::string v) {
  Term t;
  t.kind = Kind::Iri;
  t.value = std::move(v);
  return t;
}

Term Term::literal(std::string lexical, std::string datatype, std::string lang) {
  Term t;
  t.kind = Kind::Literal;
  t.value = std::move(lexical);
  if (datatype == xsd::kString) datatype.clear();
  t.datatype = std::move(datatype);
  t.lang = std::move(lang);
  return t;
}

bool Term::is_numeric() const {
  if (kind != Kind::Literal) return false;
  static const std::set<std::string> numeric = {
      xsd::kInteger,
      xsd::kDecimal,
      xsd::kDouble,
      "http://www.w3.org/2001/XMLSchema#float",
      "http://www.w3.org/2001/XMLSchema#int",
      "http://www.w3.org/2001/XMLSchema#long",
      "http://www.w3.org/2001/XMLSchema#short",
      "http://www.w3.org/2001/XMLSchema#nonNegativeInteger",
      "http://www.w3.org/2001/XMLSchema#positiveInteger",
      "http://www.w3.org/2001/XMLSchema#negativeInteger",
      "http://www.w3.org/2001/XMLSchema#nonPositiveInteger",
      "http://www.w3.org/2001/XMLSchema#unsignedInt",
      "http://www.w3.org/2001/XMLSchema#unsignedLong",
  };
  return numeric.count(datatype) > 0;
}

std::strong_ordering Quad::operator<=>(const Quad& o) const {
  if (auto c = graph <=> o.graph; c != 0) return c;
  if (auto c = subject <=> o.subject; c != 0) return c;
  if (auto c = predicate <=> o.predicate; c != 0) return c;
  return object <=> o.object;
}

namespace {

void check_iri(const std::string& v, const char* position) {
  if (v.rfind("_:", 0) == 0)
    throw Error(ErrorCode::BlankNode, std::string("blank node in ") + position + ": " + v);
  if (!is_absolute_iri(v))
    throw Error(ErrorCode::InvalidIri, std::string("not an absolute IRI in ") + position +
                                           ": '" + v + "'");
}

}  // namespace

bool QuadDataset::add(Quad q) {
  check_iri(q.subject, "subject");
  check_iri(q.predicate, "predicate");
  check_iri(q.graph, "graph");
  if (q.object.is_iri()) check_iri(q.object.value, "object");
  return quads_.insert(std::move(q)).second;
}

bool QuadDataset::add(std::string s, std::string p, Term o, std::string g) {
  return add(Quad{std::move(s), std::move(p), std::move(o), std::move(g)});
}

void QuadDataset::merge(const QuadDataset& other) {
  quads_.insert(other.quads_.begin(), other.quads_.end());
}

std::vector<Quad> QuadDataset::graph(const std::string& g) const {
  std::vector<Quad> out;
  Quad probe{"", "", Term{}, g};
  for (auto it = quads_.lower_bound(probe); it != quads_.end() && it->graph == g; ++it)
    out.push_back(*it);
  return out;
}

std::set<std::string> QuadDataset::graph_names() const {
  std::set<std::string> out;
  for (const auto& q : quads_) out.insert(q.graph);
  return out;
}

bool QuadDataset::has_graph(const std::string& g) const {
  Quad probe{"", "", Term{}, g};
  auto it = quads_.lower_bound(probe);
  return it != quads_.end() && it->graph == g;
}

// ---------------------------------------------------------------- prefixes

void PrefixMap::add(std::string name, std::string iri) {
  for (auto& e : entries_) {
    if (e.first == name) {
      e.second = std::move(iri);
      return;
    }
  }
  entries_.emplace_back(std::move(name), std::move(iri));
}

std::string PrefixMap::expand(std::string_view curie) const {
  auto colon = curie.find(':');
  std::string_view name = colon == std::string_view::npos ? std::string_view{} : curie.substr(0, colon);
  std::string_view local = colon == std::string_view::npos ? curie : curie.substr(colon + 1);
  for (const auto& [n, iri] : entries_) {
    if (colon == std::string_view::npos) {
      if (n.empty()) return iri + std::string(local);
    } else if (n == name) {
      return iri + std::string(local);
    }
  }
  return "";
}

namespace {

bool safe_local(std::string_view local) {
  if (local.empty()) return false;
  for (char c : local) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
  }
  return local.front() != '-';
}

}  // namespace

std::string PrefixMap::compact(std::string_view iri) const {
  const std::pair<std::string, std::string>* best = nullptr;
  for (const auto& e : entries_) {
    if (iri.size() > e.second.size() && iri.compare(0, e.second.size(), e.second) == 0 &&
        safe_local(iri.substr(e.second.size()))) {
      if (!best || e.second.size() > best->second.size()) best = &e;
    }
  }
  if (!best) return std::string(iri);
  std::string local(iri.substr(best->second.size()));
  return best->first.empty() ? local : best->first + ":" + local;
}

std::string PrefixMap::compact_turtle(std::string_view iri) const {
  const std::pair<std::string, std::string>* best = nullptr;
  for (const auto& e : entries_) {
    if (iri.size() > e.second.size() && iri.compare(0, e.second.size(), e.second) == 0 &&
        safe_local(iri.substr(e.second.size()))) {
      if (!best || e.second.size() > best->second.size()) best = &e;
    }
  }
  if (!best) return "";
  return best->first + ":" + std::string(iri.substr(best->second.size()));
}

// ---------------------------------------------------------------- catalog

namespace {

const char* const kSu = "https://w3id.org/semunits/vocab#";

std::string su_term(const char* local) { return std::string(kSu) + local; }

}  // namespace

VocabularyCatalog VocabularyCatalog::defaults() {
  VocabularyCatalog c;
  auto& t = c.terms_;
  t["hasSemanticUnitSubject"] = su_term("hasSemanticUnitSubject");
  t["hasAssociatedSemanticUnit"] = su_term("hasAssociatedSemanticUnit");
  t["hasLinkedSemanticUnit"] = su_term("hasLinkedSemanticUnit");
  t["objectDescribedBySemanticUnit"] = su_term("objectDescribedBySemanticUnit");
  t["someInstanceOf"] = su_term("someInstanceOf");
  t["everyInstanceOf"] = su_term("everyInstanceOf");
  t["isAbout"] = "http://purl.obolibrary.org/obo/IAO_0000136";
  t["type"] = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
  t["label"] = "http://www.w3.org/2000/01/rdf-schema#label";
  t["qualifiedCardinality"] = "http://www.w3.org/2002/07/owl#qualifiedCardinality";
  t["index"] = su_term("index");
  t["child"] = su_term("child");
  t["description"] = su_term("description");
  t["mentions"] = su_term("mentions");
  // Logic-program vocabulary.
  t["statement"] = su_term("statement");
  t["literal"] = su_term("literal");
  // Unit classes.
  for (const char* cls :
       {"AssertionalStatementUnit", "ContingentStatementUnit", "UniversalStatementUnit",
        "NegationUnit", "NegatedAssertionalStatementUnit", "CardinalityRestrictionUnit",
        "DisagreementUnit", "IsAboutStatementUnit",
        "NamedIndividualIdentificationUnit", "SomeInstanceIdentificationUnit",
        "EveryInstanceIdentificationUnit", "UntypedStatementUnit", "TypedStatementUnit",
        "QualityMeasurementUnit", "InstanceItemUnit", "ClassItemUnit", "TextHybridItemUnit",
        "InstanceItemGroupUnit", "ClassItemGroupUnit", "ClassAxiomItemGroupUnit",
        "GranularityTreeUnit", "GranularItemGroupUnit", "ContextUnit", "DatasetUnit",
        "OrderedListUnit", "UnorderedListUnit", "SetUnit", "MembershipStatementUnit",
        "OpaqueSemanticUnit", "separatesContext", "DegenerateBoundary"}) {
    t[cls] = su_term(cls);
  }
  c.prefixes_.add("rdf", "http://www.w3.org/1999/02/22-rdf-syntax-ns#");
  c.prefixes_.add("rdfs", "http://www.w3.org/2000/01/rdf-schema#");
  c.prefixes_.add("owl", "http://www.w3.org/2002/07/owl#");
  c.prefixes_.add("xsd", "http://www.w3.org/2001/XMLSchema#");
  c.prefixes_.add("su", kSu);
  c.validate();
  return c;
}

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

VocabularyCatalog VocabularyCatalog::load(std::string_view text) {
  VocabularyCatalog c = defaults();
  c.order_.clear();
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string line = trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (line.empty() || line[0] == '#') {
      if (nl == text.size()) break;
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw SyntaxError("catalog entry needs 'key = <iri>'", line_no, 1);
    std::string key = trim(std::string_view(line).substr(0, eq));
    std::string val = trim(std::string_view(line).substr(eq + 1));
    if (val.size() < 2 || val.front() != '<' || val.back() != '>')
      throw SyntaxError("catalog value must be an <IRI>", line_no, eq + 2);
    val = val.substr(1, val.size() - 2);
    if (!is_absolute_iri(val))
      throw Error(ErrorCode::Catalog, "catalog line " + std::to_string(line_no) +
                                          ": not an absolute IRI: " + val);
    if (key.rfind("prefix", 0) == 0 && (key.size() == 6 || std::isspace(static_cast<unsigned char>(key[6])))) {
      c.prefixes_.add(trim(std::string_view(key).substr(6)), val);
    } else if (key == "order") {
      if (std::find(c.order_.begin(), c.order_.end(), val) == c.order_.end())
        c.order_.push_back(val);
    } else {
      c.terms_[key] = val;
    }
    if (nl == text.size()) break;
  }
  c.validate();
  return c;
}

void VocabularyCatalog::validate() const {
  std::map<std::string, std::string> seen;
  for (const auto& [k, v] : terms_) {
    auto [it, fresh] = seen.emplace(v, k);
    if (!fresh)
      throw Error(ErrorCode::Catalog,
                  "catalog entries '" + it->second + "' and '" + k + "' share IRI " + v);
  }
}

const std::string& VocabularyCatalog::get(const std::string& key) const {
  auto it = terms_.find(key);
  if (it == terms_.end()) throw Error(ErrorCode::Catalog, "catalog has no entry '" + key + "'");
  return it->second;
}

bool VocabularyCatalog::is_order_predicate(const std::string& p) const {
  return std::find(order_.begin(), order_.end(), p) != order_.end();
}

bool VocabularyCatalog::is_structural(const std::string& p) const {
  return p == get("hasSemanticUnitSubject") || p == get("hasAssociatedSemanticUnit") ||
         p == get("hasLinkedSemanticUnit") || p == get("objectDescribedBySemanticUnit");
}

bool VocabularyCatalog::is_identification_predicate(const std::string& p) const {
  return p == get("type") || p == get("someInstanceOf") || p == get("everyInstanceOf");
}

// ---------------------------------------------------------------- layers

std::string meta_graph(const std::string& upri) { return upri + "/su"; }

LayerIndex::LayerIndex(const QuadDataset& ds, const VocabularyCatalog& catalog)
    : catalog_(&catalog) {
  const auto& subj = catalog.get("hasSemanticUnitSubject");
  const auto& assoc = catalog.get("hasAssociatedSemanticUnit");
  const auto& linked = catalog.get("hasLinkedSemanticUnit");
  const auto& described = catalog.get("objectDescribedBySemanticUnit");
  for (const auto& q : ds) {
    if (q.predicate == subj) {
      unit_resources_.insert(q.subject);
      unit_subjects_.emplace(q.subject, q.object.value);
    } else if (q.predicate == assoc || q.predicate == linked || q.predicate == described) {
      unit_resources_.insert(q.subject);
      if (q.object.is_iri()) unit_resources_.insert(q.object.value);
    }
  }
}

Layer LayerIndex::layer(const Quad& q) const {
  if (catalog_->is_structural(q.predicate)) return Layer::SemanticUnits;
  // A quad inside a unit's own data graph is content even when it talks
  // about another unit, which is how disagreement statements are stored.
  if (is_unit_graph(q.graph)) return Layer::Data;
  if (is_unit_resource(q.subject)) return Layer::SemanticUnits;
  if (q.object.is_iri() && is_unit_resource(q.object.value)) return Layer::SemanticUnits;
  return Layer::Data;
}

QuadDataset LayerIndex::data_layer(const QuadDataset& ds) const {
  QuadDataset out;
  for (const auto& q : ds)
    if (layer(q) == Layer::Data) out.add(q);
  return out;
}

QuadDataset LayerIndex::semantic_layer(const QuadDataset& ds) const {
  QuadDataset out;
  for (const auto& q : ds)
    if (layer(q) == Layer::SemanticUnits) out.add(q);
  return out;
}

ResourceKind classify_resource(const QuadDataset& ds, const std::string& r,
                               const VocabularyCatalog& catalog) {
  return KindIndex(ds, catalog).kind(r);
}

KindIndex::KindIndex(const QuadDataset& ds, const VocabularyCatalog& catalog)
    : layers_(ds, catalog) {
  const auto& type = catalog.type();
  const auto& some = catalog.get("someInstanceOf");
  const auto& every = catalog.get("everyInstanceOf");
  for (const auto& q : ds) {
    flags_[q.predicate].as_predicate = true;
    auto& sf = flags_[q.subject];
    sf.elsewhere = true;
    flags_[q.graph];
    Flags* of = nullptr;
    if (q.object.is_iri()) {
      of = &flags_[q.object.value];
      of->elsewhere = true;
    }
    if (layers_.layer(q) != Layer::Data) continue;
    if (q.predicate == type) sf.typed = true;
    if (q.predicate == some) sf.some_of = true;
    if (q.predicate == every) sf.every_of = true;
    if (of && (q.predicate == type || q.predicate == some || q.predicate == every))
      of->is_class = true;
  }
}

ResourceKind KindIndex::kind(const std::string& r) const {
  if (layers_.is_unit_resource(r)) return ResourceKind::SemanticUnitResource;
  auto it = flags_.find(r);
  if (it == flags_.end()) throw Error(ErrorCode::UnknownResource, "resource does not occur: " + r);
  const Flags& f = it->second;
  std::vector<ResourceKind> kinds;
  if (f.some_of) kinds.push_back(ResourceKind::SomeInstance);
  if (f.every_of) kinds.push_back(ResourceKind::EveryInstance);
  if (f.typed && !f.some_of && !f.every_of) kinds.push_back(ResourceKind::NamedIndividual);
  if (f.is_class) kinds.push_back(ResourceKind::OntologyClass);
  if (f.as_predicate && !f.elsewhere) kinds.push_back(ResourceKind::PropertyResource);
  if (kinds.size() > 1) {
    std::string names;
    for (auto k : kinds) names += std::string(names.empty() ? "" : ", ") + to_string(k);
    throw Error(ErrorCode::AmbiguousKind, "resource " + r + " matches several kinds: " + names);
  }
  if (kinds.empty())
    throw Error(ErrorCode::UnknownResource, "resource has no resolvable kind: " + r);
  return kinds.front();
}

}  // namespace su
