#pragma once

#include <compare>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "semunits/error.hpp"

namespace su {

namespace xsd {
inline constexpr const char* kString = "http://www.w3.org/2001/XMLSchema#string";
inline constexpr const char* kInteger = "http://www.w3.org/2001/XMLSchema#integer";
inline constexpr const char* kDecimal = "http://www.w3.org/2001/XMLSchema#decimal";
inline constexpr const char* kDouble = "http://www.w3.org/2001/XMLSchema#double";
inline constexpr const char* kBoolean = "http://www.w3.org/2001/XMLSchema#boolean";
inline constexpr const char* kDate = "http://www.w3.org/2001/XMLSchema#date";
inline constexpr const char* kDateTime = "http://www.w3.org/2001/XMLSchema#dateTime";
}  // namespace xsd

// Graph assigned to triples that arrive without a graph name.
inline constexpr const char* kDefaultGraph = "urn:semunits:default-graph";

bool is_absolute_iri(std::string_view s);
std::string local_name(std::string_view iri);

struct Term {
  enum class Kind { Iri, Literal };
  Kind kind = Kind::Iri;
  std::string value;
  std::string datatype;  // empty means plain string literal
  std::string lang;

  static Term iri(std::string v);
  static Term literal(std::string lexical, std::string datatype = "", std::string lang = "");

  bool is_iri() const { return kind == Kind::Iri; }
  bool is_literal() const { return kind == Kind::Literal; }
  bool is_numeric() const;

  auto operator<=>(const Term&) const = default;
};

struct Quad {
  std::string subject;
  std::string predicate;
  Term object;
  std::string graph;

  // Sort order is (graph, subject, predicate, object).
  std::strong_ordering operator<=>(const Quad& o) const;
  bool operator==(const Quad& o) const = default;
};

// Set of quads with value semantics. Blank nodes and relative IRIs are
// rejected on insertion.
class QuadDataset {
 public:
  using const_iterator = std::set<Quad>::const_iterator;

  QuadDataset() = default;

  bool add(Quad q);
  bool add(std::string s, std::string p, Term o, std::string g);
  void merge(const QuadDataset& other);
  bool erase(const Quad& q) { return quads_.erase(q) > 0; }
  bool contains(const Quad& q) const { return quads_.count(q) > 0; }

  std::size_t size() const { return quads_.size(); }
  bool empty() const { return quads_.empty(); }
  const_iterator begin() const { return quads_.begin(); }
  const_iterator end() const { return quads_.end(); }

  std::vector<Quad> graph(const std::string& g) const;
  std::set<std::string> graph_names() const;
  bool has_graph(const std::string& g) const;

  bool operator==(const QuadDataset& o) const { return quads_ == o.quads_; }

 private:
  std::set<Quad> quads_;
};

class PrefixMap {
 public:
  // An empty prefix name renders local names bare in logic and axiom output.
  void add(std::string name, std::string iri);
  std::string expand(std::string_view curie) const;  // returns "" if no prefix matches
  std::string compact(std::string_view iri) const;   // returns iri unchanged if no match
  std::string compact_turtle(std::string_view iri) const;  // "" if not compactable
  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

// Fixed structural vocabulary plus the registered partial-order predicates.
class VocabularyCatalog {
 public:
  static VocabularyCatalog defaults();
  // Lines: `key = <iri>`, `prefix name = <iri>`, `order = <iri>`; `#` comments.
  static VocabularyCatalog load(std::string_view text);

  const std::string& get(const std::string& key) const;
  bool has(const std::string& key) const { return terms_.count(key) > 0; }
  const std::map<std::string, std::string>& terms() const { return terms_; }
  const std::vector<std::string>& order_predicates() const { return order_; }
  bool is_order_predicate(const std::string& p) const;
  const PrefixMap& prefixes() const { return prefixes_; }

  bool is_structural(const std::string& predicate) const;
  bool is_identification_predicate(const std::string& predicate) const;

  // Frequently used entries.
  const std::string& type() const { return get("type"); }
  const std::string& label() const { return get("label"); }

 private:
  void validate() const;
  std::map<std::string, std::string> terms_;
  std::vector<std::string> order_;
  PrefixMap prefixes_;
};

enum class ResourceKind {
  NamedIndividual,
  SomeInstance,
  EveryInstance,
  OntologyClass,
  PropertyResource,
  SemanticUnitResource,
};
const char* to_string(ResourceKind k);

enum class Layer { Data, SemanticUnits };

// Layer tags are derived from the dataset rather than stored with quads.
class LayerIndex {
 public:
  LayerIndex(const QuadDataset& ds, const VocabularyCatalog& catalog);

  Layer layer(const Quad& q) const;
  bool is_unit_resource(const std::string& r) const { return unit_resources_.count(r) > 0; }
  // Units that own a data graph (subject of hasSemanticUnitSubject).
  bool is_unit_graph(const std::string& g) const { return unit_subjects_.count(g) > 0; }
  const std::set<std::string>& unit_resources() const { return unit_resources_; }
  const std::map<std::string, std::string>& unit_subjects() const { return unit_subjects_; }

  QuadDataset data_layer(const QuadDataset& ds) const;
  QuadDataset semantic_layer(const QuadDataset& ds) const;

 private:
  const VocabularyCatalog* catalog_;
  std::set<std::string> unit_resources_;
  std::map<std::string, std::string> unit_subjects_;
};

// Graph holding the semantic-units quads that describe unit `upri`.
std::string meta_graph(const std::string& upri);

// Resolves resource kinds for a whole dataset in one pass.
class KindIndex {
 public:
  KindIndex(const QuadDataset& ds, const VocabularyCatalog& catalog);
  ResourceKind kind(const std::string& r) const;  // throws like classify_resource
  const LayerIndex& layers() const { return layers_; }

 private:
  struct Flags {
    bool as_predicate = false, elsewhere = false, typed = false;
    bool some_of = false, every_of = false, is_class = false;
  };
  LayerIndex layers_;
  std::map<std::string, Flags> flags_;
};

ResourceKind classify_resource(const QuadDataset& ds, const std::string& r,
                               const VocabularyCatalog& catalog);

enum class Syntax { NQuads, TriG };

QuadDataset parse_quads(std::string_view text, Syntax syntax,
                        const std::string& default_graph = kDefaultGraph);
// Prefixes are only used by the TriG writer.
std::string serialize_quads(const QuadDataset& ds, Syntax syntax,
                            const PrefixMap* prefixes = nullptr);

std::string term_to_nquads(const Term& t);

}  // namespace su
