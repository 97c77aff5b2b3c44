#pragma once

#include <ostream>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "semunits/pipeline.hpp"

namespace su {
// Readable gtest failure output.
inline void PrintTo(const Atom& a, std::ostream* os) { *os << a.to_string(); }
inline void PrintTo(const Quad& q, std::ostream* os) {
  *os << q.subject << " " << q.predicate << " " << term_to_nquads(q.object) << " " << q.graph;
}
}  // namespace su

namespace fx {

inline std::string path(const std::string& name) {
  return std::string(SEMUNITS_FIXTURES) + "/" + name;
}

inline std::string text(const std::string& name) { return su::read_file(path(name)); }

inline const su::VocabularyCatalog& catalog() {
  static const su::VocabularyCatalog c = su::VocabularyCatalog::load(text("catalog.txt"));
  return c;
}

inline const std::vector<su::StatementSchema>& schemas() {
  static const std::vector<su::StatementSchema> s =
      su::compile_schema(text("schemas.sus"), &catalog().prefixes());
  return s;
}

inline su::QuadDataset dataset(const std::string& name) {
  return su::load_dataset(text(name), name);
}

inline su::ProcessedGraph process(const std::string& name, std::uint64_t seed = 7) {
  return su::process_graph(dataset(name), schemas(), catalog(), "https://w3id.org/semunits/unit/",
                           seed);
}

inline std::string iri(const std::string& local) { return "http://example.org/" + local; }
inline std::string obo(const std::string& local) {
  return "http://purl.obolibrary.org/obo/" + local;
}
inline std::string su_term(const std::string& key) { return catalog().get(key); }

inline std::vector<std::string> figure_fixtures() {
  return {"fig02.trig",  "fig07.trig",  "fig08a.trig", "fig08b.trig", "fig08c.trig",
          "fig09a.trig", "fig09b.trig", "fig09c.trig", "fig11.trig",  "fig12.trig",
          "fig13.trig",  "fig16.trig",  "fig17.trig",  "fig18.trig",  "fig19.trig",
          "fig20.trig",  "fig21.trig",  "travel.trig", "endangered.trig"};
}

inline std::size_t count_class(const su::PartitionResult& p, const std::string& key) {
  std::size_t n = 0;
  for (const auto& u : p.units) n += u.has_class(su_term(key));
  return n;
}

inline std::size_t count_class_iri(const su::PartitionResult& p, const std::string& cls) {
  std::size_t n = 0;
  for (const auto& u : p.units) n += u.has_class(cls);
  return n;
}

// Exact set arithmetic: the unit data graphs cover the data layer and are
// pairwise disjoint, the triple map is total, nothing from the unit layer
// leaks into a data graph. Returns an empty string on success.
inline std::string partition_law_violation(const su::QuadDataset& ds, const su::PartitionResult& p,
                                           const su::VocabularyCatalog& cat) {
  using Triple = std::tuple<std::string, std::string, su::Term>;
  su::LayerIndex layers(ds, cat);
  su::QuadDataset data = layers.data_layer(ds);
  std::set<Triple> expected;
  for (const auto& q : data) expected.insert({q.subject, q.predicate, q.object});
  std::set<Triple> seen;
  std::size_t total = 0;
  std::set<std::string> upris;
  for (const auto& u : p.units) {
    if (!upris.insert(u.upri).second) return "duplicate unit " + u.upri;
    if (u.data.empty()) return "empty data graph in " + u.upri;
    for (const auto& q : u.data) {
      if (q.graph != u.upri) return "quad outside its unit graph in " + u.upri;
      if (cat.is_structural(q.predicate)) return "unit-layer quad inside " + u.upri;
      ++total;
      if (!seen.insert({q.subject, q.predicate, q.object}).second)
        return "triple shared by two units: " + q.subject + " " + q.predicate;
    }
  }
  if (seen != expected) return "union of unit graphs differs from the data layer";
  if (total != expected.size()) return "unit graphs overlap";
  if (p.triple_map.size() != data.size()) return "triple map is not total";
  for (const auto& q : data) {
    auto it = p.triple_map.find(q);
    if (it == p.triple_map.end() || !upris.count(it->second)) return "unmapped data quad";
  }
  return "";
}

}  // namespace fx
