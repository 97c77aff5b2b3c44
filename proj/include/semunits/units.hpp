#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "semunits/mint.hpp"
#include "semunits/store.hpp"

namespace su {

enum class Relation { Qualitative, Quantitative };
enum class SubjectCategory { Assertional, Contingent, Universal };
const char* to_string(Relation r);
const char* to_string(SubjectCategory c);

// One slot of a triple template: a variable (`?x`) or a constant term.
struct Slot {
  bool is_var = false;
  std::string var;
  Term constant;
};

struct TripleTemplate {
  Slot subject;
  std::string predicate;
  Slot object;
};

struct StatementSchema {
  std::string unit_class;
  std::string anchor_predicate;
  std::vector<TripleTemplate> templates;
  std::size_t anchor_index = 0;
  std::string subject_var;
  std::vector<std::string> args;
  std::set<std::string> numeric_args;
  std::vector<std::string> adjuncts;
  Relation relation = Relation::Qualitative;
  std::string label_template;

  bool is_adjunct_template(std::size_t i) const;
};

// Grammar, one directive per line, `#` starts a comment:
//   unit <classIRI> anchor <predIRI>
//   template ?s <predIRI> ?o          (object may also be <IRI> or "literal")
//   subject ?s
//   arg ?o [numeric]
//   adjunct ?t
//   relation qualitative|quantitative
//   label "..."
// Prefixed names are accepted when `prefixes` declares them.
std::vector<StatementSchema> compile_schema(std::string_view text,
                                            const PrefixMap* prefixes = nullptr);

enum class UnitOrigin { Schema, Identification, Fallback, Existing };

enum class IdentificationKind { None, NamedIndividual, SomeInstance, EveryInstance };

struct UnitObject {
  enum class Role { Argument, Adjunct };
  Term term;
  Role role = Role::Argument;
  std::string var;
};

struct StatementUnit {
  std::string upri;
  std::set<std::string> classes;
  std::string subject;
  std::vector<UnitObject> objects;
  QuadDataset data;  // every quad has graph == upri
  std::string schema_class;  // empty when no schema produced the unit
  UnitOrigin origin = UnitOrigin::Schema;
  IdentificationKind identification = IdentificationKind::None;
  Relation relation = Relation::Qualitative;
  std::map<std::string, Term> binding;
  std::string label_template;
  bool adjuncts_present = false;
  std::string fallback_predicate;  // set for untyped fallback units

  bool is_identification() const { return identification != IdentificationKind::None; }
  bool has_class(const std::string& c) const { return classes.count(c) > 0; }
  // Class used when comparing units across graphs.
  std::string class_key() const;
};

struct PartitionResult {
  std::vector<StatementUnit> units;
  std::map<Quad, std::string> triple_map;  // input data-layer quad -> unit UPRI
  std::vector<std::string> fallback_units;
  QuadDataset semantic_layer;  // quads added or kept for the unit layer
  std::vector<std::string> warnings;

  const StatementUnit* find(const std::string& upri) const;
  // Re-homed data graphs plus the semantic-units layer.
  QuadDataset to_dataset() const;
};

// Units present in the input (graphs named by a resource with a
// hasSemanticUnitSubject quad) are kept as they are; everything else in the
// data layer is matched against identification rules, then schemas, then
// falls back to single-triple units.
PartitionResult partition(const QuadDataset& ds, const std::vector<StatementSchema>& schemas,
                          const VocabularyCatalog& catalog, UpriMinter& minter);

struct Classification {
  Relation relation = Relation::Qualitative;
  SubjectCategory category = SubjectCategory::Assertional;
  std::set<std::string> markers;  // negation, cardinality, disagreement, is-about
};

Classification classify_unit(const StatementUnit& unit, const QuadDataset& ds,
                             const VocabularyCatalog& catalog);

struct RenderedLabel {
  std::string text;
  std::vector<std::string> warnings;
};

RenderedLabel render_dynamic_label(const StatementUnit& unit, const QuadDataset& ds,
                                   const VocabularyCatalog& catalog);

}  // namespace su
