#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "semunits/units.hpp"

namespace su {

enum class CompoundKind {
  TypedStatement,
  QualityMeasurement,
  Item,
  ItemGroup,
  GranularityTree,
  GranularItemGroup,
  Context,
  Dataset,
  List,
};

enum class Subkind { None, Instance, Class, TextHybrid, ClassAxiom, Ordered, Unordered, Set };

const char* to_string(CompoundKind k);
const char* to_string(Subkind k);

struct GranularityTree {
  std::string order_predicate;
  std::set<std::string> nodes;
  std::vector<std::pair<std::string, std::string>> edges;  // reduced (parent, child)
  std::string root;
  std::size_t depth = 0;
};

struct CompoundUnit {
  std::string upri;
  CompoundKind kind = CompoundKind::TypedStatement;
  Subkind subkind = Subkind::None;
  std::vector<std::string> associated;  // sorted, unique
  std::optional<std::string> subject;
  std::vector<std::pair<std::string, std::string>> linked;        // hasLinkedSemanticUnit
  std::vector<std::pair<std::string, std::string>> described_by;  // objectDescribedBySemanticUnit
  std::optional<GranularityTree> tree;
  std::string reference;  // typed statement units: the reference statement unit
  std::vector<std::string> warnings;
  std::set<std::string> opaque;  // associations hidden by an access policy
  std::vector<StatementUnit> members;  // membership units synthesized for lists
  std::map<std::string, std::size_t> indexes;  // ordered lists: membership unit -> index

  void associate(const std::string& upri);
  bool has(const std::string& upri) const;
  std::string kind_class_key() const;
};

// Lookup of statement and compound units by UPRI.
class UnitRegistry {
 public:
  explicit UnitRegistry(const PartitionResult& p);
  void add(const CompoundUnit& c);
  const StatementUnit* statement(const std::string& upri) const;
  const CompoundUnit* compound(const std::string& upri) const;
  // Data graph of any unit; compounds merge their associated units.
  QuadDataset data_graph(const std::string& upri) const;
  // Statement units reachable through associations.
  std::set<std::string> statement_members(const std::string& upri) const;

 private:
  std::map<std::string, const StatementUnit*> statements_;
  std::map<std::string, CompoundUnit> compounds_;
};

std::vector<CompoundUnit> build_typed_statement_units(const PartitionResult& p,
                                                      const VocabularyCatalog& catalog,
                                                      UpriMinter& minter);

std::vector<CompoundUnit> build_quality_measurement_units(const std::vector<CompoundUnit>& typed,
                                                          const PartitionResult& p,
                                                          const VocabularyCatalog& catalog,
                                                          UpriMinter& minter);

std::vector<CompoundUnit> build_item_units(const PartitionResult& p,
                                           const std::vector<CompoundUnit>& typed,
                                           const std::vector<CompoundUnit>& quality,
                                           const VocabularyCatalog& catalog, UpriMinter& minter);

struct ItemLink {
  std::string from_item;
  std::string to_item;
  std::string witness;  // statement unit satisfying the link rule
};

std::vector<CompoundUnit> build_item_group_units(const std::vector<CompoundUnit>& items,
                                                 const PartitionResult& p,
                                                 const std::vector<CompoundUnit>& typed,
                                                 const std::vector<CompoundUnit>& quality,
                                                 const VocabularyCatalog& catalog,
                                                 UpriMinter& minter,
                                                 std::vector<ItemLink>* links = nullptr);

struct TreeIssue {
  std::string order_predicate;
  std::set<std::string> nodes;
  std::string reason;
};

std::vector<CompoundUnit> build_granularity_tree_units(const PartitionResult& p,
                                                       const std::vector<CompoundUnit>& typed,
                                                       const VocabularyCatalog& catalog,
                                                       UpriMinter& minter,
                                                       std::vector<TreeIssue>* issues = nullptr);

// Derived view: the tree unit joined with the item units of its nodes.
CompoundUnit granular_item_group(const CompoundUnit& tree, const std::vector<CompoundUnit>& items);

struct ContextBoundary {
  std::string is_about_unit;
  std::string from_context;
  std::string to_context;
  bool degenerate = false;
};

std::vector<CompoundUnit> build_context_units(const PartitionResult& p,
                                              const VocabularyCatalog& catalog,
                                              UpriMinter& minter,
                                              std::vector<ContextBoundary>* boundaries = nullptr);

enum class CollectionKind { Dataset, OrderedList, UnorderedList, Set };

// `known_units` resolves dataset members; list members must be absolute IRIs.
CompoundUnit make_collection_unit(CollectionKind kind, const std::vector<std::string>& members,
                                  const VocabularyCatalog& catalog, UpriMinter& minter,
                                  const std::set<std::string>* known_units = nullptr);

struct CompoundResult {
  std::vector<CompoundUnit> typed;
  std::vector<CompoundUnit> quality;
  std::vector<CompoundUnit> items;
  std::vector<CompoundUnit> groups;
  std::vector<CompoundUnit> trees;
  std::vector<CompoundUnit> contexts;
  std::vector<ItemLink> links;
  std::vector<TreeIssue> tree_issues;
  std::vector<ContextBoundary> boundaries;

  std::vector<const CompoundUnit*> all() const;
};

CompoundResult build_compounds(const PartitionResult& p, const VocabularyCatalog& catalog,
                               UpriMinter& minter);

// Semantic-units quads describing compound units.
QuadDataset compound_quads(const CompoundUnit& c, const VocabularyCatalog& catalog);
QuadDataset compound_quads(const CompoundResult& r, const VocabularyCatalog& catalog);

// One record per unit: upri, kind, subject, associated UPRIs.
std::string compound_report(const CompoundResult& r);

}  // namespace su
